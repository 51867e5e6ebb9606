#include "otfs/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "otfs/kernels.hpp"
#include "otfs/modem.hpp"
#include "otfs/rng.hpp"

namespace otfs {

namespace {

const char* waveform_name(Waveform wf) {
    return wf == Waveform::Rectangular ? "rect" : "bi";
}

Waveform waveform_from_name(const std::string& s) {
    if (s == "rect") return Waveform::Rectangular;
    if (s == "bi") return Waveform::BiOrthogonal;
    throw std::invalid_argument("unknown waveform: " + s);
}

// Deterministic worker pool: tasks are indexed, results land by index, so
// worker count and scheduling order never affect the output.
void parallel_for(int total, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min(jobs, total));
    if (jobs == 1) {
        for (int i = 0; i < total; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= total) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

Eigen::VectorXcd qpsk_symbols(int count, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_int_distribution<int> quad(0, 3);
    Eigen::VectorXcd s(count);
    const double a = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < count; ++i) {
        const int b = quad(rng);
        s[i] = cplx(b & 1 ? -a : a, b & 2 ? -a : a);
    }
    return s;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

FrameConfig frame_for(const SimConfig& cfg, int num_pilots, double pilot_power) {
    FrameConfig fc;
    fc.pilot_rows = num_pilots;
    fc.pilot_cols = 1;
    fc.l_max = cfg.l_max;
    fc.k_max = cfg.k_max;
    fc.n_hat = cfg.n_hat;
    fc.pilot_power = pilot_power;
    return fc;
}

DDGrid apply_waveform(const DDChannel& ch, const DDGrid& x, Waveform wf) {
    return wf == Waveform::Rectangular ? apply_rect(ch, x) : apply_bi(ch, x);
}

}  // namespace

double median_of(std::vector<double> values) {
    if (values.empty()) return std::nan("");
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double nmse_db(const std::vector<double>& per_trial_ratios) {
    if (per_trial_ratios.empty()) return std::nan("");
    double mean = 0.0;
    for (double r : per_trial_ratios) mean += r;
    mean /= per_trial_ratios.size();
    if (mean < 1e-20) return -200.0;
    return std::max(10.0 * std::log10(mean), -200.0);
}

double channel_nmse_ratio(const DDChannel& truth, const DDChannel& est, Waveform wf) {
    const GridDims& dims = truth.dims;
    const int M = dims.M, N = dims.N;
    const double MN = M * static_cast<double>(N);

    // Every (path, q) term writes entries only at its shift (dk, dl) =
    // ([q - k_i]_N, [l_i]_M): one column per row, disjoint across shifts. The
    // Frobenius norm therefore splits into per-shift sums, and for the l < l_i
    // edge branch the cross term sums to zero over the Doppler blocks.
    struct Desc {
        cplx gain;
        double nu;
        int l_i;
        double sign;
        cplx f;  // spread value for this q
    };
    std::map<std::pair<int, int>, std::vector<Desc>> diff_buckets, true_buckets;
    auto add = [&](const DDChannel& ch, double sign, bool to_true) {
        for (const ChannelPath& p : ch.paths) {
            for (int q = -ch.n_hat; q <= ch.n_hat; ++q) {
                Desc d;
                d.gain = p.gain;
                d.nu = p.doppler_idx + p.frac_doppler;
                d.l_i = p.delay_idx;
                d.sign = sign;
                d.f = spread_f(q, p.frac_doppler, N);
                const auto key = std::make_pair(mod_index(q - p.doppler_idx, N),
                                                mod_index(p.delay_idx, M));
                diff_buckets[key].push_back(d);
                if (to_true) true_buckets[key].push_back(d);
            }
        }
    };
    add(truth, -1.0, true);
    add(est, +1.0, false);

    auto bucket_power = [&](const std::vector<Desc>& descs) {
        // v(ks, l) = A(l) + B(l) e^{-j2pi ks/N}; the A.B* cross term cancels
        // when summed over ks, leaving N * sum_l (|A|^2 + |B|^2).
        double acc = 0.0;
        for (int l = 0; l < M; ++l) {
            cplx A(0.0, 0.0), B(0.0, 0.0);
            for (const Desc& d : descs) {
                const double ang = (wf == Waveform::Rectangular)
                                       ? 2.0 * kPi * (l - d.l_i) * d.nu / MN
                                       : -2.0 * kPi * d.l_i * d.nu / MN;
                const cplx term = d.sign * d.gain * cplx(std::cos(ang), std::sin(ang));
                if (wf == Waveform::Rectangular && l < d.l_i)
                    B += term * (d.f - 1.0 / N);
                else
                    A += term * d.f;
            }
            acc += std::norm(A) + std::norm(B);
        }
        return N * acc;
    };

    double num = 0.0, den = 0.0;
    for (const auto& [key, descs] : diff_buckets) num += bucket_power(descs);
    for (const auto& [key, descs] : true_buckets) den += bucket_power(descs);
    if (den <= 0.0) throw std::invalid_argument("channel_nmse_ratio: zero reference channel");
    return num / den;
}

TrialMetrics run_estimation_trial(const SimConfig& cfg, int num_paths, int num_pilots,
                                  double snrp_db, std::uint64_t trial_seed) {
    const FrameConfig fc = frame_for(cfg, num_pilots, 1.0);
    const double gamma = std::pow(10.0, snrp_db / 10.0);

    const DDChannel ch = sample_channel(split_seed(trial_seed, 0), num_paths, cfg.l_max,
                                        cfg.k_max, cfg.n_hat, cfg.dims);
    const Eigen::VectorXcd pilots = make_pilot_symbols(fc, split_seed(trial_seed, 1));
    const Eigen::VectorXcd data =
        qpsk_symbols(data_symbol_count(fc, cfg.dims), split_seed(trial_seed, 2));
    const DDGrid frame = place_frame(fc, pilots, data, cfg.dims);
    const DDGrid y = add_noise(apply_waveform(ch, frame, cfg.waveform), gamma,
                               split_seed(trial_seed, 3));
    const SparseSystem sys = make_sparse_system(fc, pilots, y);
    const EstimateResult res = estimate(sys, cfg.hp, cfg.waveform);

    TrialMetrics m;
    m.iterations = res.iterations;

    double eh = 0.0, nh = 0.0, ek = 0.0, nk = 0.0;
    for (const ChannelPath& p : ch.paths) {
        const int j = fc.block_index(p.delay_idx, p.doppler_idx);
        eh += std::norm(res.h_hat[j] - p.gain);
        nh += std::norm(p.gain);
        ek += (res.kappa_hat[j] - p.frac_doppler) * (res.kappa_hat[j] - p.frac_doppler);
        nk += p.frac_doppler * p.frac_doppler;
        for (int s : res.support)
            if (s == j) {
                m.support_hits++;
                break;
            }
    }
    m.ratio_h = eh / nh;
    m.ratio_kappa = ek / nk;

    DDChannel est;
    est.paths = detect_support(res, fc, cfg.hp.support_rho);
    est.n_hat = cfg.n_hat;
    est.dims = cfg.dims;
    m.ratio_H = channel_nmse_ratio(ch, est, cfg.waveform);

    const Eigen::MatrixXd fisher = fisher_matrix(ch, fc, pilots, gamma, cfg.waveform);
    const NormalizedBounds nb =
        normalized_bounds(crlb_bounds(fisher), ThetaVector::from_channel(ch));
    m.crlb_h = nb.h_bound;
    m.crlb_kappa = nb.kappa_bound;
    return m;
}

std::vector<NmseCell> run_nmse_sweep(const SimConfig& cfg) {
    std::vector<NmseCell> cells;
    const std::string hash = config_hash(cfg);
    int cell_index = 0;
    for (int P : cfg.path_counts) {
        for (int pilots : cfg.pilot_counts) {
            for (double snrp : cfg.snrp_db) {
                NmseCell cell;
                cell.ratio_h.resize(cfg.trials);
                cell.ratio_kappa.resize(cfg.trials);
                cell.ratio_H.resize(cfg.trials);
                cell.crlb_h.resize(cfg.trials);
                cell.crlb_kappa.resize(cfg.trials);
                std::vector<TrialMetrics> tm(cfg.trials);
                parallel_for(cfg.trials, cfg.jobs, [&](int trial) {
                    tm[trial] = run_estimation_trial(
                        cfg, P, pilots, snrp, split_seed(cfg.seed, cell_index, trial));
                });
                for (int t = 0; t < cfg.trials; ++t) {
                    cell.ratio_h[t] = tm[t].ratio_h;
                    cell.ratio_kappa[t] = tm[t].ratio_kappa;
                    cell.ratio_H[t] = tm[t].ratio_H;
                    cell.crlb_h[t] = tm[t].crlb_h;
                    cell.crlb_kappa[t] = tm[t].crlb_kappa;
                }
                MetricRow& row = cell.row;
                row.sweep = "nmse";
                row.waveform = waveform_name(cfg.waveform);
                row.M = cfg.dims.M;
                row.N = cfg.dims.N;
                row.P = P;
                row.l_max = cfg.l_max;
                row.k_max = cfg.k_max;
                row.n_hat = cfg.n_hat;
                row.pilots = pilots;
                row.snrp_db = snrp;
                row.trials = cfg.trials;
                row.nmse_h_db = nmse_db(cell.ratio_h);
                row.nmse_kappa_db = nmse_db(cell.ratio_kappa);
                row.nmse_H_db = nmse_db(cell.ratio_H);
                row.crlb_h_db = nmse_db(cell.crlb_h);
                row.crlb_kappa_db = nmse_db(cell.crlb_kappa);
                row.config_hash = hash;
                cells.push_back(std::move(cell));
                ++cell_index;
            }
        }
    }
    return cells;
}

std::vector<MetricRow> run_papr_table(const SimConfig& cfg) {
    std::vector<MetricRow> rows;
    const std::string hash = config_hash(cfg);
    int cell_index = 0;
    for (double snrp : cfg.snrp_db) {
        for (int pilots : cfg.pilot_counts) {
            const double pilot_power = std::pow(10.0, (snrp - cfg.snrd_db) / 10.0);
            const FrameConfig fc = frame_for(cfg, pilots, pilot_power);
            std::vector<double> papr(cfg.papr_frames);
            parallel_for(cfg.papr_frames, cfg.jobs, [&](int f) {
                const std::uint64_t s = split_seed(cfg.seed, 1000 + cell_index, f);
                const Eigen::VectorXcd pil = make_pilot_symbols(fc, split_seed(s, 1));
                const Eigen::VectorXcd data =
                    qpsk_symbols(data_symbol_count(fc, cfg.dims), split_seed(s, 2));
                const DDGrid frame = place_frame(fc, pil, data, cfg.dims);
                papr[f] = papr_db(to_time_rect(isfft(frame)));
            });
            double mean = 0.0;
            for (double v : papr) mean += v;
            mean /= cfg.papr_frames;

            MetricRow row;
            row.sweep = "papr";
            row.waveform = "rect";
            row.M = cfg.dims.M;
            row.N = cfg.dims.N;
            row.l_max = cfg.l_max;
            row.k_max = cfg.k_max;
            row.n_hat = cfg.n_hat;
            row.pilots = pilots;
            row.snrp_db = snrp;
            row.snrd_db = cfg.snrd_db;
            row.trials = cfg.papr_frames;
            row.papr_db = mean;
            row.config_hash = hash;
            rows.push_back(row);
            ++cell_index;
        }
    }
    return rows;
}

Eigen::VectorXcd lmmse_detect(const DDGrid& y, const Eigen::MatrixXcd& H,
                              double snr_d_linear) {
    const int MN = static_cast<int>(y.vec().size());
    Eigen::MatrixXcd A = H.adjoint() * H;
    A.diagonal().array() += 1.0 / snr_d_linear;
    const Eigen::VectorXcd xhat = A.llt().solve(H.adjoint() * y.vec());
    Eigen::VectorXcd sliced(MN);
    const double a = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < MN; ++i)
        sliced[i] = cplx(xhat[i].real() >= 0 ? a : -a, xhat[i].imag() >= 0 ? a : -a);
    return sliced;
}

std::vector<BerCell> run_ber(const SimConfig& cfg) {
    std::vector<BerCell> cells;
    int cell_index = 0;
    for (double snrd : cfg.snrd_sweep_db) {
        const double gamma = std::pow(10.0, snrd / 10.0);
        const double pilot_power = std::pow(10.0, (cfg.ber_snrp_db - snrd) / 10.0);
        const FrameConfig fc = frame_for(cfg, 1, pilot_power);
        const double sigma_p = std::pow(10.0, -cfg.ber_snrp_db / 20.0);

        struct Tally {
            long err_perfect = 0, err_proposed = 0, err_threshold = 0, err_integer = 0;
            long bits = 0;
        };
        std::vector<Tally> tallies(cfg.trials);
        parallel_for(cfg.trials, cfg.jobs, [&](int trial) {
            const std::uint64_t s = split_seed(cfg.seed, 2000 + cell_index, trial);
            const DDChannel ch = sample_channel(split_seed(s, 0), cfg.path_counts.front(),
                                                cfg.l_max, cfg.k_max, cfg.n_hat, cfg.dims);
            const Eigen::VectorXcd pilots = make_pilot_symbols(fc, split_seed(s, 1));
            const Eigen::VectorXcd data =
                qpsk_symbols(data_symbol_count(fc, cfg.dims), split_seed(s, 2));
            const DDGrid frame = place_frame(fc, pilots, data, cfg.dims);
            const DDGrid y =
                add_noise(apply_waveform(ch, frame, cfg.waveform), gamma, split_seed(s, 3));
            const SparseSystem sys = make_sparse_system(fc, pilots, y);

            const Eigen::MatrixXcd H_true = cfg.waveform == Waveform::Rectangular
                                                ? build_H_rect(ch)
                                                : build_H_bi(ch);
            const EstimateResult res = estimate(sys, cfg.hp, cfg.waveform);
            const Eigen::MatrixXcd H_prop = reconstruct_channel(
                detect_support(res, fc, cfg.hp.support_rho), cfg.dims, cfg.n_hat, cfg.waveform);
            const Eigen::MatrixXcd H_thr = threshold_baseline(sys, sigma_p).H_hat;
            const EstimateResult res_int = estimate_integer_doppler(sys, cfg.hp);
            FrameConfig fc0 = fc;
            fc0.n_hat = 0;
            const Eigen::MatrixXcd H_int = reconstruct_channel(
                detect_support(res_int, fc0, cfg.hp.support_rho), cfg.dims, 0, cfg.waveform);

            const double snr_lin = std::pow(10.0, snrd / 10.0);
            const Eigen::VectorXcd d_perfect = lmmse_detect(y, H_true, snr_lin);
            const Eigen::VectorXcd d_prop = lmmse_detect(y, H_prop, snr_lin);
            const Eigen::VectorXcd d_thr = lmmse_detect(y, H_thr, snr_lin);
            const Eigen::VectorXcd d_int = lmmse_detect(y, H_int, snr_lin);

            Tally& t = tallies[trial];
            Eigen::Index next = 0;
            for (int k = 0; k < cfg.dims.N; ++k)
                for (int l = 0; l < cfg.dims.M; ++l) {
                    if (is_guard_cell(fc, cfg.dims, k, l)) continue;
                    const cplx x = data[next++];
                    const int idx = k * cfg.dims.M + l;
                    auto errs = [&](const Eigen::VectorXcd& dec) {
                        return ((dec[idx].real() >= 0) != (x.real() >= 0)) +
                               ((dec[idx].imag() >= 0) != (x.imag() >= 0));
                    };
                    t.err_perfect += errs(d_perfect);
                    t.err_proposed += errs(d_prop);
                    t.err_threshold += errs(d_thr);
                    t.err_integer += errs(d_int);
                    t.bits += 2;
                }
        });

        BerCell cell;
        cell.snrd_db = snrd;
        long bits = 0;
        Tally sum;
        for (const Tally& t : tallies) {
            sum.err_perfect += t.err_perfect;
            sum.err_proposed += t.err_proposed;
            sum.err_threshold += t.err_threshold;
            sum.err_integer += t.err_integer;
            bits += t.bits;
        }
        cell.ber_perfect = static_cast<double>(sum.err_perfect) / bits;
        cell.ber_proposed = static_cast<double>(sum.err_proposed) / bits;
        cell.ber_threshold = static_cast<double>(sum.err_threshold) / bits;
        cell.ber_integer = static_cast<double>(sum.err_integer) / bits;
        cells.push_back(cell);
        ++cell_index;
    }
    return cells;
}

std::vector<MetricRow> ber_rows(const SimConfig& cfg, const std::vector<BerCell>& cells) {
    std::vector<MetricRow> rows;
    const std::string hash = config_hash(cfg);
    for (const BerCell& c : cells) {
        const std::pair<const char*, double> methods[] = {
            {"ber_perfect", c.ber_perfect},
            {"ber_proposed", c.ber_proposed},
            {"ber_threshold", c.ber_threshold},
            {"ber_integer", c.ber_integer},
        };
        for (const auto& [name, ber] : methods) {
            MetricRow row;
            row.sweep = name;
            row.waveform = waveform_name(cfg.waveform);
            row.M = cfg.dims.M;
            row.N = cfg.dims.N;
            row.P = cfg.path_counts.front();
            row.l_max = cfg.l_max;
            row.k_max = cfg.k_max;
            row.n_hat = cfg.n_hat;
            row.pilots = 1;
            row.snrp_db = cfg.ber_snrp_db;
            row.snrd_db = c.snrd_db;
            row.trials = cfg.trials;
            row.ber = ber;
            row.config_hash = hash;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string csv_header() {
    return "sweep,waveform,M,N,P,l_max,k_max,n_hat,pilots,snrp_db,snrd_db,trials,"
           "nmse_h_db,nmse_kappa_db,nmse_H_db,crlb_h_db,crlb_kappa_db,papr_db,ber,"
           "config_hash";
}

std::string csv_line(const MetricRow& r) {
    std::string out;
    out += r.sweep + "," + r.waveform + ",";
    out += std::to_string(r.M) + "," + std::to_string(r.N) + "," + std::to_string(r.P) + ",";
    out += std::to_string(r.l_max) + "," + std::to_string(r.k_max) + "," +
           std::to_string(r.n_hat) + "," + std::to_string(r.pilots) + ",";
    out += fmt(r.snrp_db) + "," + fmt(r.snrd_db) + "," + std::to_string(r.trials) + ",";
    out += fmt(r.nmse_h_db) + "," + fmt(r.nmse_kappa_db) + "," + fmt(r.nmse_H_db) + ",";
    out += fmt(r.crlb_h_db) + "," + fmt(r.crlb_kappa_db) + ",";
    out += fmt(r.papr_db) + "," + fmt(r.ber) + "," + r.config_hash;
    return out;
}

void write_csv(const std::string& path, const std::vector<MetricRow>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_csv: cannot open " + path);
    f << csv_header() << "\n";
    for (const MetricRow& r : rows) f << csv_line(r) << "\n";
}

std::string SimConfig::to_json() const {
    nlohmann::json j;
    j["M"] = dims.M;
    j["N"] = dims.N;
    j["delta_f_hz"] = dims.delta_f_hz;
    j["carrier_hz"] = carrier_hz;
    j["l_max"] = l_max;
    j["k_max"] = k_max;
    j["n_hat"] = n_hat;
    j["path_counts"] = path_counts;
    j["pilot_counts"] = pilot_counts;
    j["snrp_db"] = snrp_db;
    j["snrd_db"] = snrd_db;
    j["snrd_sweep_db"] = snrd_sweep_db;
    j["ber_snrp_db"] = ber_snrp_db;
    j["waveform"] = waveform_name(waveform);
    j["trials"] = trials;
    j["papr_frames"] = papr_frames;
    j["seed"] = seed;
    j["jobs"] = jobs;
    j["estimator"] = {{"epsilon", hp.epsilon},     {"eta", hp.eta},
                      {"max_iter", hp.max_iter},   {"tol", hp.tol},
                      {"damping", hp.damping},     {"gamma_cap", hp.gamma_cap},
                      {"support_rho", hp.support_rho}};
    return j.dump(2);
}

SimConfig SimConfig::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SimConfig c;
    c.dims.M = j.value("M", c.dims.M);
    c.dims.N = j.value("N", c.dims.N);
    c.dims.delta_f_hz = j.value("delta_f_hz", c.dims.delta_f_hz);
    c.carrier_hz = j.value("carrier_hz", c.carrier_hz);
    c.l_max = j.value("l_max", c.l_max);
    c.k_max = j.value("k_max", c.k_max);
    c.n_hat = j.value("n_hat", c.n_hat);
    c.path_counts = j.value("path_counts", c.path_counts);
    c.pilot_counts = j.value("pilot_counts", c.pilot_counts);
    c.snrp_db = j.value("snrp_db", c.snrp_db);
    c.snrd_db = j.value("snrd_db", c.snrd_db);
    c.snrd_sweep_db = j.value("snrd_sweep_db", c.snrd_sweep_db);
    c.ber_snrp_db = j.value("ber_snrp_db", c.ber_snrp_db);
    c.waveform = waveform_from_name(j.value("waveform", std::string("bi")));
    c.trials = j.value("trials", c.trials);
    c.papr_frames = j.value("papr_frames", c.papr_frames);
    c.seed = j.value("seed", c.seed);
    c.jobs = j.value("jobs", c.jobs);
    if (j.contains("estimator")) {
        const auto& e = j["estimator"];
        c.hp.epsilon = e.value("epsilon", c.hp.epsilon);
        c.hp.eta = e.value("eta", c.hp.eta);
        c.hp.max_iter = e.value("max_iter", c.hp.max_iter);
        c.hp.tol = e.value("tol", c.hp.tol);
        c.hp.damping = e.value("damping", c.hp.damping);
        c.hp.gamma_cap = e.value("gamma_cap", c.hp.gamma_cap);
        c.hp.support_rho = e.value("support_rho", c.hp.support_rho);
    }
    return c;
}

std::string config_hash(const SimConfig& cfg) {
    const std::string text = cfg.to_json();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_plot_script(const std::string& path, const std::string& csv_name,
                       const std::string& sweep) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_plot_script: cannot open " + path);
    f << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set grid\n";
    if (sweep == "nmse") {
        f << "set xlabel 'SNRp (dB)'\nset ylabel 'NMSE of H (dB)'\n"
          << "plot '" << csv_name << "' using 10:15 with linespoints title 'estimator', \\\n"
          << "     '" << csv_name << "' using 10:16 with lines title 'CRLB (h)'\n";
    } else if (sweep == "papr") {
        f << "set xlabel 'SNRp (dB)'\nset ylabel 'mean PAPR (dB)'\n"
          << "plot '" << csv_name << "' using 10:18 with linespoints\n";
    } else {
        f << "set xlabel 'SNRd (dB)'\nset ylabel 'BER'\nset logscale y\n"
          << "plot '" << csv_name << "' using 11:19 with linespoints\n";
    }
}

}  // namespace otfs
