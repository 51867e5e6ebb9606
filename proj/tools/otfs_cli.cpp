#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "otfs/kernels.hpp"
#include "otfs/modem.hpp"
#include "otfs/rng.hpp"
#include "otfs/sim.hpp"

namespace fs = std::filesystem;
using namespace otfs;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitNumerical = 4;

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int trials = -1;
    std::string waveform;
    int pilots = -1;
    std::vector<double> snrp;
    int jobs = -1;
};

SimConfig load_config(const CliOptions& opt) {
    SimConfig cfg;
    if (!opt.config_path.empty()) {
        std::ifstream f(opt.config_path);
        if (!f) throw std::runtime_error("cannot open config file: " + opt.config_path);
        std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        cfg = SimConfig::from_json(text);
    }
    // Flags override file values.
    if (opt.seed_set) cfg.seed = opt.seed;
    if (opt.trials >= 0) cfg.trials = opt.trials;
    if (!opt.waveform.empty())
        cfg.waveform = opt.waveform == "rect" ? Waveform::Rectangular : Waveform::BiOrthogonal;
    if (opt.pilots >= 0) cfg.pilot_counts = {opt.pilots};
    if (!opt.snrp.empty()) cfg.snrp_db = opt.snrp;
    if (opt.jobs >= 0) cfg.jobs = opt.jobs;
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

// Resolved-config snapshot beside every output set, for auditability.
void snapshot(const SimConfig& cfg, const fs::path& dir, const std::string& name) {
    write_text(dir / (name + "-config.json"), cfg.to_json() + "\n");
}

int cmd_nmse(const SimConfig& cfg, const fs::path& out) {
    const auto cells = run_nmse_sweep(cfg);
    std::vector<MetricRow> rows;
    for (const auto& c : cells) rows.push_back(c.row);
    write_csv((out / "nmse.csv").string(), rows);
    write_plot_script((out / "nmse.gp").string(), "nmse.csv", "nmse");
    snapshot(cfg, out, "nmse");
    for (const auto& r : rows)
        std::cout << "nmse waveform=" << r.waveform << " P=" << r.P << " pilots=" << r.pilots
                  << " snrp=" << r.snrp_db << "dB NMSE(H)=" << r.nmse_H_db
                  << "dB CRLB(h)=" << r.crlb_h_db << "dB\n";
    return 0;
}

int cmd_papr(const SimConfig& cfg, const fs::path& out) {
    const auto rows = run_papr_table(cfg);
    write_csv((out / "papr.csv").string(), rows);
    write_plot_script((out / "papr.gp").string(), "papr.csv", "papr");
    snapshot(cfg, out, "papr");
    for (const auto& r : rows)
        std::cout << "papr snrp=" << r.snrp_db << "dB pilots=" << r.pilots << " mean="
                  << r.papr_db << "dB\n";
    return 0;
}

int cmd_ber(const SimConfig& cfg, const fs::path& out) {
    const auto cells = run_ber(cfg);
    const auto rows = ber_rows(cfg, cells);
    write_csv((out / "ber.csv").string(), rows);
    write_plot_script((out / "ber.gp").string(), "ber.csv", "ber");
    snapshot(cfg, out, "ber");
    for (const auto& c : cells)
        std::cout << "ber snrd=" << c.snrd_db << "dB perfect=" << c.ber_perfect
                  << " proposed=" << c.ber_proposed << " threshold=" << c.ber_threshold
                  << " integer=" << c.ber_integer << "\n";
    return 0;
}

int cmd_crlb(const SimConfig& cfg, const fs::path& out) {
    std::vector<MetricRow> rows;
    const std::string hash = config_hash(cfg);
    const int P = cfg.path_counts.front();
    const int pilots = cfg.pilot_counts.front();
    FrameConfig fc;
    fc.pilot_rows = pilots;
    fc.pilot_cols = 1;
    fc.l_max = cfg.l_max;
    fc.k_max = cfg.k_max;
    fc.n_hat = cfg.n_hat;
    for (double snrp : cfg.snrp_db) {
        const double gamma = std::pow(10.0, snrp / 10.0);
        std::vector<double> bh(cfg.trials), bk(cfg.trials);
        for (int t = 0; t < cfg.trials; ++t) {
            const std::uint64_t s = split_seed(cfg.seed, 3000, t);
            const DDChannel ch =
                sample_channel(split_seed(s, 0), P, cfg.l_max, cfg.k_max, cfg.n_hat, cfg.dims);
            const Eigen::VectorXcd pil = make_pilot_symbols(fc, split_seed(s, 1));
            const auto nb = normalized_bounds(
                crlb_bounds(fisher_matrix(ch, fc, pil, gamma, cfg.waveform)),
                ThetaVector::from_channel(ch));
            bh[t] = nb.h_bound;
            bk[t] = nb.kappa_bound;
        }
        MetricRow row;
        row.sweep = "crlb";
        row.waveform = cfg.waveform == Waveform::Rectangular ? "rect" : "bi";
        row.M = cfg.dims.M;
        row.N = cfg.dims.N;
        row.P = P;
        row.l_max = cfg.l_max;
        row.k_max = cfg.k_max;
        row.n_hat = cfg.n_hat;
        row.pilots = pilots;
        row.snrp_db = snrp;
        row.trials = cfg.trials;
        row.crlb_h_db = nmse_db(bh);
        row.crlb_kappa_db = nmse_db(bk);
        row.config_hash = hash;
        rows.push_back(row);
        std::cout << "crlb snrp=" << snrp << "dB h_bound=" << row.crlb_h_db
                  << "dB kappa_bound=" << row.crlb_kappa_db << "dB\n";
    }
    write_csv((out / "crlb.csv").string(), rows);
    snapshot(cfg, out, "crlb");
    return 0;
}

int cmd_estimate_once(const SimConfig& cfg, const fs::path& out) {
    const int P = cfg.path_counts.front();
    const int pilots = cfg.pilot_counts.front();
    const double snrp = cfg.snrp_db.front();
    FrameConfig fc;
    fc.pilot_rows = pilots;
    fc.pilot_cols = 1;
    fc.l_max = cfg.l_max;
    fc.k_max = cfg.k_max;
    fc.n_hat = cfg.n_hat;

    const std::uint64_t s = split_seed(cfg.seed, 4000, 0);
    const DDChannel ch =
        sample_channel(split_seed(s, 0), P, cfg.l_max, cfg.k_max, cfg.n_hat, cfg.dims);
    const Eigen::VectorXcd pil = make_pilot_symbols(fc, split_seed(s, 1));
    const Eigen::VectorXcd data =
        [&] {
            Rng rng(split_seed(s, 2));
            std::uniform_int_distribution<int> quad(0, 3);
            Eigen::VectorXcd d(data_symbol_count(fc, cfg.dims));
            const double a = 1.0 / std::sqrt(2.0);
            for (Eigen::Index i = 0; i < d.size(); ++i) {
                const int b = quad(rng);
                d[i] = cplx(b & 1 ? -a : a, b & 2 ? -a : a);
            }
            return d;
        }();
    const DDGrid frame = place_frame(fc, pil, data, cfg.dims);
    const double gamma = std::pow(10.0, snrp / 10.0);
    const DDGrid y = add_noise(cfg.waveform == Waveform::Rectangular ? apply_rect(ch, frame)
                                                                     : apply_bi(ch, frame),
                               gamma, split_seed(s, 3));
    const SparseSystem sys = make_sparse_system(fc, pil, y);
    const EstimateResult res = estimate(sys, cfg.hp, cfg.waveform);

    write_text(out / "channel.json", channel_to_json(ch) + "\n");
    write_text(out / "estimate.json", result_to_json(res, fc) + "\n");
    snapshot(cfg, out, "estimate-once");
    std::cout << "estimate-once seed=" << cfg.seed << " iterations=" << res.iterations
              << " gamma_hat=" << res.gamma_hat << " support=" << res.support.size()
              << " blocks\n";
    return 0;
}

// Invariant suites: matrix/direct-sum equivalence, dictionary consistency,
// kernel identities. Nonzero exit on any failure.
int cmd_model_check(const SimConfig& cfg) {
    bool ok = true;
    auto report = [&](const std::string& name, bool pass, double worst) {
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << " (worst " << worst << ")\n";
        ok = ok && pass;
    };

    {  // Kernel identities on a coarse grid.
        double worst = 0.0;
        for (int N : {8, 16, 32}) {
            for (int q = -N; q <= N; ++q)
                for (int i = 0; i <= 20; ++i) {
                    const double kap = -0.5 + i * 0.05;
                    cplx series(0.0, 0.0);
                    for (int n = 0; n < N; ++n) {
                        const double ang = 2.0 * kPi * n * (q + kap) / N;
                        series += cplx(std::cos(ang), std::sin(ang));
                    }
                    series /= N;
                    worst = std::max(worst, std::abs(spread_f(q, kap, N) - series));
                }
            for (int i = 0; i <= 20; ++i) {
                const double kap = -0.5 + i * 0.05;
                cplx sum(0.0, 0.0);
                for (int q = 0; q < N; ++q) sum += spread_f(q, kap, N);
                worst = std::max(worst, std::abs(sum - 1.0));
            }
        }
        report("kernel series identity + unit partition", worst < 1e-10, worst);
    }

    {  // Matrix vs direct-sum equivalence, both waveforms.
        double worst = 0.0;
        Rng rng(split_seed(cfg.seed, 5000));
        for (int inst = 0; inst < 20; ++inst) {
            GridDims dims{16, 8, 2000.0};
            const int P = 1 + static_cast<int>(rng() % 4);
            const int n_hat = static_cast<int>(rng() % 3);
            const DDChannel ch = sample_channel(rng(), P, 5, 2, n_hat, dims);
            DDGrid x(dims);
            std::normal_distribution<double> g(0.0, 1.0);
            for (int i = 0; i < dims.size(); ++i) x.vec()[i] = cplx(g(rng), g(rng));
            const Eigen::VectorXcd via_bi = build_H_bi(ch) * x.vec();
            const Eigen::VectorXcd via_rect = build_H_rect(ch) * x.vec();
            worst = std::max(worst, (apply_bi(ch, x).vec() - via_bi).norm() / via_bi.norm());
            worst =
                std::max(worst, (apply_rect(ch, x).vec() - via_rect).norm() / via_rect.norm());
        }
        report("matrix vs direct-sum equivalence (bi + rect)", worst < 1e-10, worst);
    }

    {  // Dictionary consistency: X * c_true vs extracted noiseless window.
        double worst = 0.0;
        Rng rng(split_seed(cfg.seed, 5001));
        for (int inst = 0; inst < 20; ++inst) {
            GridDims dims{32, 16, 2000.0};
            FrameConfig fc;
            fc.pilot_rows = 1 + static_cast<int>(rng() % 3);
            fc.pilot_cols = 1;
            fc.l_max = 4;
            fc.k_max = 2;
            fc.n_hat = 1;
            fc.pilot_power = 100.0;
            const int P = 1 + static_cast<int>(rng() % 4);
            const DDChannel ch = sample_channel(rng(), P, fc.l_max, fc.k_max, fc.n_hat, dims);
            const Eigen::VectorXcd pil = make_pilot_symbols(fc, rng());
            const Eigen::VectorXcd data =
                Eigen::VectorXcd::Zero(data_symbol_count(fc, dims));
            const DDGrid frame = place_frame(fc, pil, data, dims);
            const Eigen::VectorXcd c = build_true_c(ch, fc);

            const Eigen::VectorXcd w_bi = extract_observation(apply_bi(ch, frame), fc);
            const Eigen::VectorXcd m_bi = build_dictionary_bi(fc, pil, dims) * c;
            worst = std::max(worst, (w_bi - m_bi).norm() / w_bi.norm());

            Eigen::VectorXd kap(fc.num_blocks());
            kap.setZero();
            for (const ChannelPath& p : ch.paths)
                kap[fc.block_index(p.delay_idx, p.doppler_idx)] = p.frac_doppler;
            const Eigen::VectorXcd w_rect = extract_observation(apply_rect(ch, frame), fc);
            const Eigen::VectorXcd m_rect = build_dictionary_rect(fc, pil, dims, kap) * c;
            worst = std::max(worst, (w_rect - m_rect).norm() / w_rect.norm());
        }
        report("dictionary consistency (bi + rect)", worst < 1e-10, worst);
    }

    return ok ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OTFS delay-Doppler channel estimation toolkit"};
    app.require_subcommand(1);

    CliOptions opt;
    app.add_option("--config", opt.config_path, "JSON config file");
    app.add_option("--seed", opt.seed, "master seed")->each([&](const std::string&) {
        opt.seed_set = true;
    });
    app.add_option("--out", opt.out_dir, "output directory");
    app.add_option("--trials", opt.trials, "Monte-Carlo trials per sweep cell");
    app.add_option("--waveform", opt.waveform, "bi | rect")
        ->check(CLI::IsMember({"bi", "rect"}));
    app.add_option("--pilots", opt.pilots, "pilot symbols per frame (one Doppler column)");
    app.add_option("--snrp", opt.snrp, "pilot SNR list in dB");
    app.add_option("--jobs", opt.jobs, "worker threads (0 = hardware)");

    auto* nmse = app.add_subcommand("nmse-sweep", "NMSE vs SNRp Monte-Carlo sweep");
    auto* papr = app.add_subcommand("papr-table", "mean PAPR per (SNRp, pilot count)");
    auto* ber = app.add_subcommand("ber", "BER comparison of channel estimates");
    auto* crlb = app.add_subcommand("crlb", "normalized CRLB sweep");
    auto* once = app.add_subcommand("estimate-once", "single seeded estimation run");
    auto* check = app.add_subcommand("model-check", "run model invariant suites");
    for (auto* sub : {nmse, papr, ber, crlb, once, check}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    SimConfig cfg;
    try {
        cfg = load_config(opt);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        const fs::path out(opt.out_dir);
        fs::create_directories(out);
        if (nmse->parsed()) return cmd_nmse(cfg, out);
        if (papr->parsed()) return cmd_papr(cfg, out);
        if (ber->parsed()) return cmd_ber(cfg, out);
        if (crlb->parsed()) return cmd_crlb(cfg, out);
        if (once->parsed()) return cmd_estimate_once(cfg, out);
        if (check->parsed()) return cmd_model_check(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
