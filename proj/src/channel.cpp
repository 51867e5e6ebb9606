#include "otfs/channel.hpp"

#include <nlohmann/json.hpp>
#include <set>

#include "otfs/kernels.hpp"
#include "otfs/rng.hpp"

namespace otfs {

namespace {

// Dense matrices are only built at desk scale.
constexpr int kMaxDenseCells = 8192;

void check_dense(const GridDims& dims, const char* who) {
    if (dims.size() > kMaxDenseCells)
        throw std::invalid_argument(std::string(who) + ": grid too large for a dense channel matrix");
}

cplx polar1(double ang) { return {std::cos(ang), std::sin(ang)}; }

// Per-path constant phase e^{-j2pi l_i (k_i + kappa_i) / (MN)}.
cplx path_phase(const ChannelPath& p, const GridDims& dims) {
    return polar1(-2.0 * kPi * p.delay_idx * (p.doppler_idx + p.frac_doppler) /
                  (dims.M * static_cast<double>(dims.N)));
}

}  // namespace

DDChannel sample_channel(std::uint64_t seed, int num_paths, int l_max, int k_max,
                         int n_hat, const GridDims& dims) {
    if (num_paths < 1) throw std::invalid_argument("sample_channel: need at least one path");
    // Path 1 occupies delay 0; the others draw from l in [1, l_max].
    const long capacity = 1L + static_cast<long>(l_max) * (2L * k_max + 1);
    if (num_paths > capacity)
        throw std::invalid_argument("sample_channel: more paths than distinct (l,k) cells");

    Rng rng(seed);
    std::uniform_int_distribution<int> delay_dist(1, l_max);
    std::uniform_int_distribution<int> doppler_dist(-k_max, k_max);
    std::uniform_real_distribution<double> kappa_dist(-0.5, 0.5);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 / num_paths));

    DDChannel ch;
    ch.n_hat = n_hat;
    ch.dims = dims;
    std::set<std::pair<int, int>> used;
    for (int i = 0; i < num_paths; ++i) {
        ChannelPath p;
        do {
            p.delay_idx = (i == 0) ? 0 : delay_dist(rng);
            p.doppler_idx = doppler_dist(rng);
        } while (!used.insert({p.delay_idx, p.doppler_idx}).second);
        p.frac_doppler = kappa_dist(rng);
        p.gain = cplx(gauss(rng), gauss(rng));
        ch.paths.push_back(p);
    }
    return ch;
}

DDGrid apply_bi(const DDChannel& ch, const DDGrid& x) {
    const GridDims& dims = ch.dims;
    if (!(x.dims() == dims)) throw std::invalid_argument("apply_bi: dims mismatch");
    DDGrid y(dims);
    for (const ChannelPath& p : ch.paths) {
        const cplx base = p.gain * path_phase(p, dims);
        for (int q = -ch.n_hat; q <= ch.n_hat; ++q) {
            const cplx coef = base * spread_f(q, p.frac_doppler, dims.N);
            for (int k = 0; k < dims.N; ++k) {
                const int ks = mod_index(k - p.doppler_idx + q, dims.N);
                for (int l = 0; l < dims.M; ++l) {
                    y.at(k, l) += coef * x.at(ks, mod_index(l - p.delay_idx, dims.M));
                }
            }
        }
    }
    return y;
}

Eigen::MatrixXcd build_H_bi(const DDChannel& ch) {
    const GridDims& dims = ch.dims;
    check_dense(dims, "build_H_bi");
    const int MN = dims.size();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(MN, MN);
    for (const ChannelPath& p : ch.paths) {
        const cplx base = p.gain * path_phase(p, dims);
        for (int q = -ch.n_hat; q <= ch.n_hat; ++q) {
            const cplx coef = base * spread_f(q, p.frac_doppler, dims.N);
            // I_N(-[q-k_i]_N) kron (I_M(l_i) * coef): row (k,l) has its single
            // entry at column ([k-k_i+q]_N, [l-l_i]_M).
            for (int k = 0; k < dims.N; ++k) {
                const int ks = mod_index(k - p.doppler_idx + q, dims.N);
                for (int l = 0; l < dims.M; ++l) {
                    const int ls = mod_index(l - p.delay_idx, dims.M);
                    H(k * dims.M + l, ks * dims.M + ls) += coef;
                }
            }
        }
    }
    return H;
}

DDGrid apply_rect(const DDChannel& ch, const DDGrid& x) {
    const GridDims& dims = ch.dims;
    if (!(x.dims() == dims)) throw std::invalid_argument("apply_rect: dims mismatch");
    const double MN = dims.M * static_cast<double>(dims.N);
    DDGrid y(dims);
    for (const ChannelPath& p : ch.paths) {
        const double nu = p.doppler_idx + p.frac_doppler;
        for (int q = -ch.n_hat; q <= ch.n_hat; ++q) {
            // beta_i(q)/N equals f(q, kappa_i).
            const cplx beta_over_N = spread_f(q, p.frac_doppler, dims.N);
            for (int k = 0; k < dims.N; ++k) {
                const int ks = mod_index(k - p.doppler_idx + q, dims.N);
                const cplx edge = (beta_over_N - 1.0 / dims.N) *
                                  polar1(-2.0 * kPi * ks / dims.N);
                for (int l = 0; l < dims.M; ++l) {
                    const cplx alpha = (l >= p.delay_idx) ? beta_over_N : edge;
                    const cplx coef =
                        p.gain * polar1(2.0 * kPi * (l - p.delay_idx) * nu / MN) * alpha;
                    y.at(k, l) += coef * x.at(ks, mod_index(l - p.delay_idx, dims.M));
                }
            }
        }
    }
    return y;
}

Eigen::MatrixXcd build_H_rect(const DDChannel& ch) {
    const GridDims& dims = ch.dims;
    check_dense(dims, "build_H_rect");
    const int M = dims.M, N = dims.N;
    const double MN = M * static_cast<double>(N);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(M * N, M * N);
    for (const ChannelPath& p : ch.paths) {
        const double nu = p.doppler_idx + p.frac_doppler;
        const cplx base = p.gain * path_phase(p, dims);
        for (int q = -ch.n_hat; q <= ch.n_hat; ++q) {
            const cplx beta_over_N = spread_f(q, p.frac_doppler, dims.N);
            // Lambda * I_M(l_i): diagonal weight by row, then delay shift.
            Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(M, M);
            for (int l = 0; l < M; ++l) {
                const cplx lam = polar1(2.0 * kPi * l * nu / MN) *
                                 (l >= p.delay_idx ? beta_over_N : beta_over_N - 1.0 / N);
                D(l, mod_index(l - p.delay_idx, M)) = lam;
            }
            const int shift = mod_index(q - p.doppler_idx, N);
            for (int k = 0; k < N; ++k) {
                const int ks = mod_index(k + shift, N);
                // Block-diagonal phase correction: within column block ks, the
                // columns fed by wrapped rows (l < l_i, i.e. l' >= M - l_i)
                // carry the extra e^{-j2pi ks / N}.
                const cplx psi = polar1(-2.0 * kPi * ks / N);
                for (int l = 0; l < M; ++l) {
                    const int ls = mod_index(l - p.delay_idx, M);
                    cplx v = base * D(l, ls);
                    if (l < p.delay_idx) v *= psi;
                    H(k * M + l, ks * M + ls) += v;
                }
            }
        }
    }
    return H;
}

DDGrid add_noise(const DDGrid& y, double gamma, std::uint64_t seed) {
    if (std::isinf(gamma)) return y;
    if (!(gamma > 0.0)) throw std::invalid_argument("add_noise: gamma must be positive");
    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 / gamma));
    DDGrid out = y;
    for (Eigen::Index i = 0; i < out.vec().size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        out.vec()[i] += cplx(re, im);
    }
    return out;
}

std::string channel_to_json(const DDChannel& ch) {
    nlohmann::json j;
    j["M"] = ch.dims.M;
    j["N"] = ch.dims.N;
    j["n_hat"] = ch.n_hat;
    j["paths"] = nlohmann::json::array();
    for (const ChannelPath& p : ch.paths) {
        j["paths"].push_back({{"re", p.gain.real()},
                              {"im", p.gain.imag()},
                              {"l", p.delay_idx},
                              {"k", p.doppler_idx},
                              {"kappa", p.frac_doppler}});
    }
    return j.dump(2);
}

DDChannel channel_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    DDChannel ch;
    ch.dims.M = j.at("M").get<int>();
    ch.dims.N = j.at("N").get<int>();
    ch.n_hat = j.at("n_hat").get<int>();
    for (const auto& pj : j.at("paths")) {
        ChannelPath p;
        p.gain = cplx(pj.at("re").get<double>(), pj.at("im").get<double>());
        p.delay_idx = pj.at("l").get<int>();
        p.doppler_idx = pj.at("k").get<int>();
        p.frac_doppler = pj.at("kappa").get<double>();
        ch.paths.push_back(p);
    }
    return ch;
}

}  // namespace otfs
