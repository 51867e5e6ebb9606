#include "otfs/frame.hpp"

#include "otfs/kernels.hpp"
#include "otfs/rng.hpp"

namespace otfs {

namespace {

// Offset of l into the cyclic guard-region delay span, or -1 if outside.
int guard_delay_offset(const FrameConfig& cfg, const GridDims& dims, int l) {
    const int start = mod_index(cfg.l0() - cfg.l_max, dims.M);
    const int off = mod_index(l - start, dims.M);
    return off < cfg.guard_span_delay() ? off : -1;
}

int guard_doppler_offset(const FrameConfig& cfg, const GridDims& dims, int k) {
    const int start = mod_index(cfg.k0(dims) - 2 * (cfg.k_max + cfg.n_hat), dims.N);
    const int off = mod_index(k - start, dims.N);
    return off < cfg.guard_span_doppler() ? off : -1;
}

bool in_guard_region(const FrameConfig& cfg, const GridDims& dims, int k, int l) {
    return guard_delay_offset(cfg, dims, l) >= 0 && guard_doppler_offset(cfg, dims, k) >= 0;
}

// Pilot-block offsets (r along delay, c along Doppler), or -1 if outside.
std::pair<int, int> pilot_offset(const FrameConfig& cfg, const GridDims& dims, int k, int l) {
    const int r = mod_index(l - cfg.l0(), dims.M);
    const int c = mod_index(k - cfg.k0(dims), dims.N);
    if (r < cfg.pilot_rows && c < cfg.pilot_cols) return {r, c};
    return {-1, -1};
}

}  // namespace

void FrameConfig::validate(const GridDims& dims) const {
    if (pilot_rows < 1 || pilot_cols < 1)
        throw std::invalid_argument("FrameConfig: pilot block must be non-empty");
    if (l_max < 0 || k_max < 0 || n_hat < 0)
        throw std::invalid_argument("FrameConfig: negative tap bounds");
    if (guard_span_delay() > dims.M || guard_span_doppler() > dims.N)
        throw std::invalid_argument("FrameConfig: pilot-plus-guard region exceeds the grid");
    if (l0() < l_max)
        throw std::invalid_argument("FrameConfig: pilot origin must satisfy l0 >= l_max");
    if (l0() + window_rows() > dims.M)
        throw std::invalid_argument("FrameConfig: observation window wraps in delay");
    if (!(pilot_power > 0.0))
        throw std::invalid_argument("FrameConfig: pilot power must be positive");
}

double overhead_fraction(const FrameConfig& cfg, const GridDims& dims) {
    return static_cast<double>(cfg.guard_span_delay()) * cfg.guard_span_doppler() / dims.size();
}

Eigen::VectorXcd make_pilot_symbols(const FrameConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_int_distribution<int> quad(0, 3);
    Eigen::VectorXcd p(cfg.pilot_rows * cfg.pilot_cols);
    const double s = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        switch (quad(rng)) {
            case 0: p[i] = cplx(s, s); break;
            case 1: p[i] = cplx(-s, s); break;
            case 2: p[i] = cplx(-s, -s); break;
            default: p[i] = cplx(s, -s); break;
        }
    }
    return p;
}

int data_symbol_count(const FrameConfig& cfg, const GridDims& dims) {
    return dims.size() - cfg.guard_span_delay() * cfg.guard_span_doppler();
}

bool is_guard_cell(const FrameConfig& cfg, const GridDims& dims, int k, int l) {
    return in_guard_region(cfg, dims, k, l);
}

DDGrid place_frame(const FrameConfig& cfg, const Eigen::VectorXcd& pilots,
                   const Eigen::VectorXcd& data, const GridDims& dims) {
    cfg.validate(dims);
    if (pilots.size() != cfg.pilot_rows * cfg.pilot_cols)
        throw std::invalid_argument("place_frame: pilot count mismatch");
    if (data.size() != data_symbol_count(cfg, dims))
        throw std::invalid_argument("place_frame: data count mismatch");

    const double ps = std::sqrt(cfg.pilot_power);
    const double ds = std::sqrt(cfg.data_power);
    DDGrid g(dims);
    Eigen::Index next = 0;
    for (int k = 0; k < dims.N; ++k) {
        for (int l = 0; l < dims.M; ++l) {
            if (in_guard_region(cfg, dims, k, l)) {
                const auto [r, c] = pilot_offset(cfg, dims, k, l);
                if (r >= 0) g.at(k, l) = ps * pilots[r * cfg.pilot_cols + c];
            } else {
                g.at(k, l) = ds * data[next++];
            }
        }
    }
    return g;
}

DDGrid pilot_grid(const FrameConfig& cfg, const Eigen::VectorXcd& pilots,
                  const GridDims& dims) {
    cfg.validate(dims);
    if (pilots.size() != cfg.pilot_rows * cfg.pilot_cols)
        throw std::invalid_argument("pilot_grid: pilot count mismatch");
    const double ps = std::sqrt(cfg.pilot_power);
    DDGrid g(dims);
    for (int r = 0; r < cfg.pilot_rows; ++r)
        for (int c = 0; c < cfg.pilot_cols; ++c)
            g.at(mod_index(cfg.k0(dims) + c, dims.N), mod_index(cfg.l0() + r, dims.M)) =
                ps * pilots[r * cfg.pilot_cols + c];
    return g;
}

Eigen::VectorXcd extract_observation(const DDGrid& y_grid, const FrameConfig& cfg) {
    const GridDims& dims = y_grid.dims();
    cfg.validate(dims);
    Eigen::VectorXcd y(cfg.obs_len());
    for (int z = 0; z < cfg.obs_len(); ++z)
        y[z] = y_grid.at_mod(cfg.obs_doppler(z, dims), cfg.obs_delay(z, dims));
    return y;
}

Eigen::MatrixXcd build_dictionary_bi(const FrameConfig& cfg, const Eigen::VectorXcd& pilots,
                                     const GridDims& dims) {
    if (pilots.size() == 0 || pilots.cwiseAbs().maxCoeff() == 0.0)
        throw std::invalid_argument("build_dictionary_bi: pilots are all zero");
    const DDGrid pg = pilot_grid(cfg, pilots, dims);
    const int Z = cfg.obs_len();
    const int B = cfg.block_len();
    Eigen::MatrixXcd X(Z, cfg.num_blocks() * B);
    for (int j = 0; j < cfg.num_blocks(); ++j) {
        const int t = cfg.block_delay(j);
        const int d = cfg.block_doppler(j);
        for (int b = 0; b < B; ++b) {
            const int q = cfg.q_of(b);
            const int n = cfg.col_index(j, b);
            for (int z = 0; z < Z; ++z) {
                const int k = cfg.obs_doppler(z, dims);
                const int l = cfg.obs_delay(z, dims);
                X(z, n) = pg.at_mod(k - d + q, l - t);
            }
        }
    }
    return X;
}

Eigen::MatrixXcd modulate_dictionary_rect(const Eigen::MatrixXcd& X_bi, const FrameConfig& cfg,
                                          const GridDims& dims, const Eigen::VectorXd& kappa_est) {
    if (kappa_est.size() != cfg.num_blocks())
        throw std::invalid_argument("modulate_dictionary_rect: need one kappa per block");
    const double MN = dims.M * static_cast<double>(dims.N);
    Eigen::MatrixXcd X = X_bi;
    for (int j = 0; j < cfg.num_blocks(); ++j) {
        const double nu = cfg.block_doppler(j) + kappa_est[j];
        for (int b = 0; b < cfg.block_len(); ++b) {
            const int n = cfg.col_index(j, b);
            for (int z = 0; z < cfg.obs_len(); ++z) {
                const double ang = 2.0 * kPi * cfg.obs_delay(z, dims) * nu / MN;
                X(z, n) *= cplx(std::cos(ang), std::sin(ang));
            }
        }
    }
    return X;
}

Eigen::MatrixXcd build_dictionary_rect(const FrameConfig& cfg, const Eigen::VectorXcd& pilots,
                                       const GridDims& dims, const Eigen::VectorXd& kappa_est) {
    return modulate_dictionary_rect(build_dictionary_bi(cfg, pilots, dims), cfg, dims, kappa_est);
}

Eigen::VectorXcd build_true_c(const DDChannel& ch, const FrameConfig& cfg) {
    const GridDims& dims = ch.dims;
    const double MN = dims.M * static_cast<double>(dims.N);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(cfg.num_blocks() * cfg.block_len());
    for (const ChannelPath& p : ch.paths) {
        if (p.delay_idx > cfg.l_max || std::abs(p.doppler_idx) > cfg.k_max)
            throw std::invalid_argument("build_true_c: path outside dictionary range");
        const int j = cfg.block_index(p.delay_idx, p.doppler_idx);
        const double ang = -2.0 * kPi * (p.doppler_idx + p.frac_doppler) * p.delay_idx / MN;
        const cplx base = p.gain * cplx(std::cos(ang), std::sin(ang));
        for (int b = 0; b < cfg.block_len(); ++b)
            c[cfg.col_index(j, b)] = base * spread_f(cfg.q_of(b), p.frac_doppler, dims.N);
    }
    return c;
}

SparseSystem make_sparse_system(const FrameConfig& cfg, const Eigen::VectorXcd& pilots,
                                const DDGrid& y_grid) {
    SparseSystem sys;
    sys.dims = y_grid.dims();
    sys.cfg = cfg;
    sys.pilots = pilots;
    sys.y = extract_observation(y_grid, cfg);
    sys.X = build_dictionary_bi(cfg, pilots, sys.dims);
    return sys;
}

}  // namespace otfs
