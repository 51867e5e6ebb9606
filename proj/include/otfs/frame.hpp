#pragma once

#include <cstdint>

#include "otfs/channel.hpp"
#include "otfs/types.hpp"

namespace otfs {

// Pilot/guard layout and dictionary geometry. The pilot block is M_p x N_p
// cells (delay x Doppler) at origin (l0, k0); the guard band extends l_max
// along delay on both sides and 2(k_max + n_hat) along Doppler on both sides,
// which keeps the observation window free of data interference. l0 >= l_max
// is required so the rectangular-waveform model reduction applies.
struct FrameConfig {
    int pilot_rows = 1;  // M_p, pilot extent along delay
    int pilot_cols = 1;  // N_p, pilot extent along Doppler
    int l_max = 10;
    int k_max = 4;
    int n_hat = 1;             // q truncation; B = 2 n_hat + 1
    double pilot_power = 1.0;  // linear P_p; pilots are scaled by sqrt(P_p)
    double data_power = 1.0;
    int pilot_l0 = -1;  // -1: defaults to l_max
    int pilot_k0 = -1;  // -1: defaults to N/2

    int l0() const { return pilot_l0 >= 0 ? pilot_l0 : l_max; }
    int k0(const GridDims& dims) const { return pilot_k0 >= 0 ? pilot_k0 : dims.N / 2; }

    // Dictionary dimensions.
    int num_blocks() const { return (l_max + 1) * (2 * k_max + 1); }  // J
    int block_len() const { return 2 * n_hat + 1; }                   // B
    int window_rows() const { return l_max + pilot_rows; }
    int window_cols() const { return pilot_cols + 2 * (k_max + n_hat); }
    int obs_len() const { return window_rows() * window_cols(); }  // Z

    // Block index j <-> (delay t, Doppler d); j is 0-based here (the 1-based
    // convention is j+1).
    int block_index(int t, int d) const { return (l_max + 1) * (k_max + d) + t; }
    int block_delay(int j) const { return j % (l_max + 1); }
    int block_doppler(int j) const { return j / (l_max + 1) - k_max; }

    // Column n <-> (block j, in-block b); q = b - n_hat.
    int col_index(int j, int b) const { return j * block_len() + b; }
    int q_of(int b) const { return b - n_hat; }

    // Observation rows are flattened delay-major: z = (l - l0) * Wk + doppler
    // offset. obs_delay returns the absolute grid delay row of observation z.
    int obs_delay(int z, const GridDims&) const { return l0() + z / window_cols(); }
    int obs_doppler(int z, const GridDims& dims) const {
        return mod_index(k0(dims) - k_max - n_hat + z % window_cols(), dims.N);
    }

    // Pilot-plus-guard region extents (the spectral overhead numerator).
    int guard_span_delay() const { return 2 * l_max + pilot_rows; }
    int guard_span_doppler() const { return 4 * (k_max + n_hat) + pilot_cols; }

    void validate(const GridDims& dims) const;
};

// Overhead fraction (2 l_max + M_p)(4 k_max + 4 n_hat + N_p) / (M N).
double overhead_fraction(const FrameConfig& cfg, const GridDims& dims);

// Unit-modulus QPSK pilot symbols, M_p * N_p of them, deterministic per seed.
Eigen::VectorXcd make_pilot_symbols(const FrameConfig& cfg, std::uint64_t seed);

// Number of data cells in a frame.
int data_symbol_count(const FrameConfig& cfg, const GridDims& dims);

// True when (k, l) lies in the pilot-plus-guard region (i.e. holds no data).
bool is_guard_cell(const FrameConfig& cfg, const GridDims& dims, int k, int l);

// Places pilots (scaled by sqrt(pilot_power)), zero guard band, and data
// (scaled by sqrt(data_power)) onto the grid. Data fills the non-guard cells
// in vector order (Doppler-major). pilots are indexed (r * N_p + c) for cell
// (l0 + r, k0 + c).
DDGrid place_frame(const FrameConfig& cfg, const Eigen::VectorXcd& pilots,
                   const Eigen::VectorXcd& data, const GridDims& dims);

// Grid holding only the scaled pilot block (dictionary/CRLB input).
DDGrid pilot_grid(const FrameConfig& cfg, const Eigen::VectorXcd& pilots,
                  const GridDims& dims);

// Pulls the Z observation cells out of a received grid, delay-major.
Eigen::VectorXcd extract_observation(const DDGrid& y_grid, const FrameConfig& cfg);

// Dictionary for the bi-orthogonal waveform: column (j, b) ~ (t, d, q) holds
// the pilot value at the shifted cell [[k - d + q]_N, [l - t]_M] for every
// observation row (k, l). All-zero pilots are rejected.
Eigen::MatrixXcd build_dictionary_bi(const FrameConfig& cfg, const Eigen::VectorXcd& pilots,
                                     const GridDims& dims);

// Rectangular-waveform dictionary: the bi-orthogonal one with each element
// rotated by e^{j2pi l_z (d_n + kappa_n) / (MN)}, where kappa_est supplies one
// kappa per block (zeros on the first iteration).
Eigen::MatrixXcd build_dictionary_rect(const FrameConfig& cfg, const Eigen::VectorXcd& pilots,
                                       const GridDims& dims, const Eigen::VectorXd& kappa_est);

// Applies the rectangular phase rotation to an existing bi-orthogonal
// dictionary (the per-iteration refresh path).
Eigen::MatrixXcd modulate_dictionary_rect(const Eigen::MatrixXcd& X_bi, const FrameConfig& cfg,
                                          const GridDims& dims, const Eigen::VectorXd& kappa_est);

// Ground-truth block-sparse coefficient vector: block (t, d) of an active
// path is h * e^{-j2pi(d+kappa)t/(MN)} * [f(-n_hat,kappa),...,f(n_hat,kappa)].
Eigen::VectorXcd build_true_c(const DDChannel& ch, const FrameConfig& cfg);

// Observation vector + dictionary + the geometry they share.
struct SparseSystem {
    GridDims dims;
    FrameConfig cfg;
    Eigen::VectorXcd y;       // length Z
    Eigen::MatrixXcd X;       // Z x J*B, bi-orthogonal form
    Eigen::VectorXcd pilots;  // unscaled pilot symbols
};

SparseSystem make_sparse_system(const FrameConfig& cfg, const Eigen::VectorXcd& pilots,
                                const DDGrid& y_grid);

}  // namespace otfs
