#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otfs/types.hpp"

namespace otfs {

enum class Waveform { BiOrthogonal, Rectangular };

// One resolvable propagation path. Physical delay is l / (M * delta_f) and
// Doppler is (k + kappa) / (N * T); only the tap indices are stored.
struct ChannelPath {
    cplx gain;
    int delay_idx = 0;          // l in [0, l_max]
    int doppler_idx = 0;        // k in [-k_max, k_max]
    double frac_doppler = 0.0;  // kappa in [-0.5, 0.5]
};

// Sparse DD-domain channel: P paths with one dominant tap per (l, k) cell,
// plus the per-path Doppler-spread truncation width n_hat (q in [-n_hat, n_hat]).
struct DDChannel {
    std::vector<ChannelPath> paths;
    int n_hat = 1;
    GridDims dims;
};

// Draws a random sparse channel. Path 1 has delay 0; the rest have delay
// uniform on [1, l_max]. Doppler index uniform on [-k_max, k_max], fractional
// part uniform on [-0.5, 0.5], gains i.i.d. CN(0, 1/P). (l, k) pairs are
// rejection-sampled until distinct. Deterministic for a given seed.
DDChannel sample_channel(std::uint64_t seed, int num_paths, int l_max, int k_max,
                         int n_hat, const GridDims& dims);

// Noiseless DD-domain channel output for the bi-orthogonal waveform:
//   y[k,l] = sum_i sum_q h_i f(q,kappa_i) e^{-j2pi l_i(k_i+kappa_i)/(MN)}
//            x[[k-k_i+q]_N, [l-l_i]_M].
DDGrid apply_bi(const DDChannel& ch, const DDGrid& x);

// Same channel as an explicit MN x MN matrix, assembled per (path, q) as a
// Kronecker product of circularly shifted identities. vec(y) = H * vec(x)
// with vectorization j = k*M + l.
Eigen::MatrixXcd build_H_bi(const DDChannel& ch);

// Rectangular-waveform output. Relative to the bi-orthogonal case each term
// gains the phase e^{j2pi l(k_i+kappa_i)/(MN)}, and rows with l < l_i pick up
// the edge term (beta_i(q) - 1)/N * e^{-j2pi [k-k_i+q]_N / N}.
DDGrid apply_rect(const DDChannel& ch, const DDGrid& x);

// Rectangular-waveform channel matrix: per (path, q) the Doppler shift
// pattern Kronecker the diagonal-weighted delay shift, right-multiplied by
// the block-diagonal Doppler-phase correction acting on the wrapped rows.
Eigen::MatrixXcd build_H_rect(const DDChannel& ch);

// Adds i.i.d. circular complex Gaussian noise with per-sample variance
// 1/gamma (each real component has variance 1/(2 gamma)). An infinite gamma
// returns the grid unchanged.
DDGrid add_noise(const DDGrid& y, double gamma, std::uint64_t seed);

// Replay format: {"M":..,"N":..,"n_hat":..,"paths":[{"re","im","l","k","kappa"},..]}
std::string channel_to_json(const DDChannel& ch);
DDChannel channel_from_json(const std::string& text);

}  // namespace otfs
