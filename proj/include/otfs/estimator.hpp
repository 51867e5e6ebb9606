#pragma once

#include <string>
#include <vector>

#include "otfs/frame.hpp"

namespace otfs {

// Knobs of the message-passing estimator. epsilon/eta are the Gamma-prior
// hyperparameters of the per-block precision (1 and 0 give a noninformative
// prior). damping blends each new backward c message with the previous
// iterate to stabilize the linearized Doppler loop.
struct Hyperparams {
    double epsilon = 1.0;
    double eta = 0.0;
    int max_iter = 50;
    double tol = 1e-6;
    double damping = 0.7;
    double gamma_cap = 1e12;     // keeps the posterior system well conditioned
    double support_rho = 1e-3;   // relative power threshold for support pruning
};

// Every message mean/variance of one estimator instance. Per-element vectors
// have length J*B (indexed by col_index(j, b)); per-block vectors length J.
struct EstimatorState {
    // c messages: backward (from the factor side), posterior, forward extrinsic.
    Eigen::VectorXcd c_back;
    Eigen::VectorXd vc_back;
    Eigen::VectorXcd c_post;
    Eigen::VectorXd vc_post;
    Eigen::VectorXcd c_fwd;
    Eigen::VectorXd vc_fwd;
    // h messages and per-block belief.
    Eigen::VectorXcd h_fwd;
    Eigen::VectorXd vh_fwd;
    Eigen::VectorXcd h_back;
    Eigen::VectorXd vh_back;
    Eigen::VectorXcd h_hat;
    Eigen::VectorXd vh;
    Eigen::VectorXd lambda_hat;
    // g messages and belief.
    Eigen::VectorXcd g_fwd;
    Eigen::VectorXd vg_fwd;
    Eigen::VectorXcd g_back;
    Eigen::VectorXd vg_back;
    Eigen::VectorXcd g_hat;
    Eigen::VectorXd vg;
    // kappa messages, belief, and the Taylor linearization point (previous
    // iteration's estimate).
    Eigen::VectorXd kappa_fwd, vkappa_fwd, kappa_back, vkappa_back;
    Eigen::VectorXd kappa_hat, v_kappa, kappa_lin;
    std::vector<bool> kappa_clipped;

    double gamma_hat = 1.0;
    int iterations = 0;

    // Current dictionary and its cached products; refreshed per iteration in
    // rectangular mode once new Doppler estimates are available.
    Eigen::MatrixXcd X;
    Eigen::MatrixXcd gram;  // X^H X
    Eigen::VectorXcd Xy;    // X^H y
};

struct EstimateResult {
    Eigen::VectorXcd h_hat;     // per block
    Eigen::VectorXd kappa_hat;  // per block
    double gamma_hat = 0.0;
    std::vector<int> support;   // detected block indices
    int iterations = 0;
};

// Algorithm initialization: c_back = 0, vc_back = 1, lambda = 1, gamma = 1,
// kappa linearization point 0, g beliefs at Phi(q, 0).
EstimatorState init_state(const SparseSystem& sys, const Hyperparams& hp,
                          Waveform wf = Waveform::BiOrthogonal);

// One full message-passing sweep (posterior update, noise precision,
// extrinsics, h / lambda / g / kappa beliefs, backward pass). In rectangular
// mode the dictionary is refreshed right after the kappa belief update.
// freeze_kappa pins kappa at 0 and skips the g/kappa subgraph (the
// integer-Doppler variant).
void iterate_once(EstimatorState& st, const SparseSystem& sys, const Hyperparams& hp,
                  Waveform wf, bool freeze_kappa = false);

// Runs the loop until the concatenated (h, kappa) estimates move less than
// hp.tol in relative norm, or hp.max_iter sweeps. Fills detected support.
EstimateResult estimate(const SparseSystem& sys, const Hyperparams& hp,
                        Waveform wf = Waveform::BiOrthogonal,
                        EstimatorState* final_state = nullptr);

// Keeps blocks with |h_j|^2 >= rho * max_j |h_j|^2; returns them as channel
// paths (t, d, h, kappa). Throws if nothing survives.
std::vector<ChannelPath> detect_support(const EstimateResult& r, const FrameConfig& cfg,
                                        double rho = 1e-3);

// Effective channel matrix from estimated paths.
Eigen::MatrixXcd reconstruct_channel(const std::vector<ChannelPath>& paths,
                                     const GridDims& dims, int n_hat, Waveform wf);

// Thresholding baseline (single pilot only): per-cell matched estimates
// y_z / x_p kept where |y_z| > 3 sigma_p |x_p|, treated as integer taps with
// no block structure, then reassembled into a channel matrix.
struct ThresholdResult {
    Eigen::VectorXcd response;        // per observation cell, zero where culled
    std::vector<ChannelPath> taps;    // retained cells as integer-Doppler taps
    Eigen::MatrixXcd H_hat;
};
ThresholdResult threshold_baseline(const SparseSystem& sys, double sigma_p);

// Ablation: Algorithm 1 with kappa frozen at 0 and the q = 0 dictionary only.
EstimateResult estimate_integer_doppler(const SparseSystem& sys, const Hyperparams& hp,
                                        EstimatorState* final_state = nullptr);

std::string result_to_json(const EstimateResult& r, const FrameConfig& cfg);

}  // namespace otfs
