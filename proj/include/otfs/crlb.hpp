#pragma once

#include "otfs/frame.hpp"

namespace otfs {

// Parameter vector theta = [h_1..h_P, kappa_1..kappa_P] of a known-support
// channel; gains occupy one slot each (the matrix is 2P x 2P).
struct ThetaVector {
    Eigen::VectorXcd h;
    Eigen::VectorXd kappa;

    static ThetaVector from_channel(const DDChannel& ch);
    int num_paths() const { return static_cast<int>(h.size()); }
};

// Fisher information for the pilot observation window under known support:
//   [I]_ij = gamma * sum_z 2 Re[du_z/dtheta_i * conj(du_z/dtheta_j)],
// with the gain and Doppler derivatives evaluated per waveform.
Eigen::MatrixXd fisher_matrix(const DDChannel& ch, const FrameConfig& cfg,
                              const Eigen::VectorXcd& pilots, double gamma, Waveform wf);

// Diagonal of the inverse Fisher matrix. Falls back to the pseudo-inverse
// (reporting the numerical rank) when the matrix is singular.
struct CrlbBounds {
    Eigen::VectorXd per_parameter;
    int rank = 0;
    bool singular = false;
};
CrlbBounds crlb_bounds(const Eigen::MatrixXd& fisher);

// Average normalized bounds: gain slots summed over ||h||^2, Doppler slots
// over ||kappa||^2.
struct NormalizedBounds {
    double h_bound = 0.0;
    double kappa_bound = 0.0;
};
NormalizedBounds normalized_bounds(const CrlbBounds& bounds, const ThetaVector& theta);

}  // namespace otfs
