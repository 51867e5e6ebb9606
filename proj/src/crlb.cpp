#include "otfs/crlb.hpp"

#include "otfs/kernels.hpp"

namespace otfs {

ThetaVector ThetaVector::from_channel(const DDChannel& ch) {
    ThetaVector th;
    const int P = static_cast<int>(ch.paths.size());
    th.h.resize(P);
    th.kappa.resize(P);
    for (int i = 0; i < P; ++i) {
        th.h[i] = ch.paths[i].gain;
        th.kappa[i] = ch.paths[i].frac_doppler;
    }
    return th;
}

Eigen::MatrixXd fisher_matrix(const DDChannel& ch, const FrameConfig& cfg,
                              const Eigen::VectorXcd& pilots, double gamma, Waveform wf) {
    if (!(gamma > 0.0)) throw std::invalid_argument("fisher_matrix: gamma must be positive");
    const GridDims& dims = ch.dims;
    const DDGrid pg = pilot_grid(cfg, pilots, dims);
    const int P = static_cast<int>(ch.paths.size());
    const int Z = cfg.obs_len();
    const double MN = dims.M * static_cast<double>(dims.N);

    // D(z, i) = du_z / dtheta_i; gain slots first, then Doppler slots.
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(Z, 2 * P);
    for (int z = 0; z < Z; ++z) {
        const int l = cfg.obs_delay(z, dims);
        const int k = cfg.obs_doppler(z, dims);
        for (int p = 0; p < P; ++p) {
            const ChannelPath& path = ch.paths[p];
            const double nu = path.doppler_idx + path.frac_doppler;
            const double ang = (wf == Waveform::Rectangular)
                                   ? 2.0 * kPi * (l - path.delay_idx) * nu / MN
                                   : -2.0 * kPi * path.delay_idx * nu / MN;
            const cplx ph(std::cos(ang), std::sin(ang));
            // Phase derivative w.r.t. kappa divided by the phase itself.
            const cplx dph = (wf == Waveform::Rectangular)
                                 ? cplx(0.0, 2.0 * kPi * (l - path.delay_idx) / MN)
                                 : cplx(0.0, -2.0 * kPi * path.delay_idx / MN);
            cplx dh(0.0, 0.0), dk(0.0, 0.0);
            for (int q = -ch.n_hat; q <= ch.n_hat; ++q) {
                const cplx xv =
                    pg.at_mod(k - path.doppler_idx + q, l - path.delay_idx);
                if (xv == cplx(0.0, 0.0)) continue;
                const cplx f = spread_f(q, path.frac_doppler, dims.N);
                const cplx fd = spread_f_deriv(q, path.frac_doppler, dims.N);
                dh += f * ph * xv;
                dk += path.gain * (fd * ph + f * ph * dph) * xv;
            }
            D(z, p) = dh;
            D(z, P + p) = dk;
        }
    }
    const Eigen::MatrixXcd E = D.adjoint() * D;
    return 2.0 * gamma * E.real();
}

CrlbBounds crlb_bounds(const Eigen::MatrixXd& fisher) {
    CrlbBounds out;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(fisher);
    out.rank = static_cast<int>(lu.rank());
    if (lu.isInvertible()) {
        out.per_parameter = lu.inverse().diagonal();
        return out;
    }
    out.singular = true;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(fisher);
    out.per_parameter = cod.pseudoInverse().diagonal();
    return out;
}

NormalizedBounds normalized_bounds(const CrlbBounds& bounds, const ThetaVector& theta) {
    const int P = theta.num_paths();
    if (bounds.per_parameter.size() != 2 * P)
        throw std::invalid_argument("normalized_bounds: size mismatch");
    NormalizedBounds nb;
    nb.h_bound = bounds.per_parameter.head(P).sum() / theta.h.squaredNorm();
    nb.kappa_bound = bounds.per_parameter.tail(P).sum() / theta.kappa.squaredNorm();
    return nb;
}

}  // namespace otfs
