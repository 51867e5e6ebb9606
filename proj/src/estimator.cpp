#include "otfs/estimator.hpp"

#include <nlohmann/json.hpp>

#include "otfs/kernels.hpp"

namespace otfs {

namespace {

constexpr double kVarFloor = 1e-12;
constexpr double kVarCeil = 1e12;  // stands in for an infinite-variance (vague) message
constexpr double kDivGuard = 1e-8;

double clamp_var(double v) {
    if (!std::isfinite(v)) return kVarCeil;
    return std::min(std::max(v, kVarFloor), kVarCeil);
}

// Gaussian division (posterior with one incoming message removed). A
// non-positive or non-finite precision difference yields a vague message.
void extrinsic(cplx post_m, double post_v, cplx in_m, double in_v, cplx& out_m,
               double& out_v) {
    const double p = 1.0 / post_v - 1.0 / in_v;
    if (!(p > 0.0) || !std::isfinite(p)) {
        out_m = cplx(0.0, 0.0);
        out_v = kVarCeil;
        return;
    }
    out_v = clamp_var(1.0 / p);
    out_m = (post_m / post_v - in_m / in_v) / p;
    if (!std::isfinite(out_m.real()) || !std::isfinite(out_m.imag())) {
        out_m = cplx(0.0, 0.0);
        out_v = kVarCeil;
    }
}

void extrinsic_real(double post_m, double post_v, double in_m, double in_v,
                    double& out_m, double& out_v) {
    cplx m;
    extrinsic(cplx(post_m, 0.0), post_v, cplx(in_m, 0.0), in_v, m, out_v);
    out_m = m.real();
}

}  // namespace

EstimatorState init_state(const SparseSystem& sys, const Hyperparams&, Waveform wf) {
    const FrameConfig& cfg = sys.cfg;
    const int J = cfg.num_blocks();
    const int JB = J * cfg.block_len();

    EstimatorState st;
    st.c_back = Eigen::VectorXcd::Zero(JB);
    st.vc_back = Eigen::VectorXd::Ones(JB);
    st.c_post = Eigen::VectorXcd::Zero(JB);
    st.vc_post = Eigen::VectorXd::Ones(JB);
    st.c_fwd = Eigen::VectorXcd::Zero(JB);
    st.vc_fwd = Eigen::VectorXd::Ones(JB);
    st.h_fwd = Eigen::VectorXcd::Zero(JB);
    st.vh_fwd = Eigen::VectorXd::Constant(JB, kVarCeil);
    st.h_back = Eigen::VectorXcd::Zero(JB);
    st.vh_back = Eigen::VectorXd::Constant(JB, kVarCeil);
    st.g_fwd = Eigen::VectorXcd::Zero(JB);
    st.vg_fwd = Eigen::VectorXd::Constant(JB, kVarCeil);
    st.g_back = Eigen::VectorXcd::Zero(JB);
    st.vg_back = Eigen::VectorXd::Constant(JB, kVarCeil);
    st.vg = Eigen::VectorXd::Ones(JB);
    st.kappa_fwd = Eigen::VectorXd::Zero(JB);
    st.vkappa_fwd = Eigen::VectorXd::Constant(JB, kVarCeil);
    st.kappa_back = Eigen::VectorXd::Zero(JB);
    st.vkappa_back = Eigen::VectorXd::Constant(JB, kVarCeil);
    st.h_hat = Eigen::VectorXcd::Zero(J);
    st.vh = Eigen::VectorXd::Ones(J);
    st.lambda_hat = Eigen::VectorXd::Ones(J);
    st.kappa_hat = Eigen::VectorXd::Zero(J);
    st.v_kappa = Eigen::VectorXd::Constant(J, kVarCeil);
    st.kappa_lin = Eigen::VectorXd::Zero(J);
    st.kappa_clipped.assign(J, false);
    st.gamma_hat = 1.0;

    // g beliefs start at the kernel values for kappa = 0.
    st.g_hat = Eigen::VectorXcd::Zero(JB);
    for (int j = 0; j < J; ++j)
        for (int b = 0; b < cfg.block_len(); ++b)
            st.g_hat[cfg.col_index(j, b)] =
                phi(cfg.q_of(b), 0.0, cfg.block_delay(j), cfg.block_doppler(j), sys.dims);

    st.X = (wf == Waveform::Rectangular)
               ? modulate_dictionary_rect(sys.X, cfg, sys.dims, st.kappa_hat)
               : sys.X;
    st.gram = st.X.adjoint() * st.X;
    st.Xy = st.X.adjoint() * sys.y;
    return st;
}

void iterate_once(EstimatorState& st, const SparseSystem& sys, const Hyperparams& hp,
                  Waveform wf, bool freeze_kappa) {
    const FrameConfig& cfg = sys.cfg;
    const GridDims& dims = sys.dims;
    const int J = cfg.num_blocks();
    const int B = cfg.block_len();
    const int JB = J * B;
    const int Z = cfg.obs_len();

    // 1. Posterior of c given the (diagonal) backward prior and likelihood.
    const double gamma_used = st.gamma_hat;
    Eigen::MatrixXcd A = gamma_used * st.gram;
    Eigen::VectorXcd rhs = gamma_used * st.Xy;
    for (int n = 0; n < JB; ++n) {
        A(n, n) += 1.0 / st.vc_back[n];
        rhs[n] += st.c_back[n] / st.vc_back[n];
    }
    // diag(A^-1) comes from the column norms of the inverted Cholesky factor;
    // no full inverse is formed. LDLT is the fallback for the nearly singular
    // systems that noiseless runs produce at the gamma cap.
    Eigen::VectorXd vp_diag(JB);
    Eigen::LLT<Eigen::MatrixXcd> llt(A);
    if (llt.info() == Eigen::Success) {
        const Eigen::MatrixXcd Linv = llt.matrixL().solve(Eigen::MatrixXcd::Identity(JB, JB));
        vp_diag = Linv.colwise().squaredNorm();
        st.c_post = llt.solve(rhs);
    } else {
        Eigen::LDLT<Eigen::MatrixXcd> ldlt(A);
        if (ldlt.info() != Eigen::Success)
            throw std::runtime_error(
                "iterate_once: posterior system is singular (ill-conditioned dictionary)");
        const Eigen::MatrixXcd Vp = ldlt.solve(Eigen::MatrixXcd::Identity(JB, JB));
        vp_diag = Vp.diagonal().real();
        st.c_post = Vp * rhs;
    }
    for (int n = 0; n < JB; ++n) st.vc_post[n] = clamp_var(vp_diag[n]);

    // 2. Noise precision from residual plus posterior spread. The trace term
    // Tr(X Vp X^H) equals (JB - sum_n vp_n / vc_back_n) / gamma since
    // gamma X^H X = A - diag(1/vc_back).
    const double resid = (sys.y - st.X * st.c_post).squaredNorm();
    double spread = JB;
    for (int n = 0; n < JB; ++n) spread -= vp_diag[n] / st.vc_back[n];
    spread = std::max(spread, 0.0) / gamma_used;
    double gamma = Z / (resid + spread);
    if (!std::isfinite(gamma) || gamma > hp.gamma_cap) gamma = hp.gamma_cap;
    if (gamma > 0.0) st.gamma_hat = gamma;

    // 3. Extrinsic c messages toward the delta factors.
    for (int n = 0; n < JB; ++n)
        extrinsic(st.c_post[n], st.vc_post[n], st.c_back[n], st.vc_back[n], st.c_fwd[n],
                  st.vc_fwd[n]);

    // 4. Forward h messages: divide out the current g belief mean.
    for (int n = 0; n < JB; ++n) {
        const double gmag2 = std::norm(st.g_hat[n]);
        if (gmag2 < kDivGuard * kDivGuard) {
            st.h_fwd[n] = cplx(0.0, 0.0);
            st.vh_fwd[n] = kVarCeil;
        } else {
            st.h_fwd[n] = st.c_fwd[n] / st.g_hat[n];
            st.vh_fwd[n] = clamp_var(st.vc_fwd[n] / gmag2);
        }
    }

    // 5-7. Per-block h belief, precision hyperparameter, refreshed belief.
    for (int j = 0; j < J; ++j) {
        double prec = 0.0;
        cplx wmean(0.0, 0.0);
        for (int b = 0; b < B; ++b) {
            const int n = cfg.col_index(j, b);
            prec += 1.0 / st.vh_fwd[n];
            wmean += st.h_fwd[n] / st.vh_fwd[n];
        }
        const double vq = clamp_var(1.0 / prec);
        const cplx qhat = wmean * vq;
        st.h_hat[j] = qhat / (1.0 + vq * st.lambda_hat[j]);
        st.vh[j] = clamp_var(1.0 / (1.0 / vq + st.lambda_hat[j]));
        st.lambda_hat[j] = (hp.epsilon + 1.0) / (hp.eta + std::norm(st.h_hat[j]) + st.vh[j]);
        st.h_hat[j] = qhat / (1.0 + vq * st.lambda_hat[j]);
        st.vh[j] = clamp_var(1.0 / (1.0 / vq + st.lambda_hat[j]));
    }

    // 8. Backward h messages.
    for (int j = 0; j < J; ++j)
        for (int b = 0; b < B; ++b) {
            const int n = cfg.col_index(j, b);
            extrinsic(st.h_hat[j], st.vh[j], st.h_fwd[n], st.vh_fwd[n], st.h_back[n],
                      st.vh_back[n]);
        }

    if (freeze_kappa) {
        // Integer-Doppler variant: g is the known constant Phi(q, 0), so the
        // backward c message reduces to the h message scaled by it.
        for (int n = 0; n < JB; ++n) {
            st.g_back[n] = st.g_hat[n];
            st.vg_back[n] = 0.0;
            const cplx cb = st.h_back[n] * st.g_hat[n];
            const double vcb = clamp_var(std::norm(st.g_hat[n]) * st.vh_back[n]);
            st.c_back[n] = hp.damping * cb + (1.0 - hp.damping) * st.c_back[n];
            st.vc_back[n] = clamp_var(hp.damping * vcb + (1.0 - hp.damping) * st.vc_back[n]);
        }
        st.iterations++;
        return;
    }

    // 9. Forward g messages.
    for (int j = 0; j < J; ++j) {
        const double hmass = std::norm(st.h_hat[j]) + st.vh[j];
        for (int b = 0; b < B; ++b) {
            const int n = cfg.col_index(j, b);
            if (hmass < kVarFloor) {
                st.g_fwd[n] = cplx(0.0, 0.0);
                st.vg_fwd[n] = kVarCeil;
            } else {
                st.g_fwd[n] = st.c_fwd[n] * std::conj(st.h_hat[j]) / hmass;
                st.vg_fwd[n] = clamp_var(st.vc_fwd[n] / hmass);
            }
        }
    }

    // 10. Forward kappa messages via the Taylor linearization of Phi at the
    // previous iteration's estimate, real and imaginary parts combined as
    // independent observations of kappa.
    Eigen::VectorXcd phi_lin(JB), phip_lin(JB);
    for (int j = 0; j < J; ++j) {
        const int t = cfg.block_delay(j);
        const int d = cfg.block_doppler(j);
        for (int b = 0; b < B; ++b) {
            const int n = cfg.col_index(j, b);
            phi_lin[n] = phi(cfg.q_of(b), st.kappa_lin[j], t, d, dims);
            phip_lin[n] = phi_prime(cfg.q_of(b), st.kappa_lin[j], t, d, dims);
        }
    }
    for (int j = 0; j < J; ++j) {
        for (int b = 0; b < B; ++b) {
            const int n = cfg.col_index(j, b);
            double prec = 0.0, wmean = 0.0;
            const double dR = phip_lin[n].real();
            if (std::abs(dR) > kVarFloor && st.vg_fwd[n] < kVarCeil) {
                const double mean =
                    (st.g_fwd[n].real() - phi_lin[n].real() + dR * st.kappa_lin[j]) / dR;
                const double p = 2.0 * dR * dR / st.vg_fwd[n];
                prec += p;
                wmean += p * mean;
            }
            const double dI = phip_lin[n].imag();
            if (std::abs(dI) > kVarFloor && st.vg_fwd[n] < kVarCeil) {
                const double mean =
                    (st.g_fwd[n].imag() - phi_lin[n].imag() + dI * st.kappa_lin[j]) / dI;
                const double p = 2.0 * dI * dI / st.vg_fwd[n];
                prec += p;
                wmean += p * mean;
            }
            if (prec > 1.0 / kVarCeil) {
                st.vkappa_fwd[n] = clamp_var(1.0 / prec);
                st.kappa_fwd[n] = wmean / prec;
            } else {
                st.vkappa_fwd[n] = kVarCeil;
                st.kappa_fwd[n] = 0.0;
            }
        }
    }

    // 11. kappa belief with clipping to the admissible range.
    for (int j = 0; j < J; ++j) {
        double prec = 0.0, wmean = 0.0;
        for (int b = 0; b < B; ++b) {
            const int n = cfg.col_index(j, b);
            prec += 1.0 / st.vkappa_fwd[n];
            wmean += st.kappa_fwd[n] / st.vkappa_fwd[n];
        }
        st.kappa_clipped[j] = false;
        if (prec <= 1.0 / kVarCeil * B * 2) {
            st.kappa_hat[j] = st.kappa_lin[j];
            st.v_kappa[j] = kVarCeil;
            continue;
        }
        double khat = wmean / prec;
        if (khat <= -0.5) {
            st.kappa_hat[j] = -0.5;
            st.v_kappa[j] = 0.0;
            st.kappa_clipped[j] = true;
        } else if (khat >= 0.5) {
            st.kappa_hat[j] = 0.5;
            st.v_kappa[j] = 0.0;
            st.kappa_clipped[j] = true;
        } else {
            st.kappa_hat[j] = khat;
            st.v_kappa[j] = clamp_var(1.0 / prec);
        }
    }

    // Rectangular waveform: plug the fresh Doppler estimates into the
    // dictionary before the backward pass.
    if (wf == Waveform::Rectangular) {
        st.X = modulate_dictionary_rect(sys.X, cfg, dims, st.kappa_hat);
        st.gram = st.X.adjoint() * st.X;
        st.Xy = st.X.adjoint() * sys.y;
    }

    // 12. Backward kappa messages (belief with the forward message removed).
    for (int j = 0; j < J; ++j)
        for (int b = 0; b < B; ++b) {
            const int n = cfg.col_index(j, b);
            if (st.kappa_clipped[j]) {
                st.kappa_back[n] = st.kappa_hat[j];
                st.vkappa_back[n] = st.v_kappa[j];
            } else {
                extrinsic_real(st.kappa_hat[j], st.v_kappa[j], st.kappa_fwd[n],
                               st.vkappa_fwd[n], st.kappa_back[n], st.vkappa_back[n]);
            }
        }

    // 13. Backward g messages through the linearized kernel.
    for (int j = 0; j < J; ++j)
        for (int b = 0; b < B; ++b) {
            const int n = cfg.col_index(j, b);
            st.g_back[n] = phi_lin[n] + phip_lin[n] * (st.kappa_back[n] - st.kappa_lin[j]);
            st.vg_back[n] = clamp_var(st.vkappa_back[n] * std::norm(phip_lin[n]));
        }

    // 14. g beliefs.
    for (int n = 0; n < JB; ++n) {
        const double prec = 1.0 / st.vg_back[n] + 1.0 / st.vg_fwd[n];
        st.vg[n] = clamp_var(1.0 / prec);
        st.g_hat[n] =
            (st.g_back[n] / st.vg_back[n] + st.g_fwd[n] / st.vg_fwd[n]) * st.vg[n];
    }

    // 15. Backward c messages (product of two Gaussians pushed through the
    // multiplier factor), damped against the previous iterate.
    for (int n = 0; n < JB; ++n) {
        const cplx cb = st.h_back[n] * st.g_back[n];
        const double vcb = std::norm(st.h_back[n]) * st.vg_back[n] +
                           std::norm(st.g_back[n]) * st.vh_back[n] +
                           st.vh_back[n] * st.vg_back[n];
        st.c_back[n] = hp.damping * cb + (1.0 - hp.damping) * st.c_back[n];
        st.vc_back[n] = clamp_var(hp.damping * clamp_var(vcb) + (1.0 - hp.damping) * st.vc_back[n]);
    }

    st.kappa_lin = st.kappa_hat;
    st.iterations++;
}

EstimateResult estimate(const SparseSystem& sys, const Hyperparams& hp, Waveform wf,
                        EstimatorState* final_state) {
    if (sys.y.size() < 1) throw std::invalid_argument("estimate: empty observation");
    EstimatorState st = init_state(sys, hp, wf);
    const int J = sys.cfg.num_blocks();
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(3 * J);
    for (int it = 0; it < hp.max_iter; ++it) {
        iterate_once(st, sys, hp, wf);
        Eigen::VectorXd cur(3 * J);
        cur << st.h_hat.real(), st.h_hat.imag(), st.kappa_hat;
        const double denom = std::max(prev.norm(), 1e-30);
        const double change = (cur - prev).norm() / denom;
        prev = cur;
        if (it > 0 && change < hp.tol) break;
    }

    EstimateResult r;
    r.h_hat = st.h_hat;
    r.kappa_hat = st.kappa_hat;
    r.gamma_hat = st.gamma_hat;
    r.iterations = st.iterations;
    for (const ChannelPath& p : detect_support(r, sys.cfg, hp.support_rho))
        r.support.push_back(sys.cfg.block_index(p.delay_idx, p.doppler_idx));
    if (final_state) *final_state = std::move(st);
    return r;
}

std::vector<ChannelPath> detect_support(const EstimateResult& r, const FrameConfig& cfg,
                                        double rho) {
    double peak = 0.0;
    for (int j = 0; j < r.h_hat.size(); ++j) peak = std::max(peak, std::norm(r.h_hat[j]));
    if (peak <= 0.0) throw std::runtime_error("detect_support: all gain estimates are zero");
    std::vector<ChannelPath> paths;
    for (int j = 0; j < r.h_hat.size(); ++j) {
        if (std::norm(r.h_hat[j]) >= rho * peak) {
            ChannelPath p;
            p.gain = r.h_hat[j];
            p.delay_idx = cfg.block_delay(j);
            p.doppler_idx = cfg.block_doppler(j);
            p.frac_doppler = r.kappa_hat[j];
            paths.push_back(p);
        }
    }
    return paths;
}

Eigen::MatrixXcd reconstruct_channel(const std::vector<ChannelPath>& paths,
                                     const GridDims& dims, int n_hat, Waveform wf) {
    DDChannel ch;
    ch.paths = paths;
    ch.n_hat = n_hat;
    ch.dims = dims;
    return wf == Waveform::Rectangular ? build_H_rect(ch) : build_H_bi(ch);
}

ThresholdResult threshold_baseline(const SparseSystem& sys, double sigma_p) {
    const FrameConfig& cfg = sys.cfg;
    if (cfg.pilot_rows * cfg.pilot_cols != 1)
        throw std::invalid_argument("threshold_baseline: needs a single pilot symbol");
    const cplx xp = std::sqrt(cfg.pilot_power) * sys.pilots[0];
    const double thresh = 3.0 * sigma_p * std::abs(xp);
    const double MN = sys.dims.M * static_cast<double>(sys.dims.N);

    ThresholdResult out;
    out.response = Eigen::VectorXcd::Zero(cfg.obs_len());
    for (int z = 0; z < cfg.obs_len(); ++z) {
        if (std::abs(sys.y[z]) <= thresh) continue;
        const cplx resp = sys.y[z] / xp;
        out.response[z] = resp;
        const int t = z / cfg.window_cols();
        const int doff = z % cfg.window_cols() - (cfg.k_max + cfg.n_hat);
        // The measured response already carries the e^{-j2pi t d/(MN)} factor
        // the matrix builder applies, so pre-divide it out of the tap gain.
        ChannelPath p;
        const double ang = 2.0 * kPi * t * doff / MN;
        p.gain = resp * cplx(std::cos(ang), std::sin(ang));
        p.delay_idx = t;
        p.doppler_idx = doff;
        p.frac_doppler = 0.0;
        out.taps.push_back(p);
    }
    DDChannel ch;
    ch.paths = out.taps;
    ch.n_hat = 0;
    ch.dims = sys.dims;
    out.H_hat = build_H_bi(ch);
    return out;
}

EstimateResult estimate_integer_doppler(const SparseSystem& sys, const Hyperparams& hp,
                                        EstimatorState* final_state) {
    // Rebuild the system with n_hat = 0: B = 1 columns, and the narrower
    // observation window is a row subset of the original one.
    FrameConfig cfg0 = sys.cfg;
    cfg0.n_hat = 0;
    SparseSystem red;
    red.dims = sys.dims;
    red.cfg = cfg0;
    red.pilots = sys.pilots;
    red.X = build_dictionary_bi(cfg0, sys.pilots, sys.dims);
    red.y = Eigen::VectorXcd(cfg0.obs_len());
    for (int z0 = 0; z0 < cfg0.obs_len(); ++z0) {
        const int l = cfg0.obs_delay(z0, sys.dims);
        const int k = cfg0.obs_doppler(z0, sys.dims);
        const int koff = mod_index(
            k - (sys.cfg.k0(sys.dims) - sys.cfg.k_max - sys.cfg.n_hat), sys.dims.N);
        red.y[z0] = sys.y[(l - sys.cfg.l0()) * sys.cfg.window_cols() + koff];
    }

    EstimatorState st = init_state(red, hp, Waveform::BiOrthogonal);
    const int J = cfg0.num_blocks();
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(2 * J);
    for (int it = 0; it < hp.max_iter; ++it) {
        iterate_once(st, red, hp, Waveform::BiOrthogonal, /*freeze_kappa=*/true);
        Eigen::VectorXd cur(2 * J);
        cur << st.h_hat.real(), st.h_hat.imag();
        const double denom = std::max(prev.norm(), 1e-30);
        const double change = (cur - prev).norm() / denom;
        prev = cur;
        if (it > 0 && change < hp.tol) break;
    }

    EstimateResult r;
    r.h_hat = st.h_hat;
    r.kappa_hat = Eigen::VectorXd::Zero(J);
    r.gamma_hat = st.gamma_hat;
    r.iterations = st.iterations;
    for (const ChannelPath& p : detect_support(r, cfg0, hp.support_rho))
        r.support.push_back(cfg0.block_index(p.delay_idx, p.doppler_idx));
    if (final_state) *final_state = std::move(st);
    return r;
}

std::string result_to_json(const EstimateResult& r, const FrameConfig& cfg) {
    nlohmann::json j;
    j["gamma_hat"] = r.gamma_hat;
    j["iterations"] = r.iterations;
    j["blocks"] = nlohmann::json::array();
    std::vector<bool> in_support(r.h_hat.size(), false);
    for (int s : r.support) in_support[s] = true;
    for (int jj = 0; jj < r.h_hat.size(); ++jj) {
        j["blocks"].push_back({{"t", cfg.block_delay(jj)},
                               {"d", cfg.block_doppler(jj)},
                               {"h_re", r.h_hat[jj].real()},
                               {"h_im", r.h_hat[jj].imag()},
                               {"kappa", r.kappa_hat[jj]},
                               {"support", static_cast<bool>(in_support[jj])}});
    }
    return j.dump(2);
}

}  // namespace otfs
