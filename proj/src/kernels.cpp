#include "otfs/kernels.hpp"

namespace otfs {

namespace {

cplx f_series(int q, double kappa, int N) {
    const double u = static_cast<double>(q) + kappa;
    cplx acc(0.0, 0.0);
    for (int n = 0; n < N; ++n) {
        const double ang = 2.0 * kPi * n * u / N;
        acc += cplx(std::cos(ang), std::sin(ang));
    }
    return acc / static_cast<double>(N);
}

}  // namespace

cplx spread_f(int q, double kappa, int N) {
    if (N < 2) throw std::domain_error("spread_f: N must be >= 2");
    const double u = static_cast<double>(q) + kappa;
    const double ang = 2.0 * kPi * u / N;
    const cplx den = 1.0 - cplx(std::cos(ang), std::sin(ang));
    if (std::abs(den) < 1e-6) return f_series(q, kappa, N);
    const double angN = 2.0 * kPi * u;
    const cplx num = 1.0 - cplx(std::cos(angN), std::sin(angN));
    return num / (static_cast<double>(N) * den);
}

cplx spread_f_deriv(int q, double kappa, int N) {
    if (N < 2) throw std::domain_error("spread_f_deriv: N must be >= 2");
    const double u = static_cast<double>(q) + kappa;
    cplx acc(0.0, 0.0);
    for (int n = 1; n < N; ++n) {
        const double w = 2.0 * n * kPi / N;
        const cplx rot(std::cos(w * u), std::sin(w * u));
        acc += cplx(0.0, w) * rot;
    }
    return acc / static_cast<double>(N);
}

cplx phi(int q, double kappa, int t, int d, const GridDims& dims) {
    const double ang = -2.0 * kPi * t * (d + kappa) / (dims.M * static_cast<double>(dims.N));
    return spread_f(q, kappa, dims.N) * cplx(std::cos(ang), std::sin(ang));
}

cplx phi_prime(int q, double kappa, int t, int d, const GridDims& dims) {
    const double MN = dims.M * static_cast<double>(dims.N);
    const double ang = -2.0 * kPi * t * (d + kappa) / MN;
    const cplx ph(std::cos(ang), std::sin(ang));
    return cplx(0.0, -2.0 * kPi * t / MN) * spread_f(q, kappa, dims.N) * ph +
           ph * spread_f_deriv(q, kappa, dims.N);
}

}  // namespace otfs
