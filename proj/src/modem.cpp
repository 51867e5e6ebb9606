#include "otfs/modem.hpp"

namespace otfs {

namespace {

// Direct DFT along one axis. sign = +1 applies e^{+j2pi...}. Desk-scale grids
// keep this O(n^2) per line, which is plenty fast and has no radix constraint.
Eigen::VectorXcd dft_line(const Eigen::VectorXcd& in, int sign) {
    const int n = static_cast<int>(in.size());
    Eigen::VectorXcd out(n);
    for (int a = 0; a < n; ++a) {
        cplx acc(0.0, 0.0);
        for (int b = 0; b < n; ++b) {
            const double ang = sign * 2.0 * kPi * a * b / n;
            acc += in[b] * cplx(std::cos(ang), std::sin(ang));
        }
        out[a] = acc;
    }
    return out;
}

}  // namespace

TFGrid isfft(const DDGrid& x) {
    const GridDims& dims = x.dims();
    const int M = dims.M, N = dims.N;
    TFGrid X(dims);
    // Separable: DFT over delay l (per Doppler row), then inverse DFT over
    // Doppler k (per subcarrier column), scaled by 1/sqrt(MN).
    Eigen::MatrixXcd stage(N, M);
    Eigen::VectorXcd line(M);
    for (int k = 0; k < N; ++k) {
        for (int l = 0; l < M; ++l) line[l] = x.at(k, l);
        stage.row(k) = dft_line(line, -1).transpose();
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(M) * N);
    Eigen::VectorXcd col(N);
    for (int m = 0; m < M; ++m) {
        col = stage.col(m);
        X.mat().col(m) = dft_line(col, +1) * scale;
    }
    return X;
}

DDGrid sfft(const TFGrid& X) {
    const GridDims& dims = X.dims();
    const int M = dims.M, N = dims.N;
    DDGrid x(dims);
    Eigen::MatrixXcd stage(N, M);
    Eigen::VectorXcd col(N);
    for (int m = 0; m < M; ++m) {
        col = X.mat().col(m);
        stage.col(m) = dft_line(col, -1);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(M) * N);
    Eigen::VectorXcd line(M);
    for (int k = 0; k < N; ++k) {
        line = stage.row(k).transpose();
        Eigen::VectorXcd row = dft_line(line, +1) * scale;
        for (int l = 0; l < M; ++l) x.at(k, l) = row[l];
    }
    return x;
}

TimeSignal to_time_rect(const TFGrid& X) {
    const GridDims& dims = X.dims();
    const int M = dims.M, N = dims.N;
    TimeSignal s(M * N);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    Eigen::VectorXcd line(M);
    for (int n = 0; n < N; ++n) {
        line = X.mat().row(n).transpose();
        s.segment(n * M, M) = dft_line(line, +1) * scale;
    }
    return s;
}

double papr_db(const TimeSignal& s) {
    if (s.size() == 0) throw std::domain_error("papr_db: empty signal");
    double peak = 0.0, total = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double p = std::norm(s[i]);
        peak = std::max(peak, p);
        total += p;
    }
    if (total <= 0.0) throw std::domain_error("papr_db: zero signal");
    return 10.0 * std::log10(peak * s.size() / total);
}

}  // namespace otfs
