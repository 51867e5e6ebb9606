#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace otfs {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Positive modulo: result in [0, m).
inline int mod_index(int a, int m) {
    int r = a % m;
    return r < 0 ? r + m : r;
}

// Delay-Doppler grid geometry: M delay bins (subcarriers), N Doppler bins
// (time slots). delta_f is the subcarrier spacing; one slot lasts T = 1/delta_f.
struct GridDims {
    int M = 128;
    int N = 32;
    double delta_f_hz = 2000.0;

    double slot_duration_s() const { return 1.0 / delta_f_hz; }
    int size() const { return M * N; }
    bool operator==(const GridDims& o) const { return M == o.M && N == o.N; }
};

// M x N complex grid indexed by (Doppler k, delay l), stored as the stacked
// vector with element j = k*M + l so that vec(y) = H * vec(x) matches the
// channel matrix convention.
class DDGrid {
public:
    DDGrid() = default;
    explicit DDGrid(GridDims dims)
        : dims_(dims), v_(Eigen::VectorXcd::Zero(dims.size())) {}
    DDGrid(GridDims dims, Eigen::VectorXcd v) : dims_(dims), v_(std::move(v)) {
        if (v_.size() != dims_.size()) throw std::invalid_argument("DDGrid: size mismatch");
    }

    const GridDims& dims() const { return dims_; }

    cplx& at(int k, int l) { return v_[k * dims_.M + l]; }
    cplx at(int k, int l) const { return v_[k * dims_.M + l]; }

    // Accessor with cyclic index reduction, for shifted reads like
    // x[[k - k_i + q]_N, [l - l_i]_M].
    cplx at_mod(int k, int l) const {
        return v_[mod_index(k, dims_.N) * dims_.M + mod_index(l, dims_.M)];
    }

    Eigen::VectorXcd& vec() { return v_; }
    const Eigen::VectorXcd& vec() const { return v_; }

private:
    GridDims dims_;
    Eigen::VectorXcd v_;
};

// Time-frequency grid X_tf[n, m]: n indexes time slots (rows), m subcarriers.
class TFGrid {
public:
    TFGrid() = default;
    explicit TFGrid(GridDims dims)
        : dims_(dims), m_(Eigen::MatrixXcd::Zero(dims.N, dims.M)) {}

    const GridDims& dims() const { return dims_; }
    cplx& at(int n, int m) { return m_(n, m); }
    cplx at(int n, int m) const { return m_(n, m); }
    Eigen::MatrixXcd& mat() { return m_; }
    const Eigen::MatrixXcd& mat() const { return m_; }

private:
    GridDims dims_;
    Eigen::MatrixXcd m_;
};

// Baseband time signal, M*N critically sampled values.
using TimeSignal = Eigen::VectorXcd;

}  // namespace otfs
