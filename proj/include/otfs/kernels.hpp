#pragma once

#include "otfs/types.hpp"

namespace otfs {

// Fractional-Doppler spreading function
//
//   f(q, kappa) = (1 - e^{-j2pi(-q-kappa)}) / (N - N e^{-j(2pi/N)(-q-kappa)})
//              = (1/N) sum_{n=0}^{N-1} e^{j 2 pi n (q+kappa) / N},
//
// the leakage of a Doppler shift with fractional part kappa onto the integer
// bin offset q. The closed form is 0/0 whenever q+kappa is a multiple of N;
// near those points the N-term series (which the closed form is the geometric
// sum of) is evaluated instead, giving the analytic limit exactly.
cplx spread_f(int q, double kappa, int N);

// d/dkappa of spread_f: (1/N) sum_{n=1}^{N-1} j (2 n pi / N) e^{j(2 n pi/N)(q+kappa)}.
cplx spread_f_deriv(int q, double kappa, int N);

// Phase-augmented spreading kernel for the dictionary block at delay t,
// Doppler d:  Phi(q, kappa) = f(q, kappa) * e^{-j 2 pi t (d + kappa) / (MN)}.
cplx phi(int q, double kappa, int t, int d, const GridDims& dims);

// d/dkappa of phi at kappa, used for the Taylor linearization of the
// Doppler-shift messages:
//   Phi'(q,k) = (-j2pi t/MN) Phi(q,k) + e^{-j2pi t(d+k)/(MN)} * f'(q,k).
cplx phi_prime(int q, double kappa, int t, int d, const GridDims& dims);

}  // namespace otfs
