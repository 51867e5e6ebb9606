#pragma once

#include "otfs/types.hpp"

namespace otfs {

// Unitary inverse symplectic FFT, DD -> TF:
//   X_tf[n,m] = (1/sqrt(MN)) sum_{k,l} x[k,l] e^{j2pi(nk/N - ml/M)}.
TFGrid isfft(const DDGrid& x);

// Unitary symplectic FFT, TF -> DD; exact inverse of isfft.
DDGrid sfft(const TFGrid& X);

// Rectangular-pulse Heisenberg transform at critical sampling: the samples of
// slot n are the unitary length-M inverse DFT of X_tf[n, .], so total energy
// is preserved.
TimeSignal to_time_rect(const TFGrid& X);

// Peak-to-average power ratio, 10 log10(max |s|^2 / mean |s|^2) in dB.
double papr_db(const TimeSignal& s);

}  // namespace otfs
