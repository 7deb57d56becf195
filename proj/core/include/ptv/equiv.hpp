#pragma once

#include <cstddef>

#include "ptv/kernel.hpp"
#include "ptv/signal.hpp"

namespace ptv {

/// Period-K SISO kernel as a time-invariant K x K system on blocked signals:
/// Hbar_{i,j}[n] = H[i, n K + i - j].
BlockedMimo siso_to_mimo(const PeriodicKernel& h);

/// Exact inverse of siso_to_mimo: H[i, m] = Hbar_{i,j}[(m - i + j) / K] with j = mod(i - m, K).
PeriodicKernel mimo_to_siso(const BlockedMimo& m);

/// N x N kernel of period K as a SISO kernel of period N K acting on the serialized stream
/// y[k] = y_{mod(k,N)}[floor(k / N)].
PeriodicKernel square_to_siso(const PeriodicKernel& h);

/// Inverse of square_to_siso: H_{i,j}[n, m] = Hhat[n N + i, m N + i - j]. N must divide the period.
PeriodicKernel siso_to_square(const PeriodicKernel& h, std::size_t n);

/// Blocked signal plus the zero padding added to align and complete the last block.
struct BlockedSignal {
  Signal signal;
  std::size_t lead_pad = 0;
  std::size_t trail_pad = 0;
};

/// x_j[r] = x[r K + j] on absolute indices. The result runs at K times the sample period.
BlockedSignal block_signal(const Signal& x, std::size_t k);

/// Interleaves K channels into one stream at 1/K the sample period, dropping the
/// given number of leading and trailing samples.
Signal serialize_signal(const Signal& x, std::size_t lead_trim = 0, std::size_t trail_trim = 0);
Signal serialize_signal(const BlockedSignal& x);

/// Block convolution C[n] = sum_q A[q] B[n - q] (apply B first, then A).
BlockedMimo mimo_convolve(const BlockedMimo& a, const BlockedMimo& b);

}  // namespace ptv
