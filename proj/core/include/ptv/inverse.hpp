#pragma once

#include <cstddef>
#include <optional>

#include "ptv/kernel.hpp"

namespace ptv {

struct InverseOptions {
  /// Frequency bins for the per-bin inversion; defaults to the next power of two
  /// of max(256, 8 x block-lag window). Must be at least 4 x the window.
  std::optional<std::size_t> fft_size;
  /// Largest admissible per-bin condition number.
  double cond_limit = 1e8;
  /// Largest admissible composition residual before the grid is refined.
  double residual_tolerance = 1e-6;
  /// The grid doubles while the residual is too large, up to this many bins.
  std::size_t max_fft_size = std::size_t{1} << 16;
};

struct MimoInverse {
  BlockedMimo inverse;
  /// max |(inverse * system)[n] - I delta[n]| over all block lags and entries.
  double residual = 0.0;
  /// Largest per-bin condition number seen on the final grid.
  double condition_max = 0.0;
  std::size_t fft_size = 0;
};

struct KernelInverse {
  PeriodicKernel inverse;
  double residual = 0.0;
  double condition_max = 0.0;
  std::size_t fft_size = 0;
};

/// Two-sided FIR approximation of the inverse, centred on block lag 0.
/// Throws NotInvertible when a bin exceeds the condition limit and GridTooSmall
/// when the residual stays above tolerance at the largest grid.
MimoInverse invert_mimo(const BlockedMimo& system, const InverseOptions& options = {});

/// Inverse of a SISO kernel through its blocked form; the period is preserved.
KernelInverse invert_siso(const PeriodicKernel& h, const InverseOptions& options = {});

/// Inverse of an N x N kernel through its serialized SISO form; N and the period are preserved.
KernelInverse invert_square(const PeriodicKernel& h, const InverseOptions& options = {});

}  // namespace ptv
