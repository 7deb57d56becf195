#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ptv/signal.hpp"

namespace ptv {

using Lag = std::int64_t;

/// Positive remainder of `a` modulo `n` (n > 0).
constexpr std::int64_t pmod(std::int64_t a, std::int64_t n) noexcept {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

/// Inclusive lag range [lo, hi].
struct LagWindow {
  Lag lo = 0;
  Lag hi = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(hi - lo + 1); }
  bool contains(Lag m) const noexcept { return m >= lo && m <= hi; }
  bool operator==(const LagWindow&) const = default;
};

LagWindow window_union(LagWindow a, LagWindow b) noexcept;

/// Dimensions of a tap tensor indexed [output][input][phase][lag].
struct KernelShape {
  std::size_t n_out = 1;
  std::size_t n_in = 1;
  std::size_t period = 1;
  LagWindow lags{};

  std::size_t size() const noexcept { return n_out * n_in * period * lags.size(); }

  /// Row-major (i, j, p, m) offset; `m` must lie inside `lags`.
  std::size_t index(std::size_t i, std::size_t j, std::size_t p, Lag m) const noexcept {
    return ((i * n_in + j) * period + p) * lags.size() + static_cast<std::size_t>(m - lags.lo);
  }

  bool operator==(const KernelShape&) const = default;
};

/// Discrete-time periodically time-variant system.
///
/// Output channel i at absolute time t is
///   y_i[t] = sum_j sum_m taps(i, j, mod(t, period), m) * x_j[t - m].
/// Instances are immutable; builders assemble a tap vector and hand it over.
class PeriodicKernel {
 public:
  PeriodicKernel(KernelShape shape, std::vector<double> taps,
                 std::optional<double> sample_period_s = std::nullopt);

  /// All-zero kernel of the given shape.
  explicit PeriodicKernel(KernelShape shape, std::optional<double> sample_period_s = std::nullopt);

  /// n x n pass-through (unit tap at lag 0 on the diagonal, every phase).
  static PeriodicKernel identity(std::size_t channels, std::size_t period = 1,
                                 std::optional<double> sample_period_s = std::nullopt);

  const KernelShape& shape() const noexcept { return shape_; }
  std::size_t n_out() const noexcept { return shape_.n_out; }
  std::size_t n_in() const noexcept { return shape_.n_in; }
  std::size_t period() const noexcept { return shape_.period; }
  LagWindow lags() const noexcept { return shape_.lags; }
  Lag lag_min() const noexcept { return shape_.lags.lo; }
  Lag lag_max() const noexcept { return shape_.lags.hi; }
  const std::optional<double>& sample_period_s() const noexcept { return sample_period_s_; }
  std::span<const double> taps() const noexcept { return taps_; }

  /// Tap value; zero for lags outside the window.
  double tap(std::size_t i, std::size_t j, std::size_t p, Lag m) const noexcept {
    if (!shape_.lags.contains(m)) return 0.0;
    return taps_[shape_.index(i, j, p, m)];
  }

  bool is_siso() const noexcept { return shape_.n_out == 1 && shape_.n_in == 1; }
  bool is_square() const noexcept { return shape_.n_out == shape_.n_in; }
  bool is_causal() const noexcept;

  /// Same response over `window` (zero-filled where it extends the current one).
  PeriodicKernel with_window(LagWindow window) const;

  /// Smallest window holding every nonzero tap; [0, 0] for an all-zero kernel.
  PeriodicKernel trimmed() const;

  PeriodicKernel with_sample_period(std::optional<double> sample_period_s) const;

  bool operator==(const PeriodicKernel&) const = default;

 private:
  KernelShape shape_;
  std::vector<double> taps_;
  std::optional<double> sample_period_s_;
};

/// Square K x K time-invariant FIR matrix system with taps indexed [i][j][n].
class BlockedMimo {
 public:
  BlockedMimo(std::size_t dim, LagWindow lags, std::vector<double> taps);
  BlockedMimo(std::size_t dim, LagWindow lags);

  static BlockedMimo identity(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  LagWindow lags() const noexcept { return lags_; }
  std::span<const double> taps() const noexcept { return taps_; }

  double tap(std::size_t i, std::size_t j, Lag n) const noexcept {
    if (!lags_.contains(n)) return 0.0;
    return taps_[index(i, j, n)];
  }
  std::size_t index(std::size_t i, std::size_t j, Lag n) const noexcept {
    return (i * dim_ + j) * lags_.size() + static_cast<std::size_t>(n - lags_.lo);
  }

  /// Period-1 kernel view of this system.
  PeriodicKernel as_kernel() const;
  static BlockedMimo from_kernel(const PeriodicKernel& kernel);

  BlockedMimo trimmed() const;

  bool operator==(const BlockedMimo&) const = default;

 private:
  std::size_t dim_;
  LagWindow lags_;
  std::vector<double> taps_;
};

struct ApplyOptions {
  /// Worker threads for output evaluation; results do not depend on this value.
  unsigned threads = 1;
};

/// Runs `kernel` over `input`. The output keeps the input's length and origin;
/// input samples outside the stored range are taken as zero.
Signal apply(const PeriodicKernel& kernel, const Signal& input, ApplyOptions options = {});

/// Multichannel time-invariant convolution with a blocked MIMO system.
Signal apply(const BlockedMimo& system, const Signal& input, ApplyOptions options = {});

/// Re-indexes phases: taps'(p) = taps(mod(p + offset, period)).
PeriodicKernel shift_phase(const PeriodicKernel& kernel, std::int64_t offset);

}  // namespace ptv
