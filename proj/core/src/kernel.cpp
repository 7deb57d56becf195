#include "ptv/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "ptv/error.hpp"

namespace ptv {

LagWindow window_union(LagWindow a, LagWindow b) noexcept {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

namespace {

void check_shape(const KernelShape& shape) {
  if (shape.n_out == 0 || shape.n_in == 0) {
    fail(ErrorCode::InvalidArgument, "kernel needs at least one input and one output");
  }
  if (shape.period == 0) fail(ErrorCode::InvalidArgument, "kernel period must be >= 1");
  if (shape.lags.lo > shape.lags.hi) fail(ErrorCode::InvalidArgument, "lag_min must not exceed lag_max");
}

void check_taps(std::span<const double> taps) {
  for (double v : taps) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "taps must be finite");
  }
}

// Smallest window whose complement holds only zero taps, given a predicate over lags.
template <typename NonzeroAt>
LagWindow nonzero_window(LagWindow lags, NonzeroAt nonzero_at) {
  Lag lo = lags.lo;
  while (lo <= lags.hi && !nonzero_at(lo)) ++lo;
  if (lo > lags.hi) return {0, 0};
  Lag hi = lags.hi;
  while (!nonzero_at(hi)) --hi;
  return {lo, hi};
}

// Splits [0, count) into contiguous chunks across up to `threads` workers.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([=, &body] { body(begin, end); });
  }
}

}  // namespace

PeriodicKernel::PeriodicKernel(KernelShape shape, std::vector<double> taps,
                               std::optional<double> sample_period_s)
    : shape_(shape), taps_(std::move(taps)), sample_period_s_(sample_period_s) {
  check_shape(shape_);
  if (taps_.size() != shape_.size()) {
    fail(ErrorCode::InvalidArgument, "tap tensor size " + std::to_string(taps_.size()) +
                                         " does not match shape size " + std::to_string(shape_.size()));
  }
  check_taps(taps_);
  if (sample_period_s_ && !(*sample_period_s_ > 0.0 && std::isfinite(*sample_period_s_))) {
    fail(ErrorCode::InvalidArgument, "sample period must be positive and finite");
  }
}

PeriodicKernel::PeriodicKernel(KernelShape shape, std::optional<double> sample_period_s)
    : PeriodicKernel(shape, std::vector<double>(shape.size(), 0.0), sample_period_s) {}

PeriodicKernel PeriodicKernel::identity(std::size_t channels, std::size_t period,
                                        std::optional<double> sample_period_s) {
  const KernelShape shape{channels, channels, period, {0, 0}};
  std::vector<double> taps(shape.size(), 0.0);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t p = 0; p < period; ++p) taps[shape.index(c, c, p, 0)] = 1.0;
  }
  return PeriodicKernel(shape, std::move(taps), sample_period_s);
}

bool PeriodicKernel::is_causal() const noexcept {
  for (std::size_t i = 0; i < n_out(); ++i)
    for (std::size_t j = 0; j < n_in(); ++j)
      for (std::size_t p = 0; p < period(); ++p)
        for (Lag m = lag_min(); m < 0 && m <= lag_max(); ++m)
          if (tap(i, j, p, m) != 0.0) return false;
  return true;
}

PeriodicKernel PeriodicKernel::with_window(LagWindow window) const {
  KernelShape shape = shape_;
  shape.lags = window;
  check_shape(shape);
  std::vector<double> taps(shape.size(), 0.0);
  for (std::size_t i = 0; i < n_out(); ++i)
    for (std::size_t j = 0; j < n_in(); ++j)
      for (std::size_t p = 0; p < period(); ++p)
        for (Lag m = window.lo; m <= window.hi; ++m) taps[shape.index(i, j, p, m)] = tap(i, j, p, m);
  return PeriodicKernel(shape, std::move(taps), sample_period_s_);
}

PeriodicKernel PeriodicKernel::trimmed() const {
  const auto nonzero_at = [this](Lag m) {
    for (std::size_t i = 0; i < n_out(); ++i)
      for (std::size_t j = 0; j < n_in(); ++j)
        for (std::size_t p = 0; p < period(); ++p)
          if (tap(i, j, p, m) != 0.0) return true;
    return false;
  };
  return with_window(nonzero_window(lags(), nonzero_at));
}

PeriodicKernel PeriodicKernel::with_sample_period(std::optional<double> sample_period_s) const {
  return PeriodicKernel(shape_, taps_, sample_period_s);
}

BlockedMimo::BlockedMimo(std::size_t dim, LagWindow lags, std::vector<double> taps)
    : dim_(dim), lags_(lags), taps_(std::move(taps)) {
  check_shape(KernelShape{dim, dim, 1, lags});
  if (taps_.size() != dim_ * dim_ * lags_.size()) {
    fail(ErrorCode::InvalidArgument, "blocked MIMO tap count does not match its shape");
  }
  check_taps(taps_);
}

BlockedMimo::BlockedMimo(std::size_t dim, LagWindow lags)
    : BlockedMimo(dim, lags, std::vector<double>(dim * dim * lags.size(), 0.0)) {}

BlockedMimo BlockedMimo::identity(std::size_t dim) {
  BlockedMimo out(dim, {0, 0});
  for (std::size_t c = 0; c < dim; ++c) out.taps_[out.index(c, c, 0)] = 1.0;
  return out;
}

PeriodicKernel BlockedMimo::as_kernel() const {
  // Identical memory layout: [i][j][p = 0][n].
  return PeriodicKernel(KernelShape{dim_, dim_, 1, lags_}, taps_);
}

BlockedMimo BlockedMimo::from_kernel(const PeriodicKernel& kernel) {
  if (!kernel.is_square() || kernel.period() != 1) {
    fail(ErrorCode::NotSquare, "a blocked MIMO system needs a square period-1 kernel");
  }
  const auto taps = kernel.taps();
  return BlockedMimo(kernel.n_out(), kernel.lags(), std::vector<double>(taps.begin(), taps.end()));
}

BlockedMimo BlockedMimo::trimmed() const { return from_kernel(as_kernel().trimmed()); }

Signal apply(const PeriodicKernel& kernel, const Signal& input, ApplyOptions options) {
  if (input.channel_count() != kernel.n_in()) {
    fail(ErrorCode::ChannelMismatch, "input has " + std::to_string(input.channel_count()) +
                                         " channels, kernel expects " + std::to_string(kernel.n_in()));
  }
  if (kernel.sample_period_s() && !same_rate(*kernel.sample_period_s(), input.sample_period_s())) {
    fail(ErrorCode::RateMismatch, "kernel and input sample periods differ");
  }

  const std::size_t length = input.length();
  const std::int64_t origin = input.origin_index();
  const auto period = static_cast<std::int64_t>(kernel.period());
  const LagWindow lags = kernel.lags();
  std::vector<std::vector<double>> out(kernel.n_out(), std::vector<double>(length, 0.0));

  parallel_for(kernel.n_out() * length, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t flat = begin; flat < end; ++flat) {
      const std::size_t i = flat / length;
      const std::size_t k = flat % length;
      const std::int64_t t = origin + static_cast<std::int64_t>(k);
      const auto p = static_cast<std::size_t>(pmod(t, period));
      double acc = 0.0;
      for (std::size_t j = 0; j < kernel.n_in(); ++j) {
        const auto x = input.channel(j);
        // Restrict m so that t - m stays inside the stored range.
        const Lag m_lo = std::max<Lag>(lags.lo, t - (origin + static_cast<Lag>(length) - 1));
        const Lag m_hi = std::min<Lag>(lags.hi, t - origin);
        for (Lag m = m_lo; m <= m_hi; ++m) {
          acc += kernel.taps()[kernel.shape().index(i, j, p, m)] * x[static_cast<std::size_t>(t - m - origin)];
        }
      }
      out[i][k] = acc;
    }
  });
  return Signal(input.sample_period_s(), std::move(out), origin);
}

Signal apply(const BlockedMimo& system, const Signal& input, ApplyOptions options) {
  return apply(system.as_kernel(), input, options);
}

PeriodicKernel shift_phase(const PeriodicKernel& kernel, std::int64_t offset) {
  const KernelShape& shape = kernel.shape();
  const auto period = static_cast<std::int64_t>(shape.period);
  std::vector<double> taps(shape.size(), 0.0);
  for (std::size_t i = 0; i < shape.n_out; ++i)
    for (std::size_t j = 0; j < shape.n_in; ++j)
      for (std::size_t p = 0; p < shape.period; ++p) {
        const auto src = static_cast<std::size_t>(pmod(static_cast<std::int64_t>(p) + offset, period));
        for (Lag m = shape.lags.lo; m <= shape.lags.hi; ++m) {
          taps[shape.index(i, j, p, m)] = kernel.taps()[shape.index(i, j, src, m)];
        }
      }
  return PeriodicKernel(shape, std::move(taps), kernel.sample_period_s());
}

}  // namespace ptv
