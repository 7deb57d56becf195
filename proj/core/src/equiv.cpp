#include "ptv/equiv.hpp"

#include <string>
#include <vector>

#include "ptv/error.hpp"

namespace ptv {

namespace {

// floor(a / b) and ceil(a / b) for b > 0.
std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept { return (a - pmod(a, b)) / b; }
std::int64_t ceil_div(std::int64_t a, std::int64_t b) noexcept { return -floor_div(-a, b); }

}  // namespace

BlockedMimo siso_to_mimo(const PeriodicKernel& h) {
  if (!h.is_siso()) fail(ErrorCode::NotSiso, "siso_to_mimo needs a single-input single-output kernel");
  const PeriodicKernel src = h.trimmed();
  const auto K = static_cast<std::int64_t>(src.period());
  const LagWindow blocks{ceil_div(src.lag_min() - (K - 1), K), floor_div(src.lag_max() + (K - 1), K)};
  BlockedMimo out(src.period(), blocks);
  std::vector<double> taps(out.taps().begin(), out.taps().end());
  for (std::int64_t i = 0; i < K; ++i)
    for (std::int64_t j = 0; j < K; ++j)
      for (Lag n = blocks.lo; n <= blocks.hi; ++n)
        taps[out.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j), n)] =
            src.tap(0, 0, static_cast<std::size_t>(i), n * K + i - j);
  return BlockedMimo(src.period(), blocks, std::move(taps)).trimmed();
}

PeriodicKernel mimo_to_siso(const BlockedMimo& m) {
  const auto K = static_cast<std::int64_t>(m.dim());
  const KernelShape shape{1, 1, m.dim(), {m.lags().lo * K - (K - 1), m.lags().hi * K + (K - 1)}};
  std::vector<double> taps(shape.size(), 0.0);
  for (std::int64_t i = 0; i < K; ++i) {
    for (Lag lag = shape.lags.lo; lag <= shape.lags.hi; ++lag) {
      const std::int64_t j = pmod(i - lag, K);
      const Lag n = (lag - i + j) / K;
      taps[shape.index(0, 0, static_cast<std::size_t>(i), lag)] =
          m.tap(static_cast<std::size_t>(i), static_cast<std::size_t>(j), n);
    }
  }
  return PeriodicKernel(shape, std::move(taps)).trimmed();
}

PeriodicKernel square_to_siso(const PeriodicKernel& h) {
  if (!h.is_square()) fail(ErrorCode::NotSquare, "square_to_siso needs as many inputs as outputs");
  const auto N = static_cast<std::int64_t>(h.n_out());
  const std::size_t period = h.n_out() * h.period();
  const KernelShape shape{1, 1, period, {h.lag_min() * N - (N - 1), h.lag_max() * N + (N - 1)}};
  std::vector<double> taps(shape.size(), 0.0);
  for (std::size_t k = 0; k < period; ++k) {
    const auto i = static_cast<std::int64_t>(k) % N;
    const auto n = static_cast<std::size_t>(static_cast<std::int64_t>(k) / N);
    for (Lag r = shape.lags.lo; r <= shape.lags.hi; ++r) {
      // x[k - r] is sample n - m of input j.
      const std::int64_t j = pmod(i - r, N);
      const Lag m = (r - i + j) / N;
      taps[shape.index(0, 0, k, r)] = h.tap(static_cast<std::size_t>(i), static_cast<std::size_t>(j), n, m);
    }
  }
  std::optional<double> rate;
  if (h.sample_period_s()) rate = *h.sample_period_s() / static_cast<double>(N);
  return PeriodicKernel(shape, std::move(taps), rate);
}

PeriodicKernel siso_to_square(const PeriodicKernel& h, std::size_t n) {
  if (!h.is_siso()) fail(ErrorCode::NotSiso, "siso_to_square needs a single-input single-output kernel");
  if (n == 0) fail(ErrorCode::InvalidArgument, "channel count must be >= 1");
  if (h.period() % n != 0) {
    fail(ErrorCode::IndivisiblePeriod,
         std::to_string(n) + " channels do not divide period " + std::to_string(h.period()));
  }
  const auto N = static_cast<std::int64_t>(n);
  const KernelShape shape{n, n, h.period() / n,
                          {ceil_div(h.lag_min() - (N - 1), N), floor_div(h.lag_max() + (N - 1), N)}};
  std::vector<double> taps(shape.size(), 0.0);
  for (std::int64_t i = 0; i < N; ++i)
    for (std::int64_t j = 0; j < N; ++j)
      for (std::size_t p = 0; p < shape.period; ++p)
        for (Lag m = shape.lags.lo; m <= shape.lags.hi; ++m)
          taps[shape.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j), p, m)] =
              h.tap(0, 0, p * n + static_cast<std::size_t>(i), m * N + i - j);
  std::optional<double> rate;
  if (h.sample_period_s()) rate = *h.sample_period_s() * static_cast<double>(n);
  return PeriodicKernel(shape, std::move(taps), rate).trimmed();
}

BlockedSignal block_signal(const Signal& x, std::size_t k) {
  if (k == 0) fail(ErrorCode::InvalidArgument, "blocking factor must be >= 1");
  if (x.channel_count() != 1) fail(ErrorCode::ChannelMismatch, "block_signal needs a single-channel signal");
  const auto K = static_cast<std::int64_t>(k);
  const std::int64_t first_block = floor_div(x.origin_index(), K);
  const auto lead = static_cast<std::size_t>(x.origin_index() - first_block * K);
  const std::size_t total = lead + x.length();
  const std::size_t blocks = (total + k - 1) / k;
  std::vector<std::vector<double>> channels(k, std::vector<double>(blocks, 0.0));
  for (std::size_t r = 0; r < blocks; ++r)
    for (std::size_t j = 0; j < k; ++j)
      channels[j][r] = x.at(0, (first_block + static_cast<std::int64_t>(r)) * K + static_cast<std::int64_t>(j));
  return {Signal(x.sample_period_s() * static_cast<double>(k), std::move(channels), first_block), lead,
          blocks * k - total};
}

Signal serialize_signal(const Signal& x, std::size_t lead_trim, std::size_t trail_trim) {
  const std::size_t k = x.channel_count();
  if (k == 0) fail(ErrorCode::EmptySignal, "signal has no channels");
  const std::size_t total = k * x.length();
  if (lead_trim + trail_trim > total) fail(ErrorCode::InvalidArgument, "trim exceeds serialized length");
  std::vector<double> out;
  out.reserve(total - lead_trim - trail_trim);
  for (std::size_t s = lead_trim; s < total - trail_trim; ++s) out.push_back(x.channel(s % k)[s / k]);
  return Signal(x.sample_period_s() / static_cast<double>(k), {std::move(out)},
                x.origin_index() * static_cast<std::int64_t>(k) + static_cast<std::int64_t>(lead_trim));
}

Signal serialize_signal(const BlockedSignal& x) { return serialize_signal(x.signal, x.lead_pad, x.trail_pad); }

BlockedMimo mimo_convolve(const BlockedMimo& a, const BlockedMimo& b) {
  if (a.dim() != b.dim()) fail(ErrorCode::DimensionMismatch, "block convolution needs equal dimensions");
  const std::size_t K = a.dim();
  const LagWindow lags{a.lags().lo + b.lags().lo, a.lags().hi + b.lags().hi};
  BlockedMimo shape_only(K, lags);
  std::vector<double> taps(shape_only.taps().size(), 0.0);
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t l = 0; l < K; ++l)
      for (Lag q = a.lags().lo; q <= a.lags().hi; ++q) {
        const double av = a.tap(i, l, q);
        if (av == 0.0) continue;
        for (std::size_t k = 0; k < K; ++k)
          for (Lag r = b.lags().lo; r <= b.lags().hi; ++r) taps[shape_only.index(i, k, q + r)] += av * b.tap(l, k, r);
      }
  return BlockedMimo(K, lags, std::move(taps));
}

}  // namespace ptv
