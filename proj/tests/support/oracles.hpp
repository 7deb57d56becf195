// Independent reference computations and random generators shared by the tests.
// Nothing here calls into the code paths it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ptv/kernel.hpp"
#include "ptv/signal.hpp"

namespace oracle {

using Complex = std::complex<double>;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline ptv::LagWindow random_window(Rng& rng, ptv::Lag lo, ptv::Lag hi) {
  ptv::Lag a = rng.integer(lo, hi);
  ptv::Lag b = rng.integer(lo, hi);
  if (a > b) std::swap(a, b);
  return {a, b};
}

inline ptv::PeriodicKernel random_kernel(Rng& rng, std::size_t n_out, std::size_t n_in, std::size_t period,
                                         ptv::LagWindow lags, std::optional<double> sample_period = std::nullopt) {
  ptv::KernelShape shape{n_out, n_in, period, lags};
  std::vector<double> taps(shape.size());
  for (double& v : taps) v = rng.uniform();
  return ptv::PeriodicKernel(shape, std::move(taps), sample_period);
}

/// Identity plus 0.1 * uniform noise on every tap.
inline ptv::PeriodicKernel dominant_kernel(Rng& rng, std::size_t n, std::size_t period, ptv::LagWindow lags) {
  ptv::KernelShape shape{n, n, period, lags};
  std::vector<double> taps(shape.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t p = 0; p < period; ++p)
        for (ptv::Lag m = lags.lo; m <= lags.hi; ++m)
          taps[shape.index(i, j, p, m)] = (i == j && m == 0 ? 1.0 : 0.0) + 0.1 * rng.uniform();
  return ptv::PeriodicKernel(shape, std::move(taps));
}

inline ptv::Signal random_signal(Rng& rng, std::size_t channels, std::size_t length, std::int64_t origin = 0,
                                 double sample_period = 1.0) {
  std::vector<std::vector<double>> data(channels, std::vector<double>(length));
  for (auto& ch : data)
    for (double& v : ch) v = rng.uniform();
  return ptv::Signal(sample_period, std::move(data), origin);
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t n) { return ((a % n) + n) % n; }

/// y_i[t] = sum_j sum_m taps(i, j, t mod K, m) x_j[t - m], written as plain loops.
inline std::vector<std::vector<double>> direct_apply(const ptv::PeriodicKernel& h, const ptv::Signal& x) {
  std::vector<std::vector<double>> y(h.n_out(), std::vector<double>(x.length(), 0.0));
  const auto period = static_cast<std::int64_t>(h.period());
  for (std::size_t i = 0; i < h.n_out(); ++i)
    for (std::size_t k = 0; k < x.length(); ++k) {
      const std::int64_t t = x.origin_index() + static_cast<std::int64_t>(k);
      const auto p = static_cast<std::size_t>(floor_mod(t, period));
      double acc = 0.0;
      for (std::size_t j = 0; j < h.n_in(); ++j)
        for (ptv::Lag m = h.lag_min(); m <= h.lag_max(); ++m) acc += h.tap(i, j, p, m) * x.at(j, t - m);
      y[i][k] = acc;
    }
  return y;
}

/// Round-robin switch: output sample t takes input channel (t mod N).
inline std::vector<double> switch_loop(const ptv::Signal& x) {
  const auto n = static_cast<std::int64_t>(x.channel_count());
  std::vector<double> y(x.length());
  for (std::size_t k = 0; k < x.length(); ++k) {
    const std::int64_t t = x.origin_index() + static_cast<std::int64_t>(k);
    y[k] = x.channel(static_cast<std::size_t>(floor_mod(t, n)))[k];
  }
  return y;
}

/// Naive O(N^2) DFT, X[q] = sum_n x[n] exp(-j 2 pi q n / N).
inline std::vector<Complex> direct_dft(const std::vector<Complex>& x) {
  const std::size_t n = x.size();
  std::vector<Complex> twiddle(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    twiddle[r] = Complex(std::cos(angle), std::sin(angle));
  }
  std::vector<Complex> out(n);
  for (std::size_t q = 0; q < n; ++q) {
    Complex acc{};
    std::size_t r = 0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += x[k] * twiddle[r];
      r += q;
      if (r >= n) r -= n;
    }
    out[q] = acc;
  }
  return out;
}

inline std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b, std::size_t skip_front = 0,
                           std::size_t skip_back = 0) {
  double m = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = skip_front; k + skip_back < n; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline double rms(std::span<const double> a, std::size_t skip_front = 0, std::size_t skip_back = 0) {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t k = skip_front; k + skip_back < a.size(); ++k, ++count) acc += a[k] * a[k];
  return count ? std::sqrt(acc / static_cast<double>(count)) : 0.0;
}

inline double rel_rms_diff(std::span<const double> got, std::span<const double> want, std::size_t skip_front = 0,
                           std::size_t skip_back = 0) {
  std::vector<double> diff(want.size());
  for (std::size_t k = 0; k < want.size(); ++k) diff[k] = got[k] - want[k];
  const double den = rms(want, skip_front, skip_back);
  return den > 0.0 ? rms(diff, skip_front, skip_back) / den : rms(diff, skip_front, skip_back);
}

/// Largest per-channel max-abs difference over interior samples, divided by the largest |want|.
inline double rel_max_diff(const std::vector<std::vector<double>>& got, const std::vector<std::vector<double>>& want,
                           std::size_t skip_front = 0, std::size_t skip_back = 0) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t c = 0; c < want.size(); ++c) {
    num = std::max(num, max_abs_diff(got[c], want[c], skip_front, skip_back));
    den = std::max(den, max_abs(want[c]));
  }
  return den > 0.0 ? num / den : num;
}

}  // namespace oracle
