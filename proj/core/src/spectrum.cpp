#include "ptv/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "fft.hpp"
#include "ptv/error.hpp"

namespace ptv {

namespace {

void check_tolerance(double energy_tol) {
  if (!(energy_tol > 0.0 && energy_tol < 1.0)) fail(ErrorCode::InvalidArgument, "energy_tol must lie in (0, 1)");
}

// Smallest bucket b such that buckets 0..b hold at least (1 - tol) of the total.
std::size_t energy_cutoff(const std::vector<double>& buckets, double energy_tol) {
  double total = 0.0;
  for (double e : buckets) total += e;
  if (total == 0.0) return 0;
  double acc = 0.0;
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    acc += buckets[b];
    if (acc >= (1.0 - energy_tol) * total) return b;
  }
  return buckets.empty() ? 0 : buckets.size() - 1;
}

}  // namespace

double HybridSpectrum::energy() const noexcept {
  double e = 0.0;
  for (const auto& v : values) e += std::norm(v);
  return e;
}

std::size_t default_grid_size(const PeriodicKernel& kernel) { return 8 * kernel.lags().size(); }

HybridSpectrum hybrid_transform(const PeriodicKernel& kernel, std::optional<std::size_t> grid_size) {
  const std::size_t L = grid_size.value_or(default_grid_size(kernel));
  if (L < kernel.lags().size()) {
    fail(ErrorCode::GridTooSmall, "frequency grid of " + std::to_string(L) + " points is shorter than the " +
                                      std::to_string(kernel.lags().size()) + "-lag window");
  }
  const std::size_t K = kernel.period();
  HybridSpectrum out;
  out.n_out = kernel.n_out();
  out.n_in = kernel.n_in();
  out.period = K;
  out.lags = kernel.lags();
  out.grid_size = L;
  out.sample_period_s = kernel.sample_period_s();
  const int k_first = -static_cast<int>(K / 2);
  for (std::size_t q = 0; q < K; ++q) out.harmonic_axis.push_back(k_first + static_cast<int>(q));
  for (std::size_t l = 0; l < L; ++l) out.freq_axis.push_back(-0.5 + static_cast<double>(l) / static_cast<double>(L));
  out.values.assign(out.n_out * out.n_in * K * L, {});

  for (std::size_t i = 0; i < out.n_out; ++i) {
    for (std::size_t j = 0; j < out.n_in; ++j) {
      // Lag axis: exp(j pi m) shifts the grid origin to f = -1/2.
      std::vector<std::vector<std::complex<double>>> per_phase(K);
      for (std::size_t p = 0; p < K; ++p) {
        std::vector<std::complex<double>> buf(L);
        for (Lag m = kernel.lag_min(); m <= kernel.lag_max(); ++m) {
          const double sign = (m % 2 == 0) ? 1.0 : -1.0;
          buf[static_cast<std::size_t>(pmod(m, static_cast<std::int64_t>(L)))] += sign * kernel.tap(i, j, p, m);
        }
        per_phase[p] = detail::dft(buf);
      }
      // Phase axis.
      for (std::size_t l = 0; l < L; ++l) {
        std::vector<std::complex<double>> column(K);
        for (std::size_t p = 0; p < K; ++p) column[p] = per_phase[p][l];
        const auto harmonics = detail::dft(column);
        for (std::size_t k_idx = 0; k_idx < K; ++k_idx) {
          const auto q = static_cast<std::size_t>(pmod(out.harmonic_axis[k_idx], static_cast<std::int64_t>(K)));
          out.values[out.index(i, j, k_idx, l)] = harmonics[q];
        }
      }
    }
  }
  return out;
}

PeriodicKernel inverse_hybrid_transform(const HybridSpectrum& spectrum) {
  const std::size_t K = spectrum.period;
  const std::size_t L = spectrum.grid_size;
  const KernelShape shape{spectrum.n_out, spectrum.n_in, K, spectrum.lags};
  std::vector<double> taps(shape.size(), 0.0);
  for (std::size_t i = 0; i < shape.n_out; ++i) {
    for (std::size_t j = 0; j < shape.n_in; ++j) {
      std::vector<std::vector<std::complex<double>>> per_phase(K, std::vector<std::complex<double>>(L));
      for (std::size_t l = 0; l < L; ++l) {
        std::vector<std::complex<double>> column(K);
        for (std::size_t k_idx = 0; k_idx < K; ++k_idx) {
          const auto q = static_cast<std::size_t>(pmod(spectrum.harmonic_axis[k_idx], static_cast<std::int64_t>(K)));
          column[q] = spectrum.value(i, j, k_idx, l);
        }
        const auto phases = detail::idft(column);
        for (std::size_t p = 0; p < K; ++p) per_phase[p][l] = phases[p];
      }
      for (std::size_t p = 0; p < K; ++p) {
        const auto lags = detail::idft(per_phase[p]);
        for (Lag m = shape.lags.lo; m <= shape.lags.hi; ++m) {
          const double sign = (m % 2 == 0) ? 1.0 : -1.0;
          taps[shape.index(i, j, p, m)] =
              sign * lags[static_cast<std::size_t>(pmod(m, static_cast<std::int64_t>(L)))].real();
        }
      }
    }
  }
  return PeriodicKernel(shape, std::move(taps), spectrum.sample_period_s);
}

int variation_band_estimate(const HybridSpectrum& spectrum, double energy_tol) {
  check_tolerance(energy_tol);
  // Bucket b collects harmonics with |k| == b.
  std::vector<double> buckets(spectrum.period / 2 + 1, 0.0);
  for (std::size_t i = 0; i < spectrum.n_out; ++i)
    for (std::size_t j = 0; j < spectrum.n_in; ++j)
      for (std::size_t k_idx = 0; k_idx < spectrum.period; ++k_idx)
        for (std::size_t l = 0; l < spectrum.grid_size; ++l)
          buckets[static_cast<std::size_t>(std::abs(spectrum.harmonic_axis[k_idx]))] +=
              std::norm(spectrum.value(i, j, k_idx, l));
  return static_cast<int>(energy_cutoff(buckets, energy_tol));
}

double linear_band_estimate(const HybridSpectrum& spectrum, double energy_tol) {
  check_tolerance(energy_tol);
  const std::size_t L = spectrum.grid_size;
  // |f_l| = |2l - L| / (2L); bucket by the integer distance |2l - L|.
  std::vector<double> buckets(L + 1, 0.0);
  for (std::size_t i = 0; i < spectrum.n_out; ++i)
    for (std::size_t j = 0; j < spectrum.n_in; ++j)
      for (std::size_t k_idx = 0; k_idx < spectrum.period; ++k_idx)
        for (std::size_t l = 0; l < L; ++l) {
          const auto d = static_cast<std::size_t>(std::llabs(2 * static_cast<long long>(l) - static_cast<long long>(L)));
          buckets[d] += std::norm(spectrum.value(i, j, k_idx, l));
        }
  return static_cast<double>(energy_cutoff(buckets, energy_tol)) / (2.0 * static_cast<double>(L));
}

double output_band(double input_band_hz, int variation, double period_s) {
  if (!(input_band_hz >= 0.0) || variation < 0 || !(period_s > 0.0)) {
    fail(ErrorCode::InvalidArgument, "output_band needs B_x >= 0, A >= 0, T_h > 0");
  }
  return input_band_hz + static_cast<double>(variation) / period_s;
}

std::vector<std::complex<double>> channel_dft(const Signal& signal, std::size_t channel) {
  const auto samples = signal.channel(channel);
  std::vector<std::complex<double>> buf(samples.begin(), samples.end());
  return detail::dft(buf);
}

double signal_band(const Signal& signal, double energy_tol) {
  check_tolerance(energy_tol);
  const std::size_t N = signal.length();
  if (N == 0 || signal.channel_count() == 0) fail(ErrorCode::EmptySignal, "signal has no samples");
  // Bucket d collects bins at |f| = d / N.
  std::vector<double> buckets(N / 2 + 1, 0.0);
  for (std::size_t c = 0; c < signal.channel_count(); ++c) {
    const auto spectrum = channel_dft(signal, c);
    for (std::size_t q = 0; q < N; ++q) buckets[std::min(q, N - q)] += std::norm(spectrum[q]);
  }
  const std::size_t d = energy_cutoff(buckets, energy_tol);
  return static_cast<double>(d) / (static_cast<double>(N) * signal.sample_period_s());
}

}  // namespace ptv
