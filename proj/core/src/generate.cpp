#include "ptv/generate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "fft.hpp"
#include "ptv/error.hpp"

namespace ptv {

Signal tone(std::size_t length, double sample_period_s, double frequency, double amplitude, double phase,
            std::size_t channels) {
  std::vector<double> samples(length);
  for (std::size_t n = 0; n < length; ++n) {
    // Reduce f n modulo one cycle before scaling to keep the phase accurate for long signals.
    const double cycles = frequency * static_cast<double>(n);
    samples[n] = amplitude * std::cos(2.0 * std::numbers::pi * (cycles - std::floor(cycles)) + phase);
  }
  return Signal(sample_period_s, std::vector<std::vector<double>>(channels, samples));
}

Signal noise(std::size_t length, double sample_period_s, std::uint64_t seed, std::optional<double> band,
             std::size_t channels) {
  if (band && !(*band >= 0.0)) fail(ErrorCode::InvalidArgument, "noise band must be non-negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> out(channels, std::vector<double>(length));
  for (auto& ch : out) {
    for (double& v : ch) v = normal(rng);
    if (band && length > 0) {
      std::vector<std::complex<double>> buf(ch.begin(), ch.end());
      auto spectrum = detail::dft(buf);
      for (std::size_t q = 0; q < length; ++q) {
        const double f = static_cast<double>(std::min(q, length - q)) / static_cast<double>(length);
        if (f > *band) spectrum[q] = 0.0;
      }
      const auto filtered = detail::idft(spectrum);
      for (std::size_t n = 0; n < length; ++n) ch[n] = filtered[n].real();
    }
    double power = 0.0;
    for (double v : ch) power += v * v;
    if (power > 0.0) {
      const double scale = std::sqrt(static_cast<double>(length) / power);
      for (double& v : ch) v *= scale;
    }
  }
  return Signal(sample_period_s, std::move(out));
}

Signal chirp(std::size_t length, double sample_period_s, double f0, double f1, double amplitude) {
  std::vector<double> samples(length);
  const double rate = length > 1 ? (f1 - f0) / static_cast<double>(length - 1) : 0.0;
  for (std::size_t n = 0; n < length; ++n) {
    const double t = static_cast<double>(n);
    const double cycles = f0 * t + 0.5 * rate * t * t;
    samples[n] = amplitude * std::cos(2.0 * std::numbers::pi * (cycles - std::floor(cycles)));
  }
  return Signal(sample_period_s, {std::move(samples)});
}

}  // namespace ptv
