#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ptv/kernel.hpp"
#include "ptv/signal.hpp"

namespace ptv {

/// Fourier series over the phase axis combined with a zero-padded DFT over lags.
///
/// values[i][j][k][l] = sum_p sum_m taps(i, j, p, m) exp(-j 2 pi (k p / K + f_l m)),
/// with k in [-floor(K/2), ceil(K/2)) and f_l = -1/2 + l / L.
struct HybridSpectrum {
  std::size_t n_out = 0;
  std::size_t n_in = 0;
  std::size_t period = 1;
  LagWindow lags{};
  std::size_t grid_size = 0;
  std::optional<double> sample_period_s;
  std::vector<int> harmonic_axis;
  std::vector<double> freq_axis;
  std::vector<std::complex<double>> values;

  std::size_t index(std::size_t i, std::size_t j, std::size_t k_idx, std::size_t l) const noexcept {
    return ((i * n_in + j) * period + k_idx) * grid_size + l;
  }
  std::complex<double> value(std::size_t i, std::size_t j, std::size_t k_idx, std::size_t l) const noexcept {
    return values[index(i, j, k_idx, l)];
  }
  /// Sum of |values|^2.
  double energy() const noexcept;
};

/// Default lag-axis grid: eight times the lag window length.
std::size_t default_grid_size(const PeriodicKernel& kernel);

HybridSpectrum hybrid_transform(const PeriodicKernel& kernel, std::optional<std::size_t> grid_size = std::nullopt);

/// Inverse DFT over both axes, keeping the original lag window.
PeriodicKernel inverse_hybrid_transform(const HybridSpectrum& spectrum);

/// Smallest A with at least (1 - energy_tol) of the energy in harmonics |k| <= A.
int variation_band_estimate(const HybridSpectrum& spectrum, double energy_tol = 1e-9);

/// Smallest B (cycles/sample) with at least (1 - energy_tol) of the energy in |f| <= B.
double linear_band_estimate(const HybridSpectrum& spectrum, double energy_tol = 1e-9);

/// Output bandwidth B_x + A / T_h.
double output_band(double input_band_hz, int variation, double period_s);

/// Smallest B in Hz with at least (1 - energy_tol) of the DFT energy (all channels) inside +-B.
double signal_band(const Signal& signal, double energy_tol = 1e-9);

/// Unnormalized DFT of one channel over its stored length; bin q sits at q / N cycles/sample.
std::vector<std::complex<double>> channel_dft(const Signal& signal, std::size_t channel);

}  // namespace ptv
