#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "ptv/kernel.hpp"

namespace ptv {

/// One coefficient c_k of g(z) = sum_k c_k exp(j 2 pi k z / T_h).
struct Harmonic {
  int k = 0;
  std::complex<double> c{};
  bool operator==(const Harmonic&) const = default;
};

/// Impulse at tau = delay_s.
struct DiracDelta {
  double delay_s = 0.0;
  bool operator==(const DiracDelta&) const = default;
};

/// Impulse train sum_q taps[q] * delta(tau - q * tap_period_s).
struct FirTable {
  std::vector<double> taps;
  double tap_period_s = 1.0;
  bool operator==(const FirTable&) const = default;
};

/// Temporal-phase window [z_a, z_b) within one period; the term is zero elsewhere.
struct Gate {
  double z_a = 0.0;
  double z_b = 0.0;
  bool operator==(const Gate&) const = default;
};

/// g(z) * tau_part(tau), optionally gated in z.
struct SeparableTerm {
  std::vector<Harmonic> modulation{{0, 1.0}};
  std::variant<DiracDelta, FirTable> tau_part = DiracDelta{};
  std::optional<Gate> gate;

  bool operator==(const SeparableTerm&) const = default;
};

/// Continuous-time PTV description h_ij(z, tau) as finite sums of separable terms.
class ContinuousSpec {
 public:
  /// `entries[i][j]` lists the terms of h_ij; validated on construction.
  ContinuousSpec(std::size_t n_out, std::size_t n_in, double period_s,
                 std::vector<std::vector<std::vector<SeparableTerm>>> entries);

  std::size_t n_out() const noexcept { return n_out_; }
  std::size_t n_in() const noexcept { return n_in_; }
  double period_s() const noexcept { return period_s_; }
  const std::vector<SeparableTerm>& terms(std::size_t i, std::size_t j) const { return entries_.at(i).at(j); }
  const std::vector<std::vector<std::vector<SeparableTerm>>>& entries() const noexcept { return entries_; }

  bool operator==(const ContinuousSpec&) const = default;

 private:
  std::size_t n_out_;
  std::size_t n_in_;
  double period_s_;
  std::vector<std::vector<std::vector<SeparableTerm>>> entries_;
};

/// sin(pi x) / (pi x), exact zero at nonzero integers and one at zero.
double sinc(double x) noexcept;

/// Real value of the harmonic series at normalized phase u = z / T_h.
double evaluate_modulation(const std::vector<Harmonic>& modulation, double u) noexcept;

/// N:1 cyclic multiplexer: input j passes during [j T_h / N, (j + 1) T_h / N).
ContinuousSpec build_multiplexer(std::size_t n_inputs, double period_s);

/// Memoryless multiplier by the real periodic waveform given by `harmonics`.
ContinuousSpec build_modulator(std::vector<Harmonic> harmonics, double period_s);

/// Time-invariant FIR lifted to a PTV. The period is arbitrary; it defaults to
/// the tap spacing so that discretizing at that rate yields period 1.
ContinuousSpec build_lti(std::vector<double> fir_taps, double tap_period_s,
                         std::optional<double> period_s = std::nullopt);

struct VariationBand {
  int value = 0;
  /// Set when a gated term forced reporting the truncation order instead of an exact band.
  bool truncated = false;
};

/// Highest harmonic index present in the spec. Gated terms have unbounded
/// harmonic content and report `truncation_order` with the truncated flag set.
VariationBand variation_band(const ContinuousSpec& spec, int truncation_order = 64);

struct DiscretizeOptions {
  /// Largest admissible fraction of a term's energy falling outside the lag window.
  double tail_tolerance = 1e-6;
  /// Relative tolerance on T_h / T_s being an integer.
  double commensurability_tolerance = 1e-9;
};

/// Integer period K with T_h = K * T_s, or IncommensurateRate.
std::size_t discrete_period(double period_s, double sample_period_s, double tolerance = 1e-9);

/// Samples the spec at rate 1 / T_s over `window` lags.
PeriodicKernel discretize(const ContinuousSpec& spec, double sample_period_s, LagWindow window,
                          const DiscretizeOptions& options = {});

struct NyquistReport {
  bool ok = false;
  VariationBand variation{};
  double input_band_hz = 0.0;
  double output_band_hz = 0.0;
  /// Minimal compliant sampling rate 2 * B_y in samples per second.
  double required_rate_hz = 0.0;
  /// True when B_y rests on a truncated variation band and is therefore only a lower bound.
  bool lower_bound = false;
};

NyquistReport nyquist_check(const ContinuousSpec& spec, double input_band_hz, double sample_period_s,
                            int truncation_order = 64);

}  // namespace ptv
