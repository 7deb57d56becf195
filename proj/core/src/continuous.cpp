#include "ptv/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ptv/error.hpp"
#include "ptv/spectrum.hpp"

namespace ptv {

namespace {

constexpr double kPhaseEps = 1e-9;

double snap_to_integer(double x) noexcept {
  const double r = std::nearbyint(x);
  return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : x;
}

void validate_term(const SeparableTerm& term, double period_s) {
  double scale = 1.0;
  for (const auto& h : term.modulation) {
    if (!std::isfinite(h.c.real()) || !std::isfinite(h.c.imag())) {
      fail(ErrorCode::InvalidArgument, "harmonic coefficients must be finite");
    }
    scale = std::max(scale, std::abs(h.c));
  }
  const double tol = 1e-12 * scale;
  for (std::size_t a = 0; a < term.modulation.size(); ++a) {
    const Harmonic& h = term.modulation[a];
    const Harmonic* mirror = nullptr;
    for (std::size_t b = 0; b < term.modulation.size(); ++b) {
      if (b != a && term.modulation[b].k == h.k) {
        fail(ErrorCode::InvalidArgument, "harmonic k=" + std::to_string(h.k) + " listed twice");
      }
      if (term.modulation[b].k == -h.k) mirror = &term.modulation[b];
    }
    const std::complex<double> partner = mirror ? mirror->c : std::complex<double>{};
    if (std::abs(partner - std::conj(h.c)) > tol) {
      fail(ErrorCode::InvalidArgument,
           "modulation is not conjugate-symmetric at k=" + std::to_string(h.k));
    }
  }

  if (const auto* fir = std::get_if<FirTable>(&term.tau_part)) {
    if (!(fir->tap_period_s > 0.0) || !std::isfinite(fir->tap_period_s)) {
      fail(ErrorCode::InvalidArgument, "FIR tap period must be positive");
    }
    for (double v : fir->taps) {
      if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "FIR taps must be finite");
    }
  } else if (!std::isfinite(std::get<DiracDelta>(term.tau_part).delay_s)) {
    fail(ErrorCode::InvalidArgument, "delta delay must be finite");
  }

  if (term.gate) {
    const Gate& g = *term.gate;
    if (!(g.z_a >= 0.0 && g.z_a < g.z_b && g.z_b <= period_s * (1.0 + kPhaseEps))) {
      fail(ErrorCode::InvalidArgument, "gate must satisfy 0 <= z_a < z_b <= T_h");
    }
  }
}

bool gate_covers_period(const Gate& g, double period_s) noexcept {
  return g.z_a <= kPhaseEps * period_s && g.z_b >= period_s * (1.0 - kPhaseEps);
}

// Left-closed, right-open membership of normalized phase u in the gate.
bool gate_open(const Gate& g, double period_s, double u) noexcept {
  const double a = g.z_a / period_s;
  const double b = g.z_b / period_s;
  return u >= a - kPhaseEps && u < b - kPhaseEps;
}

// g(p T_s) with T_h = K T_s; the angle is reduced in integers first.
double modulation_at_phase(const std::vector<Harmonic>& modulation, std::size_t p, std::size_t period) {
  const auto K = static_cast<std::int64_t>(period);
  double value = 0.0;
  for (const auto& h : modulation) {
    const std::int64_t q = pmod(static_cast<std::int64_t>(h.k) * static_cast<std::int64_t>(p), K);
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(K);
    value += h.c.real() * std::cos(angle) - h.c.imag() * std::sin(angle);
  }
  return value;
}

// Lag profile of the tau part sampled at T_s, plus its energy over all integer lags.
struct LagProfile {
  std::vector<double> taps;
  double total_energy = 0.0;
};

LagProfile lag_profile(const SeparableTerm& term, double sample_period_s, LagWindow window) {
  LagProfile out;
  out.taps.assign(window.size(), 0.0);
  if (const auto* delta = std::get_if<DiracDelta>(&term.tau_part)) {
    const double d = snap_to_integer(delta->delay_s / sample_period_s);
    for (Lag m = window.lo; m <= window.hi; ++m) {
      out.taps[static_cast<std::size_t>(m - window.lo)] = sinc(static_cast<double>(m) - d);
    }
    // Shifted sincs are orthonormal over the integers.
    out.total_energy = 1.0;
    return out;
  }
  const auto& fir = std::get<FirTable>(term.tau_part);
  const double rho = snap_to_integer(fir.tap_period_s / sample_period_s);
  for (Lag m = window.lo; m <= window.hi; ++m) {
    double acc = 0.0;
    for (std::size_t q = 0; q < fir.taps.size(); ++q) {
      acc += fir.taps[q] * sinc(static_cast<double>(m) - static_cast<double>(q) * rho);
    }
    out.taps[static_cast<std::size_t>(m - window.lo)] = acc;
  }
  // sum_m sinc(m - a) sinc(m - b) = sinc(a - b).
  for (std::size_t q = 0; q < fir.taps.size(); ++q) {
    for (std::size_t r = 0; r < fir.taps.size(); ++r) {
      out.total_energy += fir.taps[q] * fir.taps[r] *
                          sinc((static_cast<double>(q) - static_cast<double>(r)) * rho);
    }
  }
  return out;
}

}  // namespace

ContinuousSpec::ContinuousSpec(std::size_t n_out, std::size_t n_in, double period_s,
                               std::vector<std::vector<std::vector<SeparableTerm>>> entries)
    : n_out_(n_out), n_in_(n_in), period_s_(period_s), entries_(std::move(entries)) {
  if (n_out_ == 0 || n_in_ == 0) fail(ErrorCode::InvalidArgument, "spec needs at least one input and output");
  if (!(period_s_ > 0.0) || !std::isfinite(period_s_)) {
    fail(ErrorCode::InvalidArgument, "period_s must be positive and finite");
  }
  if (entries_.size() != n_out_) fail(ErrorCode::InvalidArgument, "entries must have n_out rows");
  for (const auto& row : entries_) {
    if (row.size() != n_in_) fail(ErrorCode::InvalidArgument, "each entries row must have n_in cells");
    for (const auto& cell : row) {
      for (const auto& term : cell) validate_term(term, period_s_);
    }
  }
}

double sinc(double x) noexcept {
  if (x == 0.0) return 1.0;
  const double k = std::nearbyint(x);
  const double r = x - k;
  if (r == 0.0) return 0.0;
  // sin(pi x) = (-1)^k sin(pi r), keeping the argument small.
  const double s = std::sin(std::numbers::pi * r);
  const bool odd = std::fmod(std::abs(k), 2.0) == 1.0;
  return (odd ? -s : s) / (std::numbers::pi * x);
}

double evaluate_modulation(const std::vector<Harmonic>& modulation, double u) noexcept {
  double value = 0.0;
  for (const auto& h : modulation) {
    const double ku = static_cast<double>(h.k) * u;
    const double angle = 2.0 * std::numbers::pi * (ku - std::floor(ku));
    value += h.c.real() * std::cos(angle) - h.c.imag() * std::sin(angle);
  }
  return value;
}

ContinuousSpec build_multiplexer(std::size_t n_inputs, double period_s) {
  if (n_inputs == 0) fail(ErrorCode::InvalidArgument, "multiplexer needs at least one input");
  if (!(period_s > 0.0)) fail(ErrorCode::InvalidArgument, "period must be positive");
  std::vector<std::vector<std::vector<SeparableTerm>>> entries(1, std::vector<std::vector<SeparableTerm>>(n_inputs));
  const double slot = period_s / static_cast<double>(n_inputs);
  for (std::size_t j = 0; j < n_inputs; ++j) {
    SeparableTerm term;
    // Last slot ends exactly at T_h so the gates tile the period.
    const double z_b = (j + 1 == n_inputs) ? period_s : slot * static_cast<double>(j + 1);
    term.gate = Gate{slot * static_cast<double>(j), z_b};
    entries[0][j].push_back(std::move(term));
  }
  return ContinuousSpec(1, n_inputs, period_s, std::move(entries));
}

ContinuousSpec build_modulator(std::vector<Harmonic> harmonics, double period_s) {
  SeparableTerm term;
  term.modulation = std::move(harmonics);
  term.tau_part = DiracDelta{0.0};
  return ContinuousSpec(1, 1, period_s, {{{std::move(term)}}});
}

ContinuousSpec build_lti(std::vector<double> fir_taps, double tap_period_s, std::optional<double> period_s) {
  SeparableTerm term;
  term.tau_part = FirTable{std::move(fir_taps), tap_period_s};
  return ContinuousSpec(1, 1, period_s.value_or(tap_period_s), {{{std::move(term)}}});
}

VariationBand variation_band(const ContinuousSpec& spec, int truncation_order) {
  VariationBand band;
  for (const auto& row : spec.entries()) {
    for (const auto& cell : row) {
      for (const auto& term : cell) {
        for (const auto& h : term.modulation) {
          if (h.c != std::complex<double>{}) band.value = std::max(band.value, std::abs(h.k));
        }
        if (term.gate && !gate_covers_period(*term.gate, spec.period_s())) band.truncated = true;
      }
    }
  }
  if (band.truncated) band.value = std::max(band.value, truncation_order);
  return band;
}

std::size_t discrete_period(double period_s, double sample_period_s, double tolerance) {
  if (!(sample_period_s > 0.0)) fail(ErrorCode::InvalidArgument, "sample period must be positive");
  const double ratio = period_s / sample_period_s;
  const double k = std::nearbyint(ratio);
  if (k < 1.0 || std::abs(ratio - k) > tolerance * ratio) {
    fail(ErrorCode::IncommensurateRate,
         "T_h / T_s = " + std::to_string(ratio) + " is not an integer");
  }
  return static_cast<std::size_t>(k);
}

PeriodicKernel discretize(const ContinuousSpec& spec, double sample_period_s, LagWindow window,
                          const DiscretizeOptions& options) {
  if (window.lo > window.hi) fail(ErrorCode::InvalidArgument, "lag window is empty");
  const std::size_t period = discrete_period(spec.period_s(), sample_period_s, options.commensurability_tolerance);
  const KernelShape shape{spec.n_out(), spec.n_in(), period, window};
  std::vector<double> taps(shape.size(), 0.0);

  for (std::size_t i = 0; i < spec.n_out(); ++i) {
    for (std::size_t j = 0; j < spec.n_in(); ++j) {
      for (const auto& term : spec.terms(i, j)) {
        const LagProfile profile = lag_profile(term, sample_period_s, window);
        if (profile.total_energy > 0.0) {
          double inside = 0.0;
          for (double v : profile.taps) inside += v * v;
          const double tail = std::max(0.0, profile.total_energy - inside) / profile.total_energy;
          if (tail > options.tail_tolerance) {
            fail(ErrorCode::WindowTooSmall, "sinc tail energy " + std::to_string(tail) +
                                                " outside lags [" + std::to_string(window.lo) + ", " +
                                                std::to_string(window.hi) + "] exceeds tolerance");
          }
        }
        for (std::size_t p = 0; p < period; ++p) {
          const double u = static_cast<double>(p) / static_cast<double>(period);
          if (term.gate && !gate_open(*term.gate, spec.period_s(), u)) continue;
          const double g = modulation_at_phase(term.modulation, p, period);
          if (g == 0.0) continue;
          for (Lag m = window.lo; m <= window.hi; ++m) {
            taps[shape.index(i, j, p, m)] += g * profile.taps[static_cast<std::size_t>(m - window.lo)];
          }
        }
      }
    }
  }
  return PeriodicKernel(shape, std::move(taps), sample_period_s);
}

NyquistReport nyquist_check(const ContinuousSpec& spec, double input_band_hz, double sample_period_s,
                            int truncation_order) {
  if (!(input_band_hz >= 0.0)) fail(ErrorCode::InvalidArgument, "input band must be non-negative");
  if (!(sample_period_s > 0.0)) fail(ErrorCode::InvalidArgument, "sample period must be positive");
  NyquistReport report;
  report.variation = variation_band(spec, truncation_order);
  report.input_band_hz = input_band_hz;
  report.output_band_hz = output_band(input_band_hz, report.variation.value, spec.period_s());
  report.required_rate_hz = 2.0 * report.output_band_hz;
  report.ok = sample_period_s * report.required_rate_hz <= 1.0 + 1e-12;
  report.lower_bound = report.variation.truncated;
  return report;
}

}  // namespace ptv
