#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ptv/compose.hpp"
#include "ptv/continuous.hpp"
#include "ptv/equiv.hpp"
#include "ptv/error.hpp"
#include "ptv/generate.hpp"
#include "ptv/inverse.hpp"
#include "ptv/io.hpp"
#include "ptv/spectrum.hpp"

namespace ptv::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void emit_csv(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    io::write_text_file(path, text);
  }
}

double energy_tolerance(const Globals& g) { return g.tolerance.value_or(1e-9); }

}  // namespace

std::string run_build(const BuildArgs& args, const Globals& globals) {
  const auto spec = io::load_spec(args.spec);
  DiscretizeOptions opts;
  if (globals.tolerance) opts.tail_tolerance = *globals.tolerance;
  const auto kernel = discretize(spec, args.sample_period_s, {args.lag_min, args.lag_max}, opts);
  io::save_kernel(kernel, args.output);
  const auto band = variation_band(spec, args.truncation_order);
  const auto report = nyquist_check(spec, args.input_band_hz, args.sample_period_s, args.truncation_order);
  ordered_json j;
  j["period"] = kernel.period();
  j["variation_band"] = band.value;
  j["truncated"] = band.truncated;
  j["nyquist"] = {{"ok", report.ok},
                  {"input_band_hz", report.input_band_hz},
                  {"output_band_hz", report.output_band_hz},
                  {"required_rate_hz", report.required_rate_hz},
                  {"lower_bound", report.lower_bound}};
  return dump(j);
}

std::string run_apply(const ApplyArgs& args, const Globals& globals) {
  const auto kernel = io::load_kernel(args.kernel);
  const auto input = io::load_signal(args.input, kernel.sample_period_s());
  io::save_signal(apply(kernel, input, {globals.threads}), args.output);
  return {};
}

std::string run_compose(const ComposeArgs& args, const Globals&) {
  std::optional<PeriodicKernel> result;
  if (args.mode == "circuit") {
    result = reduce_circuit(io::load_circuit(args.circuit));
  } else {
    if (args.kernels.size() < 2) fail(ErrorCode::InvalidArgument, "compose " + args.mode + " needs at least two kernels");
    result = io::load_kernel(args.kernels.front());
    for (std::size_t k = 1; k < args.kernels.size(); ++k) {
      const auto next = io::load_kernel(args.kernels[k]);
      result = args.mode == "series" ? series(*result, next) : parallel(*result, next);
    }
  }
  io::save_kernel(*result, args.output);
  ordered_json j;
  j["period"] = result->period();
  j["n_out"] = result->n_out();
  j["n_in"] = result->n_in();
  j["lag_min"] = result->lag_min();
  j["lag_max"] = result->lag_max();
  return dump(j);
}

std::string run_bandwidth(const BandwidthArgs& args, const Globals& globals) {
  const auto kernel = io::load_kernel(args.kernel);
  const auto spectrum = hybrid_transform(kernel, args.grid);
  const double tol = energy_tolerance(globals);
  const int a = variation_band_estimate(spectrum, tol);
  const double ts = kernel.sample_period_s().value_or(1.0);
  const double b_linear = linear_band_estimate(spectrum, tol) / ts;
  const double b_y = output_band(args.input_band, a, static_cast<double>(kernel.period()) * ts);
  ordered_json j;
  j["A"] = a;
  j["B_linear"] = b_linear;
  j["B_x"] = args.input_band;
  j["B_y"] = b_y;
  j["nyquist_ok"] = 2.0 * b_y * ts <= 1.0 + 1e-12;
  j["min_rate"] = 2.0 * b_y;
  j["units"] = kernel.sample_period_s() ? "Hz" : "cycles/sample";
  return dump(j);
}

std::string run_spectrum(const SpectrumArgs& args, const Globals&) {
  std::ostringstream out;
  if (!args.kernel.empty()) {
    io::write_spectrum_csv(hybrid_transform(io::load_kernel(args.kernel), args.grid), out);
  } else {
    const auto x = io::load_signal(args.signal);
    const std::size_t n = x.length();
    if (n == 0) fail(ErrorCode::EmptySignal, "signal has no samples");
    out << "ch,f,re,im\n";
    for (std::size_t c = 0; c < x.channel_count(); ++c) {
      const auto bins = channel_dft(x, c);
      // Ascending frequency: negative bins first.
      for (std::size_t s = 0; s < n; ++s) {
        const std::size_t q = (s + (n + 1) / 2) % n;
        const auto signed_q = static_cast<std::int64_t>(q) - (q >= (n + 1) / 2 ? static_cast<std::int64_t>(n) : 0);
        const double f = static_cast<double>(signed_q) / (static_cast<double>(n) * x.sample_period_s());
        out << c << ',' << io::format_double(f) << ',' << io::format_double(bins[q].real()) << ','
            << io::format_double(bins[q].imag()) << '\n';
      }
    }
  }
  emit_csv(args.output, out.str());
  return {};
}

std::string run_invert(const InvertArgs& args, const Globals& globals) {
  const auto kernel = io::load_kernel(args.kernel);
  InverseOptions opts;
  opts.fft_size = args.fft_size;
  opts.cond_limit = args.cond_limit;
  opts.max_fft_size = args.max_fft_size;
  if (globals.tolerance) opts.residual_tolerance = *globals.tolerance;
  const auto result = kernel.is_siso() ? invert_siso(kernel, opts) : invert_square(kernel, opts);
  io::save_kernel(result.inverse, args.output);
  ordered_json j;
  j["residual"] = result.residual;
  j["condition_max"] = result.condition_max;
  j["fft_size"] = result.fft_size;
  j["period"] = result.inverse.period();
  j["dims"] = {result.inverse.n_out(), result.inverse.n_in()};
  const std::string text = dump(j);
  if (!args.report.empty()) io::write_text_file(args.report, text);
  return text;
}

std::string run_to_mimo(const ToMimoArgs& args, const Globals&) {
  const auto kernel = io::load_kernel(args.kernel);
  const auto out = args.square ? siso_to_square(kernel, *args.square) : siso_to_mimo(kernel).as_kernel();
  io::save_kernel(out, args.output);
  ordered_json j;
  j["period"] = out.period();
  j["dims"] = {out.n_out(), out.n_in()};
  j["lag_min"] = out.lag_min();
  j["lag_max"] = out.lag_max();
  return dump(j);
}

std::string run_to_siso(const ToSisoArgs& args, const Globals&) {
  const auto kernel = io::load_kernel(args.kernel);
  const auto out = args.from == "square" ? square_to_siso(kernel) : mimo_to_siso(BlockedMimo::from_kernel(kernel));
  io::save_kernel(out, args.output);
  ordered_json j;
  j["period"] = out.period();
  j["lag_min"] = out.lag_min();
  j["lag_max"] = out.lag_max();
  return dump(j);
}

std::string run_block(const BlockArgs& args, const Globals&) {
  const auto blocked = block_signal(io::load_signal(args.input), args.factor);
  io::save_signal(blocked.signal, args.output);
  ordered_json j;
  j["channels"] = blocked.signal.channel_count();
  j["length"] = blocked.signal.length();
  j["lead_pad"] = blocked.lead_pad;
  j["trail_pad"] = blocked.trail_pad;
  return dump(j);
}

std::string run_serialize(const SerializeArgs& args, const Globals&) {
  const auto out = serialize_signal(io::load_signal(args.input), args.lead_trim, args.trail_trim);
  io::save_signal(out, args.output);
  return {};
}

std::string run_gen(const GenArgs& args, const Globals& globals) {
  const double ts = args.sample_period_s;
  std::optional<Signal> x;
  if (args.kind == "tone") {
    x = tone(args.length, ts, args.frequency_hz * ts, args.amplitude, args.phase, args.channels);
  } else if (args.kind == "noise") {
    std::optional<double> band;
    if (args.band_hz) band = *args.band_hz * ts;
    x = noise(args.length, ts, globals.seed, band, args.channels);
  } else {
    x = chirp(args.length, ts, args.f0_hz * ts, args.f1_hz * ts, args.amplitude);
  }
  io::save_signal(*x, args.output);
  return {};
}

}  // namespace ptv::cli
