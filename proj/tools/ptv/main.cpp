#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ptv/error.hpp"

namespace {

constexpr int kUsageExit = 64;
constexpr int kInternalExit = 70;

using namespace ptv::cli;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodically time-variant linear systems: build, compose, analyze, invert."};
  app.name("ptv");
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  app.add_option("--seed", globals.seed, "Random seed for generated signals")->capture_default_str();
  app.add_option("--threads", globals.threads, "Worker threads for kernel application")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tolerance", globals.tolerance,
                 "Tail tolerance (build), energy tolerance (bandwidth) or residual tolerance (invert)");

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Discretize a continuous spec into a kernel");
  build_cmd->add_option("spec", build.spec, "Spec JSON")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("-o,--output", build.output, "Kernel file (.json or binary)")->required();
  build_cmd->add_option("-s,--sample-period", build.sample_period_s, "Sample period T_s in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  build_cmd->add_option("--lag-min", build.lag_min)->capture_default_str();
  build_cmd->add_option("--lag-max", build.lag_max)->capture_default_str();
  build_cmd->add_option("--input-band", build.input_band_hz, "Input bandwidth B_x in Hz")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  build_cmd->add_option("--truncation-order", build.truncation_order, "Harmonic order reported for gated terms")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  ApplyArgs apply;
  auto* apply_cmd = app.add_subcommand("apply", "Run a kernel over a signal");
  apply_cmd->add_option("kernel", apply.kernel)->required()->check(CLI::ExistingFile);
  apply_cmd->add_option("input", apply.input)->required()->check(CLI::ExistingFile);
  apply_cmd->add_option("-o,--output", apply.output)->required();

  ComposeArgs compose;
  auto* compose_cmd = app.add_subcommand("compose", "Combine kernels");
  compose_cmd->add_option("mode", compose.mode, "series | parallel | circuit")
      ->required()
      ->check(CLI::IsMember({"series", "parallel", "circuit"}));
  compose_cmd->add_option("inputs", compose.kernels, "Kernel files in signal-flow order, or one circuit JSON")
      ->required()
      ->check(CLI::ExistingFile);
  compose_cmd->add_option("-o,--output", compose.output)->required();

  BandwidthArgs bandwidth;
  auto* bandwidth_cmd = app.add_subcommand("bandwidth", "Variation, linear and output bandwidth report");
  bandwidth_cmd->add_option("kernel", bandwidth.kernel)->required()->check(CLI::ExistingFile);
  bandwidth_cmd->add_option("--input-band", bandwidth.input_band, "B_x in Hz, or cycles/sample without a rate")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  bandwidth_cmd->add_option("--grid", bandwidth.grid, "Lag-axis DFT size");

  SpectrumArgs spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Hybrid spectrum of a kernel or DFT of a signal as CSV");
  auto* spec_kernel = spectrum_cmd->add_option("--kernel", spectrum.kernel)->check(CLI::ExistingFile);
  auto* spec_signal = spectrum_cmd->add_option("--signal", spectrum.signal)->check(CLI::ExistingFile);
  spec_kernel->excludes(spec_signal);
  spectrum_cmd->add_option("--grid", spectrum.grid, "Lag-axis DFT size");
  spectrum_cmd->add_option("-o,--output", spectrum.output, "CSV path; stdout when omitted");

  InvertArgs invert;
  auto* invert_cmd = app.add_subcommand("invert", "FIR inverse of a SISO or square kernel");
  invert_cmd->add_option("kernel", invert.kernel)->required()->check(CLI::ExistingFile);
  invert_cmd->add_option("-o,--output", invert.output)->required();
  invert_cmd->add_option("--report", invert.report, "Also write the JSON report here");
  invert_cmd->add_option("--fft-size", invert.fft_size);
  invert_cmd->add_option("--cond-limit", invert.cond_limit)->capture_default_str();
  invert_cmd->add_option("--max-fft-size", invert.max_fft_size)->capture_default_str();

  ToMimoArgs to_mimo;
  auto* to_mimo_cmd = app.add_subcommand("to-mimo", "Block a SISO kernel into a time-invariant MIMO kernel");
  to_mimo_cmd->add_option("kernel", to_mimo.kernel)->required()->check(CLI::ExistingFile);
  to_mimo_cmd->add_option("-o,--output", to_mimo.output)->required();
  to_mimo_cmd->add_option("--square", to_mimo.square, "Split into an N x N kernel of period K/N instead")
      ->check(CLI::PositiveNumber);

  ToSisoArgs to_siso;
  auto* to_siso_cmd = app.add_subcommand("to-siso", "Unblock a MIMO kernel or serialize a square kernel");
  to_siso_cmd->add_option("kernel", to_siso.kernel)->required()->check(CLI::ExistingFile);
  to_siso_cmd->add_option("-o,--output", to_siso.output)->required();
  to_siso_cmd->add_option("--from", to_siso.from)->check(CLI::IsMember({"mimo", "square"}))->capture_default_str();

  BlockArgs block;
  auto* block_cmd = app.add_subcommand("block", "Reshape a scalar signal into K channels");
  block_cmd->add_option("input", block.input)->required()->check(CLI::ExistingFile);
  block_cmd->add_option("-o,--output", block.output)->required();
  block_cmd->add_option("-k,--factor", block.factor)->required()->check(CLI::PositiveNumber);

  SerializeArgs serialize;
  auto* serialize_cmd = app.add_subcommand("serialize", "Interleave channels into one stream");
  serialize_cmd->add_option("input", serialize.input)->required()->check(CLI::ExistingFile);
  serialize_cmd->add_option("-o,--output", serialize.output)->required();
  serialize_cmd->add_option("--lead-trim", serialize.lead_trim)->capture_default_str();
  serialize_cmd->add_option("--trail-trim", serialize.trail_trim)->capture_default_str();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a test signal");
  gen_cmd->add_option("kind", gen.kind)->required()->check(CLI::IsMember({"tone", "noise", "chirp"}));
  gen_cmd->add_option("-o,--output", gen.output)->required();
  gen_cmd->add_option("-n,--length", gen.length)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("-s,--sample-period", gen.sample_period_s)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("-f,--frequency", gen.frequency_hz, "Tone frequency in Hz")->capture_default_str();
  gen_cmd->add_option("--amplitude", gen.amplitude)->capture_default_str();
  gen_cmd->add_option("--phase", gen.phase, "Tone phase in radians")->capture_default_str();
  gen_cmd->add_option("--channels", gen.channels)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--band", gen.band_hz, "Noise band limit in Hz")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--f0", gen.f0_hz, "Chirp start frequency in Hz")->capture_default_str();
  gen_cmd->add_option("--f1", gen.f1_hz, "Chirp end frequency in Hz")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: Usage: " << e.what() << "\n";
    return kUsageExit;
  }

  try {
    std::string out;
    if (*build_cmd) {
      out = run_build(build, globals);
    } else if (*apply_cmd) {
      out = run_apply(apply, globals);
    } else if (*compose_cmd) {
      if (compose.mode == "circuit") {
        if (compose.kernels.size() != 1) {
          std::cerr << "error: Usage: compose circuit takes exactly one circuit file\n";
          return kUsageExit;
        }
        compose.circuit = compose.kernels.front();
      }
      out = run_compose(compose, globals);
    } else if (*bandwidth_cmd) {
      out = run_bandwidth(bandwidth, globals);
    } else if (*spectrum_cmd) {
      if (spectrum.kernel.empty() && spectrum.signal.empty()) {
        std::cerr << "error: Usage: spectrum needs --kernel or --signal\n";
        return kUsageExit;
      }
      out = run_spectrum(spectrum, globals);
    } else if (*invert_cmd) {
      out = run_invert(invert, globals);
    } else if (*to_mimo_cmd) {
      out = run_to_mimo(to_mimo, globals);
    } else if (*to_siso_cmd) {
      out = run_to_siso(to_siso, globals);
    } else if (*block_cmd) {
      out = run_block(block, globals);
    } else if (*serialize_cmd) {
      out = run_serialize(serialize, globals);
    } else if (*gen_cmd) {
      out = run_gen(gen, globals);
    }
    std::cout << out;
    return 0;
  } catch (const ptv::Error& e) {
    std::cerr << "error: " << ptv::error_name(e.code()) << ": " << e.what() << "\n";
    return ptv::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return kInternalExit;
  }
}
