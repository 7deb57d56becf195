#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ptv::cli {

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::optional<double> tolerance;
};

struct BuildArgs {
  std::string spec;
  std::string output;
  double sample_period_s = 1.0;
  std::int64_t lag_min = -16;
  std::int64_t lag_max = 16;
  double input_band_hz = 0.0;
  int truncation_order = 64;
};

struct ApplyArgs {
  std::string kernel;
  std::string input;
  std::string output;
};

struct ComposeArgs {
  std::string mode;
  std::vector<std::string> kernels;
  std::string circuit;
  std::string output;
};

struct BandwidthArgs {
  std::string kernel;
  double input_band = 0.0;
  std::optional<std::size_t> grid;
};

struct SpectrumArgs {
  std::string kernel;
  std::string signal;
  std::optional<std::size_t> grid;
  std::string output;
};

struct InvertArgs {
  std::string kernel;
  std::string output;
  std::string report;
  std::optional<std::size_t> fft_size;
  double cond_limit = 1e8;
  std::size_t max_fft_size = std::size_t{1} << 16;
};

struct ToMimoArgs {
  std::string kernel;
  std::string output;
  std::optional<std::size_t> square;
};

struct ToSisoArgs {
  std::string kernel;
  std::string output;
  std::string from = "mimo";
};

struct BlockArgs {
  std::string input;
  std::string output;
  std::size_t factor = 1;
};

struct SerializeArgs {
  std::string input;
  std::string output;
  std::size_t lead_trim = 0;
  std::size_t trail_trim = 0;
};

struct GenArgs {
  std::string kind;
  std::string output;
  std::size_t length = 1024;
  double sample_period_s = 1.0;
  double frequency_hz = 0.05;
  double amplitude = 1.0;
  double phase = 0.0;
  std::size_t channels = 1;
  std::optional<double> band_hz;
  double f0_hz = 0.0;
  double f1_hz = 0.25;
};

// Each command writes its files and returns the text printed on stdout.
std::string run_build(const BuildArgs& args, const Globals& globals);
std::string run_apply(const ApplyArgs& args, const Globals& globals);
std::string run_compose(const ComposeArgs& args, const Globals& globals);
std::string run_bandwidth(const BandwidthArgs& args, const Globals& globals);
std::string run_spectrum(const SpectrumArgs& args, const Globals& globals);
std::string run_invert(const InvertArgs& args, const Globals& globals);
std::string run_to_mimo(const ToMimoArgs& args, const Globals& globals);
std::string run_to_siso(const ToSisoArgs& args, const Globals& globals);
std::string run_block(const BlockArgs& args, const Globals& globals);
std::string run_serialize(const SerializeArgs& args, const Globals& globals);
std::string run_gen(const GenArgs& args, const Globals& globals);

}  // namespace ptv::cli
