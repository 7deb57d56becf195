#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "ptv/compose.hpp"
#include "ptv/continuous.hpp"
#include "ptv/kernel.hpp"
#include "ptv/signal.hpp"
#include "ptv/spectrum.hpp"

namespace ptv::io {

// Kernel container, little-endian:
//   "PTVK" | u32 version=1 | u32 n_out | u32 n_in | u32 period | i64 lag_min | i64 lag_max
//   | u32 flags (bit 0: sample period present) | f64 sample_period_s | f64 taps[(i, j, p, m)]
void write_kernel_binary(const PeriodicKernel& kernel, std::ostream& out);
PeriodicKernel read_kernel_binary(std::istream& in);

nlohmann::json kernel_to_json(const PeriodicKernel& kernel);
PeriodicKernel kernel_from_json(const nlohmann::json& j);

/// `.json` paths use the JSON form; anything else the binary container.
void save_kernel(const PeriodicKernel& kernel, const std::filesystem::path& path);
/// Detects the binary container by its magic, JSON otherwise.
PeriodicKernel load_kernel(const std::filesystem::path& path);

nlohmann::json spec_to_json(const ContinuousSpec& spec);
ContinuousSpec spec_from_json(const nlohmann::json& j);
ContinuousSpec load_spec(const std::filesystem::path& path);

/// Node `path` entries resolve relative to `base_dir`.
Circuit circuit_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
Circuit load_circuit(const std::filesystem::path& path);

/// Header `t,ch0,ch1,...`; t = (origin_index + k) * sample_period_s.
void write_signal_csv(const Signal& signal, std::ostream& out);
/// The sample period comes from the t column, or `sample_period_hint` for single-row files.
Signal read_signal_csv(std::istream& in, std::optional<double> sample_period_hint = std::nullopt);

/// `.csv` paths use CSV; anything else raw little-endian f64 frames plus a `<path>.json` sidecar.
void save_signal(const Signal& signal, const std::filesystem::path& path);
Signal load_signal(const std::filesystem::path& path, std::optional<double> sample_period_hint = std::nullopt);

/// Rows `i,j,k,f,re,im`.
void write_spectrum_csv(const HybridSpectrum& spectrum, std::ostream& out);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ptv::io
