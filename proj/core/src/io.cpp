#include "ptv/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "ptv/error.hpp"

namespace ptv::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<char, 4> kKernelMagic{'P', 'T', 'V', 'K'};
constexpr std::uint32_t kKernelVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t b = 0; b < sizeof(U); ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  std::array<unsigned char, sizeof(U)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    fail(ErrorCode::FormatError, "unexpected end of binary data");
  }
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) bits |= static_cast<U>(bytes[b]) << (8 * b);
  return std::bit_cast<T>(bits);
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  return out;
}

fs::path sidecar_path(const fs::path& path) { return fs::path(path.string() + ".json"); }

bool has_extension(const fs::path& path, std::string_view ext) { return path.extension() == ext; }

// Wraps JSON access so malformed documents surface as FormatError.
template <typename F>
auto parse_guard(std::string_view what, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const json::exception& e) {
    fail(ErrorCode::FormatError, std::string(what) + ": " + e.what());
  }
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) fail(ErrorCode::FormatError, "bad number '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) fail(ErrorCode::FormatError, "cannot format number");
  return std::string(buf.data(), ptr);
}

void write_kernel_binary(const PeriodicKernel& kernel, std::ostream& out) {
  out.write(kKernelMagic.data(), kKernelMagic.size());
  put_le<std::uint32_t>(out, kKernelVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(kernel.n_out()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(kernel.n_in()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(kernel.period()));
  put_le<std::int64_t>(out, kernel.lag_min());
  put_le<std::int64_t>(out, kernel.lag_max());
  put_le<std::uint32_t>(out, kernel.sample_period_s() ? 1u : 0u);
  put_le<double>(out, kernel.sample_period_s().value_or(0.0));
  for (double v : kernel.taps()) put_le<double>(out, v);
  if (!out) fail(ErrorCode::IoError, "failed writing kernel");
}

PeriodicKernel read_kernel_binary(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kKernelMagic) {
    fail(ErrorCode::FormatError, "not a kernel container (bad magic)");
  }
  if (const auto version = get_le<std::uint32_t>(in); version != kKernelVersion) {
    fail(ErrorCode::FormatError, "unsupported kernel container version " + std::to_string(version));
  }
  KernelShape shape;
  shape.n_out = get_le<std::uint32_t>(in);
  shape.n_in = get_le<std::uint32_t>(in);
  shape.period = get_le<std::uint32_t>(in);
  shape.lags.lo = get_le<std::int64_t>(in);
  shape.lags.hi = get_le<std::int64_t>(in);
  const auto flags = get_le<std::uint32_t>(in);
  const double rate = get_le<double>(in);
  if (shape.lags.lo > shape.lags.hi || shape.n_out == 0 || shape.n_in == 0 || shape.period == 0) {
    fail(ErrorCode::FormatError, "kernel header describes an invalid shape");
  }
  std::vector<double> taps(shape.size());
  for (double& v : taps) v = get_le<double>(in);
  if (in.peek() != std::char_traits<char>::eof()) fail(ErrorCode::FormatError, "trailing bytes after kernel taps");
  std::optional<double> sample_period;
  if (flags & 1u) sample_period = rate;
  return PeriodicKernel(shape, std::move(taps), sample_period);
}

json kernel_to_json(const PeriodicKernel& kernel) {
  json j;
  j["n_out"] = kernel.n_out();
  j["n_in"] = kernel.n_in();
  j["period"] = kernel.period();
  j["lag_min"] = kernel.lag_min();
  j["lag_max"] = kernel.lag_max();
  if (kernel.sample_period_s()) j["sample_period_s"] = *kernel.sample_period_s();
  j["taps"] = std::vector<double>(kernel.taps().begin(), kernel.taps().end());
  return j;
}

PeriodicKernel kernel_from_json(const json& j) {
  return parse_guard("kernel JSON", [&] {
    KernelShape shape{j.at("n_out").get<std::size_t>(), j.at("n_in").get<std::size_t>(),
                      j.at("period").get<std::size_t>(),
                      {j.at("lag_min").get<Lag>(), j.at("lag_max").get<Lag>()}};
    std::optional<double> rate;
    if (j.contains("sample_period_s") && !j["sample_period_s"].is_null()) rate = j["sample_period_s"].get<double>();
    if (shape.lags.lo > shape.lags.hi) fail(ErrorCode::FormatError, "kernel JSON has lag_min > lag_max");
    return PeriodicKernel(shape, j.at("taps").get<std::vector<double>>(), rate);
  });
}

void save_kernel(const PeriodicKernel& kernel, const fs::path& path) {
  auto out = open_out(path);
  if (has_extension(path, ".json")) {
    out << kernel_to_json(kernel).dump() << '\n';
  } else {
    write_kernel_binary(kernel, out);
  }
  if (!out) fail(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

PeriodicKernel load_kernel(const fs::path& path) {
  auto in = open_in(path);
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  const bool binary = in.gcount() == 4 && magic == kKernelMagic;
  in.clear();
  in.seekg(0);
  if (binary) return read_kernel_binary(in);
  return kernel_from_json(parse_guard("kernel JSON", [&] { return json::parse(in); }));
}

json spec_to_json(const ContinuousSpec& spec) {
  json entries = json::array();
  for (const auto& row : spec.entries()) {
    json jrow = json::array();
    for (const auto& cell : row) {
      json jcell = json::array();
      for (const auto& term : cell) {
        json jt;
        jt["harmonics"] = json::array();
        for (const auto& h : term.modulation) jt["harmonics"].push_back({{"k", h.k}, {"re", h.c.real()}, {"im", h.c.imag()}});
        if (const auto* d = std::get_if<DiracDelta>(&term.tau_part)) {
          jt["tau"] = {{"delta", {{"delay_s", d->delay_s}}}};
        } else {
          const auto& f = std::get<FirTable>(term.tau_part);
          jt["tau"] = {{"fir", {{"taps", f.taps}, {"tap_period_s", f.tap_period_s}}}};
        }
        if (term.gate) jt["gate"] = {{"z_a", term.gate->z_a}, {"z_b", term.gate->z_b}};
        jcell.push_back(std::move(jt));
      }
      jrow.push_back(std::move(jcell));
    }
    entries.push_back(std::move(jrow));
  }
  return {{"n_out", spec.n_out()}, {"n_in", spec.n_in()}, {"period_s", spec.period_s()}, {"entries", entries}};
}

ContinuousSpec spec_from_json(const json& j) {
  return parse_guard("spec JSON", [&] {
    std::vector<std::vector<std::vector<SeparableTerm>>> entries;
    for (const auto& jrow : j.at("entries")) {
      auto& row = entries.emplace_back();
      for (const auto& jcell : jrow) {
        auto& cell = row.emplace_back();
        for (const auto& jt : jcell) {
          SeparableTerm term;
          if (jt.contains("harmonics")) {
            term.modulation.clear();
            for (const auto& h : jt.at("harmonics")) {
              term.modulation.push_back({h.at("k").get<int>(), {h.value("re", 0.0), h.value("im", 0.0)}});
            }
          }
          const json& tau = jt.at("tau");
          if (tau.contains("delta")) {
            term.tau_part = DiracDelta{tau.at("delta").value("delay_s", 0.0)};
          } else if (tau.contains("fir")) {
            const json& f = tau.at("fir");
            term.tau_part = FirTable{f.at("taps").get<std::vector<double>>(), f.at("tap_period_s").get<double>()};
          } else {
            fail(ErrorCode::FormatError, "term tau must be 'delta' or 'fir'");
          }
          if (jt.contains("gate") && !jt["gate"].is_null()) {
            term.gate = Gate{jt["gate"].at("z_a").get<double>(), jt["gate"].at("z_b").get<double>()};
          }
          cell.push_back(std::move(term));
        }
      }
    }
    return ContinuousSpec(j.at("n_out").get<std::size_t>(), j.at("n_in").get<std::size_t>(),
                          j.at("period_s").get<double>(), std::move(entries));
  });
}

json read_json_file(const fs::path& path) {
  auto in = open_in(path);
  return parse_guard("JSON file '" + path.string() + "'", [&] { return json::parse(in); });
}

void write_text_file(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) fail(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

ContinuousSpec load_spec(const fs::path& path) { return spec_from_json(read_json_file(path)); }

Circuit circuit_from_json(const json& j, const fs::path& base_dir) {
  return parse_guard("circuit JSON", [&] {
    Circuit circuit;
    if (j.contains("sample_period_s")) circuit.sample_period_s = j["sample_period_s"].get<double>();
    if (j.contains("lag_window")) {
      const auto w = j["lag_window"].get<std::vector<Lag>>();
      if (w.size() != 2 || w[0] > w[1]) fail(ErrorCode::FormatError, "lag_window must be [lo, hi]");
      circuit.spec_window = {w[0], w[1]};
    }
    if (j.contains("tail_tolerance")) circuit.discretize_options.tail_tolerance = j["tail_tolerance"].get<double>();

    for (const auto& jn : j.at("nodes")) {
      const auto kind = jn.at("kind").get<std::string>();
      const auto payload = [&]() -> json {
        if (jn.contains("payload")) return jn["payload"];
        if (jn.contains("path")) return read_json_file(base_dir / jn["path"].get<std::string>());
        fail(ErrorCode::FormatError, "node needs a payload or a path");
      };
      CircuitNode node{jn.at("id").get<std::string>(), FirBlock{}};
      if (kind == "kernel") {
        if (jn.contains("path")) {
          node.block = load_kernel(base_dir / jn["path"].get<std::string>());
        } else {
          node.block = kernel_from_json(jn.at("payload"));
        }
      } else if (kind == "spec") {
        node.block = spec_from_json(payload());
      } else if (kind == "fir") {
        const json p = payload();
        node.block = FirBlock{p.at("taps").get<std::vector<double>>(), p.value("first_lag", Lag{0})};
      } else {
        fail(ErrorCode::FormatError, "unknown node kind '" + kind + "'");
      }
      circuit.nodes.push_back(std::move(node));
    }
    if (j.contains("edges")) {
      for (const auto& je : j["edges"]) circuit.edges.emplace_back(je.at("from").get<std::string>(), je.at("to").get<std::string>());
    }
    return circuit;
  });
}

Circuit load_circuit(const fs::path& path) { return circuit_from_json(read_json_file(path), path.parent_path()); }

void write_signal_csv(const Signal& signal, std::ostream& out) {
  out << 't';
  for (std::size_t c = 0; c < signal.channel_count(); ++c) out << ",ch" << c;
  out << '\n';
  for (std::size_t k = 0; k < signal.length(); ++k) {
    const auto index = signal.origin_index() + static_cast<std::int64_t>(k);
    out << format_double(static_cast<double>(index) * signal.sample_period_s());
    for (std::size_t c = 0; c < signal.channel_count(); ++c) out << ',' << format_double(signal.channel(c)[k]);
    out << '\n';
  }
}

Signal read_signal_csv(std::istream& in, std::optional<double> sample_period_hint) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::FormatError, "empty CSV signal");
  const auto header = split_commas(line);
  if (header.empty() || header[0] != "t") fail(ErrorCode::FormatError, "CSV header must start with 't'");
  const std::size_t channels = header.size() - 1;
  std::vector<double> times;
  std::vector<std::vector<double>> samples(channels);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_commas(line);
    if (cells.size() != channels + 1) fail(ErrorCode::FormatError, "CSV row has the wrong number of columns");
    times.push_back(parse_double(cells[0]));
    for (std::size_t c = 0; c < channels; ++c) samples[c].push_back(parse_double(cells[c + 1]));
  }
  double period = 0.0;
  if (times.size() >= 2) {
    period = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  } else if (sample_period_hint) {
    period = *sample_period_hint;
  } else {
    fail(ErrorCode::FormatError, "cannot infer the sample period from fewer than two CSV rows");
  }
  if (!(period > 0.0)) fail(ErrorCode::FormatError, "CSV time column must increase");
  const auto origin = times.empty() ? std::int64_t{0} : static_cast<std::int64_t>(std::llround(times.front() / period));
  return Signal(period, std::move(samples), origin);
}

void save_signal(const Signal& signal, const fs::path& path) {
  if (has_extension(path, ".csv")) {
    auto out = open_out(path);
    write_signal_csv(signal, out);
    if (!out) fail(ErrorCode::IoError, "failed writing '" + path.string() + "'");
    return;
  }
  {
    auto out = open_out(path);
    for (std::size_t k = 0; k < signal.length(); ++k)
      for (std::size_t c = 0; c < signal.channel_count(); ++c) put_le<double>(out, signal.channel(c)[k]);
    if (!out) fail(ErrorCode::IoError, "failed writing '" + path.string() + "'");
  }
  const json sidecar{{"channels", signal.channel_count()},
                     {"sample_period_s", signal.sample_period_s()},
                     {"origin_index", signal.origin_index()}};
  write_text_file(sidecar_path(path), sidecar.dump() + "\n");
}

Signal load_signal(const fs::path& path, std::optional<double> sample_period_hint) {
  if (has_extension(path, ".csv")) {
    auto in = open_in(path);
    return read_signal_csv(in, sample_period_hint);
  }
  const json sidecar = read_json_file(sidecar_path(path));
  return parse_guard("signal sidecar", [&] {
    const auto channels = sidecar.at("channels").get<std::size_t>();
    if (channels == 0) fail(ErrorCode::FormatError, "signal sidecar declares zero channels");
    const auto bytes = fs::file_size(path);
    if (bytes % (8 * channels) != 0) fail(ErrorCode::FormatError, "raw signal size is not a whole number of frames");
    const std::size_t length = bytes / (8 * channels);
    auto in = open_in(path);
    std::vector<std::vector<double>> samples(channels, std::vector<double>(length));
    for (std::size_t k = 0; k < length; ++k)
      for (std::size_t c = 0; c < channels; ++c) samples[c][k] = get_le<double>(in);
    return Signal(sidecar.at("sample_period_s").get<double>(), std::move(samples),
                  sidecar.value("origin_index", std::int64_t{0}));
  });
}

void write_spectrum_csv(const HybridSpectrum& spectrum, std::ostream& out) {
  out << "i,j,k,f,re,im\n";
  for (std::size_t i = 0; i < spectrum.n_out; ++i)
    for (std::size_t j = 0; j < spectrum.n_in; ++j)
      for (std::size_t k_idx = 0; k_idx < spectrum.period; ++k_idx)
        for (std::size_t l = 0; l < spectrum.grid_size; ++l) {
          const auto v = spectrum.value(i, j, k_idx, l);
          out << i << ',' << j << ',' << spectrum.harmonic_axis[k_idx] << ',' << format_double(spectrum.freq_axis[l])
              << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
        }
}

}  // namespace ptv::io
