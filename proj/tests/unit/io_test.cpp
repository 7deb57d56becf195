#include <doctest.h>

#include <complex>
#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "ptv/continuous.hpp"
#include "ptv/error.hpp"
#include "ptv/io.hpp"
#include "ptv/spectrum.hpp"

using namespace ptv;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "ptv_io_test";
  fs::create_directories(dir);
  return dir / name;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("binary kernel container round trip") {
  oracle::Rng rng(60);
  const auto h = oracle::random_kernel(rng, 2, 3, 4, {-3, 2}, 0.125);
  std::stringstream buf;
  io::write_kernel_binary(h, buf);
  CHECK(buf.str().size() == 4 + 4 * 4 + 8 * 2 + 4 + 8 + 8 * h.taps().size());
  CHECK(buf.str().substr(0, 4) == "PTVK");
  CHECK(io::read_kernel_binary(buf) == h);

  const auto bare = oracle::random_kernel(rng, 1, 1, 1, {0, 0});
  std::stringstream buf2;
  io::write_kernel_binary(bare, buf2);
  CHECK(io::read_kernel_binary(buf2) == bare);
}

TEST_CASE("binary container is little-endian") {
  const PeriodicKernel h({1, 1, 1, {0, 0}}, std::vector<double>{1.0});
  std::stringstream buf;
  io::write_kernel_binary(h, buf);
  const std::string s = buf.str();
  CHECK(static_cast<unsigned char>(s[4]) == 1);
  CHECK(static_cast<unsigned char>(s[5]) == 0);
  // 1.0 = 0x3FF0000000000000, last byte of the tap.
  CHECK(static_cast<unsigned char>(s.back()) == 0x3F);
}

TEST_CASE("truncated or foreign binary data is a format error") {
  oracle::Rng rng(61);
  std::stringstream buf;
  io::write_kernel_binary(oracle::random_kernel(rng, 1, 1, 2, {0, 3}), buf);
  std::string s = buf.str();
  std::stringstream cut(s.substr(0, s.size() - 3));
  CHECK(code_of([&] { (void)io::read_kernel_binary(cut); }) == ErrorCode::FormatError);
  std::stringstream junk("NOPE1234");
  CHECK(code_of([&] { (void)io::read_kernel_binary(junk); }) == ErrorCode::FormatError);
}

TEST_CASE("JSON kernel round trip through files") {
  oracle::Rng rng(62);
  const auto h = oracle::random_kernel(rng, 2, 1, 3, {-1, 2});
  const auto path = scratch("k.json");
  io::save_kernel(h, path);
  CHECK(io::load_kernel(path) == h);
  const auto bin = scratch("k.ptvk");
  io::save_kernel(h.with_sample_period(0.5), bin);
  CHECK(io::load_kernel(bin) == h.with_sample_period(0.5));
  const auto j = io::kernel_to_json(h);
  CHECK(j.at("lag_min") == -1);
  CHECK(j.at("taps").size() == h.taps().size());
  CHECK(code_of([] { (void)io::kernel_from_json(nlohmann::json{{"n_out", 1}}); }) == ErrorCode::FormatError);
  CHECK(code_of([] { (void)io::load_kernel("/nonexistent/kernel.json"); }) == ErrorCode::IoError);
}

TEST_CASE("spec JSON round trip") {
  const std::complex<double> j{0.0, 1.0};
  std::vector<SeparableTerm> terms{
      SeparableTerm{{{-1, 0.5 * j}, {1, -0.5 * j}}, DiracDelta{0.25}, std::nullopt},
      SeparableTerm{{{0, 2.0}}, FirTable{{1.0, -0.5}, 0.5}, Gate{0.1, 0.6}},
  };
  const ContinuousSpec spec(1, 2, 1.0, {{terms, {}}});
  CHECK(io::spec_from_json(io::spec_to_json(spec)) == spec);
  CHECK(io::spec_from_json(io::spec_to_json(build_multiplexer(3, 2.0))) == build_multiplexer(3, 2.0));

  const auto bad = nlohmann::json::parse(R"({"n_out":1,"n_in":1,"period_s":1,"entries":[[[{"tau":{"step":{}}}]]]})");
  CHECK(code_of([&] { (void)io::spec_from_json(bad); }) == ErrorCode::FormatError);
}

TEST_CASE("circuit JSON") {
  const auto j = nlohmann::json::parse(R"({
    "sample_period_s": 0.5,
    "lag_window": [-2, 2],
    "nodes": [
      {"id": "a", "kind": "fir", "payload": {"taps": [1, 2], "first_lag": 1}},
      {"id": "b", "kind": "kernel", "payload": {"n_out": 1, "n_in": 1, "period": 2, "lag_min": 0, "lag_max": 0, "taps": [1, -1]}},
      {"id": "c", "kind": "spec", "payload": {"n_out": 1, "n_in": 1, "period_s": 1.0,
        "entries": [[[{"harmonics": [{"k": 0, "re": 1, "im": 0}], "tau": {"delta": {"delay_s": 0}}}]]]}}
    ],
    "edges": [{"from": "a", "to": "b"}, {"from": "b", "to": "c"}]
  })");
  const auto c = io::circuit_from_json(j);
  CHECK(c.sample_period_s == 0.5);
  CHECK(c.spec_window == LagWindow{-2, 2});
  REQUIRE(c.nodes.size() == 3);
  CHECK(std::get<FirBlock>(c.nodes[0].block).first_lag == 1);
  CHECK(std::holds_alternative<PeriodicKernel>(c.nodes[1].block));
  CHECK(std::holds_alternative<ContinuousSpec>(c.nodes[2].block));
  CHECK(c.edges.size() == 2);

  const auto unknown = nlohmann::json::parse(R"({"nodes":[{"id":"x","kind":"magic","payload":{}}]})");
  CHECK(code_of([&] { (void)io::circuit_from_json(unknown); }) == ErrorCode::FormatError);
}

TEST_CASE("signal CSV round trip") {
  oracle::Rng rng(63);
  const auto x = oracle::random_signal(rng, 3, 25, -4, 0.125);
  std::stringstream buf;
  io::write_signal_csv(x, buf);
  CHECK(buf.str().rfind("t,ch0,ch1,ch2\n", 0) == 0);
  const auto back = io::read_signal_csv(buf);
  CHECK(back.channels() == x.channels());
  CHECK(back.origin_index() == -4);
  CHECK(same_rate(back.sample_period_s(), 0.125));

  std::stringstream one("t,ch0\n0.5,3\n");
  CHECK(code_of([&] { (void)io::read_signal_csv(one); }) == ErrorCode::FormatError);
  std::stringstream one_again("t,ch0\n0.5,3\n");
  const auto single = io::read_signal_csv(one_again, 0.25);
  CHECK(single.origin_index() == 2);
  std::stringstream broken("t,ch0\n0,1\n1,abc\n");
  CHECK(code_of([&] { (void)io::read_signal_csv(broken); }) == ErrorCode::FormatError);
}

TEST_CASE("raw signal with sidecar round trip") {
  oracle::Rng rng(64);
  const auto x = oracle::random_signal(rng, 2, 33, 7, 0.01);
  const auto path = scratch("x.f64");
  io::save_signal(x, path);
  CHECK(fs::file_size(path) == 2 * 33 * 8);
  CHECK(fs::exists(path.string() + ".json"));
  CHECK(io::load_signal(path) == x);
  const auto csv = scratch("x.csv");
  io::save_signal(x, csv);
  CHECK(io::load_signal(csv).channels() == x.channels());
}

TEST_CASE("spectrum CSV rows") {
  const auto s = hybrid_transform(PeriodicKernel::identity(1, 2), 4);
  std::stringstream out;
  io::write_spectrum_csv(s, out);
  std::string line;
  std::getline(out, line);
  CHECK(line == "i,j,k,f,re,im");
  std::size_t rows = 0;
  while (std::getline(out, line)) ++rows;
  CHECK(rows == 2 * 4);
}

TEST_CASE("format_double is shortest round-trip text") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(-2.0) == "-2");
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
