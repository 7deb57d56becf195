#include <doctest.h>

#include <complex>
#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "ptv/compose.hpp"
#include "ptv/continuous.hpp"
#include "ptv/error.hpp"

using namespace ptv;
using std::numbers::pi;

namespace {

const std::complex<double> J{0.0, 1.0};

PeriodicKernel delay(Lag d) { return lift_lti(std::vector<double>{1.0}, 1, d); }

PeriodicKernel sample_waveform(std::size_t period, double (*fn)(double)) {
  std::vector<double> taps(period);
  for (std::size_t p = 0; p < period; ++p) taps[p] = fn(2 * pi * static_cast<double>(p) / static_cast<double>(period));
  return PeriodicKernel({1, 1, period, {0, 0}}, std::move(taps));
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

TEST_CASE("lcm period") {
  CHECK(lcm_period(6, 4) == 12);
  CHECK(lcm_period(5, 5) == 5);
  CHECK(lcm_period(1, 7) == 7);
  CHECK(discrete_period(2 * pi, (4 * pi / 3) / 4) == 6);
  CHECK(discrete_period(4 * pi / 3, (4 * pi / 3) / 4) == 4);
}

TEST_CASE("parallel composition") {
  CHECK(parallel(PeriodicKernel::identity(1), PeriodicKernel::identity(1)) == PeriodicKernel::identity(2));

  oracle::Rng rng(20);
  const auto h = oracle::random_kernel(rng, 1, 1, 2, {-1, 1});
  const auto g = oracle::random_kernel(rng, 1, 1, 3, {0, 3});
  const auto s = parallel(h, g);
  CHECK(s.period() == 6);
  CHECK(s.lags() == LagWindow{-1, 3});
  for (std::size_t p = 0; p < 6; ++p)
    for (Lag m = -1; m <= 3; ++m) {
      CHECK(s.tap(0, 1, p, m) == 0.0);
      CHECK(s.tap(1, 0, p, m) == 0.0);
      CHECK(s.tap(0, 0, p, m) == h.tap(0, 0, p % 2, m));
      CHECK(s.tap(1, 1, p, m) == g.tap(0, 0, p % 3, m));
    }

  const auto x = oracle::random_signal(rng, 2, 90, -4);
  const auto y = apply(s, x);
  const auto y0 = apply(h, Signal(1.0, {x.channels()[0]}, -4));
  const auto y1 = apply(g, Signal(1.0, {x.channels()[1]}, -4));
  CHECK(oracle::max_abs_diff(y.channel(0), y0.channel(0)) <= 1e-15);
  CHECK(oracle::max_abs_diff(y.channel(1), y1.channel(0)) <= 1e-15);
}

TEST_CASE("series identities and delays") {
  oracle::Rng rng(21);
  const auto h = oracle::random_kernel(rng, 2, 2, 3, {-2, 2});
  CHECK(series(PeriodicKernel::identity(2), h).trimmed() == h.trimmed());
  CHECK(series(h, PeriodicKernel::identity(2)).trimmed() == h.trimmed());
  CHECK(series(delay(1), delay(1)).trimmed() == delay(2));
}

TEST_CASE("series errors") {
  CHECK(code_of([] { (void)series(PeriodicKernel::identity(2), PeriodicKernel::identity(3)); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(code_of([] {
          (void)series(PeriodicKernel::identity(1, 1, 1.0), PeriodicKernel::identity(1, 1, 2.0));
        }) == ErrorCode::RateMismatch);
  CHECK(code_of([] {
          (void)parallel(PeriodicKernel::identity(1, 1, 1.0), PeriodicKernel::identity(1, 1, 2.0));
        }) == ErrorCode::RateMismatch);
}

TEST_CASE("sine after cosine is the pointwise product") {
  const auto s = sample_waveform(8, [](double a) { return std::sin(a); });
  const auto c = sample_waveform(8, [](double a) { return std::cos(a); });
  const auto sc = series(c, s);
  oracle::Rng rng(22);
  const auto x = oracle::random_signal(rng, 1, 64, 3);
  const auto y = apply(sc, x);
  for (std::size_t k = 0; k < x.length(); ++k) {
    const double a = 2 * pi * static_cast<double>(oracle::floor_mod(3 + static_cast<std::int64_t>(k), 8)) / 8.0;
    CHECK(std::abs(y.channel(0)[k] - x.channel(0)[k] * std::sin(a) * std::cos(a)) <= 1e-15);
  }
}

TEST_CASE("lifted LTI kernels") {
  const std::vector<double> one{1.0};
  CHECK(lift_lti(one, 5) == PeriodicKernel::identity(1, 5));

  oracle::Rng rng(23);
  const std::vector<double> a{0.3, -1.2, 0.7};
  const std::vector<double> b{2.0, 0.1, -0.4, 0.9};
  const auto x = oracle::random_signal(rng, 1, 50);
  CHECK(apply(lift_lti(a, 3), x) == apply(lift_lti(a, 7), x));

  const auto ab = series(lift_lti(a, 4), lift_lti(b, 4));
  const auto want = oracle::convolve(a, b);
  REQUIRE(ab.lags() == LagWindow{0, static_cast<Lag>(want.size() - 1)});
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t m = 0; m < want.size(); ++m)
      CHECK(std::abs(ab.tap(0, 0, p, static_cast<Lag>(m)) - (want[m])) <= 1e-15);
}

TEST_CASE("period law and staged-apply equivalence on random cases") {
  oracle::Rng rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const auto kh = rng.index(1, 8);
    const auto kg = rng.index(1, 8);
    const auto l = rng.index(1, 3);
    const auto h = oracle::random_kernel(rng, l, rng.index(1, 3), kh, oracle::random_window(rng, -4, 4));
    const auto g = oracle::random_kernel(rng, rng.index(1, 3), l, kg, oracle::random_window(rng, -4, 4));
    const auto s = series(h, g);
    CHECK(s.period() == std::lcm(kh, kg));
    CHECK(parallel(h, g).period() == std::lcm(kh, kg));

    const auto x = oracle::random_signal(rng, h.n_in(), 120, rng.integer(-50, 50));
    const auto staged = apply(g, apply(h, x));
    const auto direct = apply(s, x);
    const auto edge = static_cast<std::size_t>(std::max<Lag>({std::abs(s.lag_min()), std::abs(s.lag_max()), 8}));
    CHECK(oracle::rel_max_diff(direct.channels(), staged.channels(), edge, edge) <= 1e-12);
  }
}

TEST_CASE("series is associative") {
  oracle::Rng rng(25);
  for (int trial = 0; trial < 30; ++trial) {
    const auto h = oracle::random_kernel(rng, 2, 1, rng.index(1, 4), oracle::random_window(rng, -2, 2));
    const auto g = oracle::random_kernel(rng, 2, 2, rng.index(1, 4), oracle::random_window(rng, -2, 2));
    const auto f = oracle::random_kernel(rng, 1, 2, rng.index(1, 4), oracle::random_window(rng, -2, 2));
    const auto left = series(series(h, g), f);
    const auto right = series(h, series(g, f));
    REQUIRE(left.shape() == right.shape());
    double scale = 0.0;
    double diff = 0.0;
    for (std::size_t k = 0; k < left.taps().size(); ++k) {
      scale = std::max(scale, std::abs(left.taps()[k]));
      diff = std::max(diff, std::abs(left.taps()[k] - right.taps()[k]));
    }
    CHECK(diff <= 1e-12 * scale);
  }
}

TEST_CASE("routing kernel copies and sums") {
  const auto r = routing_kernel(3, {{0}, {0, 2}, {}});
  const Signal x(1.0, {{1.0, 2.0}, {10.0, 20.0}, {100.0, 200.0}});
  const auto y = apply(r, x);
  CHECK(y.channels() == std::vector<std::vector<double>>{{1.0, 2.0}, {101.0, 202.0}, {0.0, 0.0}});
  CHECK_THROWS_AS(routing_kernel(2, {{3}}), Error);
}

TEST_CASE("single-node circuit returns the node kernel") {
  oracle::Rng rng(26);
  const auto h = oracle::random_kernel(rng, 2, 2, 3, {-1, 2});
  Circuit c;
  c.nodes.push_back({"h", h});
  CHECK(reduce_circuit(c).trimmed() == h.trimmed());
}

TEST_CASE("parallel-only circuit equals parallel()") {
  oracle::Rng rng(27);
  const auto h = oracle::random_kernel(rng, 1, 1, 2, {0, 2});
  const auto g = oracle::random_kernel(rng, 2, 1, 3, {-1, 1});
  Circuit c;
  c.nodes.push_back({"h", h});
  c.nodes.push_back({"g", g});
  CHECK(reduce_circuit(c).trimmed() == parallel(h, g).trimmed());
}

TEST_CASE("circuit structure errors") {
  Circuit cyc;
  cyc.nodes.push_back({"a", PeriodicKernel::identity(1)});
  cyc.nodes.push_back({"b", PeriodicKernel::identity(1)});
  cyc.edges = {{"a", "b"}, {"b", "a"}};
  CHECK(code_of([&] { (void)reduce_circuit(cyc); }) == ErrorCode::CyclicGraph);

  Circuit unknown;
  unknown.nodes.push_back({"a", PeriodicKernel::identity(1)});
  unknown.edges = {{"a", "z"}};
  CHECK(code_of([&] { (void)reduce_circuit(unknown); }) == ErrorCode::InvalidArgument);

  Circuit empty;
  CHECK(code_of([&] { (void)reduce_circuit(empty); }) == ErrorCode::InvalidArgument);

  Circuit incommensurate;
  incommensurate.sample_period_s = 0.3;
  incommensurate.nodes.push_back({"m", build_modulator({{-1, 0.5}, {1, 0.5}}, 1.0)});
  CHECK(code_of([&] { (void)reduce_circuit(incommensurate); }) == ErrorCode::IncommensuratePeriods);

  Circuit width;
  width.nodes.push_back({"a", PeriodicKernel::identity(2)});
  width.nodes.push_back({"b", PeriodicKernel::identity(1)});
  width.edges = {{"a", "b"}};
  CHECK(code_of([&] { (void)reduce_circuit(width); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("split, branch and sum circuit matches block-by-block simulation") {
  oracle::Rng rng(28);
  const auto a = oracle::random_kernel(rng, 1, 1, 2, {0, 3});
  const auto b = oracle::random_kernel(rng, 1, 1, 3, {-2, 1});
  const auto c = oracle::random_kernel(rng, 1, 1, 1, {0, 2});
  Circuit circuit;
  circuit.nodes = {{"in", PeriodicKernel::identity(1)}, {"a", a}, {"b", b}, {"out", c}};
  circuit.edges = {{"in", "a"}, {"in", "b"}, {"a", "out"}, {"b", "out"}};
  const auto s = reduce_circuit(circuit);
  CHECK(s.period() == 6);
  const auto x = oracle::random_signal(rng, 1, 200, -17);
  const auto ya = apply(a, x);
  const auto yb = apply(b, x);
  std::vector<double> sum(x.length());
  for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = ya.channel(0)[k] + yb.channel(0)[k];
  const auto want = apply(c, Signal(1.0, {sum}, -17));
  CHECK(oracle::rel_max_diff(apply(s, x).channels(), want.channels(), 8, 8) <= 1e-12);
}

TEST_CASE("circuit with continuous and FIR nodes") {
  const double ts = 1.0 / 6.0;
  Circuit circuit;
  circuit.sample_period_s = ts;
  circuit.spec_window = {0, 0};
  circuit.nodes = {{"in", FirBlock{{1.0}, 0}},
                   {"lo", build_modulator({{-1, 0.5 * J}, {1, -0.5 * J}}, 1.0)},
                   {"fir", FirBlock{{0.5, 0.25}, 1}}};
  circuit.edges = {{"in", "lo"}, {"lo", "fir"}};
  const auto s = reduce_circuit(circuit);
  CHECK(s.period() == 6);
  REQUIRE(s.sample_period_s());
  CHECK(*s.sample_period_s() == ts);
  // y[t] = 0.5 x[t-1] sin(2 pi (t-1)/6) + 0.25 x[t-2] sin(2 pi (t-2)/6)
  for (std::size_t p = 0; p < 6; ++p) {
    CHECK(std::abs(s.tap(0, 0, p, 1) - (0.5 * std::sin(2 * pi * ((p + 5) % 6) / 6.0))) <= 1e-15);
    CHECK(std::abs(s.tap(0, 0, p, 2) - (0.25 * std::sin(2 * pi * ((p + 4) % 6) / 6.0))) <= 1e-15);
  }
}
