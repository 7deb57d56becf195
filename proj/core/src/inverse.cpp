#include "ptv/inverse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fft.hpp"
#include "ptv/equiv.hpp"
#include "ptv/error.hpp"

namespace ptv {

namespace {

double composition_residual(const BlockedMimo& inverse, const BlockedMimo& system) {
  const BlockedMimo product = mimo_convolve(inverse, system);
  double residual = 0.0;
  for (std::size_t i = 0; i < product.dim(); ++i)
    for (std::size_t k = 0; k < product.dim(); ++k)
      for (Lag n = product.lags().lo; n <= product.lags().hi; ++n) {
        const double target = (i == k && n == 0) ? 1.0 : 0.0;
        residual = std::max(residual, std::abs(product.tap(i, k, n) - target));
      }
  // Lag 0 may fall outside the product window for an all-advance system.
  if (!product.lags().contains(0)) residual = std::max(residual, 1.0);
  return residual;
}

// Drops edge block lags whose taps are all at round-off level.
BlockedMimo trim_negligible(const BlockedMimo& g) {
  double peak = 0.0;
  for (double v : g.taps()) peak = std::max(peak, std::abs(v));
  const double floor = 1e-14 * peak;
  const auto significant = [&](Lag n) {
    for (std::size_t i = 0; i < g.dim(); ++i)
      for (std::size_t j = 0; j < g.dim(); ++j)
        if (std::abs(g.tap(i, j, n)) > floor) return true;
    return false;
  };
  Lag lo = g.lags().lo;
  Lag hi = g.lags().hi;
  while (lo < hi && !significant(lo)) ++lo;
  while (hi > lo && !significant(hi)) --hi;
  BlockedMimo out(g.dim(), {lo, hi});
  std::vector<double> taps(out.taps().size(), 0.0);
  for (std::size_t i = 0; i < g.dim(); ++i)
    for (std::size_t j = 0; j < g.dim(); ++j)
      for (Lag n = lo; n <= hi; ++n) taps[out.index(i, j, n)] = g.tap(i, j, n);
  return BlockedMimo(g.dim(), {lo, hi}, std::move(taps));
}

MimoInverse invert_on_grid(const BlockedMimo& system, std::size_t L, double cond_limit) {
  const std::size_t K = system.dim();
  const auto grid = static_cast<std::int64_t>(L);

  // Transfer matrix entries over the grid: T_ij(l) = sum_n Hbar_ij[n] exp(-j 2 pi l n / L).
  std::vector<std::vector<std::complex<double>>> transfer(K * K);
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) {
      std::vector<std::complex<double>> buf(L);
      for (Lag n = system.lags().lo; n <= system.lags().hi; ++n) buf[static_cast<std::size_t>(pmod(n, grid))] += system.tap(i, j, n);
      transfer[i * K + j] = detail::dft(buf);
    }

  std::vector<std::vector<std::complex<double>>> inverse_bins(K * K, std::vector<std::complex<double>>(L));
  double condition_max = 0.0;
  Eigen::MatrixXcd bin(K, K);
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t i = 0; i < K; ++i)
      for (std::size_t j = 0; j < K; ++j) bin(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = transfer[i * K + j][l];
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(bin);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    const double cond = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    if (!(cond <= cond_limit)) {
      double f = static_cast<double>(l) / static_cast<double>(L);
      if (f >= 0.5) f -= 1.0;
      fail(ErrorCode::NotInvertible, "transfer matrix condition number " + std::to_string(cond) +
                                         " exceeds limit at normalized frequency " + std::to_string(f));
    }
    condition_max = std::max(condition_max, cond);
    const Eigen::MatrixXcd inv = bin.partialPivLu().inverse();
    for (std::size_t i = 0; i < K; ++i)
      for (std::size_t j = 0; j < K; ++j) inverse_bins[i * K + j][l] = inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  // Two-sided taps on [-floor(L/2), L - floor(L/2) - 1].
  const LagWindow lags{-static_cast<Lag>(L / 2), static_cast<Lag>(L - L / 2) - 1};
  BlockedMimo shape_only(K, lags);
  std::vector<double> taps(shape_only.taps().size(), 0.0);
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) {
      const auto g = detail::idft(inverse_bins[i * K + j]);
      for (Lag n = lags.lo; n <= lags.hi; ++n) taps[shape_only.index(i, j, n)] = g[static_cast<std::size_t>(pmod(n, grid))].real();
    }
  BlockedMimo inverse = trim_negligible(BlockedMimo(K, lags, std::move(taps)));
  const double residual = composition_residual(inverse, system);
  return {std::move(inverse), residual, condition_max, L};
}

}  // namespace

MimoInverse invert_mimo(const BlockedMimo& system, const InverseOptions& options) {
  if (!(options.cond_limit > 1.0)) fail(ErrorCode::InvalidArgument, "condition limit must exceed 1");
  const std::size_t window = system.lags().size();
  std::size_t L = options.fft_size.value_or(std::bit_ceil(std::max<std::size_t>(256, 8 * window)));
  if (L < 4 * window) {
    fail(ErrorCode::GridTooSmall, "fft size " + std::to_string(L) + " is below 4 x the " +
                                      std::to_string(window) + "-lag window");
  }
  const std::size_t max_size = std::max(L, options.max_fft_size);
  for (;;) {
    MimoInverse result = invert_on_grid(system, L, options.cond_limit);
    if (result.residual <= options.residual_tolerance) return result;
    if (2 * L > max_size) {
      fail(ErrorCode::GridTooSmall, "composition residual " + std::to_string(result.residual) +
                                        " exceeds tolerance at fft size " + std::to_string(L));
    }
    L *= 2;
  }
}

KernelInverse invert_siso(const PeriodicKernel& h, const InverseOptions& options) {
  if (!h.is_siso()) fail(ErrorCode::NotSiso, "invert_siso needs a single-input single-output kernel");
  MimoInverse blocked = invert_mimo(siso_to_mimo(h), options);
  PeriodicKernel inverse = mimo_to_siso(blocked.inverse).with_sample_period(h.sample_period_s());
  return {std::move(inverse), blocked.residual, blocked.condition_max, blocked.fft_size};
}

KernelInverse invert_square(const PeriodicKernel& h, const InverseOptions& options) {
  if (!h.is_square()) fail(ErrorCode::NotSquare, "invert_square needs as many inputs as outputs");
  KernelInverse serial = invert_siso(square_to_siso(h), options);
  serial.inverse = siso_to_square(serial.inverse, h.n_out()).with_sample_period(h.sample_period_s());
  return serial;
}

}  // namespace ptv
