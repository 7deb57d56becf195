#pragma once

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace ptv::detail {

// Unnormalized forward DFT: X[q] = sum_n x[n] exp(-j 2 pi q n / N).
inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
  if (x.size() <= 1) return x;
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> out;
  fft.fwd(out, x);
  return out;
}

// Inverse DFT including the 1/N factor.
inline std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& x) {
  if (x.size() <= 1) return x;
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> out;
  fft.inv(out, x);
  return out;
}

}  // namespace ptv::detail
