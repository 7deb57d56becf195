#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ptv {

/// Uniformly sampled multichannel real signal.
///
/// Sample `k` of a channel sits at absolute time index `origin_index() + k`.
/// Samples outside the stored range read as zero.
class Signal {
 public:
  Signal(double sample_period_s, std::vector<std::vector<double>> channels,
         std::int64_t origin_index = 0);

  /// All-zero signal with `channels` channels of `length` samples.
  static Signal zeros(double sample_period_s, std::size_t channels, std::size_t length,
                      std::int64_t origin_index = 0);

  double sample_period_s() const noexcept { return sample_period_s_; }
  std::int64_t origin_index() const noexcept { return origin_index_; }
  std::size_t channel_count() const noexcept { return channels_.size(); }
  std::size_t length() const noexcept { return channels_.empty() ? 0 : channels_.front().size(); }

  std::span<const double> channel(std::size_t c) const { return channels_.at(c); }
  const std::vector<std::vector<double>>& channels() const noexcept { return channels_; }

  /// Sample of channel `c` at absolute time index `t`; zero outside the stored range.
  double at(std::size_t c, std::int64_t t) const noexcept {
    const std::int64_t k = t - origin_index_;
    if (k < 0 || k >= static_cast<std::int64_t>(length())) return 0.0;
    return channels_[c][static_cast<std::size_t>(k)];
  }

  /// Same samples moved `samples` later in time.
  Signal delayed(std::int64_t samples) const;

  bool operator==(const Signal&) const = default;

 private:
  double sample_period_s_;
  std::vector<std::vector<double>> channels_;
  std::int64_t origin_index_;
};

/// Relative rate comparison used wherever two sample periods must agree.
bool same_rate(double a_s, double b_s) noexcept;

}  // namespace ptv
