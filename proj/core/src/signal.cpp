#include "ptv/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptv/error.hpp"

namespace ptv {

Signal::Signal(double sample_period_s, std::vector<std::vector<double>> channels,
               std::int64_t origin_index)
    : sample_period_s_(sample_period_s), channels_(std::move(channels)), origin_index_(origin_index) {
  if (!(sample_period_s_ > 0.0) || !std::isfinite(sample_period_s_)) {
    fail(ErrorCode::InvalidArgument, "sample period must be positive and finite");
  }
  for (const auto& ch : channels_) {
    if (ch.size() != channels_.front().size()) {
      fail(ErrorCode::InvalidArgument, "all channels must have the same length");
    }
    for (double v : ch) {
      if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "signal samples must be finite");
    }
  }
}

Signal Signal::zeros(double sample_period_s, std::size_t channels, std::size_t length,
                     std::int64_t origin_index) {
  return Signal(sample_period_s, std::vector<std::vector<double>>(channels, std::vector<double>(length, 0.0)),
                origin_index);
}

Signal Signal::delayed(std::int64_t samples) const {
  Signal out = *this;
  out.origin_index_ += samples;
  return out;
}

bool same_rate(double a_s, double b_s) noexcept {
  return std::abs(a_s - b_s) <= 1e-9 * std::max(std::abs(a_s), std::abs(b_s));
}

}  // namespace ptv
