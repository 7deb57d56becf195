#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "ptv/signal.hpp"

namespace ptv {

/// amplitude * cos(2 pi f n + phase) with f in cycles/sample, identical on every channel.
Signal tone(std::size_t length, double sample_period_s, double frequency, double amplitude = 1.0,
            double phase = 0.0, std::size_t channels = 1);

/// Gaussian noise with unit RMS per channel. With `band`, every DFT bin above `band`
/// cycles/sample is removed, which leaves a signal that is exactly band-limited over
/// its (periodic) length.
Signal noise(std::size_t length, double sample_period_s, std::uint64_t seed,
             std::optional<double> band = std::nullopt, std::size_t channels = 1);

/// Linear sweep from f0 to f1 cycles/sample over the signal length.
Signal chirp(std::size_t length, double sample_period_s, double f0, double f1, double amplitude = 1.0);

}  // namespace ptv
