#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ptv/continuous.hpp"
#include "ptv/kernel.hpp"

namespace ptv {

std::size_t lcm_period(std::size_t k_h, std::size_t k_g);

/// Block-diagonal stacking: h maps the leading inputs to the leading outputs, g the rest.
PeriodicKernel parallel(const PeriodicKernel& h, const PeriodicKernel& g);

/// Cascade with h first: s(p, m) = sum_l sum_mu g(p, mu) h(p - mu, m - mu).
PeriodicKernel series(const PeriodicKernel& h, const PeriodicKernel& g);

/// Time-invariant SISO FIR (taps at lags first_lag, first_lag + 1, ...) held constant over `period` phases.
PeriodicKernel lift_lti(std::span<const double> fir, std::size_t period, Lag first_lag = 0,
                        std::optional<double> sample_period_s = std::nullopt);

/// Memoryless phase-constant router: output r = sum of inputs listed in sources[r].
PeriodicKernel routing_kernel(std::size_t n_in, const std::vector<std::vector<std::size_t>>& sources);

/// SISO FIR block of a circuit, taps at lags first_lag, first_lag + 1, ...
struct FirBlock {
  std::vector<double> taps;
  Lag first_lag = 0;
};

struct CircuitNode {
  std::string id;
  std::variant<PeriodicKernel, ContinuousSpec, FirBlock> block;
};

/// Feed-forward block diagram. Fan-out copies a node's outputs and fan-in sums them.
/// Nodes without predecessors take consecutive slices of the external input and nodes
/// without successors provide consecutive slices of the external output, in node order.
struct Circuit {
  std::vector<CircuitNode> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  /// Common rate used to discretize ContinuousSpec and FirBlock nodes.
  std::optional<double> sample_period_s;
  LagWindow spec_window{-16, 16};
  DiscretizeOptions discretize_options{};
};

/// Folds the circuit into one equivalent kernel using series/parallel composition
/// with explicit copy and sum kernels.
PeriodicKernel reduce_circuit(const Circuit& circuit);

}  // namespace ptv
