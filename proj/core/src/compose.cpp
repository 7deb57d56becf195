#include "ptv/compose.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "ptv/error.hpp"

namespace ptv {

namespace {

std::optional<double> merged_rate(const PeriodicKernel& h, const PeriodicKernel& g) {
  const auto& a = h.sample_period_s();
  const auto& b = g.sample_period_s();
  if (a && b && !same_rate(*a, *b)) fail(ErrorCode::RateMismatch, "kernels run at different sample periods");
  return a ? a : b;
}

}  // namespace

std::size_t lcm_period(std::size_t k_h, std::size_t k_g) {
  if (k_h == 0 || k_g == 0) fail(ErrorCode::InvalidArgument, "periods must be >= 1");
  return std::lcm(k_h, k_g);
}

PeriodicKernel parallel(const PeriodicKernel& h, const PeriodicKernel& g) {
  const auto rate = merged_rate(h, g);
  const KernelShape shape{h.n_out() + g.n_out(), h.n_in() + g.n_in(), lcm_period(h.period(), g.period()),
                          window_union(h.lags(), g.lags())};
  std::vector<double> taps(shape.size(), 0.0);
  for (std::size_t p = 0; p < shape.period; ++p) {
    for (std::size_t i = 0; i < h.n_out(); ++i)
      for (std::size_t j = 0; j < h.n_in(); ++j)
        for (Lag m = h.lag_min(); m <= h.lag_max(); ++m)
          taps[shape.index(i, j, p, m)] = h.tap(i, j, p % h.period(), m);
    for (std::size_t i = 0; i < g.n_out(); ++i)
      for (std::size_t j = 0; j < g.n_in(); ++j)
        for (Lag m = g.lag_min(); m <= g.lag_max(); ++m)
          taps[shape.index(h.n_out() + i, h.n_in() + j, p, m)] = g.tap(i, j, p % g.period(), m);
  }
  return PeriodicKernel(shape, std::move(taps), rate);
}

PeriodicKernel series(const PeriodicKernel& h, const PeriodicKernel& g) {
  if (g.n_in() != h.n_out()) {
    fail(ErrorCode::DimensionMismatch, "series: second system expects " + std::to_string(g.n_in()) +
                                           " inputs, first provides " + std::to_string(h.n_out()));
  }
  const auto rate = merged_rate(h, g);
  const KernelShape shape{g.n_out(), h.n_in(), lcm_period(h.period(), g.period()),
                          {h.lag_min() + g.lag_min(), h.lag_max() + g.lag_max()}};
  const auto kh = static_cast<std::int64_t>(h.period());
  std::vector<double> taps(shape.size(), 0.0);
  for (std::size_t i = 0; i < shape.n_out; ++i) {
    for (std::size_t l = 0; l < g.n_in(); ++l) {
      for (std::size_t p = 0; p < shape.period; ++p) {
        for (Lag mu = g.lag_min(); mu <= g.lag_max(); ++mu) {
          const double gv = g.tap(i, l, p % g.period(), mu);
          if (gv == 0.0) continue;
          // h is read at the phase of the intermediate sample, mu steps earlier.
          const auto ph = static_cast<std::size_t>(pmod(static_cast<std::int64_t>(p) - mu, kh));
          for (std::size_t j = 0; j < shape.n_in; ++j) {
            for (Lag m = h.lag_min(); m <= h.lag_max(); ++m) {
              taps[shape.index(i, j, p, mu + m)] += gv * h.tap(l, j, ph, m);
            }
          }
        }
      }
    }
  }
  return PeriodicKernel(shape, std::move(taps), rate);
}

PeriodicKernel lift_lti(std::span<const double> fir, std::size_t period, Lag first_lag,
                        std::optional<double> sample_period_s) {
  if (period == 0) fail(ErrorCode::InvalidArgument, "period must be >= 1");
  if (fir.empty()) fail(ErrorCode::InvalidArgument, "FIR needs at least one tap");
  const KernelShape shape{1, 1, period, {first_lag, first_lag + static_cast<Lag>(fir.size()) - 1}};
  std::vector<double> taps(shape.size(), 0.0);
  for (std::size_t p = 0; p < period; ++p)
    for (std::size_t q = 0; q < fir.size(); ++q) taps[shape.index(0, 0, p, first_lag + static_cast<Lag>(q))] = fir[q];
  return PeriodicKernel(shape, std::move(taps), sample_period_s);
}

PeriodicKernel routing_kernel(std::size_t n_in, const std::vector<std::vector<std::size_t>>& sources) {
  const KernelShape shape{sources.size(), n_in, 1, {0, 0}};
  std::vector<double> taps(shape.size(), 0.0);
  for (std::size_t r = 0; r < sources.size(); ++r) {
    for (std::size_t s : sources[r]) {
      if (s >= n_in) fail(ErrorCode::InvalidArgument, "routing source out of range");
      taps[shape.index(r, s, 0, 0)] += 1.0;
    }
  }
  return PeriodicKernel(shape, std::move(taps));
}

namespace {

PeriodicKernel resolve_node(const CircuitNode& node, const Circuit& circuit) {
  if (const auto* kernel = std::get_if<PeriodicKernel>(&node.block)) return *kernel;
  if (const auto* fir = std::get_if<FirBlock>(&node.block)) {
    return lift_lti(fir->taps, 1, fir->first_lag, circuit.sample_period_s);
  }
  if (!circuit.sample_period_s) {
    fail(ErrorCode::InvalidArgument, "node '" + node.id + "' is continuous; the circuit needs sample_period_s");
  }
  try {
    return discretize(std::get<ContinuousSpec>(node.block), *circuit.sample_period_s, circuit.spec_window,
                      circuit.discretize_options);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IncommensurateRate) {
      fail(ErrorCode::IncommensuratePeriods, "node '" + node.id + "': " + e.what());
    }
    throw;
  }
}

// A contiguous run of wires in the bundle carried by the fold.
struct WireGroup {
  std::size_t node;
  bool external;  // external input slice reserved for source `node`
  std::size_t width;
};

std::size_t total_width(const std::vector<WireGroup>& groups) {
  std::size_t w = 0;
  for (const auto& g : groups) w += g.width;
  return w;
}

std::size_t group_offset(const std::vector<WireGroup>& groups, std::size_t node, bool external) {
  std::size_t offset = 0;
  for (const auto& g : groups) {
    if (g.node == node && g.external == external) return offset;
    offset += g.width;
  }
  fail(ErrorCode::InvalidArgument, "internal: wire group not found");
}

}  // namespace

PeriodicKernel reduce_circuit(const Circuit& circuit) {
  const std::size_t n = circuit.nodes.size();
  if (n == 0) fail(ErrorCode::InvalidArgument, "circuit has no nodes");

  std::map<std::string, std::size_t> by_id;
  for (std::size_t v = 0; v < n; ++v) {
    if (!by_id.emplace(circuit.nodes[v].id, v).second) {
      fail(ErrorCode::InvalidArgument, "duplicate node id '" + circuit.nodes[v].id + "'");
    }
  }
  std::vector<std::vector<std::size_t>> preds(n), succs(n);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [from, to] : circuit.edges) {
    const auto a = by_id.find(from);
    const auto b = by_id.find(to);
    if (a == by_id.end() || b == by_id.end()) {
      fail(ErrorCode::InvalidArgument, "edge " + from + " -> " + to + " references an unknown node");
    }
    if (!seen.emplace(a->second, b->second).second) {
      fail(ErrorCode::InvalidArgument, "duplicate edge " + from + " -> " + to);
    }
    succs[a->second].push_back(b->second);
    preds[b->second].push_back(a->second);
  }

  // Kahn's algorithm, lowest node index first for a deterministic order.
  std::vector<std::size_t> indegree(n), order;
  for (std::size_t v = 0; v < n; ++v) indegree[v] = preds[v].size();
  std::set<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.insert(v);
  while (!ready.empty()) {
    const std::size_t v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (std::size_t s : succs[v])
      if (--indegree[s] == 0) ready.insert(s);
  }
  if (order.size() != n) fail(ErrorCode::CyclicGraph, "circuit contains a cycle");

  std::vector<PeriodicKernel> kernels;
  kernels.reserve(n);
  for (const auto& node : circuit.nodes) kernels.push_back(resolve_node(node, circuit));

  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u : preds[v]) {
      if (kernels[u].n_out() != kernels[v].n_in()) {
        fail(ErrorCode::DimensionMismatch, "edge " + circuit.nodes[u].id + " -> " + circuit.nodes[v].id +
                                               " joins " + std::to_string(kernels[u].n_out()) + " outputs to " +
                                               std::to_string(kernels[v].n_in()) + " inputs");
      }
    }
  }

  std::vector<WireGroup> bundle;
  for (std::size_t v = 0; v < n; ++v)
    if (preds[v].empty()) bundle.push_back({v, true, kernels[v].n_in()});
  PeriodicKernel state = PeriodicKernel::identity(total_width(bundle));

  std::vector<bool> done(n, false);
  const auto still_needed = [&](const WireGroup& g, std::size_t current) {
    if (g.external) return g.node != current;
    if (succs[g.node].empty()) return true;  // sink output, kept for the final selection
    return std::any_of(succs[g.node].begin(), succs[g.node].end(),
                       [&](std::size_t s) { return !done[s] && s != current; });
  };

  for (std::size_t v : order) {
    std::vector<WireGroup> kept;
    std::vector<std::vector<std::size_t>> routes;
    for (const auto& g : bundle) {
      if (!still_needed(g, v)) continue;
      const std::size_t offset = group_offset(bundle, g.node, g.external);
      for (std::size_t w = 0; w < g.width; ++w) routes.push_back({offset + w});
      kept.push_back(g);
    }
    // Node input: its external slice, or the sum of its predecessors' outputs.
    for (std::size_t w = 0; w < kernels[v].n_in(); ++w) {
      std::vector<std::size_t> sum;
      if (preds[v].empty()) {
        sum.push_back(group_offset(bundle, v, true) + w);
      } else {
        for (std::size_t u : preds[v]) sum.push_back(group_offset(bundle, u, false) + w);
      }
      routes.push_back(std::move(sum));
    }
    state = series(state, routing_kernel(total_width(bundle), routes));

    const std::size_t kept_width = total_width(kept);
    const PeriodicKernel stage = kept_width > 0 ? parallel(PeriodicKernel::identity(kept_width), kernels[v]) : kernels[v];
    state = series(state, stage);

    done[v] = true;
    kept.push_back({v, false, kernels[v].n_out()});
    bundle = std::move(kept);
  }

  std::vector<std::vector<std::size_t>> outputs;
  for (std::size_t v = 0; v < n; ++v) {
    if (!succs[v].empty()) continue;
    const std::size_t offset = group_offset(bundle, v, false);
    for (std::size_t w = 0; w < kernels[v].n_out(); ++w) outputs.push_back({offset + w});
  }
  return series(state, routing_kernel(total_width(bundle), outputs));
}

}  // namespace ptv
