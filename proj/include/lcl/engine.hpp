#ifndef LCL_ENGINE_HPP
#define LCL_ENGINE_HPP

#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcl/view.hpp"

namespace lcl {

using Labeling = std::vector<Label>;

enum class AlgorithmKind : std::uint8_t { Node, Edge };

/// A t-round algorithm: a deterministic map from radius-t views to labels.
/// Outputs must lie in [0, palette) unless palette is 0 (unbounded).
struct LocalAlgorithm {
  int rounds = 0;
  AlgorithmKind kind = AlgorithmKind::Node;
  std::uint64_t palette = 0;
  std::function<Label(const View&)> rule;
  std::string name;

  Label apply(const View& view) const {
    const Label out = rule(view);
    if (palette != 0 && out >= palette)
      throw TotalRuleViolation("output " + std::to_string(out) + " outside palette of " + name,
                               view.encoding());
    return out;
  }
};

/// Rule given as an explicit table over view encodings.
inline std::function<Label(const View&)> table_rule(std::unordered_map<std::string, Label> table) {
  return [table = std::move(table)](const View& view) {
    const auto enc = view.encoding();
    auto it = table.find(enc);
    if (it == table.end()) throw TotalRuleViolation("view not covered by rule table", enc);
    return it->second;
  };
}

/// Worker count from LCL_THREADS (default 1).
inline unsigned thread_count() {
  if (const char* s = std::getenv("LCL_THREADS")) {
    const long k = std::strtol(s, nullptr, 10);
    if (k > 0) return static_cast<unsigned>(std::min<long>(k, 256));
  }
  return 1;
}

/// Runs fn(i) for i in [0, n) over contiguous blocks; fn must only write to
/// slot i, so results do not depend on the worker count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned workers = thread_count()) {
  if (workers <= 1 || n < 2 * workers) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  const std::size_t block = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * block, hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

inline Labeling run_node_algorithm(const PortedGraph& g, const LocalAlgorithm& alg, const Assignment& a) {
  require(alg.kind == AlgorithmKind::Node, "run_node_algorithm needs a node-centric algorithm");
  a.validate(g.node_count());
  Labeling out(g.node_count());
  parallel_for(g.node_count(), [&](std::size_t v) {
    out[v] = alg.apply(extract_view(g, static_cast<NodeId>(v), alg.rounds, a));
  });
  return out;
}

inline Labeling run_edge_algorithm(const PortedGraph& g, const LocalAlgorithm& alg, const Assignment& a) {
  require(alg.kind == AlgorithmKind::Edge, "run_edge_algorithm needs an edge-centric algorithm");
  a.validate(g.node_count());
  Labeling out(g.edge_count());
  parallel_for(g.edge_count(), [&](std::size_t e) {
    out[e] = alg.apply(extract_edge_view(g, static_cast<EdgeId>(e), alg.rounds, a));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Assignment enumeration
// ---------------------------------------------------------------------------

/// All 2^(b*m) bit maps over a region of m nodes. Assignment number x gives
/// region node i the bits (x >> (i*b)) & (2^b - 1).
class AssignmentEnumerator {
 public:
  AssignmentEnumerator(std::size_t region_size, int b) : m_(region_size), b_(b) {
    require(b >= 0, "b must be non-negative");
    if (static_cast<std::size_t>(b) * m_ > static_cast<std::size_t>(kEnumerationBudgetBits))
      throw BudgetExceeded("exact enumeration needs " + std::to_string(b * m_) + " bits, budget is " +
                           std::to_string(kEnumerationBudgetBits));
  }

  std::uint64_t count() const { return std::uint64_t{1} << (b_ * m_); }

  void decode(std::uint64_t x, std::vector<std::uint64_t>& bits) const {
    bits.resize(m_);
    const std::uint64_t mask = (std::uint64_t{1} << b_) - 1;
    for (std::size_t i = 0; i < m_; ++i) bits[i] = (x >> (i * b_)) & mask;
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    std::vector<std::uint64_t> bits;
    for (std::uint64_t x = 0; x < count(); ++x) {
      decode(x, bits);
      fn(static_cast<const std::vector<std::uint64_t>&>(bits));
    }
  }

 private:
  std::size_t m_;
  int b_;
};

inline AssignmentEnumerator enumerate_assignments(std::size_t region_size, int b) {
  return AssignmentEnumerator(region_size, b);
}

// ---------------------------------------------------------------------------
// Local failure probability
// ---------------------------------------------------------------------------

enum class EstimateMode : std::uint8_t { Exact, MonteCarlo };

struct FailureEstimate {
  Rational exact;  // meaningful in exact mode
  double value = 0;
  EstimateMode mode = EstimateMode::Exact;
  double error = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["value"] = value;
    j["mode"] = mode == EstimateMode::Exact ? "exact" : "monte-carlo";
    j["error"] = error;
    j["samples"] = samples;
    j["seed"] = seed;
    return j;
  }
};

struct MonteCarloOptions {
  std::uint64_t samples = 1'000'000;
  double confidence = 0.99;
  std::uint64_t seed = 1;
};

/// Two-sided Hoeffding radius for the mean of n samples in [0, 1].
inline double hoeffding_error(std::uint64_t samples, double confidence) {
  require(samples > 0, "need at least one sample");
  require(confidence > 0 && confidence < 1, "confidence must be in (0, 1)");
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(samples)));
}

/// Outputs of the algorithm near v under the assignment currently loaded.
class LocalOutcome {
 public:
  LocalOutcome(const PortedGraph& g, NodeId v, const LocalAlgorithm& alg, const Assignment& a)
      : g_(g), v_(v), alg_(alg), a_(a) {}

  const PortedGraph& graph() const { return g_; }
  NodeId center() const { return v_; }

  Label node(NodeId u) const { return alg_.apply(extract_view(g_, u, alg_.rounds, a_)); }
  Label edge(EdgeId e) const { return alg_.apply(extract_edge_view(g_, e, alg_.rounds, a_)); }

 private:
  const PortedGraph& g_;
  NodeId v_;
  const LocalAlgorithm& alg_;
  const Assignment& a_;
};

using FailurePredicate = std::function<bool(const LocalOutcome&)>;

/// Node-centric weak coloring failure: every neighbor copies v's output.
inline bool weak_coloring_failure(const LocalOutcome& o) {
  const auto& g = o.graph();
  const Label mine = o.node(o.center());
  for (const auto& h : g.ports(o.center()))
    if (o.node(h.to) != mine) return false;
  return true;
}

/// Edge-centric weak edge coloring failure on oriented graphs: in every
/// dimension the (d,+) and (d,-) edges carry the same output.
inline bool weak_edge_coloring_failure(const LocalOutcome& o) {
  const auto& g = o.graph();
  const NodeId v = o.center();
  for (int d = 1; d <= g.dimensions(); ++d) {
    const auto pp = g.port_of_direction(v, Direction{d, true}.code());
    const auto pm = g.port_of_direction(v, Direction{d, false}.code());
    if (!pp || !pm) throw InvalidInstance("missing oriented edge at measured node");
    if (o.edge(g.half_edge(v, *pp).edge) != o.edge(g.half_edge(v, *pm).edge)) return false;
  }
  return true;
}

inline FailureEstimate local_failure_probability(const PortedGraph& g, const LocalAlgorithm& alg, NodeId v,
                                                 const FailurePredicate& fails, const Assignment& base) {
  require(v < g.node_count(), "node out of range");
  base.validate(g.node_count());
  if (!ball_is_full(g, v, alg.rounds + 1))
    throw InvalidParameter("radius-(t+1) ball of the measured node reaches the boundary");
  BoundedBfs bfs(g.node_count());
  const std::vector<NodeId> region = bfs.run(g, v, alg.rounds + 1);
  const auto en = enumerate_assignments(region.size(), base.b);

  Assignment a = base;
  std::uint64_t failures = 0;
  std::vector<std::uint64_t> bits;
  for (std::uint64_t x = 0; x < en.count(); ++x) {
    en.decode(x, bits);
    for (std::size_t i = 0; i < region.size(); ++i) a.bits[region[i]] = bits[i];
    if (fails(LocalOutcome(g, v, alg, a))) ++failures;
  }
  FailureEstimate est;
  est.exact = Rational(BigInt(failures), BigInt(en.count()));
  est.value = to_double(est.exact);
  est.mode = EstimateMode::Exact;
  return est;
}

inline FailureEstimate local_failure_probability(const PortedGraph& g, const LocalAlgorithm& alg, NodeId v,
                                                 const FailurePredicate& fails, const Assignment& base,
                                                 const MonteCarloOptions& mc) {
  require(v < g.node_count(), "node out of range");
  base.validate(g.node_count());
  if (!ball_is_full(g, v, alg.rounds + 1))
    throw InvalidParameter("radius-(t+1) ball of the measured node reaches the boundary");
  BoundedBfs bfs(g.node_count());
  const std::vector<NodeId> region = bfs.run(g, v, alg.rounds + 1);
  const std::uint64_t mask = (std::uint64_t{1} << base.b) - 1;

  // Streams are split by chunk index so the estimate does not depend on the
  // worker count.
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (mc.samples + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> hits(chunks, 0);
  parallel_for(chunks, [&](std::size_t c) {
    std::seed_seq seq{mc.seed, static_cast<std::uint64_t>(c)};
    std::mt19937_64 rng(seq);
    Assignment a = base;
    const std::uint64_t lo = c * kChunk, hi = std::min(mc.samples, lo + kChunk);
    for (std::uint64_t s = lo; s < hi; ++s) {
      for (NodeId u : region) a.bits[u] = rng() & mask;
      if (fails(LocalOutcome(g, v, alg, a))) ++hits[c];
    }
  });
  std::uint64_t failures = 0;
  for (auto h : hits) failures += h;
  FailureEstimate est;
  est.exact = Rational(BigInt(failures), BigInt(mc.samples));
  est.value = to_double(est.exact);
  est.mode = EstimateMode::MonteCarlo;
  est.error = hoeffding_error(mc.samples, mc.confidence);
  est.samples = mc.samples;
  est.seed = mc.seed;
  return est;
}

}  // namespace lcl

#endif  // LCL_ENGINE_HPP
