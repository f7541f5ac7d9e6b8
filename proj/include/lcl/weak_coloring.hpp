#ifndef LCL_WEAK_COLORING_HPP
#define LCL_WEAK_COLORING_HPP

#include <bit>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcl/engine.hpp"
#include "lcl/problems.hpp"

namespace lcl {

/// Port-ordered adjacency lists. Built either from a graph or from the walk
/// tree of a view, in which case nodes near the view boundary have missing
/// neighbors.
struct Topology {
  std::vector<std::vector<std::pair<Port, NodeId>>> adj;

  std::size_t size() const { return adj.size(); }

  static Topology of(const PortedGraph& g) {
    Topology t;
    t.adj.resize(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
      for (Port p = 0; p < g.degree(v); ++p) t.adj[v].emplace_back(p, g.neighbor(v, p));
    return t;
  }

  /// Walk tree of a node view; node i is entry i, node 0 the center.
  static Topology of(const View& view) {
    const auto& entries = view.entries();
    std::map<Word, NodeId> index;
    Topology t;
    t.adj.resize(entries.size());
    for (NodeId i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      index.emplace(e.path, i);
      if (e.path.empty()) continue;
      const NodeId parent = index.at(Word(e.path.begin(), e.path.end() - 1));
      t.adj[parent].emplace_back(e.parent_port, i);
      t.adj[i].emplace_back(e.port, parent);
    }
    for (auto& row : t.adj) std::sort(row.begin(), row.end());
    return t;
  }
};

// ---------------------------------------------------------------------------
// Stage 1: distance-k weak c-coloring -> weak 2c-coloring
// ---------------------------------------------------------------------------

struct Weak2cResult {
  std::vector<Label> phi2;       // colors 1..2c
  std::vector<int> distance;     // distance to the chosen witness, -1 if none
  std::vector<NodeId> witness;
  int rounds = 0;
};

namespace detail {

inline Weak2cResult weak2c_core(const Topology& t, const std::vector<Label>& phi, int k, bool strict) {
  const std::size_t n = t.size();
  Weak2cResult r{std::vector<Label>(n), std::vector<int>(n, -1), std::vector<NodeId>(n, kNoNode), k};
  std::vector<int> dist(n, -1);
  std::vector<NodeId> order;
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : order) dist[u] = -1;
    order.assign(1, v);
    dist[v] = 0;
    NodeId best = kNoNode;
    int best_dist = -1;
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeId x = order[head];
      if (best != kNoNode && dist[x] > best_dist) break;
      if (phi[x] != phi[v] && (best == kNoNode || phi[x] < phi[best])) {
        best = x;
        best_dist = dist[x];
      }
      if (dist[x] == k) continue;
      for (const auto& [p, y] : t.adj[x])
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          order.push_back(y);
        }
    }
    if (best == kNoNode && strict)
      throw InvalidInput("node " + std::to_string(v) + " has no differently colored node within distance k");
    const int parity = best == kNoNode ? 0 : best_dist % 2;
    r.phi2[v] = 2 * (phi[v] - 1) + static_cast<Label>(parity) + 1;
    r.distance[v] = best_dist;
    r.witness[v] = best;
  }
  return r;
}

}  // namespace detail

inline Weak2cResult weak_to_weak2c(const PortedGraph& g, const std::vector<Label>& phi, int k, Label c) {
  require(phi.size() == g.node_count(), "coloring size mismatch");
  for (auto x : phi)
    if (x < 1 || x > c) throw InvalidInput("input color outside [1, c]");
  if (!verify_weak_coloring(g, phi, c, k).all_pass())
    throw InvalidInput("input is not a distance-k weak c-coloring");
  return detail::weak2c_core(Topology::of(g), phi, k, true);
}

// ---------------------------------------------------------------------------
// Stage 2: pseudoforest
// ---------------------------------------------------------------------------

/// Every node points to one neighbor of a different color. Only views built
/// from truncated balls may contain roots (parent == kNoNode).
struct Pseudoforest {
  std::vector<NodeId> parent;
  std::vector<Port> parent_port;
};

namespace detail {

inline Pseudoforest pseudoforest_core(const Topology& t, const std::vector<Label>& col, bool strict) {
  Pseudoforest pf{std::vector<NodeId>(t.size(), kNoNode), std::vector<Port>(t.size(), 0)};
  for (NodeId v = 0; v < t.size(); ++v) {
    for (const auto& [p, u] : t.adj[v])
      if (col[u] != col[v]) {
        pf.parent[v] = u;
        pf.parent_port[v] = p;
        break;
      }
    if (strict && pf.parent[v] == kNoNode)
      throw InvalidInput("node " + std::to_string(v) + " has no differently colored neighbor");
  }
  return pf;
}

}  // namespace detail

inline Pseudoforest build_pseudoforest(const PortedGraph& g, const std::vector<Label>& phi2) {
  require(phi2.size() == g.node_count(), "coloring size mismatch");
  return detail::pseudoforest_core(Topology::of(g), phi2, true);
}

// ---------------------------------------------------------------------------
// Stage 3: Cole-Vishkin reduction to 3 colors
// ---------------------------------------------------------------------------

/// New color 2i + bit_i(own), where i is the lowest bit in which own and
/// parent colors differ.
inline Label cole_vishkin_step(Label own, Label parent) {
  if (own == parent) throw InvalidInput("Cole-Vishkin step on equal colors");
  const int i = std::countr_zero(own ^ parent);
  return 2 * static_cast<Label>(i) + ((own >> i) & 1);
}

/// Palette bound after one step from palette size B (colors 0..B-1).
inline Label cole_vishkin_palette(Label B) {
  const int width = B <= 1 ? 1 : std::bit_width(B - 1);
  return 2 * static_cast<Label>(width);
}

/// Number of steps until the palette bound is at most 6.
inline int cole_vishkin_steps(Label B) {
  int steps = 0;
  while (B > 6) {
    B = cole_vishkin_palette(B);
    ++steps;
  }
  return steps;
}

struct ColorReduction {
  std::vector<Label> colors;                // 1..3
  std::vector<std::vector<Label>> history;  // 0-based colorings after each round
  int cv_steps = 0;
  int rounds = 0;
};

namespace detail {

inline Label smallest_free(std::initializer_list<Label> forbidden) {
  for (Label x = 0;; ++x)
    if (std::find(forbidden.begin(), forbidden.end(), x) == forbidden.end()) return x;
}

inline ColorReduction cole_vishkin_core(const Pseudoforest& pf, const std::vector<Label>& colors1, Label palette,
                                        bool strict) {
  const std::size_t n = pf.parent.size();
  std::vector<Label> col(n);
  for (std::size_t v = 0; v < n; ++v) col[v] = colors1[v] - 1;
  auto check = [&](const std::vector<Label>& c) {
    if (!strict) return;
    for (std::size_t v = 0; v < n; ++v)
      if (c[v] == c[pf.parent[v]]) throw InvalidInput("coloring not proper along pointer at " + std::to_string(v));
  };
  check(col);
  ColorReduction r;
  r.history.push_back(col);
  Label B = palette;
  while (B > 6) {
    std::vector<Label> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      const NodeId p = pf.parent[v];
      next[v] = p == kNoNode ? (col[v] & 1) : cole_vishkin_step(col[v], col[p]);
    }
    col = std::move(next);
    B = cole_vishkin_palette(B);
    ++r.cv_steps;
    check(col);
    r.history.push_back(col);
  }
  std::vector<char> has_child(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (pf.parent[v] != kNoNode) has_child[pf.parent[v]] = 1;
  int shift_rounds = 0;
  for (Label x = B; x-- > 3;) {
    std::vector<Label> shifted(n);
    for (std::size_t v = 0; v < n; ++v) {
      const NodeId p = pf.parent[v];
      shifted[v] = p == kNoNode ? smallest_free({col[v]}) : col[p];
    }
    std::vector<Label> next = shifted;
    for (std::size_t v = 0; v < n; ++v) {
      if (shifted[v] != x) continue;
      const NodeId p = pf.parent[v];
      const Label up = p == kNoNode ? 3 : shifted[p];
      const Label down = has_child[v] ? col[v] : 3;
      next[v] = smallest_free({up, down});
    }
    col = std::move(next);
    shift_rounds += 2;
    check(col);
    r.history.push_back(col);
  }
  r.rounds = r.cv_steps + shift_rounds;
  r.colors.resize(n);
  for (std::size_t v = 0; v < n; ++v) r.colors[v] = col[v] + 1;
  return r;
}

}  // namespace detail

/// colors: proper along pointers, values 1..palette.
inline ColorReduction cole_vishkin_reduce(const Pseudoforest& pf, const std::vector<Label>& colors, Label palette) {
  require(colors.size() == pf.parent.size(), "coloring size mismatch");
  for (auto x : colors)
    if (x < 1 || x > palette) throw InvalidInput("color outside palette");
  for (auto p : pf.parent)
    if (p == kNoNode) throw InvalidInput("pseudoforest node without pointer");
  return detail::cole_vishkin_core(pf, colors, palette, true);
}

// ---------------------------------------------------------------------------
// Stage 4: greedy MIS by color classes
// ---------------------------------------------------------------------------

struct MisResult {
  std::vector<Label> labels;  // 1 in the MIS, 2 otherwise
  std::vector<char> in_mis;
  int rounds = 3;
};

inline MisResult mis_to_weak2(const Pseudoforest& pf, const std::vector<Label>& psi) {
  const std::size_t n = pf.parent.size();
  require(psi.size() == n, "coloring size mismatch");
  std::vector<std::vector<NodeId>> children(n);
  for (NodeId v = 0; v < n; ++v)
    if (pf.parent[v] != kNoNode) children[pf.parent[v]].push_back(v);
  MisResult r{std::vector<Label>(n, 2), std::vector<char>(n, 0), 3};
  for (Label cls = 1; cls <= 3; ++cls) {
    std::vector<NodeId> joining;
    for (NodeId v = 0; v < n; ++v) {
      if (psi[v] != cls) continue;
      bool blocked = pf.parent[v] != kNoNode && r.in_mis[pf.parent[v]];
      for (NodeId u : children[v]) blocked = blocked || r.in_mis[u];
      if (!blocked) joining.push_back(v);
    }
    for (NodeId v : joining) r.in_mis[v] = 1;
  }
  for (NodeId v = 0; v < n; ++v) r.labels[v] = r.in_mis[v] ? 1 : 2;
  return r;
}

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------

struct Weak2Result {
  std::vector<Label> labels;
  Weak2cResult stage_weak2c;
  Pseudoforest pseudoforest;
  ColorReduction reduction;
  MisResult mis;
  int rounds = 0;

  nlohmann::ordered_json round_breakdown() const {
    return {{"weak2c", stage_weak2c.rounds},
            {"pseudoforest", 1},
            {"cole_vishkin", reduction.cv_steps},
            {"shift_down", reduction.rounds - reduction.cv_steps},
            {"mis", mis.rounds},
            {"total", rounds}};
  }

  nlohmann::ordered_json stage_dump() const {
    nlohmann::ordered_json j;
    j["weak2c"] = stage_weak2c.phi2;
    j["pseudoforest"] = pseudoforest.parent;
    j["cole_vishkin"] = reduction.history;
    j["three_coloring"] = reduction.colors;
    j["weak2"] = labels;
    j["rounds"] = round_breakdown();
    return j;
  }
};

/// Rounds used by the composition for given k and c.
inline int weak_family_rounds(int k, Label c) {
  Label B = 2 * c;
  const int steps = cole_vishkin_steps(B);
  for (int i = 0; i < steps; ++i) B = cole_vishkin_palette(B);
  return k + 1 + steps + 2 * static_cast<int>(B > 3 ? B - 3 : 0) + 3;
}

namespace detail {

inline Weak2Result weak_family_core(const Topology& t, const std::vector<Label>& phi, int k, Label c, bool strict) {
  Weak2Result r;
  r.stage_weak2c = weak2c_core(t, phi, k, strict);
  r.pseudoforest = pseudoforest_core(t, r.stage_weak2c.phi2, strict);
  r.reduction = cole_vishkin_core(r.pseudoforest, r.stage_weak2c.phi2, 2 * c, strict);
  r.mis = mis_to_weak2(r.pseudoforest, r.reduction.colors);
  r.labels = r.mis.labels;
  r.rounds = r.stage_weak2c.rounds + 1 + r.reduction.rounds + r.mis.rounds;
  return r;
}

}  // namespace detail

/// Distance-k weak c-coloring (colors 1..c) to weak 2-coloring (colors 1, 2).
inline Weak2Result weak_family_to_weak2(const PortedGraph& g, const std::vector<Label>& phi, int k, Label c) {
  require(c >= 2, "c must be at least 2");
  require(k >= 1, "k must be positive");
  weak_to_weak2c(g, phi, k, c);  // validates the input
  return detail::weak_family_core(Topology::of(g), phi, k, c, true);
}

/// The composition as a node algorithm on trees: input colors are read from
/// the view's input labels and the pipeline is replayed on the walk tree.
inline LocalAlgorithm weak_family_algorithm(int k, Label c) {
  require(c >= 2 && k >= 1, "need k >= 1 and c >= 2");
  LocalAlgorithm alg;
  alg.rounds = weak_family_rounds(k, c);
  alg.kind = AlgorithmKind::Node;
  alg.palette = 3;
  alg.name = "weak-family-to-weak2";
  alg.rule = [k, c](const View& view) -> Label {
    std::vector<Label> phi;
    for (const auto& e : view.entries()) {
      if (!e.input) throw TotalRuleViolation("input color missing from view", view.encoding());
      phi.push_back(*e.input);
    }
    return detail::weak_family_core(Topology::of(view), phi, k, c, false).labels[0];
  };
  return alg;
}

/// Random distance-k weak c-coloring (colors 1..c). Colors spread along a BFS
/// forest, copying the parent's color with probability `stickiness`, so that
/// large monochromatic patches occur; failing nodes are then recolored.
inline std::vector<Label> random_weak_coloring(const PortedGraph& g, int k, Label c, std::uint64_t seed,
                                               double stickiness = 0.75) {
  require(c >= 2 && k >= 1, "need k >= 1 and c >= 2");
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (g.degree(v) == 0) throw InvalidInstance("isolated node admits no weak coloring");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Label> color(1, c);
  std::bernoulli_distribution stick(stickiness);
  const std::size_t n = g.node_count();
  std::vector<Label> phi(n, 0);
  std::vector<NodeId> order;
  order.reserve(n);
  for (NodeId r = 0; r < n; ++r) {
    if (phi[r]) continue;
    phi[r] = color(rng);
    order.assign(1, r);
    for (std::size_t head = 0; head < order.size(); ++head)
      for (const auto& h : g.ports(order[head]))
        if (!phi[h.to]) {
          phi[h.to] = stick(rng) ? phi[order[head]] : color(rng);
          order.push_back(h.to);
        }
  }
  // Recoloring a failing node only adds witnesses, so one sweep suffices.
  BoundedBfs bfs(n);
  for (NodeId v = 0; v < n; ++v) {
    bool ok = false;
    for (NodeId u : bfs.run(g, v, k))
      if (phi[u] != phi[v]) {
        ok = true;
        break;
      }
    if (!ok) phi[v] = phi[v] % c + 1;
  }
  return phi;
}

}  // namespace lcl

#endif  // LCL_WEAK_COLORING_HPP
