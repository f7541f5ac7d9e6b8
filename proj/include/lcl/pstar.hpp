#ifndef LCL_PSTAR_HPP
#define LCL_PSTAR_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "lcl/engine.hpp"
#include "lcl/irregularity.hpp"
#include "lcl/problems.hpp"

namespace lcl {

struct PStarSolution {
  std::vector<PStarLabel> labels;  // empty label where no irregularity is in range
  int radius = 0;
  int rounds = 0;
  /// Nodes whose d differs from the one implied by their own closest
  /// irregularity; when nonzero, rounds include the look-ahead.
  std::size_t lookahead_hits = 0;
};

namespace detail {

/// Port at v leading to w, which must be a neighbor.
inline Port port_to(const PortedGraph& g, NodeId v, NodeId w) {
  for (Port p = 0; p < g.degree(v); ++p)
    if (g.neighbor(v, p) == w) return p;
  throw InvalidInstance("nodes are not adjacent");
}

/// For each node on the cycle, the port to its successor. The node with the
/// smallest identifier points to its neighbor on the cycle with the smaller
/// identifier, and the rest follow.
inline std::vector<std::pair<NodeId, Port>> orient_cycle(const PortedGraph& g, const std::vector<NodeId>& cyc,
                                                         std::span<const std::uint64_t> ids) {
  const std::size_t L = cyc.size();
  std::size_t lo = 0;
  for (std::size_t i = 1; i < L; ++i)
    if (node_ident(ids, cyc[i]) < node_ident(ids, cyc[lo])) lo = i;
  const NodeId next = cyc[(lo + 1) % L], prev = cyc[(lo + L - 1) % L];
  const bool forward = node_ident(ids, next) < node_ident(ids, prev);
  std::vector<std::pair<NodeId, Port>> out;
  out.reserve(L);
  for (std::size_t i = 0; i < L; ++i) {
    const NodeId succ = forward ? cyc[(i + 1) % L] : cyc[(i + L - 1) % L];
    out.emplace_back(cyc[i], port_to(g, cyc[i], succ));
  }
  return out;
}

}  // namespace detail

/// Labels every node whose closest irregularity lies within effective
/// distance r, so that each labeled node is P*-happy.
inline PStarSolution solve_pstar_local(const PortedGraph& g, int r, const Assignment& a) {
  require(r >= 0, "radius must be non-negative");
  if (a.ids.empty()) throw InvalidInput("solving P* needs identifiers");
  a.validate(g.node_count());
  const int delta = g.delta();
  const auto field = irregularity_field(g, r, a.ids);
  PStarSolution sol;
  sol.labels.assign(g.node_count(), PStarLabel::empty());
  sol.radius = r;
  sol.rounds = r;

  std::vector<std::vector<std::pair<NodeId, Port>>> orientation(field.cycles.size());
  std::vector<int> naive_d(g.node_count(), 0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!field.has(v)) continue;
    if (g.degree(v) < static_cast<std::size_t>(delta)) {
      sol.labels[v] = PStarLabel::sink(static_cast<int>(g.degree(v)));
      continue;
    }
    if (field.kind[v] == Irregularity::Kind::Cycle) {
      const auto ci = static_cast<std::size_t>(field.target[v]);
      Port p = 0;
      if (field.next_port[v] == IrregularityField::kOnCycle) {
        if (orientation[ci].empty()) orientation[ci] = detail::orient_cycle(g, field.cycles[ci], a.ids);
        for (const auto& [u, q] : orientation[ci])
          if (u == v) p = q;
      } else {
        p = static_cast<Port>(field.next_port[v]);
      }
      sol.labels[v] = PStarLabel::pointer(0, p);
      continue;
    }
    naive_d[v] = static_cast<int>(g.degree(static_cast<NodeId>(field.target[v])));
    sol.labels[v] = PStarLabel::pointer(naive_d[v], static_cast<Port>(field.next_port[v]));
  }

  // A node on a cycle may point to a successor that settled on a nearer
  // low-degree node, and a shortest path may pass a node that settled on a
  // cycle. d is therefore read off the end of the pointer chain: the degree
  // of the sink it reaches, or 0 if it closes a loop.
  std::vector<int> resolved(g.node_count(), -1), hops(g.node_count(), 0);
  std::vector<std::size_t> pos(g.node_count(), SIZE_MAX);
  std::vector<NodeId> chain;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!sol.labels[v].present || resolved[v] >= 0) continue;
    chain.clear();
    NodeId w = v;
    int d = 0, tail = 0;
    for (;;) {
      if (resolved[w] >= 0) {
        d = resolved[w];
        tail = hops[w];
        break;
      }
      if (pos[w] != SIZE_MAX) {
        // Loop: every node on it needs one full turn.
        const std::size_t start = pos[w];
        const int len = static_cast<int>(chain.size() - start);
        for (std::size_t i = start; i < chain.size(); ++i) {
          resolved[chain[i]] = 0;
          hops[chain[i]] = len;
        }
        chain.resize(start);
        d = 0;
        tail = len;
        break;
      }
      const auto& lw = sol.labels[w];
      if (!lw.present) throw InvalidInstance("pointer chain left the labeled region");
      if (!lw.p) {
        resolved[w] = lw.d;
        d = lw.d;
        tail = 0;
        break;
      }
      pos[w] = chain.size();
      chain.push_back(w);
      w = g.neighbor(w, *lw.p);
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      resolved[*it] = d;
      hops[*it] = ++tail;
    }
    for (NodeId u : chain) pos[u] = SIZE_MAX;
  }
  int reach = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!sol.labels[v].present || !sol.labels[v].p) continue;
    sol.labels[v].d = resolved[v];
    if (resolved[v] != naive_d[v]) ++sol.lookahead_hits;
    reach = std::max(reach, hops[v]);
  }
  if (sol.lookahead_hits > 0) sol.rounds = r + std::max(r, reach);
  return sol;
}

/// Smallest r such that every node has an irregularity within effective
/// distance r, found by doubling followed by binary search.
inline int pstar_radius(const PortedGraph& g, std::span<const std::uint64_t> ids = {}) {
  auto covers = [&](int r) {
    const auto f = irregularity_field(g, r, ids);
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (!f.has(v)) return false;
    return true;
  };
  int hi = 1;
  while (!covers(hi)) {
    require(hi < (1 << 24), "no irregularity found");
    hi *= 2;
  }
  int lo = hi / 2;  // lo fails (or is 0)
  if (lo == 0 && covers(0)) return 0;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (covers(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

inline PStarSolution solve_pstar(const PortedGraph& g, const Assignment& a) {
  if (a.ids.empty()) throw InvalidInput("solving P* needs identifiers");
  return solve_pstar_local(g, pstar_radius(g, a.ids), a);
}

// ---------------------------------------------------------------------------
// Homogeneous composition
// ---------------------------------------------------------------------------

struct HomogeneousSolution {
  std::vector<HomogeneousLabel> labels;
  int k = 0;
  int rounds = 0;
  std::size_t pstar_count = 0;
};

/// Runs the solver for P everywhere and P* with parameter k = T + r, where
/// T is the solver's round count. Nodes with an irregularity within k keep
/// their P* label.
inline HomogeneousSolution homogeneous_dispatch(const PortedGraph& g, const LocalAlgorithm& p_solver, int r,
                                                const Assignment& a) {
  require(p_solver.kind == AlgorithmKind::Node, "P solver must be node-centric");
  require(r >= 1, "LCL radius must be positive");
  HomogeneousSolution out;
  out.k = p_solver.rounds + r;
  out.rounds = out.k;
  const auto pstar = solve_pstar_local(g, out.k, a);
  out.labels.resize(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out.labels[v].pstar = pstar.labels[v];
    if (pstar.labels[v].present) ++out.pstar_count;
    try {
      out.labels[v].p_label = p_solver.apply(extract_view(g, v, p_solver.rounds, a));
    } catch (const TotalRuleViolation&) {
      if (!pstar.labels[v].present)
        throw TotalRuleViolation("P solver failed inside a regular ball at node " + std::to_string(v),
                                 extract_view(g, v, p_solver.rounds, a).encoding());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Feasibility of P* labels on trees
// ---------------------------------------------------------------------------

/// Center labels that extend to a labeling of the whole tree in which every
/// node is P*-happy. Exact dynamic program over the tree rooted at `center`.
inline std::vector<PStarLabel> pstar_feasible_center_labels(const PortedGraph& g, NodeId center, int delta) {
  require(g.edge_count() + 1 == g.node_count(), "feasibility check needs a tree");
  const std::size_t n = g.node_count();
  auto domain = [&](NodeId v) {
    std::vector<PStarLabel> out;
    const std::size_t deg = g.degree(v);
    if (deg < static_cast<std::size_t>(delta)) {
      out.push_back(PStarLabel::sink(static_cast<int>(deg)));
      return out;
    }
    for (int d = 0; d < delta; ++d)
      for (Port p = 0; p < deg; ++p) out.push_back(PStarLabel::pointer(d, p));
    return out;
  };
  // Constraints of the edge {v, u} seen from v (v at port pv, u at port pu).
  auto one_way = [&](const PStarLabel& lv, Port pv, const PStarLabel& lu, NodeId u, Port pu) {
    if (!lv.p || *lv.p != pv) return true;
    if (lu.d != lv.d) return false;
    if (lu.p && *lu.p == pu) return false;
    if (!lu.p && static_cast<int>(g.degree(u)) != lv.d) return false;
    return true;
  };

  std::vector<NodeId> order{center}, parent(n, kNoNode);
  std::vector<char> seen(n, 0);
  seen[center] = 1;
  for (std::size_t head = 0; head < order.size(); ++head)
    for (const auto& h : g.ports(order[head]))
      if (!seen[h.to]) {
        seen[h.to] = 1;
        parent[h.to] = order[head];
        order.push_back(h.to);
      }

  std::vector<std::vector<PStarLabel>> dom(n);
  std::vector<std::vector<char>> ok(n);
  for (NodeId v = 0; v < n; ++v) {
    dom[v] = domain(v);
    ok[v].assign(dom[v].size(), 1);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    for (Port pv = 0; pv < g.degree(v); ++pv) {
      const auto& h = g.half_edge(v, pv);
      if (h.to == parent[v]) continue;
      const NodeId c = h.to;
      for (std::size_t i = 0; i < dom[v].size(); ++i) {
        if (!ok[v][i]) continue;
        bool any = false;
        for (std::size_t j = 0; j < dom[c].size() && !any; ++j)
          any = ok[c][j] && one_way(dom[v][i], pv, dom[c][j], c, h.back) &&
                one_way(dom[c][j], h.back, dom[v][i], v, pv);
        ok[v][i] = any;
      }
    }
  }
  std::vector<PStarLabel> out;
  for (std::size_t i = 0; i < dom[center].size(); ++i)
    if (ok[center][i]) out.push_back(dom[center][i]);
  return out;
}

}  // namespace lcl

#endif  // LCL_PSTAR_HPP
