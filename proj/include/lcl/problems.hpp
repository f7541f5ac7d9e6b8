#ifndef LCL_PROBLEMS_HPP
#define LCL_PROBLEMS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcl/graph.hpp"

namespace lcl {

struct VerifierReport {
  std::string problem;
  std::vector<char> pass;

  std::size_t pass_count() const { return static_cast<std::size_t>(std::count(pass.begin(), pass.end(), 1)); }
  bool all_pass() const { return pass_count() == pass.size(); }
  std::vector<NodeId> fail_nodes() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < pass.size(); ++v)
      if (!pass[v]) out.push_back(v);
    return out;
  }
  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["problem"] = problem;
    j["pass_count"] = pass_count();
    j["fail_nodes"] = fail_nodes();
    return j;
  }
};

/// Distance-k weak c-coloring with colors 1..c: v passes iff some node
/// within distance k has a different color.
inline VerifierReport verify_weak_coloring(const PortedGraph& g, const std::vector<Label>& phi, Label c, int k) {
  require(phi.size() == g.node_count(), "labeling size mismatch");
  require(k >= 1, "k must be positive");
  for (NodeId v = 0; v < phi.size(); ++v)
    if (phi[v] < 1 || phi[v] > c)
      throw InvalidLabeling("color " + std::to_string(phi[v]) + " of node " + std::to_string(v) +
                            " outside [1, " + std::to_string(c) + "]");
  VerifierReport rep{"weak-coloring", std::vector<char>(g.node_count(), 0)};
  BoundedBfs bfs(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    // Most nodes are witnessed by a neighbor; skip the BFS then.
    bool ok = false;
    for (const auto& h : g.ports(v))
      if (phi[h.to] != phi[v]) {
        ok = true;
        break;
      }
    if (!ok && k > 1)
      for (NodeId u : bfs.run(g, v, k))
        if (phi[u] != phi[v]) {
          ok = true;
          break;
        }
    rep.pass[v] = ok;
  }
  return rep;
}

/// Weak edge c-coloring on an oriented graph with colors 1..c: a node of
/// full degree passes iff in some dimension its two edges differ. Nodes of
/// lower degree pass vacuously.
inline VerifierReport verify_weak_edge_coloring(const PortedGraph& g, const std::vector<Label>& psi, Label c,
                                                int delta) {
  require(delta == g.delta(), "delta does not match the graph");
  require(delta % 2 == 0, "weak edge coloring needs even delta");
  require(psi.size() == g.edge_count(), "labeling size mismatch");
  if (!g.oriented()) throw InvalidInstance("weak edge coloring needs an oriented graph");
  for (EdgeId e = 0; e < psi.size(); ++e)
    if (psi[e] < 1 || psi[e] > c) throw InvalidLabeling("edge color outside [1, c] at edge " + std::to_string(e));
  VerifierReport rep{"weak-edge-coloring", std::vector<char>(g.node_count(), 0)};
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) < static_cast<std::size_t>(delta)) {
      rep.pass[v] = 1;
      continue;
    }
    for (int d = 1; d <= delta / 2 && !rep.pass[v]; ++d) {
      const auto pp = g.port_of_direction(v, Direction{d, true}.code());
      const auto pm = g.port_of_direction(v, Direction{d, false}.code());
      if (!pp || !pm) throw InvalidInstance("interior node " + std::to_string(v) + " misses a dimension");
      rep.pass[v] = psi[g.half_edge(v, *pp).edge] != psi[g.half_edge(v, *pm).edge];
    }
  }
  return rep;
}

/// Output of the pointer problem: a degree guess d in [0, delta) and a
/// pointer (port) or none. `present` is false for the empty label.
struct PStarLabel {
  bool present = false;
  int d = 0;
  std::optional<Port> p;

  static PStarLabel empty() { return {}; }
  static PStarLabel pointer(int d, Port p) { return {true, d, p}; }
  static PStarLabel sink(int d) { return {true, d, std::nullopt}; }
  friend bool operator==(const PStarLabel&, const PStarLabel&) = default;
};

/// The five local conditions at v. `label(u)` returns u's P* label.
template <class LabelOf>
bool pstar_happy(const PortedGraph& g, NodeId v, int delta, LabelOf&& label) {
  const PStarLabel& lv = label(v);
  if (!lv.present || lv.d < 0 || lv.d >= delta) return false;
  const std::size_t deg = g.degree(v);
  if (deg >= static_cast<std::size_t>(delta)) {
    if (!lv.p || *lv.p >= deg) return false;  // (1)
  } else {
    if (lv.p || lv.d != static_cast<int>(deg)) return false;  // (2)
    return true;
  }
  const auto& h = g.half_edge(v, *lv.p);
  const PStarLabel& lu = label(h.to);
  if (!lu.present || lu.d != lv.d) return false;                              // (3)
  if (lu.p && *lu.p == h.back) return false;                                  // (4)
  if (!lu.p && static_cast<int>(g.degree(h.to)) != lv.d) return false;        // (5)
  return true;
}

inline VerifierReport verify_pstar(const PortedGraph& g, const std::vector<PStarLabel>& lambda, int delta) {
  require(lambda.size() == g.node_count(), "labeling size mismatch");
  VerifierReport rep{"pstar", std::vector<char>(g.node_count(), 0)};
  auto label = [&](NodeId u) -> const PStarLabel& { return lambda[u]; };
  for (NodeId v = 0; v < g.node_count(); ++v) rep.pass[v] = pstar_happy(g, v, delta, label);
  return rep;
}

/// Label of the homogeneous composition: an optional label of P and an
/// optional P* label.
struct HomogeneousLabel {
  std::optional<Label> p_label;
  PStarLabel pstar;
};

using NodePredicate = std::function<bool(NodeId)>;

/// v passes iff it has a nonempty P* label and is P*-happy, or has an empty
/// P* label and P's verifier accepts at v.
inline VerifierReport verify_homogeneous(const PortedGraph& g, const std::vector<HomogeneousLabel>& labels,
                                         const NodePredicate& p_verifier, int delta) {
  require(labels.size() == g.node_count(), "labeling size mismatch");
  VerifierReport rep{"homogeneous", std::vector<char>(g.node_count(), 0)};
  auto label = [&](NodeId u) -> const PStarLabel& { return labels[u].pstar; };
  for (NodeId v = 0; v < g.node_count(); ++v)
    rep.pass[v] = labels[v].pstar.present ? pstar_happy(g, v, delta, label) : p_verifier(v);
  return rep;
}

}  // namespace lcl

#endif  // LCL_PROBLEMS_HPP
