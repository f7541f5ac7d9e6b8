#ifndef LCL_EXECUTION_SET_HPP
#define LCL_EXECUTION_SET_HPP

#include <cmath>
#include <vector>

#include "lcl/graph.hpp"

namespace lcl {

struct ExecutionSet {
  std::vector<NodeId> nodes;
  std::size_t base_layer = 0;  // |I|
  int steps = 0;               // realized extension steps k'
};

/// Number of extension steps: floor((k - base) / (2t + 1)) - 1, at least 0.
inline int execution_set_steps(int k, int t, int base_distance = 7) {
  const int s = (k - base_distance) / (2 * t + 1) - 1;
  return s < 0 ? 0 : s;
}

/// Starts from all nodes at distance exactly `base_distance` from v and
/// repeatedly moves 2t+1 steps in every direction except the one leading
/// back. S collects every node reached by a move.
inline ExecutionSet independent_execution_set(const PortedGraph& g, NodeId v, int t, int k,
                                              int base_distance = 7) {
  require(g.oriented(), "independent execution set needs an oriented regular tree");
  require(t >= 1, "t must be at least 1");
  require(base_distance >= 1, "base distance must be positive");
  require(k > base_distance, "k must exceed the base distance");
  require(v < g.node_count(), "node out of range");
  if (!ball_is_full(g, v, k)) throw InvalidParameter("B_k(v) contains a leaf");

  const int delta = g.delta();
  const int hop = 2 * t + 1;
  struct Walker {
    NodeId node;
    int back;  // direction code leading back toward v
  };
  std::vector<Walker> frontier;
  {
    // Layer I with the direction of the edge towards v.
    std::vector<int> dist(g.node_count(), -1);
    std::vector<Walker> layer{{v, -1}};
    dist[v] = 0;
    for (int d = 0; d < base_distance; ++d) {
      std::vector<Walker> next;
      for (const auto& w : layer)
        for (const auto& h : g.ports(w.node))
          if (dist[h.to] < 0) {
            dist[h.to] = d + 1;
            next.push_back({h.to, inverse_code(h.dir)});
          }
      layer = std::move(next);
    }
    frontier = std::move(layer);
  }
  ExecutionSet out;
  out.base_layer = frontier.size();
  out.steps = execution_set_steps(k, t, base_distance);
  auto move = [&](NodeId u, int code) {
    for (int i = 0; i < hop; ++i) {
      const auto p = g.port_of_direction(u, code);
      if (!p) throw InvalidParameter("move leaves the tree");
      u = g.neighbor(u, *p);
    }
    return u;
  };
  for (int s = 0; s < out.steps; ++s) {
    std::vector<Walker> next;
    next.reserve(frontier.size() * static_cast<std::size_t>(delta - 1));
    for (const auto& w : frontier)
      for (int x = 0; x < delta; ++x)
        if (x != w.back) next.push_back({move(w.node, x), inverse_code(x)});
    for (const auto& w : next) out.nodes.push_back(w.node);
    frontier = std::move(next);
  }
  return out;
}

/// |S| = |I| * sum_{i=1}^{k'} (delta-1)^i with |I| = delta (delta-1)^(base-1).
inline double execution_set_size_formula(int delta, int t, int k, int base_distance = 7) {
  const double I = delta * std::pow(delta - 1.0, base_distance - 1);
  double sum = 0;
  for (int i = 1; i <= execution_set_steps(k, t, base_distance); ++i) sum += std::pow(delta - 1.0, i);
  return I * sum;
}

}  // namespace lcl

#endif  // LCL_EXECUTION_SET_HPP
