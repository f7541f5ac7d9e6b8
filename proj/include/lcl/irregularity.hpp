#ifndef LCL_IRREGULARITY_HPP
#define LCL_IRREGULARITY_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "lcl/graph.hpp"

namespace lcl {

/// ell(C): |C|/2 for even cycles, floor(|C|/2)+1 for odd ones.
constexpr int cycle_ell(std::size_t length) {
  return static_cast<int>(length % 2 == 0 ? length / 2 : length / 2 + 1);
}

/// Longest cycle that can sit within effective distance r.
constexpr std::size_t max_cycle_length(int r) { return r <= 0 ? 0 : static_cast<std::size_t>(2 * r); }

/// Identifier of node v: ids[v] when given, the node index otherwise.
inline std::uint64_t node_ident(std::span<const std::uint64_t> ids, NodeId v) {
  return ids.empty() ? static_cast<std::uint64_t>(v) : ids[v];
}

struct Irregularity {
  enum class Kind { LowDegree, Cycle };
  Kind kind = Kind::LowDegree;
  NodeId node = kNoNode;        // low-degree node
  std::vector<NodeId> cycle;    // cycle nodes in cyclic order
  int effective_distance = 0;
  std::size_t degree = 0;       // degree of the low-degree node
  std::uint64_t tiebreak = 0;   // node identifier, or max identifier on the cycle

  /// Preference order: closer first; at equal distance cycles before
  /// low-degree nodes; cycles by smallest max identifier; low-degree nodes
  /// by smallest degree, then smallest identifier.
  auto key() const {
    return std::make_tuple(effective_distance, kind == Kind::Cycle ? 0 : 1,
                           kind == Kind::Cycle ? 0 : degree, tiebreak);
  }
};

/// Simple cycles of length 3..max_len whose nodes all satisfy `allowed`.
/// Each cycle is reported once, starting at its smallest node index and
/// continuing towards the smaller of its two neighbors on the cycle.
inline std::vector<std::vector<NodeId>> enumerate_cycles(const PortedGraph& g, std::size_t max_len,
                                                         std::vector<char> allowed) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<NodeId>> out;
  if (max_len < 3) return out;

  // Restrict to the 2-core of the allowed subgraph.
  std::vector<int> deg(n, 0);
  std::vector<NodeId> peel;
  for (NodeId v = 0; v < n; ++v) {
    if (!allowed[v]) continue;
    for (const auto& h : g.ports(v))
      if (allowed[h.to]) ++deg[v];
    if (deg[v] <= 1) peel.push_back(v);
  }
  while (!peel.empty()) {
    const NodeId v = peel.back();
    peel.pop_back();
    if (!allowed[v]) continue;
    allowed[v] = 0;
    for (const auto& h : g.ports(v))
      if (allowed[h.to] && --deg[h.to] <= 1) peel.push_back(h.to);
  }

  std::vector<NodeId> path;
  std::vector<char> on_path(n, 0);
  struct Frame {
    NodeId v;
    Port next;
  };
  std::vector<Frame> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (!allowed[s]) continue;
    path.assign(1, s);
    on_path[s] = 1;
    stack.assign(1, {s, 0});
    while (!stack.empty()) {
      auto& top = stack.back();
      if (top.next >= g.degree(top.v)) {
        on_path[top.v] = 0;
        path.pop_back();
        stack.pop_back();
        continue;
      }
      const NodeId w = g.neighbor(top.v, top.next++);
      if (w == s) {
        if (path.size() >= 3 && path[1] < path.back()) out.push_back(path);
        continue;
      }
      if (w < s || !allowed[w] || on_path[w] || path.size() >= max_len) continue;
      on_path[w] = 1;
      path.push_back(w);
      stack.push_back({w, 0});
    }
    on_path[s] = 0;
  }
  return out;
}

inline std::uint64_t cycle_max_ident(std::span<const NodeId> cycle, std::span<const std::uint64_t> ids) {
  std::uint64_t m = 0;
  for (NodeId u : cycle) m = std::max(m, node_ident(ids, u));
  return m;
}

/// Closest irregularity of v within effective distance r, computed from the
/// radius-r ball of v only.
inline std::optional<Irregularity> closest_irregularity(const PortedGraph& g, NodeId v, int r,
                                                        std::span<const std::uint64_t> ids = {}) {
  const auto delta = static_cast<std::size_t>(g.delta());
  BoundedBfs bfs(g.node_count());
  const auto& ball = bfs.run(g, v, std::max(r, 0));
  std::optional<Irregularity> best;
  auto offer = [&](Irregularity cand) {
    if (!best || cand.key() < best->key()) best = std::move(cand);
  };
  std::vector<char> allowed(g.node_count(), 0);
  for (NodeId u : ball) {
    if (g.degree(u) < delta) {
      Irregularity irr;
      irr.kind = Irregularity::Kind::LowDegree;
      irr.node = u;
      irr.effective_distance = bfs.dist(u);
      irr.degree = g.degree(u);
      irr.tiebreak = node_ident(ids, u);
      offer(std::move(irr));
    } else {
      allowed[u] = 1;
    }
  }
  for (auto& cyc : enumerate_cycles(g, max_cycle_length(r), std::move(allowed))) {
    int near = std::numeric_limits<int>::max();
    for (NodeId u : cyc) near = std::min(near, bfs.dist(u));
    const int eff = near + cycle_ell(cyc.size());
    if (eff > r) continue;
    Irregularity irr;
    irr.kind = Irregularity::Kind::Cycle;
    irr.effective_distance = eff;
    irr.tiebreak = cycle_max_ident(cyc, ids);
    irr.cycle = std::move(cyc);
    offer(std::move(irr));
  }
  return best;
}

/// Closest irregularity of every node, together with the next hop of a
/// shortest path towards it. Built with multi-source searches, so it scales
/// to large graphs.
struct IrregularityField {
  static constexpr int kNone = -1;
  static constexpr std::int32_t kOnCycle = -2;

  std::vector<std::vector<NodeId>> cycles;
  std::vector<std::uint64_t> cycle_max_id;

  std::vector<int> effective_distance;     // kNone when nothing within r
  std::vector<Irregularity::Kind> kind;
  std::vector<std::int64_t> target;        // low-degree node id or cycle index
  std::vector<std::int32_t> next_port;     // port toward the target; -1 at a low-degree target, kOnCycle on the cycle

  bool has(NodeId v) const { return effective_distance[v] != kNone; }
};

inline IrregularityField irregularity_field(const PortedGraph& g, int r,
                                            std::span<const std::uint64_t> ids = {}) {
  const std::size_t n = g.node_count();
  const auto delta = static_cast<std::size_t>(g.delta());
  IrregularityField f;
  f.effective_distance.assign(n, IrregularityField::kNone);
  f.kind.assign(n, Irregularity::Kind::LowDegree);
  f.target.assign(n, -1);
  f.next_port.assign(n, -1);

  // Per-node best key: (eff, kind rank, degree, tiebreak, cycle index).
  using Key = std::tuple<int, int, std::size_t, std::uint64_t, std::int64_t>;
  const Key none{std::numeric_limits<int>::max(), 0, 0, 0, 0};
  std::vector<Key> best(n, none);

  // Low-degree nodes: layered BFS carrying the best (degree, id) source.
  {
    std::vector<int> dist(n, -1);
    std::vector<NodeId> order;
    for (NodeId v = 0; v < n; ++v)
      if (g.degree(v) < delta) {
        dist[v] = 0;
        order.push_back(v);
      }
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeId v = order[head];
      if (dist[v] >= r) continue;
      for (const auto& h : g.ports(v))
        if (dist[h.to] < 0) {
          dist[h.to] = dist[v] + 1;
          order.push_back(h.to);
        }
    }
    std::vector<std::tuple<std::size_t, std::uint64_t, NodeId>> src(n);
    for (NodeId v : order) {
      if (dist[v] == 0) {
        src[v] = {g.degree(v), node_ident(ids, v), v};
        best[v] = {0, 1, g.degree(v), node_ident(ids, v), v};
        f.next_port[v] = -1;
        continue;
      }
      bool first = true;
      for (Port p = 0; p < g.degree(v); ++p) {
        const NodeId x = g.neighbor(v, p);
        if (dist[x] != dist[v] - 1) continue;
        if (first || src[x] < src[v]) {
          src[v] = src[x];
          f.next_port[v] = static_cast<std::int32_t>(p);
          first = false;
        }
      }
      const auto& [d, id, who] = src[v];
      best[v] = {dist[v], 1, d, id, who};
    }
  }

  // Cycles among full-degree nodes.
  std::vector<char> allowed(n, 0);
  for (NodeId v = 0; v < n; ++v) allowed[v] = g.degree(v) == delta;
  f.cycles = enumerate_cycles(g, max_cycle_length(r), std::move(allowed));
  f.cycle_max_id.reserve(f.cycles.size());
  std::vector<int> dist(n, -1);
  std::vector<std::int32_t> hop(n, -1);
  std::vector<NodeId> order;
  for (std::size_t ci = 0; ci < f.cycles.size(); ++ci) {
    const auto& cyc = f.cycles[ci];
    f.cycle_max_id.push_back(cycle_max_ident(cyc, ids));
    const int ell = cycle_ell(cyc.size());
    if (ell > r) continue;
    order.assign(cyc.begin(), cyc.end());
    for (NodeId u : cyc) dist[u] = 0, hop[u] = IrregularityField::kOnCycle;
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeId v = order[head];
      if (dist[v] + ell >= r) continue;
      for (Port p = 0; p < g.degree(v); ++p) {
        const NodeId w = g.neighbor(v, p);
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
      }
    }
    for (NodeId v : order) {
      if (dist[v] > 0) {
        for (Port p = 0; p < g.degree(v); ++p)
          if (dist[g.neighbor(v, p)] == dist[v] - 1) {
            hop[v] = static_cast<std::int32_t>(p);
            break;
          }
      }
      const Key k{dist[v] + ell, 0, 0, f.cycle_max_id[ci], static_cast<std::int64_t>(ci)};
      if (k < best[v]) {
        best[v] = k;
        f.next_port[v] = hop[v];
      }
    }
    for (NodeId v : order) dist[v] = -1, hop[v] = -1;
  }

  for (NodeId v = 0; v < n; ++v) {
    const auto& [eff, rank, d, id, who] = best[v];
    if (eff > r) continue;
    f.effective_distance[v] = eff;
    f.kind[v] = rank == 0 ? Irregularity::Kind::Cycle : Irregularity::Kind::LowDegree;
    f.target[v] = who;
  }
  return f;
}

// ---------------------------------------------------------------------------
// Planting irregularities into an oriented regular tree
// ---------------------------------------------------------------------------

struct PlantSpec {
  Irregularity::Kind kind = Irregularity::Kind::LowDegree;
  int distance = 1;   // effective distance from the center (node 0)
  int size = 0;       // cycle length, or target degree (0 means delta - 1)
};

/// Plants low-degree nodes and cycles of full-degree nodes into a tree
/// produced by gen_regular_tree. Each spec uses its own branch of the
/// center. Unrealizable specs are rejected.
inline PortedGraph plant_irregularities(const PortedGraph& base, std::span<const PlantSpec> specs) {
  if (specs.empty()) return base;
  require(base.oriented(), "planting needs an oriented regular tree");
  const int delta = base.delta();
  const std::size_t n = base.node_count();
  require(base.edge_count() + 1 == n, "planting needs a tree");
  const auto depth = bfs_distances(base, 0);
  const int radius = *std::max_element(depth.begin(), depth.end());
  for (NodeId v = 0; v < n; ++v)
    require(depth[v] == radius || base.degree(v) == static_cast<std::size_t>(delta),
            "base must be a balanced regular tree centered at node 0");

  // Mutable copy: child[v][code] for codes leading away from the center.
  std::vector<EdgeSpec> edges(base.edges().begin(), base.edges().end());
  std::vector<char> alive_edge(edges.size(), 1);
  std::vector<char> alive(n, 1);
  auto child_at = [&](NodeId v, int code) -> NodeId {
    const auto p = base.port_of_direction(v, code);
    if (!p) return kNoNode;
    const NodeId w = base.neighbor(v, *p);
    return depth[w] == depth[v] + 1 ? w : kNoNode;
  };
  auto parent_code = [&](NodeId v) -> int {
    for (const auto& h : base.ports(v))
      if (depth[h.to] + 1 == depth[v]) return h.dir;
    return -1;
  };
  auto first_child_code = [&](NodeId v) {
    const int pc = parent_code(v);
    for (int c = 0; c < delta; ++c)
      if (c != pc) return c;
    return -1;
  };
  auto remove_subtree = [&](NodeId parent, int code) {
    const NodeId root = child_at(parent, code);
    if (root == kNoNode || !alive[root]) throw InvalidParameter("planting collides with an earlier spec");
    alive_edge[base.half_edge(parent, *base.port_of_direction(parent, code)).edge] = 0;
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      alive[v] = 0;
      for (const auto& h : base.ports(v))
        if (depth[h.to] == depth[v] + 1) {
          alive_edge[h.edge] = 0;
          stack.push_back(h.to);
        }
    }
  };
  auto descend = [&](NodeId from, int steps) {
    NodeId v = from;
    for (int i = 0; i < steps; ++i) v = child_at(v, first_child_code(v));
    return v;
  };

  std::vector<char> branch_used(static_cast<std::size_t>(delta), 0);
  auto take_branch = [&]() {
    for (int c = 0; c < delta; ++c)
      if (!branch_used[c]) {
        branch_used[c] = 1;
        return c;
      }
    throw InvalidParameter("more planted irregularities than center branches");
  };

  std::vector<EdgeSpec> extra;
  for (const auto& s : specs) {
    if (s.kind == Irregularity::Kind::LowDegree) {
      const int target = s.size == 0 ? delta - 1 : s.size;
      require(target >= 1 && target < delta, "target degree must be in [1, delta)");
      require(s.distance >= 1 && s.distance < radius, "low-degree node must be strictly inside the tree");
      const int b = take_branch();
      const NodeId x = descend(child_at(0, b), s.distance - 1);
      const int pc = parent_code(x);
      int removed = 0;
      for (int c = delta - 1; c >= 0 && removed < delta - target; --c) {
        if (c == pc) continue;
        remove_subtree(x, c);
        ++removed;
      }
    } else {
      const int len = s.size;
      require(len >= 3, "cycle length must be at least 3");
      const int m = s.distance - cycle_ell(static_cast<std::size_t>(len));
      require(m >= 0, "effective distance is smaller than ell(C)");
      require(m + len - 1 <= radius - 1, "cycle does not fit inside the tree");
      const int b = take_branch();
      std::vector<NodeId> path;
      NodeId y0 = m == 0 ? NodeId{0} : descend(child_at(0, b), m - 1);
      path.push_back(y0);
      NodeId cur = m == 0 ? child_at(0, b) : child_at(y0, first_child_code(y0));
      path.push_back(cur);
      for (int i = 2; i < len; ++i) {
        cur = child_at(cur, first_child_code(cur));
        path.push_back(cur);
      }
      const NodeId last = path.back();
      int chosen = -1;
      for (int c = 0; c < delta && chosen < 0; ++c) {
        const NodeId yc = child_at(y0, c);
        if (yc == kNoNode || yc == path[1] || !alive[yc]) continue;
        if (m == 0 && branch_used[c]) continue;
        const NodeId lc = child_at(last, inverse_code(c));
        if (lc == kNoNode || !alive[lc]) continue;
        chosen = c;
      }
      if (chosen < 0) throw InvalidParameter("no orientation-consistent way to close the cycle");
      if (m == 0) branch_used[chosen] = 1;
      remove_subtree(y0, chosen);
      remove_subtree(last, inverse_code(chosen));
      const Direction d = Direction::from_code(chosen);
      extra.push_back({y0, last, 0, 0, d.dim, d.plus ? 1 : -1});
    }
  }

  // Compact node ids and recompute ports as rank of the orientation code.
  std::vector<NodeId> remap(n, kNoNode);
  NodeId next = 0;
  for (NodeId v = 0; v < n; ++v)
    if (alive[v]) remap[v] = next++;
  std::vector<EdgeSpec> out;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (alive_edge[i]) out.push_back(edges[i]);
  out.insert(out.end(), extra.begin(), extra.end());
  std::vector<std::vector<int>> codes(n);
  for (const auto& e : out) {
    const int cu = Direction{e.dim, e.sign > 0}.code();
    codes[e.u].push_back(cu);
    codes[e.v].push_back(inverse_code(cu));
  }
  for (auto& c : codes) std::sort(c.begin(), c.end());
  auto rank = [&](NodeId v, int code) {
    return static_cast<Port>(std::lower_bound(codes[v].begin(), codes[v].end(), code) - codes[v].begin());
  };
  for (auto& e : out) {
    const int cu = Direction{e.dim, e.sign > 0}.code();
    e.port_u = rank(e.u, cu);
    e.port_v = rank(e.v, inverse_code(cu));
    e.u = remap[e.u];
    e.v = remap[e.v];
  }
  nlohmann::json meta = base.meta();
  meta["planted"] = specs.size();
  return PortedGraph::from_edges(next, delta, std::move(out), std::move(meta));
}

}  // namespace lcl

#endif  // LCL_IRREGULARITY_HPP
