#ifndef LCL_GRAPH_HPP
#define LCL_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcl/common.hpp"

namespace lcl {

inline constexpr int kMaxDelta = 16;
inline constexpr std::size_t kMaxGeneratedNodes = 10'000'000;

/// Orientation label (dimension, sign) of an edge endpoint, packed as
/// code = 2 * (dim - 1) + (plus ? 0 : 1). For two dimensions the codes
/// 0, 1, 2, 3 are R, L, U, D.
struct Direction {
  int dim = 1;
  bool plus = true;

  constexpr int code() const { return 2 * (dim - 1) + (plus ? 0 : 1); }
  static constexpr Direction from_code(int c) { return {c / 2 + 1, c % 2 == 0}; }
  constexpr Direction inverse() const { return {dim, !plus}; }
  friend constexpr bool operator==(Direction, Direction) = default;
};

constexpr int inverse_code(int code) { return code ^ 1; }

inline constexpr int kDirR = 0;
inline constexpr int kDirL = 1;
inline constexpr int kDirU = 2;
inline constexpr int kDirD = 3;

/// One edge as it appears in the graph file: label (dim, sign) is the
/// orientation at u; dim == 0 means unoriented.
struct EdgeSpec {
  NodeId u = 0;
  NodeId v = 0;
  Port port_u = 0;
  Port port_v = 0;
  int dim = 0;
  int sign = 0;
  friend bool operator==(const EdgeSpec&, const EdgeSpec&) = default;
};

struct HalfEdge {
  NodeId to = kNoNode;
  Port back = 0;     // port of this edge at `to`
  int dir = -1;      // orientation code at this endpoint, -1 if none
  EdgeId edge = 0;
};

/// Port-numbered simple connected graph with optional consistent
/// orientation. Immutable once built; all constructors validate.
class PortedGraph {
 public:
  PortedGraph() = default;

  static PortedGraph from_edges(std::size_t n, int delta, std::vector<EdgeSpec> edges,
                                nlohmann::json meta = nlohmann::json::object()) {
    PortedGraph g;
    g.build(n, delta, std::move(edges), std::move(meta));
    return g;
  }

  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  int delta() const { return delta_; }
  bool oriented() const { return oriented_; }
  int dimensions() const { return delta_ / 2; }

  std::size_t degree(NodeId v) const { return adj_[v].size(); }
  std::span<const HalfEdge> ports(NodeId v) const { return adj_[v]; }
  const HalfEdge& half_edge(NodeId v, Port p) const { return adj_[v][p]; }
  NodeId neighbor(NodeId v, Port p) const { return adj_[v][p].to; }

  const EdgeSpec& edge(EdgeId e) const { return edges_[e]; }
  std::span<const EdgeSpec> edges() const { return edges_; }

  /// Port of the edge with orientation code `code` at v, if any.
  std::optional<Port> port_of_direction(NodeId v, int code) const {
    if (!oriented_ || code < 0 || code >= delta_) return std::nullopt;
    const auto p = dir_port_[static_cast<std::size_t>(v) * delta_ + code];
    if (p < 0) return std::nullopt;
    return static_cast<Port>(p);
  }

  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const {
    for (const auto& h : adj_[u])
      if (h.to == v) return h.edge;
    return std::nullopt;
  }

  const nlohmann::json& meta() const { return meta_; }

 private:
  void build(std::size_t n, int delta, std::vector<EdgeSpec> edges, nlohmann::json meta);

  int delta_ = 0;
  bool oriented_ = false;
  std::vector<std::vector<HalfEdge>> adj_;
  std::vector<EdgeSpec> edges_;
  std::vector<std::int32_t> dir_port_;
  nlohmann::json meta_ = nlohmann::json::object();
};

inline void PortedGraph::build(std::size_t n, int delta, std::vector<EdgeSpec> edges,
                               nlohmann::json meta) {
  require(n >= 1, "graph must have at least one node");
  require(delta >= 1 && delta <= kMaxDelta, "delta out of range [1, 16]");
  delta_ = delta;
  meta_ = meta.is_null() ? nlohmann::json::object() : std::move(meta);

  std::vector<std::size_t> deg(n, 0);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw InvalidInstance("edge endpoint out of range");
    if (e.u == e.v) throw InvalidInstance("self loop at node " + std::to_string(e.u));
    ++deg[e.u];
    ++deg[e.v];
  }
  adj_.assign(n, {});
  for (std::size_t v = 0; v < n; ++v) {
    if (deg[v] > static_cast<std::size_t>(delta))
      throw InvalidInstance("degree of node " + std::to_string(v) + " exceeds delta");
    adj_[v].resize(deg[v]);
  }

  bool any_oriented = false;
  bool all_oriented = true;
  for (const auto& e : edges) {
    if (e.dim != 0) {
      any_oriented = true;
      if (e.dim < 1 || 2 * e.dim > delta || (e.sign != 1 && e.sign != -1))
        throw InvalidInstance("bad orientation label on edge");
    } else {
      all_oriented = false;
    }
  }
  if (any_oriented && !all_oriented) throw InvalidInstance("partially oriented graph");
  oriented_ = any_oriented;

  for (EdgeId id = 0; id < edges.size(); ++id) {
    const auto& e = edges[id];
    if (e.port_u >= deg[e.u] || e.port_v >= deg[e.v])
      throw InvalidInstance("port index out of range on edge " + std::to_string(id));
    auto& hu = adj_[e.u][e.port_u];
    auto& hv = adj_[e.v][e.port_v];
    if (hu.to != kNoNode || hv.to != kNoNode)
      throw InvalidInstance("port used twice on edge " + std::to_string(id));
    int du = -1, dv = -1;
    if (oriented_) {
      du = Direction{e.dim, e.sign > 0}.code();
      dv = inverse_code(du);
    }
    hu = {e.v, e.port_v, du, id};
    hv = {e.u, e.port_u, dv, id};
  }

  // Simplicity: no parallel edges.
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<NodeId> nb;
    nb.reserve(adj_[v].size());
    for (const auto& h : adj_[v]) nb.push_back(h.to);
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
      throw InvalidInstance("parallel edges at node " + std::to_string(v));
  }

  if (oriented_) {
    dir_port_.assign(n * static_cast<std::size_t>(delta), -1);
    for (std::size_t v = 0; v < n; ++v)
      for (Port p = 0; p < adj_[v].size(); ++p) {
        auto& slot = dir_port_[v * delta + adj_[v][p].dir];
        if (slot >= 0)
          throw InvalidInstance("node " + std::to_string(v) + " has two edges with the same orientation");
        slot = static_cast<std::int32_t>(p);
      }
  } else {
    dir_port_.clear();
  }

  // Connectivity.
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (const auto& h : adj_[v])
      if (!seen[h.to]) {
        seen[h.to] = 1;
        ++count;
        stack.push_back(h.to);
      }
  }
  if (count != n) throw InvalidInstance("graph is not connected");

  edges_ = std::move(edges);
}

/// Bounded breadth-first search with a reusable distance array; only the
/// touched entries are reset between calls.
class BoundedBfs {
 public:
  explicit BoundedBfs(std::size_t n) : dist_(n, -1) {}

  /// Visits nodes within `radius` of `source` in BFS order (ports ascending).
  const std::vector<NodeId>& run(const PortedGraph& g, NodeId source, int radius) {
    for (NodeId v : order_) dist_[v] = -1;
    order_.clear();
    dist_[source] = 0;
    order_.push_back(source);
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const NodeId v = order_[head];
      if (dist_[v] == radius) continue;
      for (const auto& h : g.ports(v))
        if (dist_[h.to] < 0) {
          dist_[h.to] = dist_[v] + 1;
          order_.push_back(h.to);
        }
    }
    return order_;
  }

  int dist(NodeId v) const { return dist_[v]; }
  const std::vector<NodeId>& visited() const { return order_; }

 private:
  std::vector<int> dist_;
  std::vector<NodeId> order_;
};

inline std::vector<int> bfs_distances(const PortedGraph& g, NodeId source) {
  std::vector<int> dist(g.node_count(), -1);
  std::deque<NodeId> q{source};
  dist[source] = 0;
  while (!q.empty()) {
    const NodeId v = q.front();
    q.pop_front();
    for (const auto& h : g.ports(v))
      if (dist[h.to] < 0) {
        dist[h.to] = dist[v] + 1;
        q.push_back(h.to);
      }
  }
  return dist;
}

/// True iff every node within distance `radius` of v has degree delta.
inline bool ball_is_full(const PortedGraph& g, NodeId v, int radius) {
  BoundedBfs bfs(g.node_count());
  for (NodeId u : bfs.run(g, v, radius))
    if (g.degree(u) != static_cast<std::size_t>(g.delta())) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Node count of the balanced delta-regular tree of the given radius.
inline std::size_t regular_tree_size(int delta, int radius) {
  std::size_t total = 1, layer = static_cast<std::size_t>(delta);
  for (int i = 1; i <= radius; ++i) {
    total += layer;
    if (total > kMaxGeneratedNodes) throw InvalidParameter("tree exceeds the 10^7 node limit");
    layer *= static_cast<std::size_t>(delta - 1);
  }
  return total;
}

/// Balanced delta-regular tree of depth `radius`, centered at node 0, with a
/// consistent orientation over delta / 2 dimensions. At every full-degree
/// node the port index equals the orientation code.
inline PortedGraph gen_regular_tree(int delta, int radius) {
  if (delta <= 0 || delta % 2 != 0) throw InvalidParameter("delta must be a positive even integer");
  require(delta <= kMaxDelta, "delta must be at most 16");
  require(radius >= 1, "radius must be at least 1");
  const std::size_t n = regular_tree_size(delta, radius);

  std::vector<EdgeSpec> edges;
  edges.reserve(n - 1);
  struct Item {
    NodeId node;
    int parent_code;
    int depth;
  };
  std::deque<Item> queue{{0, -1, 0}};
  NodeId next = 1;
  while (!queue.empty()) {
    const Item it = queue.front();
    queue.pop_front();
    if (it.depth == radius) continue;
    for (int c = 0; c < delta; ++c) {
      if (c == it.parent_code) continue;
      const NodeId child = next++;
      const int child_depth = it.depth + 1;
      const Port child_port = child_depth < radius ? static_cast<Port>(inverse_code(c)) : 0;
      const Direction d = Direction::from_code(c);
      edges.push_back({it.node, child, static_cast<Port>(c), child_port, d.dim, d.plus ? 1 : -1});
      queue.push_back({child, inverse_code(c), child_depth});
    }
  }
  nlohmann::json meta = {{"generator", "regular-tree"}, {"radius", radius}, {"center", 0}};
  return PortedGraph::from_edges(n, delta, std::move(edges), std::move(meta));
}

/// Balanced unoriented delta-regular tree: center ports 0..delta-1 lead to
/// children; every other node has port 0 to its parent.
inline PortedGraph gen_balanced_tree(int delta, int radius) {
  require(delta >= 2 && delta <= kMaxDelta, "delta out of range");
  require(radius >= 1, "radius must be at least 1");
  const std::size_t n = regular_tree_size(delta, radius);
  std::vector<EdgeSpec> edges;
  edges.reserve(n - 1);
  std::deque<std::pair<NodeId, int>> queue{{0, 0}};
  NodeId next = 1;
  while (!queue.empty()) {
    const auto [v, depth] = queue.front();
    queue.pop_front();
    if (depth == radius) continue;
    const int first = v == 0 ? 0 : 1;
    for (int p = first; p < delta; ++p) {
      const NodeId child = next++;
      edges.push_back({v, child, static_cast<Port>(p), 0, 0, 0});
      queue.push_back({child, depth + 1});
    }
  }
  nlohmann::json meta = {{"generator", "balanced-tree"}, {"radius", radius}, {"center", 0}};
  return PortedGraph::from_edges(n, delta, std::move(edges), std::move(meta));
}

/// n-cycle; node i has port 0 towards i+1 and port 1 towards i-1. The single
/// dimension is oriented consistently ((1,+) points to i+1).
inline PortedGraph gen_cycle(std::size_t n) {
  if (n < 3) throw InvalidParameter("cycle needs at least 3 nodes");
  require(n <= kMaxGeneratedNodes, "cycle exceeds the 10^7 node limit");
  std::vector<EdgeSpec> edges;
  edges.reserve(n);
  for (NodeId i = 0; i < n; ++i)
    edges.push_back({i, static_cast<NodeId>((i + 1) % n), 0, 1, 1, 1});
  nlohmann::json meta = {{"generator", "cycle"}};
  return PortedGraph::from_edges(n, 2, std::move(edges), std::move(meta));
}

struct SymlowerPair {
  PortedGraph tree;
  PortedGraph modified;
  NodeId center = 0;
};

/// The two trees from the P* lower-bound argument: T is balanced with all
/// leaves at distance r from the center; T' moves, for every node at
/// distance r-1, its last leaf to hang below its first leaf.
inline SymlowerPair gen_symlower_pair(int delta, int r) {
  require(delta >= 3, "delta must be at least 3");
  require(r >= 2, "r must be at least 2");
  SymlowerPair out;
  out.tree = gen_balanced_tree(delta, r);
  const auto dist = bfs_distances(out.tree, 0);

  std::vector<EdgeSpec> edges(out.tree.edges().begin(), out.tree.edges().end());
  for (auto& e : edges) {
    const NodeId parent = e.u;
    if (dist[parent] != r - 1) continue;
    // Children of `parent` sit at ports 1..delta-1 (parent is not the center since r >= 2).
    if (e.port_u == static_cast<Port>(delta - 1)) {
      const NodeId first_leaf = out.tree.neighbor(parent, 1);
      e.u = first_leaf;
      e.port_u = 1;
    }
  }
  nlohmann::json meta = {{"generator", "symlower-modified"}, {"radius", r}, {"center", 0}};
  out.modified = PortedGraph::from_edges(out.tree.node_count(), delta, std::move(edges), std::move(meta));
  out.center = 0;
  return out;
}

/// Random connected graph with maximum degree delta: a random recursive tree
/// under the degree cap plus `extra_edges` random chords. Ports are assigned
/// in insertion order.
inline PortedGraph gen_random_bounded_degree(std::size_t n, int delta, std::size_t extra_edges,
                                             std::uint64_t seed) {
  require(n >= 2, "need at least two nodes");
  require(delta >= 2 && delta <= kMaxDelta, "delta out of range");
  std::mt19937_64 rng(seed);
  std::vector<Port> deg(n, 0);
  std::vector<EdgeSpec> edges;
  std::vector<NodeId> open{0};  // nodes with spare degree, may contain stale entries
  std::set<std::pair<NodeId, NodeId>> present;
  auto add = [&](NodeId a, NodeId b) {
    edges.push_back({a, b, deg[a], deg[b], 0, 0});
    ++deg[a];
    ++deg[b];
    present.insert({std::min(a, b), std::max(a, b)});
  };
  for (NodeId v = 1; v < n; ++v) {
    NodeId parent;
    for (;;) {
      std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
      const std::size_t i = pick(rng);
      parent = open[i];
      if (deg[parent] < static_cast<Port>(delta)) break;
      open[i] = open.back();
      open.pop_back();
    }
    add(parent, v);
    open.push_back(v);
  }
  std::uniform_int_distribution<NodeId> node_dist(0, static_cast<NodeId>(n - 1));
  for (std::size_t tries = 0, added = 0; added < extra_edges && tries < 50 * (extra_edges + 1); ++tries) {
    const NodeId a = node_dist(rng), b = node_dist(rng);
    if (a == b || deg[a] >= static_cast<Port>(delta) || deg[b] >= static_cast<Port>(delta)) continue;
    if (present.count({std::min(a, b), std::max(a, b)})) continue;
    add(a, b);
    ++added;
  }
  nlohmann::json meta = {{"generator", "random-bounded-degree"}, {"seed", seed}};
  return PortedGraph::from_edges(n, delta, std::move(edges), std::move(meta));
}

}  // namespace lcl

#endif  // LCL_GRAPH_HPP
