#include <gtest/gtest.h>

#include <limits>

#include "lcl/graph.hpp"
#include "lcl/graph_io.hpp"

using namespace lcl;

namespace {

// All-pairs shortest paths by Floyd-Warshall; independent of the BFS code.
std::vector<std::vector<int>> all_pairs(const PortedGraph& g) {
  const std::size_t n = g.node_count();
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (NodeId v = 0; v < n; ++v) d[v][v] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

void expect_port_consistent(const PortedGraph& g) {
  for (NodeId v = 0; v < g.node_count(); ++v)
    for (Port p = 0; p < g.degree(v); ++p) {
      const auto& h = g.half_edge(v, p);
      ASSERT_LT(h.back, g.degree(h.to));
      EXPECT_EQ(g.neighbor(h.to, h.back), v);
      EXPECT_EQ(g.half_edge(h.to, h.back).edge, h.edge);
    }
}

}  // namespace

TEST(RegularTree, SizeMatchesCount) {
  EXPECT_EQ(regular_tree_size(4, 3), 53u);
  EXPECT_EQ(regular_tree_size(4, 0), 1u);
  EXPECT_EQ(regular_tree_size(3, 2), 10u);
  for (int delta : {2, 3, 4, 6})
    for (int r : {0, 1, 2, 4}) {
      std::size_t expect = 1, layer = delta;
      for (int i = 1; i <= r; ++i, layer *= (delta - 1)) expect += layer;
      EXPECT_EQ(regular_tree_size(delta, r), expect) << delta << " " << r;
    }
}

TEST(RegularTree, OrientationIsConsistent) {
  const auto g = gen_regular_tree(4, 3);
  ASSERT_EQ(g.node_count(), 53u);
  ASSERT_EQ(g.edge_count(), 52u);
  EXPECT_TRUE(g.oriented());
  EXPECT_EQ(g.dimensions(), 2);
  expect_port_consistent(g);
  for (NodeId v = 0; v < g.node_count(); ++v)
    for (const auto& h : g.ports(v)) {
      ASSERT_GE(h.dir, 0);
      EXPECT_EQ(g.half_edge(h.to, h.back).dir, inverse_code(h.dir));
    }
  // Each direction appears at most once per node.
  for (NodeId v = 0; v < g.node_count(); ++v) {
    std::vector<int> seen(4, 0);
    for (const auto& h : g.ports(v)) ++seen[h.dir];
    for (int c : seen) EXPECT_LE(c, 1);
  }
}

TEST(RegularTree, InternalNodesUsePortEqualToDirection) {
  const auto g = gen_regular_tree(6, 2);
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (g.degree(v) == 6)
      for (Port p = 0; p < 6; ++p) { EXPECT_EQ(g.half_edge(v, p).dir, static_cast<int>(p)); }
}

TEST(RegularTree, DirectionCodes) {
  EXPECT_EQ(kDirR, 0);
  EXPECT_EQ(kDirL, 1);
  EXPECT_EQ(kDirU, 2);
  EXPECT_EQ(kDirD, 3);
  for (int c = 0; c < 16; ++c) EXPECT_EQ(inverse_code(inverse_code(c)), c);
  EXPECT_EQ(inverse_code(kDirR), kDirL);
  EXPECT_EQ(inverse_code(kDirU), kDirD);
}

TEST(RegularTree, RejectsBadParameters) {
  EXPECT_THROW(gen_regular_tree(3, 2), InvalidParameter);
  EXPECT_THROW(gen_regular_tree(18, 1), InvalidParameter);
  EXPECT_THROW(gen_regular_tree(4, -1), InvalidParameter);
}

TEST(Cycle, Shape) {
  const auto g = gen_cycle(5);
  EXPECT_EQ(g.node_count(), 5u);
  EXPECT_EQ(g.edge_count(), 5u);
  for (NodeId v = 0; v < 5; ++v) EXPECT_EQ(g.degree(v), 2u);
  expect_port_consistent(g);
  EXPECT_THROW(gen_cycle(2), InvalidParameter);
}

TEST(BalancedTree, LeavesAtRadius) {
  for (int delta : {3, 4, 5}) {
    const auto g = gen_balanced_tree(delta, 3);
    EXPECT_EQ(g.node_count(), regular_tree_size(delta, 3));
    const auto d = bfs_distances(g, 0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (g.degree(v) == 1)
        EXPECT_EQ(d[v], 3);
      else
        EXPECT_EQ(g.degree(v), static_cast<std::size_t>(delta));
    }
    expect_port_consistent(g);
  }
}

TEST(RandomGraph, ConnectedBoundedAndConsistent) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = gen_random_bounded_degree(60, 4, 15, seed);
    EXPECT_EQ(g.node_count(), 60u);
    for (NodeId v = 0; v < g.node_count(); ++v) EXPECT_LE(g.degree(v), 4u);
    const auto d = bfs_distances(g, 0);
    for (int x : d) EXPECT_GE(x, 0);
    expect_port_consistent(g);
    // No self loops or parallel edges.
    for (NodeId v = 0; v < g.node_count(); ++v)
      for (Port p = 0; p < g.degree(v); ++p) {
        EXPECT_NE(g.neighbor(v, p), v);
        for (Port q = p + 1; q < g.degree(v); ++q) EXPECT_NE(g.neighbor(v, p), g.neighbor(v, q));
      }
  }
}

TEST(RandomGraph, DeterministicInSeed) {
  const auto a = gen_random_bounded_degree(40, 3, 5, 7);
  const auto b = gen_random_bounded_degree(40, 3, 5, 7);
  EXPECT_EQ(dump_graph(a), dump_graph(b));
}

TEST(Bfs, MatchesFloydWarshall) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto g = gen_random_bounded_degree(50, 3, 10, seed);
    const auto d = all_pairs(g);
    BoundedBfs bfs(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
      const auto full = bfs_distances(g, v);
      for (NodeId u = 0; u < g.node_count(); ++u) EXPECT_EQ(full[u], d[v][u]);
      for (int r : {0, 1, 2, 4}) {
        const auto& ball = bfs.run(g, v, r);
        std::size_t expect = 0;
        for (NodeId u = 0; u < g.node_count(); ++u) expect += d[v][u] <= r;
        EXPECT_EQ(ball.size(), expect);
        for (NodeId u : ball) EXPECT_EQ(bfs.dist(u), d[v][u]);
      }
    }
  }
}

TEST(Bfs, BallIsFull) {
  const auto g = gen_regular_tree(4, 4);
  EXPECT_TRUE(ball_is_full(g, 0, 3));
  EXPECT_FALSE(ball_is_full(g, 0, 4));
  const auto d = bfs_distances(g, 0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    // Oracle: the ball of radius r is full iff every leaf lies farther than r.
    for (int r = 0; r <= 4; ++r) {
      bool full = true;
      const auto dv = bfs_distances(g, v);
      for (NodeId u = 0; u < g.node_count(); ++u)
        if (dv[u] <= r && g.degree(u) < 4) full = false;
      EXPECT_EQ(ball_is_full(g, v, r), full);
    }
    (void)d;
  }
}

TEST(GraphIo, RoundTripIsByteIdentical) {
  const auto g = gen_random_bounded_degree(30, 4, 6, 3);
  const std::string text = dump_graph(g);
  const auto h = parse_graph(text);
  EXPECT_EQ(dump_graph(h), text);
  const auto t = gen_regular_tree(4, 2);
  EXPECT_EQ(dump_graph(parse_graph(dump_graph(t))), dump_graph(t));
  EXPECT_TRUE(parse_graph(dump_graph(t)).oriented());
}

TEST(GraphIo, RejectsMalformedInput) {
  EXPECT_THROW(parse_graph("{"), InvalidInstance);
  EXPECT_THROW(parse_graph(R"({"n": 2, "delta": 1, "edges": [], "extra": 1})"), InvalidInstance);
  EXPECT_THROW(parse_graph(R"({"n": 2, "delta": 1, "edges": [[0, 1, 0]]})"), InvalidInstance);
  // Port out of range.
  EXPECT_ANY_THROW(parse_graph(R"({"n": 2, "delta": 1, "edges": [[0, 1, 0, 3, 0, 0]]})"));
}

TEST(Symlower, PairShapes) {
  for (int delta : {3, 4})
    for (int r : {3, 4, 5}) {
      const auto p = gen_symlower_pair(delta, r);
      EXPECT_EQ(p.tree.node_count(), p.modified.node_count());
      EXPECT_EQ(p.modified.edge_count() + 1, p.modified.node_count());
      expect_port_consistent(p.modified);
      const auto dt = bfs_distances(p.tree, p.center);
      const auto dm = bfs_distances(p.modified, p.center);
      int max_t = 0, max_m = 0;
      for (NodeId v = 0; v < p.tree.node_count(); ++v) {
        max_t = std::max(max_t, dt[v]);
        max_m = std::max(max_m, dm[v]);
        ASSERT_GE(dm[v], 0);
      }
      EXPECT_EQ(max_t, r);
      EXPECT_EQ(max_m, r + 1);
    }
}
