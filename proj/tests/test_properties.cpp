#include <gtest/gtest.h>

#include <map>
#include <random>

#include "lcl/lcl.hpp"

using namespace lcl;

namespace {

// Full edge scan: every half-edge points back to itself and orientations are
// inverse at the two endpoints.
void expect_ports_consistent(const PortedGraph& g) {
  for (NodeId v = 0; v < g.node_count(); ++v) {
    ASSERT_LE(g.degree(v), static_cast<std::size_t>(g.delta()));
    for (Port p = 0; p < g.degree(v); ++p) {
      const auto& h = g.half_edge(v, p);
      const auto& back = g.half_edge(h.to, h.back);
      EXPECT_EQ(back.to, v);
      EXPECT_EQ(back.back, p);
      EXPECT_EQ(back.edge, h.edge);
      if (g.oriented()) { EXPECT_EQ(back.dir, inverse_code(h.dir)); }
    }
  }
}

PortedGraph relabel(const PortedGraph& g, const std::vector<NodeId>& perm) {
  std::vector<EdgeSpec> edges(g.edges().begin(), g.edges().end());
  for (auto& e : edges) {
    e.u = perm[e.u];
    e.v = perm[e.v];
  }
  return PortedGraph::from_edges(g.node_count(), g.delta(), std::move(edges));
}

Assignment random_assignment(std::size_t n, int b, std::mt19937_64& rng) {
  Assignment a = Assignment::with_index_ids(n, b);
  for (auto& x : a.bits) x = rng() & ((1u << b) - 1);
  return a;
}

}  // namespace

TEST(Properties, GeneratorsKeepPortsConsistent) {
  expect_ports_consistent(gen_regular_tree(4, 4));
  expect_ports_consistent(gen_regular_tree(6, 3));
  expect_ports_consistent(gen_balanced_tree(5, 3));
  expect_ports_consistent(gen_cycle(9));
  const auto p = gen_symlower_pair(4, 4);
  expect_ports_consistent(p.tree);
  expect_ports_consistent(p.modified);
  EXPECT_EQ(p.tree.node_count(), p.modified.node_count());
  EXPECT_EQ(p.tree.edge_count(), p.modified.edge_count());
  for (std::uint64_t seed = 1; seed <= 10; ++seed) expect_ports_consistent(gen_random_bounded_degree(100, 5, 30, seed));
  const std::vector<PlantSpec> specs{{Irregularity::Kind::LowDegree, 2, 3}, {Irregularity::Kind::Cycle, 4, 4}};
  expect_ports_consistent(plant_irregularities(gen_regular_tree(4, 6), specs));
}

TEST(Properties, ViewsAreInvariantUnderRelabeling) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = trial % 2 ? gen_regular_tree(4, 3) : gen_random_bounded_degree(60, 4, 15, rng());
    std::vector<NodeId> perm(g.node_count());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto h = relabel(g, perm);
    const auto a = random_assignment(g.node_count(), 2, rng);
    Assignment b = a;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      b.bits[perm[v]] = a.bits[v];
      b.ids[perm[v]] = a.ids[v];
    }
    for (NodeId v = 0; v < g.node_count(); ++v)
      for (int t : {0, 1, 2}) EXPECT_EQ(extract_view(g, v, t, a).encoding(), extract_view(h, perm[v], t, b).encoding());
  }
}

TEST(Properties, AlgorithmOutputIsLocal) {
  // Changing bits outside B_t(v) never changes v's output.
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = gen_random_bounded_degree(80, 4, 10, rng());
    const int t = 1 + trial % 2;
    LocalAlgorithm alg{t, AlgorithmKind::Node, 0,
                       [](const View& view) {
                         Label s = 1469598103934665603ULL;
                         for (const auto& e : view.entries()) s = (s ^ e.bits) * 1099511628211ULL;
                         return s;
                       },
                       "hash"};
    auto a = random_assignment(g.node_count(), 2, rng);
    const auto before = run_node_algorithm(g, alg, a);
    const NodeId v = static_cast<NodeId>(rng() % g.node_count());
    const auto d = bfs_distances(g, v);
    for (NodeId u = 0; u < g.node_count(); ++u)
      if (d[u] > t) a.bits[u] ^= 1;
    EXPECT_EQ(run_node_algorithm(g, alg, a)[v], before[v]);
  }
}

TEST(Properties, VerifiersAreLocal) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = gen_random_bounded_degree(60, 4, 10, rng());
    const int k = 1 + trial % 3;
    std::vector<Label> phi(g.node_count());
    for (auto& x : phi) x = 1 + rng() % 2;
    const NodeId v = static_cast<NodeId>(rng() % g.node_count());
    const auto d = bfs_distances(g, v);
    const auto before = verify_weak_coloring(g, phi, 2, k).pass[v];
    for (NodeId u = 0; u < g.node_count(); ++u)
      if (d[u] > k) phi[u] = 3 - phi[u];
    EXPECT_EQ(verify_weak_coloring(g, phi, 2, k).pass[v], before);

    std::vector<PStarLabel> lam(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u)
      lam[u] = PStarLabel::pointer(static_cast<int>(rng() % 4), static_cast<Port>(rng() % g.degree(u)));
    const auto pbefore = verify_pstar(g, lam, 4).pass[v];
    for (NodeId u = 0; u < g.node_count(); ++u)
      if (d[u] > 1) lam[u] = PStarLabel::empty();
    EXPECT_EQ(verify_pstar(g, lam, 4).pass[v], pbefore);
  }
}

TEST(Properties, WeakEdgeVerifierIsLocal) {
  const auto g = gen_regular_tree(4, 4);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Label> psi(g.edge_count());
    for (auto& x : psi) x = 1 + rng() % 2;
    const NodeId v = static_cast<NodeId>(rng() % g.node_count());
    const auto before = verify_weak_edge_coloring(g, psi, 2, 4).pass[v];
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (g.edge(e).u != v && g.edge(e).v != v) psi[e] = 3 - psi[e];
    EXPECT_EQ(verify_weak_edge_coloring(g, psi, 2, 4).pass[v], before);
  }
}

TEST(Properties, PointerChainsEndAtMatchingDegreeOrLoop) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const int delta = 3 + static_cast<int>(seed % 3);
    const auto g = gen_random_bounded_degree(300, delta, seed % 2 ? 10 : 60, seed);
    auto a = Assignment::with_index_ids(g.node_count());
    std::mt19937_64 rng(seed);
    std::shuffle(a.ids.begin(), a.ids.end(), rng);
    const auto sol = solve_pstar(g, a);
    ASSERT_TRUE(verify_pstar(g, sol.labels, delta).all_pass());
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (g.degree(v) < static_cast<std::size_t>(delta)) continue;
      std::vector<char> seen(g.node_count(), 0);
      NodeId u = v;
      while (sol.labels[u].p && !seen[u]) {
        seen[u] = 1;
        EXPECT_EQ(sol.labels[u].d, sol.labels[v].d);
        u = g.neighbor(u, *sol.labels[u].p);
      }
      if (!sol.labels[u].p) { EXPECT_EQ(static_cast<int>(g.degree(u)), sol.labels[v].d); }
    }
  }
}

TEST(Properties, ParityArgumentOfTheReduction) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = trial % 2 ? gen_regular_tree(4, 4) : gen_random_bounded_degree(150, 4, 20, rng());
    const int k = 2 + trial % 2;
    const Label c = 2 + rng() % 4;
    const auto phi = random_weak_coloring(g, k, c, rng(), 0.9);
    const auto res = weak_to_weak2c(g, phi, k, c);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (res.distance[v] < 2) continue;
      const auto du = bfs_distances(g, res.witness[v]);
      ASSERT_EQ(du[v], res.distance[v]);
      for (const auto& h : g.ports(v))
        if (du[h.to] == res.distance[v] - 1) { EXPECT_NE(res.phi2[v], res.phi2[h.to]) << v << " " << h.to; }
    }
  }
}

TEST(Properties, IndependenceFactorization) {
  // Conditioned on B_1(v), the outputs of two distinct neighbors are
  // independent: joint counts equal the product of marginal counts.
  const auto A = random_node_rule(4, 1, 1, 2, 77);
  const auto big = oriented_ball_words(4, 2);
  const auto small = oriented_ball_words(4, 1);
  std::map<Word, std::size_t> pos;
  for (std::size_t i = 0; i < big.size(); ++i) pos[big[i]] = i;
  auto out_at = [&](int dir, std::uint64_t x) {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < small.size(); ++i)
      idx |= ((x >> pos.at(word_concat(Word{static_cast<std::uint16_t>(dir)}, small[i]))) & 1u) << i;
    return A.table[idx];
  };
  const std::size_t m = big.size();
  for (std::uint64_t inner = 0; inner < 32; ++inner) {
    std::uint64_t joint = 0, first = 0, second = 0, total = 0;
    for (std::uint64_t outer = 0; outer < (std::uint64_t{1} << (m - 5)); ++outer) {
      const std::uint64_t x = inner | (outer << 5);
      const bool a0 = out_at(0, x) == 0, a1 = out_at(2, x) == 0;
      joint += a0 && a1;
      first += a0;
      second += a1;
      ++total;
    }
    EXPECT_EQ(Rational(BigInt(joint), BigInt(total)),
              Rational(BigInt(first), BigInt(total)) * Rational(BigInt(second), BigInt(total)))
        << inner;
  }
}

TEST(Properties, MonteCarloStaysInsideHoeffdingInterval) {
  const auto g = gen_regular_tree(4, 3);
  const auto rule = random_node_rule(4, 1, 1, 2, 5);
  const auto alg = to_local_algorithm(rule);
  const auto base = Assignment::zeros(g.node_count(), 1);
  const double exact = to_double(node_failure_probability(rule));
  int inside = 0;
  const int trials = 40;
  for (int s = 0; s < trials; ++s) {
    const auto est = local_failure_probability(g, alg, 0, weak_coloring_failure, base,
                                               MonteCarloOptions{4000, 0.99, static_cast<std::uint64_t>(s + 1)});
    inside += std::abs(est.value - exact) <= est.error;
  }
  EXPECT_GE(inside, static_cast<int>(0.99 * trials) - 1);
}

TEST(Properties, OutputsFactorizeAtDistance) {
  // Outputs of a t-round algorithm at two nodes at distance 2t+1 depend on
  // disjoint balls, so their joint law is the product of the marginals.
  const auto g = gen_regular_tree(4, 6);
  const auto rule = random_node_rule(4, 1, 1, 3, 19);
  const auto alg = to_local_algorithm(rule);
  const NodeId v = 0;
  const auto dv = bfs_distances(g, v);
  NodeId u = kNoNode;
  for (NodeId w = 0; w < g.node_count() && u == kNoNode; ++w)
    if (dv[w] == 3) u = w;
  ASSERT_NE(u, kNoNode);
  const auto du = bfs_distances(g, u);
  std::vector<NodeId> region;
  for (NodeId w = 0; w < g.node_count(); ++w)
    if (dv[w] <= 1 || du[w] <= 1) region.push_back(w);
  ASSERT_EQ(region.size(), 10u);
  auto a = Assignment::zeros(g.node_count(), 1);
  std::uint64_t joint[3][3] = {}, mv[3] = {}, mu[3] = {};
  const std::uint64_t total = std::uint64_t{1} << region.size();
  for (std::uint64_t x = 0; x < total; ++x) {
    for (std::size_t i = 0; i < region.size(); ++i) a.bits[region[i]] = (x >> i) & 1u;
    const Label ov = alg.apply(extract_view(g, v, 1, a)), ou = alg.apply(extract_view(g, u, 1, a));
    ++joint[ov][ou];
    ++mv[ov];
    ++mu[ou];
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_EQ(Rational(BigInt(joint[i][j]), BigInt(total)),
                Rational(BigInt(mv[i]), BigInt(total)) * Rational(BigInt(mu[j]), BigInt(total)))
          << i << " " << j;
}
