#include <gtest/gtest.h>

#include <cstdlib>
#include <set>

#include "lcl/engine.hpp"
#include "lcl/speedup.hpp"

using namespace lcl;

namespace {

LocalAlgorithm own_bit_algorithm(int rounds = 1) {
  return {rounds, AlgorithmKind::Node, 2, [](const View& v) { return Label{v.center().bits & 1u}; }, "own-bit"};
}

struct ThreadsEnv {
  explicit ThreadsEnv(const char* value) { setenv("LCL_THREADS", value, 1); }
  ~ThreadsEnv() { unsetenv("LCL_THREADS"); }
};

}  // namespace

TEST(Engine, NodeAlgorithmSeesItsBall) {
  const auto g = gen_random_bounded_degree(200, 4, 40, 5);
  LocalAlgorithm deg{1, AlgorithmKind::Node, 0,
                     [](const View& v) {
                       Label s = 0;
                       for (const auto& e : v.entries()) s += e.path.size() == 1 ? 1 : 0;
                       return s;
                     },
                     "degree"};
  const auto out = run_node_algorithm(g, deg, Assignment::zeros(g.node_count(), 0));
  for (NodeId v = 0; v < g.node_count(); ++v) EXPECT_EQ(out[v], g.degree(v));
}

TEST(Engine, ResultsDoNotDependOnThreads) {
  const auto g = gen_regular_tree(4, 5);
  Assignment a = Assignment::zeros(g.node_count(), 2);
  for (NodeId v = 0; v < g.node_count(); ++v) a.bits[v] = (v * 7) % 4;
  LocalAlgorithm alg{2, AlgorithmKind::Node, 0,
                     [](const View& v) {
                       Label s = 0;
                       for (const auto& e : v.entries()) s = s * 5 + e.bits;
                       return s;
                     },
                     "hash"};
  const auto one = run_node_algorithm(g, alg, a);
  ThreadsEnv env("4");
  EXPECT_EQ(thread_count(), 4u);
  EXPECT_EQ(run_node_algorithm(g, alg, a), one);
}

TEST(Engine, EdgeAlgorithm) {
  const auto g = gen_regular_tree(4, 3);
  Assignment a = Assignment::zeros(g.node_count(), 1);
  for (NodeId v = 0; v < g.node_count(); ++v) a.bits[v] = v % 2;
  LocalAlgorithm alg{0, AlgorithmKind::Edge, 2, [](const View& v) { return Label{v.center().bits}; }, "plus-bit"};
  const auto out = run_edge_algorithm(g, alg, a);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& es = g.edge(e);
    EXPECT_EQ(out[e], a.bits[es.sign > 0 ? es.u : es.v]);
  }
  EXPECT_THROW(run_node_algorithm(g, alg, a), InvalidParameter);
}

TEST(Engine, PaletteIsEnforced) {
  const auto g = gen_cycle(5);
  LocalAlgorithm bad{0, AlgorithmKind::Node, 2, [](const View&) { return Label{7}; }, "bad"};
  EXPECT_THROW(run_node_algorithm(g, bad, Assignment::zeros(5, 0)), TotalRuleViolation);
  try {
    run_node_algorithm(g, bad, Assignment::zeros(5, 0));
  } catch (const TotalRuleViolation& e) {
    EXPECT_FALSE(e.view().empty());
  }
}

TEST(Enumerator, BijectionAndBudget) {
  const auto en = enumerate_assignments(5, 2);
  EXPECT_EQ(en.count(), 1024u);
  std::set<std::vector<std::uint64_t>> seen;
  en.for_each([&](const std::vector<std::uint64_t>& bits) {
    for (auto x : bits) EXPECT_LT(x, 4u);
    seen.insert(bits);
  });
  EXPECT_EQ(seen.size(), 1024u);
  EXPECT_NO_THROW(enumerate_assignments(24, 1));
  EXPECT_THROW(enumerate_assignments(25, 1), BudgetExceeded);
  EXPECT_THROW(enumerate_assignments(13, 2), BudgetExceeded);
}

TEST(LocalFailure, OwnBitMatchesDirectEnumeration) {
  // Oracle: the node fails iff its 4 neighbors copy its bit; enumerate the
  // 2^5 joint assignments of v and its neighbors directly.
  std::uint64_t fails = 0;
  for (unsigned x = 0; x < 32; ++x) {
    const unsigned own = x & 1u;
    bool all = true;
    for (int i = 1; i < 5; ++i) all = all && ((x >> i) & 1u) == own;
    fails += all;
  }
  const Rational oracle(BigInt(fails), BigInt(32));
  EXPECT_EQ(oracle, Rational(1, 16));

  const auto g = gen_regular_tree(4, 3);
  const auto est = local_failure_probability(g, own_bit_algorithm(), 0, weak_coloring_failure,
                                             Assignment::zeros(g.node_count(), 1));
  EXPECT_EQ(est.exact, oracle);
  EXPECT_EQ(est.mode, EstimateMode::Exact);
  EXPECT_EQ(est.error, 0.0);
}

TEST(LocalFailure, RejectsBoundaryNodes) {
  const auto g = gen_regular_tree(4, 2);
  EXPECT_THROW(local_failure_probability(g, own_bit_algorithm(), 0, weak_coloring_failure,
                                         Assignment::zeros(g.node_count(), 1)),
               InvalidParameter);
}

TEST(LocalFailure, MonteCarloWithinHoeffdingRadius) {
  const auto g = gen_regular_tree(4, 3);
  const auto base = Assignment::zeros(g.node_count(), 1);
  MonteCarloOptions mc{200000, 0.999, 42};
  const auto est = local_failure_probability(g, own_bit_algorithm(), 0, weak_coloring_failure, base, mc);
  EXPECT_EQ(est.mode, EstimateMode::MonteCarlo);
  EXPECT_EQ(est.samples, 200000u);
  EXPECT_NEAR(est.value, 1.0 / 16, est.error);
  EXPECT_NEAR(est.error, hoeffding_error(200000, 0.999), 1e-15);

  ThreadsEnv env("3");
  const auto again = local_failure_probability(g, own_bit_algorithm(), 0, weak_coloring_failure, base, mc);
  EXPECT_EQ(again.exact, est.exact);

  const auto j = est.to_json();
  for (const char* key : {"value", "mode", "error", "samples", "seed"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["mode"], "monte-carlo");
}

TEST(LocalFailure, EngineMatchesTreeFactorizationForNodeRules) {
  const auto g = gen_regular_tree(4, 3);
  const auto base = Assignment::zeros(g.node_count(), 1);
  for (std::uint64_t c : {2u, 4u})
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto rule = random_node_rule(4, 1, 1, c, seed);
      const auto est = local_failure_probability(g, to_local_algorithm(rule), 0, weak_coloring_failure, base);
      EXPECT_EQ(est.exact, node_failure_probability(rule)) << c << " " << seed;
    }
  const auto xr = xor_node_rule(4, 1, 1);
  EXPECT_EQ(local_failure_probability(g, to_local_algorithm(xr), 0, weak_coloring_failure, base).exact,
            node_failure_probability(xr));
}

TEST(LocalFailure, EngineMatchesTreeFactorizationForEdgeRules) {
  const auto g = gen_regular_tree(4, 4);
  const auto base = Assignment::zeros(g.node_count(), 1);
  for (int t : {0, 1})
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
      const auto rule = random_edge_rule(4, t, 1, 2, seed);
      const auto est = local_failure_probability(g, to_local_algorithm(rule), 0, weak_edge_coloring_failure, base);
      EXPECT_EQ(est.exact, edge_failure_probability(rule)) << t << " " << seed;
    }
}

TEST(LocalFailure, EdgeFailureNeedsOrientation) {
  const auto g = gen_balanced_tree(4, 3);
  LocalAlgorithm alg{0, AlgorithmKind::Edge, 2, [](const View&) { return Label{0}; }, "zero"};
  EXPECT_THROW(local_failure_probability(g, alg, 0, weak_edge_coloring_failure, Assignment::zeros(g.node_count(), 1)),
               InvalidInstance);
}
