#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lpi/baselines.hpp"
#include "lpi/error.hpp"
#include "test_support.hpp"

namespace lpi {
namespace {

using testing::make_graph;

ListingConfig config(double T, double eps = 0.1, std::size_t k = 20) {
  ListingConfig c;
  c.k = k;
  c.threshold = T;
  c.epsilon = eps;
  return c;
}

// Grid optimum by trying every assignment, no pruning.
double brute_grid_optimum(const Graph& g, const NodeFunctions& fs, const TargetPairs& S,
                          double T, double delta, double x_max) {
  auto paths = enumerate_feasible_paths(g, fs, S, T, 100000);
  const std::size_t n = g.node_count();
  const int levels = static_cast<int>(std::floor(x_max / delta + 1e-9)) + 1;
  std::vector<int> idx(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<double> xv(n);
    double cost = 0;
    for (std::size_t v = 0; v < n; ++v) {
      xv[v] = idx[v] * delta;
      cost += xv[v];
    }
    if (cost < best) {
      ImpactVector x(xv);
      bool ok = true;
      for (const Path& p : paths) ok = ok && reaches(path_length(p, x, fs, T), T);
      if (ok) best = cost;
    }
    std::size_t v = 0;
    while (v < n && ++idx[v] == levels) idx[v++] = 0;
    if (v == n) break;
  }
  return best;
}

TEST(Cut, SingleTwoNodePath) {
  Graph g = make_graph(2, {{0, 1}});
  auto fs = uniform_functions(2, WeightFunction::linear(1));
  TargetPairs S({{0, 1}}, 2);
  auto r = cut_baseline(g, fs, S, config(10));
  EXPECT_DOUBLE_EQ(r.x.norm(), 10.0);
  EXPECT_EQ(r.x, ImpactVector({10, 0}));
  EXPECT_EQ(r.queries, 0u);
}

TEST(Cut, HubSelectedFirst) {
  // Three sources reach three sinks only through hub 3.
  Graph g = make_graph(7, {{0, 3}, {1, 3}, {2, 3}, {3, 4}, {3, 5}, {3, 6}});
  auto fs = uniform_functions(7, WeightFunction::linear(1));
  TargetPairs S({{0, 4}, {1, 5}, {2, 6}}, 7);
  auto r = cut_baseline(g, fs, S, config(10));
  EXPECT_EQ(r.x, ImpactVector::point(7, 3, 10));
}

TEST(Cut, UnreachableThresholdIsAnError) {
  Graph g = make_graph(2, {{0, 1}});
  auto fs = uniform_functions(2, WeightFunction::table({{0, 0}, {1, 2}}));
  TargetPairs S({{0, 1}}, 2);
  EXPECT_THROW(cut_baseline(g, fs, S, config(10)), SolverError);
  EXPECT_THROW(discrete_baseline(g, fs, S, config(10)), SolverError);
}

TEST(Discrete, LinearSingleThreeNodePath) {
  Graph g = make_graph(3, {{0, 1}, {1, 2}});
  auto fs = uniform_functions(3, WeightFunction::linear(1));
  TargetPairs S({{0, 2}}, 3);
  auto levels = discrete_levels(fs[0], 9, 1e9);
  EXPECT_EQ(levels, (std::vector<double>{3, 6, 9}));
  auto r = discrete_baseline(g, fs, S, config(9));
  EXPECT_DOUBLE_EQ(r.x.norm(), 9.0);
  for (NodeId v = 0; v < 3; ++v) {
    EXPECT_DOUBLE_EQ(std::fmod(r.x[v], 3.0), 0.0);
  }
}

TEST(Discrete, StepFamilyUsesIntegerLevels) {
  Graph g = make_graph(2, {{0, 1}});
  auto fs = uniform_functions(2, WeightFunction::step(1));
  TargetPairs S({{0, 1}}, 2);
  EXPECT_EQ(discrete_levels(fs[0], 4, 1e9), (std::vector<double>{1, 2, 3, 4}));
  auto r = discrete_baseline(g, fs, S, config(4));
  EXPECT_GE(r.x.norm(), 4 * 0.9 - 1e-9);
  for (NodeId v = 0; v < 2; ++v) EXPECT_DOUBLE_EQ(r.x[v], std::floor(r.x[v]));
  EXPECT_TRUE(is_eps_feasible(g, fs, r.x, S, 4, 0.1));
}

TEST(Baselines, FeasibleOnRandomGraphs) {
  std::mt19937_64 rng(61);
  const std::vector<WeightFunction> families{
      WeightFunction::concave(1), WeightFunction::convex(1), WeightFunction::linear(1),
      WeightFunction::step(1)};
  for (int trial = 0; trial < 40; ++trial) {
    Graph g = testing::random_digraph(9, 0.3, rng);
    auto fs = uniform_functions(9, families[trial % families.size()]);
    TargetPairs S({{0, 8}, {1, 7}, {2, 6}}, 9);
    auto cut = cut_baseline(g, fs, S, config(6, 0.1, 4));
    auto disc = discrete_baseline(g, fs, S, config(6, 0.1, 4));
    EXPECT_TRUE(is_eps_feasible(g, fs, cut.x, S, 6, 0.1));
    EXPECT_TRUE(is_eps_feasible(g, fs, disc.x, S, 6, 0.1));
    for (std::size_t i = 1; i < cut.per_round_paths.size(); ++i) {
      EXPECT_GT(cut.per_round_paths[i], cut.per_round_paths[i - 1]);
    }
  }
}

TEST(ExactTiny, SingleTwoNodePath) {
  Graph g = make_graph(2, {{0, 1}});
  auto fs = uniform_functions(2, WeightFunction::linear(1));
  TargetPairs S({{0, 1}}, 2);
  EXPECT_DOUBLE_EQ(exact_tiny(g, fs, S, 10, 1, 10).norm(), 10.0);
}

TEST(ExactTiny, DisjointPathsAddUp) {
  Graph g = make_graph(4, {{0, 1}, {2, 3}});
  auto fs = uniform_functions(4, WeightFunction::linear(1));
  TargetPairs S({{0, 1}, {2, 3}}, 4);
  EXPECT_DOUBLE_EQ(exact_tiny(g, fs, S, 10, 1, 10).norm(), 20.0);
}

TEST(ExactTiny, DiamondLoadsSharedEndpoints) {
  Graph g = make_graph(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  auto fs = uniform_functions(4, WeightFunction::linear(1));
  TargetPairs S({{0, 3}}, 4);
  auto x = exact_tiny(g, fs, S, 10, 1, 10);
  EXPECT_DOUBLE_EQ(x.norm(), 10.0);
  EXPECT_DOUBLE_EQ(x[1] + x[2], 0.0);
  EXPECT_DOUBLE_EQ(brute_grid_optimum(g, fs, S, 10, 1, 10), 10.0);
}

TEST(ExactTiny, RefusesLargeInstances) {
  std::vector<std::pair<NodeId, NodeId>> chain;
  for (NodeId v = 0; v + 1 < 11; ++v) chain.push_back({v, v + 1});
  Graph big = make_graph(11, chain);
  auto fs = uniform_functions(11, WeightFunction::linear(1));
  EXPECT_THROW(exact_tiny(big, fs, TargetPairs({{0, 10}}, 11), 10, 1, 10), ContractError);

  // Complete digraph on 8 nodes: far more than 200 simple paths.
  std::vector<std::pair<NodeId, NodeId>> all;
  for (NodeId a = 0; a < 8; ++a) {
    for (NodeId b = 0; b < 8; ++b) {
      if (a != b) all.push_back({a, b});
    }
  }
  Graph dense = make_graph(8, all);
  auto fs8 = uniform_functions(8, WeightFunction::linear(1));
  EXPECT_THROW(exact_tiny(dense, fs8, TargetPairs({{0, 7}}, 8), 10, 1, 10), ContractError);
}

TEST(ExactTiny, MatchesExhaustiveGridSearch) {
  std::mt19937_64 rng(67);
  const std::vector<WeightFunction> families{WeightFunction::linear(1),
                                             WeightFunction::step(1),
                                             WeightFunction::convex(0.5)};
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Graph g = testing::random_digraph(5, 0.35, rng);
    auto fs = uniform_functions(5, families[trial % families.size()]);
    TargetPairs S({{0, 4}, {1, 3}}, 5);
    const double T = 4;
    auto paths = enumerate_feasible_paths(g, fs, S, T, 100000);
    if (paths.empty()) continue;
    const double xm = x_cap(fs[0], T, 1e9);
    auto x = exact_tiny(g, fs, S, T, 1, std::ceil(xm));
    EXPECT_DOUBLE_EQ(x.norm(), brute_grid_optimum(g, fs, S, T, 1, std::ceil(xm)))
        << "trial " << trial;
    for (const Path& p : paths) EXPECT_TRUE(reaches(path_length(p, x, fs, T), T));
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(ExactTiny, FinerGridNeverWorse) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 15; ++trial) {
    Graph g = testing::random_digraph(5, 0.4, rng);
    auto fs = uniform_functions(5, WeightFunction::convex(1));
    TargetPairs S({{0, 4}}, 5);
    if (enumerate_feasible_paths(g, fs, S, 5, 1000).empty()) continue;
    const double coarse = exact_tiny(g, fs, S, 5, 1.0, 3.0).norm();
    const double mid = exact_tiny(g, fs, S, 5, 0.5, 3.0).norm();
    const double fine = exact_tiny(g, fs, S, 5, 0.25, 3.0).norm();
    EXPECT_LE(mid, coarse + 1e-9);
    EXPECT_LE(fine, mid + 1e-9);
  }
}

TEST(EnumerateFeasiblePaths, MatchesDfsOracle) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 50; ++trial) {
    Graph g = testing::random_digraph(6, 0.4, rng);
    auto fs = uniform_functions(6, WeightFunction::linear(1, 1));
    TargetPairs S({{0, 5}}, 6);
    auto got = enumerate_feasible_paths(g, fs, S, 4.5, 100000);
    std::vector<Path> expect;
    for (const Path& p : testing::all_simple_paths(g, 0, 5)) {
      if (p.size() < 4.5) expect.push_back(p);
    }
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    EXPECT_EQ(got, expect);
  }
}

}  // namespace
}  // namespace lpi
