#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lpi/error.hpp"
#include "lpi/graph.hpp"
#include "test_support.hpp"

namespace lpi {
namespace {

using testing::all_simple_paths;
using testing::make_graph;
using testing::parse_graph;

TEST(LoadEdgeList, UndirectedInputDoublesEdges) {
  Graph g = parse_graph("0 1\n1 2", true);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.arc_count(), 4u);
  EXPECT_TRUE(g.undirected_source());
  EXPECT_TRUE(g.has_arc(1, 0));
  EXPECT_TRUE(g.has_arc(2, 1));
}

TEST(LoadEdgeList, CommentsSkippedAndIdsRemapped) {
  Graph g = parse_graph("# c\n5 9", true);
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.arc_count(), 2u);
  EXPECT_EQ(g.raw_id(0), 5u);
  EXPECT_EQ(g.raw_id(1), 9u);
  EXPECT_EQ(g.find_raw(9), NodeId{1});
  EXPECT_FALSE(g.find_raw(7).has_value());
}

TEST(LoadEdgeList, DirectedKeepsOrientation) {
  Graph g = parse_graph("3 1\n1 2\n", false);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.arc_count(), 2u);
  // raw 1 -> 0, raw 2 -> 1, raw 3 -> 2
  EXPECT_TRUE(g.has_arc(2, 0));
  EXPECT_FALSE(g.has_arc(0, 2));
}

TEST(LoadEdgeList, SelfLoopsAndDuplicatesDropped) {
  Graph g = parse_graph("1 1\n1 2\n1 2\n2 1\n", true);
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.arc_count(), 2u);
}

TEST(LoadEdgeList, MalformedLineReportsLineNumber) {
  try {
    parse_graph("0 1\n# fine\n2 x\n", false);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_graph("0 1 2\n", false), ParseError);
  EXPECT_THROW(parse_graph("0\n", false), ParseError);
  EXPECT_THROW(parse_graph("-1 2\n", false), ParseError);
}

TEST(LoadEdgeList, EmptyInputRejected) {
  EXPECT_THROW(parse_graph("", true), ParseError);
  EXPECT_THROW(parse_graph("# only a comment\n\n", true), ParseError);
}

TEST(LoadEdgeList, ShippedAsGraphHasExpectedSize) {
  Graph g = load_edge_list(testing::data_file("as-synthetic-6474.txt"), true);
  EXPECT_EQ(g.node_count(), 6474u);
  EXPECT_EQ(g.arc_count(), 27790u);
}

TEST(LoadEdgeList, MissingFileRaises) {
  EXPECT_ANY_THROW(load_edge_list(std::filesystem::path("/nonexistent/graph.txt"), true));
}

TEST(WriteEdgeList, RoundTrips) {
  Graph g = parse_graph("10 20\n20 30\n30 10\n", true);
  std::ostringstream out;
  write_edge_list(out, g);
  Graph h = parse_graph(out.str(), true);
  EXPECT_EQ(h.arcs(), g.arcs());
  for (NodeId v = 0; v < g.node_count(); ++v) EXPECT_EQ(h.raw_id(v), g.raw_id(v));
}

TEST(GraphStructure, AdjacencyIsSortedAndDegreesAdd) {
  Graph g = make_graph(4, {{0, 3}, {0, 1}, {2, 0}, {0, 2}});
  auto succ = g.successors(0);
  EXPECT_EQ(std::vector<NodeId>(succ.begin(), succ.end()), (std::vector<NodeId>{1, 2, 3}));
  auto pred = g.predecessors(0);
  EXPECT_EQ(std::vector<NodeId>(pred.begin(), pred.end()), (std::vector<NodeId>{2}));
  EXPECT_EQ(g.degree(0), 4u);
  EXPECT_EQ(g.degree(3), 1u);
}

TEST(GraphStructure, ArcOutOfRangeRejected) {
  EXPECT_ANY_THROW(make_graph(2, {{0, 2}}));
}

TEST(SimplePath, Recognition) {
  Graph g = make_graph(3, {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_TRUE(is_simple_path(g, Path{{0, 1, 2}}));
  EXPECT_FALSE(is_simple_path(g, Path{{0, 2}}));
  EXPECT_FALSE(is_simple_path(g, Path{{0, 1, 2, 0}}));
}

TEST(TargetPairsType, RejectsBadPairs) {
  EXPECT_THROW(TargetPairs({{1, 1}}, 3), std::invalid_argument);
  EXPECT_THROW(TargetPairs({{0, 3}}, 3), std::invalid_argument);
  TargetPairs ok({{0, 2}, {2, 0}}, 3);
  EXPECT_EQ(ok.size(), 2u);
}

TEST(NodeWeightedDistance, ChainCountsBothEndpoints) {
  Graph g = make_graph(3, {{0, 1}, {1, 2}});
  std::vector<double> w{1, 1, 1};
  EXPECT_DOUBLE_EQ(node_weighted_distance(g, w, 0, 2, 10), 3.0);
}

TEST(NodeWeightedDistance, ZeroWeights) {
  Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  std::vector<double> w(4, 0.0);
  EXPECT_DOUBLE_EQ(node_weighted_distance(g, w, 0, 3, 10), 0.0);
  EXPECT_DOUBLE_EQ(node_weighted_distance(g, w, 1, 3, 10), 0.0);
}

TEST(NodeWeightedDistance, DisconnectedReturnsCap) {
  Graph g = make_graph(3, {{0, 1}});
  std::vector<double> w{1, 1, 1};
  EXPECT_DOUBLE_EQ(node_weighted_distance(g, w, 0, 2, 7), 7.0);
  EXPECT_DOUBLE_EQ(node_weighted_distance(g, w, 1, 0, 7), 7.0);
}

TEST(NodeWeightedDistance, SaturatesAtCap) {
  Graph g = make_graph(2, {{0, 1}});
  std::vector<double> w{6, 6};
  EXPECT_DOUBLE_EQ(node_weighted_distance(g, w, 0, 1, 10), 10.0);
}

TEST(NodeWeightedDistance, BadArgumentsRejected) {
  Graph g = make_graph(3, {{0, 1}});
  std::vector<double> w{1, 1, 1};
  EXPECT_THROW(node_weighted_distance(g, w, 0, 3, 1), std::invalid_argument);
  std::vector<double> short_w{1, 1};
  EXPECT_THROW(node_weighted_distance(g, short_w, 0, 1, 1), std::invalid_argument);
}

TEST(NodeWeightedDistance, MatchesBruteForceOnRandomGraphs) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> wd(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    Graph g = testing::random_digraph(6, 0.35, rng);
    std::vector<double> w(6);
    for (double& x : w) x = wd(rng);
    for (NodeId s = 0; s < 6; ++s) {
      for (NodeId t = 0; t < 6; ++t) {
        if (s == t) continue;
        EXPECT_NEAR(node_weighted_distance(g, w, s, t, 8.0),
                    testing::brute_distance(g, w, s, t, 8.0), 1e-12);
      }
    }
  }
}

TEST(NodeWeightedDistance, MonotoneInImpact) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xd(0.0, 4.0);
  std::uniform_real_distribution<double> bump(0.0, 2.0);
  NodeFunctions fs = uniform_functions(7, WeightFunction::convex(0.5, 0.2));
  for (int trial = 0; trial < 300; ++trial) {
    Graph g = testing::random_digraph(7, 0.3, rng);
    std::vector<double> xv(7), yv(7);
    for (int i = 0; i < 7; ++i) {
      xv[i] = xd(rng);
      yv[i] = xv[i] + bump(rng);
    }
    ImpactVector x(xv), y(yv);
    auto wx = node_weights(fs, x);
    auto wy = node_weights(fs, y);
    for (NodeId t = 1; t < 7; ++t) {
      EXPECT_GE(node_weighted_distance(g, wy, 0, t, 20.0),
                node_weighted_distance(g, wx, 0, t, 20.0));
    }
  }
}

TEST(KShortestPaths, DiamondTieBrokenLexicographically) {
  Graph g = make_graph(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  std::vector<double> w(4, 1.0);
  auto paths = k_shortest_paths(g, w, 0, 3, 2, 10);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0].nodes, (std::vector<NodeId>{0, 1, 3}));
  EXPECT_EQ(paths[1].nodes, (std::vector<NodeId>{0, 2, 3}));
}

TEST(KShortestPaths, ChainHasSinglePath) {
  Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  std::vector<double> w(4, 1.0);
  auto paths = k_shortest_paths(g, w, 0, 3, 5, 10);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].nodes, (std::vector<NodeId>{0, 1, 2, 3}));
}

TEST(KShortestPaths, UnreachableGivesNothing) {
  Graph g = make_graph(3, {{0, 1}});
  std::vector<double> w(3, 1.0);
  EXPECT_TRUE(k_shortest_paths(g, w, 0, 2, 3, 10).empty());
}

TEST(KShortestPaths, StopAtDropsLongPaths) {
  Graph g = make_graph(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  std::vector<double> w{1, 1, 5, 1};
  KShortestOptions opt;
  opt.stop_at = 4.0;
  auto paths = k_shortest_paths(g, w, 0, 3, 5, 100, opt);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].nodes, (std::vector<NodeId>{0, 1, 3}));
}

TEST(KShortestPaths, FiveNodeRandomMatchesEnumeration) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> wd(0, 3);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Graph g = testing::random_digraph(5, 0.45, rng);
    std::vector<double> w(5);
    for (double& x : w) x = wd(rng);
    auto expect = testing::sorted_by_length(all_simple_paths(g, 0, 4), w);
    if (expect.size() > 3) expect.resize(3);
    auto got = k_shortest_paths(g, w, 0, 4, 3, 1000);
    ASSERT_EQ(got.size(), expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].nodes, expect[i].nodes);
    checked += !expect.empty();
  }
  EXPECT_GT(checked, 50);
}

TEST(KShortestPaths, FullEnumerationOnSmallGraphs) {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> wd(0, 2);
  std::uniform_int_distribution<int> nd(3, 8);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = nd(rng);
    Graph g = testing::random_digraph(n, 0.35, rng);
    std::vector<double> w(n);
    for (double& x : w) x = wd(rng);
    const NodeId t = static_cast<NodeId>(n - 1);
    auto expect = testing::sorted_by_length(all_simple_paths(g, 0, t), w);
    auto got = k_shortest_paths(g, w, 0, t, expect.size() + 1, 1000);
    ASSERT_EQ(got.size(), expect.size()) << "trial " << trial;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].nodes, expect[i].nodes) << "trial " << trial << " rank " << i;
      EXPECT_TRUE(is_simple_path(g, got[i]));
    }
  }
}

TEST(KShortestPaths, SortedAndSimpleOnRealValuedWeights) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> wd(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    Graph g = testing::random_digraph(8, 0.3, rng);
    std::vector<double> w(8);
    for (double& x : w) x = wd(rng);
    auto got = k_shortest_paths(g, w, 0, 7, 10, 6.0);
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_TRUE(is_simple_path(g, got[i]));
      EXPECT_EQ(got[i].nodes.front(), 0u);
      EXPECT_EQ(got[i].nodes.back(), 7u);
      if (i > 0) {
        EXPECT_LE(std::min(path_weight(got[i - 1], w), 6.0),
                  std::min(path_weight(got[i], w), 6.0));
      }
    }
  }
}

TEST(KShortestPaths, ZeroWeightCyclesHandled) {
  Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 1}, {2, 3}, {1, 3}, {3, 4}, {0, 4}}, true);
  std::vector<double> w(5, 0.0);
  auto expect = all_simple_paths(g, 0, 4);
  auto got = k_shortest_paths(g, w, 0, 4, 100, 1.0);
  std::sort(expect.begin(), expect.end());
  EXPECT_EQ(got, expect);
}

}  // namespace
}  // namespace lpi
