#ifndef LPI_BASELINES_HPP
#define LPI_BASELINES_HPP

// Comparison methods. CUT and DISCRETE reuse the full-set collection loop
// (cumulative path set, impact rebuilt from zero each round) but replace the
// blocking oracle with a restricted greedy:
//
//   cut       all-or-nothing: a node gets 0 or its x_cap; the node covering
//             the most unsatisfied collected paths is cut first.
//   discrete  per-node amounts on a small level set, greedily raised by the
//             level increment with the best gain per unit of impact.
//
// exact_tiny is a branch-and-bound grid optimum for instances small enough
// to enumerate every feasible path. It exists to check the others.

#include <cstddef>
#include <vector>

#include "lpi/graph.hpp"
#include "lpi/path_listing.hpp"
#include "lpi/weights.hpp"

namespace lpi {

// Uses k, threshold, epsilon, max_rounds and blocking_config.x_max.
SolveResult cut_baseline(const Graph& g, const NodeFunctions& fs,
                         const TargetPairs& pairs, const ListingConfig& config);

SolveResult discrete_baseline(const Graph& g, const NodeFunctions& fs,
                              const TargetPairs& pairs, const ListingConfig& config);

// Impact amounts DISCRETE may give a node, ascending and excluding 0:
// u, 2u, 3u with f(3u) = T, or 1, 2, ..., x_cap for the step family.
// Throws SolverError when f never reaches T within x_max.
std::vector<double> discrete_levels(const WeightFunction& f, double T, double x_max);

// Simple paths between target pairs with zero-impact length below T, by
// DFS. Throws ContractError past `limit` paths.
std::vector<Path> enumerate_feasible_paths(const Graph& g, const NodeFunctions& fs,
                                           const TargetPairs& pairs, double T,
                                           std::size_t limit);

struct ExactLimits {
  std::size_t max_nodes = 10;
  std::size_t max_paths = 200;
  // Total number of candidate levels across nodes.
  std::size_t max_levels = 1'000'000;
};

// Minimum-norm x on the grid {0, delta, 2 delta, ..., x_max} lifting every
// feasible path to length T. Throws ContractError when the instance is too
// large, SolverError when no grid point is feasible.
ImpactVector exact_tiny(const Graph& g, const NodeFunctions& fs,
                        const TargetPairs& pairs, double T, double delta,
                        double x_max, const ExactLimits& limits = {});

}  // namespace lpi

#endif  // LPI_BASELINES_HPP
