#ifndef LPI_PATH_LISTING_HPP
#define LPI_PATH_LISTING_HPP

// Critical path listing: the outer loops that decide which paths the
// blocking oracle has to lift. Both drivers repeatedly collect the k
// shortest under-threshold paths of every unsatisfied target pair.
//
//   incremental  blocks each round's paths on top of the impact so far;
//                rounds see disjoint path sets, memory stays O(|S| k).
//   full set     keeps every path found so far and re-solves from zero
//                impact each round.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lpi/blocking.hpp"
#include "lpi/graph.hpp"
#include "lpi/weights.hpp"

namespace lpi {

enum class ListingAlgorithm { kIncremental, kFullSet };

struct ListingConfig {
  std::size_t k = 20;
  double threshold = 1.0;
  double epsilon = 0.1;
  BlockingAlgorithm blocking = BlockingAlgorithm::kThresholdExpansion;
  BlockingConfig blocking_config;
  std::size_t max_rounds = 500;
};

struct SolveResult {
  ImpactVector x;
  std::size_t rounds = 0;
  // Paths held in memory during each round.
  std::vector<std::size_t> per_round_paths;
  std::size_t max_stored_paths = 0;
  std::uint64_t queries = 0;
  // Paths collected in each round (for full set: the newly added ones).
  std::vector<std::vector<Path>> collected;
  // The path set handed to the oracle in the last round.
  std::vector<Path> final_paths;
};

// Every pair's capped distance under x is at least T(1 - eps), up to the
// shared comparison tolerance.
bool is_eps_feasible(const Graph& g, const NodeFunctions& fs, const ImpactVector& x,
                     const TargetPairs& pairs, double T, double eps);

// Pairs whose distance under `weights` is still below T(1 - eps).
std::vector<NodePair> unsatisfied_pairs(const Graph& g, std::span<const double> weights,
                                        const TargetPairs& pairs, double T, double eps);

// k shortest paths of each listed pair under `weights`, keeping those
// shorter than T(1 - eps). Deduplicated, in pair order.
std::vector<Path> collect_short_paths(const Graph& g, std::span<const double> weights,
                                      const std::vector<NodePair>& pairs,
                                      std::size_t k, double T, double eps);

SolveResult incremental_interdiction(const Graph& g, const NodeFunctions& fs,
                                     const TargetPairs& pairs,
                                     const ListingConfig& config);

SolveResult full_set_interdiction(const Graph& g, const NodeFunctions& fs,
                                  const TargetPairs& pairs,
                                  const ListingConfig& config);

SolveResult interdict(ListingAlgorithm algorithm, const Graph& g,
                      const NodeFunctions& fs, const TargetPairs& pairs,
                      const ListingConfig& config);

}  // namespace lpi

#endif  // LPI_PATH_LISTING_HPP
