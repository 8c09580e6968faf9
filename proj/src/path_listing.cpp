#include "lpi/path_listing.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "lpi/error.hpp"

namespace lpi {

namespace {

void check_config(const Graph& g, const NodeFunctions& fs, const ListingConfig& config) {
  if (config.k == 0) throw std::invalid_argument("k must be at least 1");
  if (!(config.threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  if (fs.size() != g.node_count()) {
    throw std::invalid_argument("one weight function per node is required");
  }
}

[[noreturn]] void round_limit(std::size_t rounds) {
  throw SolverError("path listing did not converge within " + std::to_string(rounds) +
                    " rounds");
}

}  // namespace

std::vector<NodePair> unsatisfied_pairs(const Graph& g, std::span<const double> weights,
                                        const TargetPairs& pairs, double T, double eps) {
  const double target = T * (1.0 - eps);
  std::vector<NodePair> out;
  for (const NodePair& pr : pairs) {
    if (!reaches(node_weighted_distance(g, weights, pr.source, pr.sink, T), target)) {
      out.push_back(pr);
    }
  }
  return out;
}

bool is_eps_feasible(const Graph& g, const NodeFunctions& fs, const ImpactVector& x,
                     const TargetPairs& pairs, double T, double eps) {
  std::vector<double> w = node_weights(fs, x);
  return unsatisfied_pairs(g, w, pairs, T, eps).empty();
}

std::vector<Path> collect_short_paths(const Graph& g, std::span<const double> weights,
                                      const std::vector<NodePair>& pairs,
                                      std::size_t k, double T, double eps) {
  const double target = T * (1.0 - eps);
  KShortestOptions options;
  // Anything at or past this would be filtered out below anyway.
  options.stop_at = target * (1.0 - kCompareTolerance);
  std::vector<Path> out;
  std::set<Path> seen;
  for (const NodePair& pr : pairs) {
    for (Path& p : k_shortest_paths(g, weights, pr.source, pr.sink, k, T, options)) {
      if (reaches(std::min(path_weight(p, weights), T), target)) continue;
      if (seen.insert(p).second) out.push_back(std::move(p));
    }
  }
  return out;
}

SolveResult incremental_interdiction(const Graph& g, const NodeFunctions& fs,
                                     const TargetPairs& pairs,
                                     const ListingConfig& config) {
  check_config(g, fs, config);
  const double T = config.threshold;
  SolveResult result;
  result.x = ImpactVector(g.node_count());
  while (true) {
    std::vector<double> w = node_weights(fs, result.x);
    auto open = unsatisfied_pairs(g, w, pairs, T, config.epsilon);
    if (open.empty()) break;
    if (result.rounds >= config.max_rounds) round_limit(config.max_rounds);

    std::vector<Path> round = collect_short_paths(g, w, open, config.k, T, config.epsilon);
    if (round.empty()) {
      throw SolverError("unsatisfied pair without an under-threshold path");
    }
    BlockingResult tb = run_blocking(
        config.blocking, {round, result.x, fs, T, config.epsilon}, config.blocking_config);
    result.x += tb.added;
    result.queries += tb.queries;
    ++result.rounds;
    result.per_round_paths.push_back(round.size());
    result.max_stored_paths = std::max(result.max_stored_paths, round.size());
    result.final_paths = round;
    result.collected.push_back(std::move(round));
  }
  return result;
}

SolveResult full_set_interdiction(const Graph& g, const NodeFunctions& fs,
                                  const TargetPairs& pairs,
                                  const ListingConfig& config) {
  check_config(g, fs, config);
  const double T = config.threshold;
  SolveResult result;
  result.x = ImpactVector(g.node_count());
  std::vector<Path> stored;
  std::set<Path> index;
  const ImpactVector zero(g.node_count());
  while (true) {
    std::vector<double> w = node_weights(fs, result.x);
    auto open = unsatisfied_pairs(g, w, pairs, T, config.epsilon);
    if (open.empty()) break;
    if (result.rounds >= config.max_rounds) round_limit(config.max_rounds);

    std::vector<Path> fresh;
    for (Path& p : collect_short_paths(g, w, open, config.k, T, config.epsilon)) {
      if (index.insert(p).second) {
        stored.push_back(p);
        fresh.push_back(std::move(p));
      }
    }
    if (fresh.empty()) {
      throw SolverError("unsatisfied pair without a new under-threshold path");
    }
    BlockingResult tb = run_blocking(
        config.blocking, {stored, zero, fs, T, config.epsilon}, config.blocking_config);
    result.x = std::move(tb.added);
    result.queries += tb.queries;
    ++result.rounds;
    result.per_round_paths.push_back(stored.size());
    result.max_stored_paths = std::max(result.max_stored_paths, stored.size());
    result.collected.push_back(std::move(fresh));
  }
  result.final_paths = std::move(stored);
  return result;
}

SolveResult interdict(ListingAlgorithm algorithm, const Graph& g, const NodeFunctions& fs,
                      const TargetPairs& pairs, const ListingConfig& config) {
  switch (algorithm) {
    case ListingAlgorithm::kIncremental:
      return incremental_interdiction(g, fs, pairs, config);
    case ListingAlgorithm::kFullSet:
      return full_set_interdiction(g, fs, pairs, config);
  }
  throw std::invalid_argument("unknown path listing algorithm");
}

}  // namespace lpi
