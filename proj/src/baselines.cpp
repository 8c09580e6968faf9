#include "lpi/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
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

double full_cut(const WeightFunction& f, double T, double x_max) {
  double x = f.min_impact_for(T);
  if (!(x <= x_max)) {
    throw SolverError("infeasible baseline: weight " + f.describe() +
                      " does not reach T within x_max");
  }
  return x;
}

// Which stored paths run through each node.
std::vector<std::vector<std::size_t>> paths_through(std::size_t n,
                                                    const std::vector<Path>& paths) {
  std::vector<std::vector<std::size_t>> through(n);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (NodeId v : paths[i].nodes) through[v].push_back(i);
  }
  return through;
}

// Collect, then rebuild x from zero over everything collected so far.
template <class Cover>
SolveResult cumulative_loop(const Graph& g, const NodeFunctions& fs,
                            const TargetPairs& pairs, const ListingConfig& config,
                            Cover cover) {
  check_config(g, fs, config);
  SolveResult result;
  result.x = ImpactVector(g.node_count());
  std::vector<Path> stored;
  std::set<Path> index;
  while (true) {
    std::vector<double> w = node_weights(fs, result.x);
    auto open = unsatisfied_pairs(g, w, pairs, config.threshold, config.epsilon);
    if (open.empty()) break;
    if (result.rounds >= config.max_rounds) {
      throw SolverError("baseline did not converge within " +
                        std::to_string(config.max_rounds) + " rounds");
    }
    std::vector<Path> fresh;
    for (Path& p : collect_short_paths(g, w, open, config.k, config.threshold,
                                       config.epsilon)) {
      if (index.insert(p).second) {
        stored.push_back(p);
        fresh.push_back(std::move(p));
      }
    }
    if (fresh.empty()) {
      throw SolverError("unsatisfied pair without a new under-threshold path");
    }
    result.x = cover(stored);
    ++result.rounds;
    result.per_round_paths.push_back(stored.size());
    result.max_stored_paths = std::max(result.max_stored_paths, stored.size());
    result.collected.push_back(std::move(fresh));
  }
  result.final_paths = std::move(stored);
  return result;
}

}  // namespace

SolveResult cut_baseline(const Graph& g, const NodeFunctions& fs,
                         const TargetPairs& pairs, const ListingConfig& config) {
  const double T = config.threshold;
  const double target = T * (1.0 - config.epsilon);
  const double x_max = config.blocking_config.x_max;
  const std::size_t n = g.node_count();
  return cumulative_loop(g, fs, pairs, config, [&](const std::vector<Path>& paths) {
    ImpactVector x(n);
    const std::vector<double> w0 = node_weights(fs, x);
    auto through = paths_through(n, paths);
    std::vector<char> active(paths.size());
    std::vector<std::size_t> cover_count(n, 0);
    std::size_t remaining = 0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      active[i] = !reaches(std::min(path_weight(paths[i], w0), T), target);
      if (!active[i]) continue;
      ++remaining;
      for (NodeId v : paths[i].nodes) ++cover_count[v];
    }
    while (remaining > 0) {
      NodeId best = 0;
      for (NodeId v = 1; v < n; ++v) {
        if (cover_count[v] > cover_count[best]) best = v;
      }
      if (cover_count[best] == 0) throw SolverError("cut baseline made no progress");
      x.set(best, full_cut(fs[best], T, x_max));
      // A cut node alone takes every path through it to T.
      for (std::size_t i : through[best]) {
        if (!active[i]) continue;
        active[i] = 0;
        --remaining;
        for (NodeId u : paths[i].nodes) --cover_count[u];
      }
    }
    return x;
  });
}

std::vector<double> discrete_levels(const WeightFunction& f, double T, double x_max) {
  const double top = full_cut(f, T, x_max);
  std::vector<double> levels;
  if (f.family() == Family::kStep) {
    for (double a = 1.0; a <= top; a += 1.0) levels.push_back(a);
  } else {
    const double unit = top / 3.0;
    levels = {unit, 2.0 * unit, top};
  }
  if (levels.empty()) levels.push_back(top);
  return levels;
}

SolveResult discrete_baseline(const Graph& g, const NodeFunctions& fs,
                              const TargetPairs& pairs, const ListingConfig& config) {
  const double T = config.threshold;
  const double target = T * (1.0 - config.epsilon);
  const double x_max = config.blocking_config.x_max;
  const std::size_t n = g.node_count();
  std::vector<std::vector<double>> level_cache(n);
  auto levels_of = [&](NodeId v) -> const std::vector<double>& {
    if (level_cache[v].empty()) level_cache[v] = discrete_levels(fs[v], T, x_max);
    return level_cache[v];
  };

  return cumulative_loop(g, fs, pairs, config, [&](const std::vector<Path>& paths) {
    ImpactVector x(n);
    auto through = paths_through(n, paths);
    std::vector<double> sums(paths.size());
    std::vector<char> active(paths.size());
    std::vector<std::size_t> level(n, 0);  // index into levels_of(v), 0 = none
    const std::vector<double> w0 = node_weights(fs, x);
    std::size_t remaining = 0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      sums[i] = path_weight(paths[i], w0);
      active[i] = !reaches(std::min(sums[i], T), target);
      if (active[i]) ++remaining;
    }

    while (remaining > 0) {
      double best_score = 0.0;
      NodeId best_node = 0;
      std::size_t best_level = 0;
      for (NodeId v = 0; v < n; ++v) {
        bool on_active = false;
        for (std::size_t i : through[v]) on_active = on_active || active[i];
        if (!on_active) continue;
        const auto& lv = levels_of(v);
        const double from = x[v];
        const double f_from = fs[v](from);
        for (std::size_t j = level[v]; j < lv.size(); ++j) {
          const double lift = fs[v](lv[j]) - f_from;
          double gain = 0.0;
          for (std::size_t i : through[v]) {
            if (active[i]) gain += std::min(lift, T - sums[i]);
          }
          const double score = gain / (lv[j] - from);
          if (score > best_score * (1.0 + 1e-12)) {
            best_score = score;
            best_node = v;
            best_level = j + 1;
          }
        }
      }
      if (!(best_score > 0.0)) throw SolverError("discrete baseline made no progress");

      const double amount = levels_of(best_node)[best_level - 1];
      const double lift = fs[best_node](amount) - fs[best_node](x[best_node]);
      x.set(best_node, amount);
      level[best_node] = best_level;
      for (std::size_t i : through[best_node]) {
        sums[i] += lift;
        if (active[i] && reaches(std::min(sums[i], T), target)) {
          active[i] = 0;
          --remaining;
        }
      }
    }
    return x;
  });
}

std::vector<Path> enumerate_feasible_paths(const Graph& g, const NodeFunctions& fs,
                                           const TargetPairs& pairs, double T,
                                           std::size_t limit) {
  if (fs.size() != g.node_count()) {
    throw std::invalid_argument("one weight function per node is required");
  }
  const std::vector<double> w0 = node_weights(fs, ImpactVector(g.node_count()));
  std::vector<Path> out;
  std::set<Path> seen;
  std::vector<char> on_stack(g.node_count(), 0);
  std::vector<NodeId> stack;

  for (const NodePair& pr : pairs) {
    auto dfs = [&](auto&& self, NodeId v, double len) -> void {
      if (reaches(len, T)) return;
      stack.push_back(v);
      on_stack[v] = 1;
      if (v == pr.sink) {
        Path p{stack};
        if (seen.insert(p).second) {
          if (out.size() == limit) {
            throw ContractError("more than " + std::to_string(limit) +
                                " feasible paths");
          }
          out.push_back(std::move(p));
        }
      } else {
        for (NodeId u : g.successors(v)) {
          if (!on_stack[u]) self(self, u, len + w0[u]);
        }
      }
      on_stack[v] = 0;
      stack.pop_back();
    };
    dfs(dfs, pr.source, w0[pr.source]);
  }
  return out;
}

namespace {

struct ExactSearch {
  const std::vector<Path>& paths;
  double T;
  // Candidate nodes in branching order with their useful levels
  // (amount, weight), level 0 first.
  std::vector<NodeId> order;
  std::vector<std::vector<std::pair<double, double>>> levels;
  std::vector<double> best_rate;  // max (f(a) - f(0)) / a over a node's levels
  std::vector<std::vector<std::size_t>> through;
  std::vector<std::vector<std::size_t>> members;  // path -> positions in `order`

  std::vector<double> sums;
  std::vector<double> chosen;
  std::vector<double> best_x;
  double best = std::numeric_limits<double>::infinity();

  double lower_bound(std::size_t depth) const {
    double lb = 0.0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (reaches(sums[i], T)) continue;
      double rate = 0.0;
      for (std::size_t pos : members[i]) {
        if (pos >= depth) rate = std::max(rate, best_rate[pos]);
      }
      if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
      lb = std::max(lb, (T - sums[i]) / rate);
    }
    return lb;
  }

  // best changes during the search, so the slack is recomputed on each call.
  bool pruned(double bound) const {
    if (std::isinf(bound)) return true;
    return std::isfinite(best) && bound >= best - 1e-9 * std::max(1.0, best);
  }

  bool all_reached() const {
    for (double s : sums) {
      if (!reaches(s, T)) return false;
    }
    return true;
  }

  void search(std::size_t depth, double cost) {
    if (all_reached()) {
      if (cost < best) {
        best = cost;
        best_x = chosen;
      }
      return;
    }
    if (depth == order.size()) return;
    if (pruned(cost + lower_bound(depth))) return;

    const auto& lv = levels[depth];
    const double w_base = lv.front().second;
    for (const auto& [amount, weight] : lv) {
      if (pruned(cost + amount)) break;
      for (std::size_t i : through[depth]) sums[i] += weight - w_base;
      chosen[depth] = amount;
      search(depth + 1, cost + amount);
      chosen[depth] = 0.0;
      for (std::size_t i : through[depth]) sums[i] -= weight - w_base;
    }
  }
};

}  // namespace

ImpactVector exact_tiny(const Graph& g, const NodeFunctions& fs,
                        const TargetPairs& pairs, double T, double delta,
                        double x_max, const ExactLimits& limits) {
  if (!(T > 0.0)) throw std::invalid_argument("threshold must be positive");
  if (!(delta > 0.0) || !(x_max >= 0.0)) {
    throw std::invalid_argument("grid step must be positive and x_max nonnegative");
  }
  if (g.node_count() > limits.max_nodes) {
    throw ContractError("exact oracle needs at most " + std::to_string(limits.max_nodes) +
                        " nodes");
  }
  std::vector<Path> paths = enumerate_feasible_paths(g, fs, pairs, T, limits.max_paths);
  const std::size_t n = g.node_count();

  std::vector<std::size_t> count(n, 0);
  for (const Path& p : paths) {
    for (NodeId v : p.nodes) ++count[v];
  }
  ExactSearch s{paths, T, {}, {}, {}, {}, {}, {}, {}, {}};
  for (NodeId v = 0; v < n; ++v) {
    if (count[v] > 0) s.order.push_back(v);
  }
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](NodeId a, NodeId b) { return count[a] > count[b]; });

  const auto steps = static_cast<std::size_t>(std::floor(x_max / delta + 1e-9));
  std::size_t total_levels = 0;
  std::vector<std::size_t> position(n, 0);
  for (std::size_t pos = 0; pos < s.order.size(); ++pos) {
    const NodeId v = s.order[pos];
    position[v] = pos;
    const WeightFunction& f = fs[v];
    std::vector<std::pair<double, double>> lv{{0.0, f(0.0)}};
    double rate = 0.0;
    // Past the first level reaching T nothing improves any path.
    const double reach = f.min_impact_for(T);
    std::size_t last = steps;
    if (std::isfinite(reach)) {
      last = std::min(steps, static_cast<std::size_t>(std::ceil(reach / delta - 1e-9)));
    }
    if (last > limits.max_levels) throw ContractError("exact oracle grid too fine");
    for (std::size_t j = 1; j <= last; ++j) {
      const double a = static_cast<double>(j) * delta;
      const double y = f(a);
      if (y > lv.back().second) {
        lv.emplace_back(a, y);
        rate = std::max(rate, (y - lv.front().second) / a);
      }
    }
    total_levels += lv.size();
    if (total_levels > limits.max_levels) throw ContractError("exact oracle grid too fine");
    s.levels.push_back(std::move(lv));
    s.best_rate.push_back(rate);
  }

  s.through.resize(s.order.size());
  s.members.resize(paths.size());
  s.sums.resize(paths.size());
  const std::vector<double> w0 = node_weights(fs, ImpactVector(n));
  for (std::size_t i = 0; i < paths.size(); ++i) {
    s.sums[i] = path_weight(paths[i], w0);
    for (NodeId v : paths[i].nodes) {
      s.through[position[v]].push_back(i);
      s.members[i].push_back(position[v]);
    }
  }
  s.chosen.assign(s.order.size(), 0.0);
  s.search(0, 0.0);
  if (!std::isfinite(s.best)) throw SolverError("no feasible point on the grid");

  ImpactVector x(n);
  for (std::size_t pos = 0; pos < s.order.size(); ++pos) x.set(s.order[pos], s.best_x[pos]);
  for (const Path& p : paths) {
    if (!reaches(path_length(p, x, fs, T), T)) {
      throw std::logic_error("exact oracle returned an infeasible vector");
    }
  }
  return x;
}

}  // namespace lpi
