#include "lpi/blocking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "lpi/error.hpp"

namespace lpi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack when comparing ratio values against each other.
constexpr double kRatioTie = 1e-9;
constexpr double kRefineGain = 1e-9;

double uncapped_sum(const Path& p, const ImpactVector& w, const NodeFunctions& fs) {
  double sum = 0.0;
  for (NodeId u : p.nodes) sum += fs[u](w[u]);
  return sum;
}

void check_request(const BlockingRequest& req) {
  const std::size_t n = req.functions.size();
  if (req.base.size() != n) {
    throw std::invalid_argument("base impact vector and function table differ in size");
  }
  if (!(req.threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
  if (!(req.epsilon > 0.0 && req.epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  for (const Path& p : req.paths) {
    if (p.empty()) throw std::invalid_argument("empty path in blocking request");
    for (NodeId v : p.nodes) {
      if (v >= n) throw std::invalid_argument("path node out of range");
    }
  }
}

// Mutable working set of a blocking run: current impact, path sums and the
// still-unsatisfied paths indexed by node.
class BlockingState {
 public:
  BlockingState(const BlockingRequest& req, const BlockingConfig& config)
      : fs_(req.functions),
        paths_(req.paths),
        T_(req.threshold),
        target_(req.threshold * (1.0 - req.epsilon)),
        config_(config),
        w_(req.base),
        added_(req.base.size()),
        sums_(req.paths.size()),
        active_(req.paths.size(), 1),
        through_(req.base.size()),
        active_through_(req.base.size(), 0),
        x_caps_(req.base.size(), -1.0) {
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      sums_[i] = uncapped_sum(paths_[i], w_, fs_);
      for (NodeId v : paths_[i].nodes) through_[v].push_back(static_cast<std::uint32_t>(i));
      if (satisfied(i)) {
        active_[i] = 0;
      } else {
        ++active_count_;
        for (NodeId v : paths_[i].nodes) ++active_through_[v];
      }
    }
  }

  std::size_t node_count() const { return fs_.size(); }
  std::size_t active_count() const { return active_count_; }
  const ImpactVector& impact() const { return w_; }
  const ImpactVector& added() const { return added_; }

  double x_cap_of(NodeId v) {
    if (x_caps_[v] < 0.0) x_caps_[v] = x_cap(fs_[v], T_, config_.x_max);
    return x_caps_[v];
  }

  GainProfile profile(NodeId v) {
    if (active_through_[v] == 0) return {};
    std::vector<double> gaps;
    gaps.reserve(active_through_[v]);
    for (std::uint32_t i : through_[v]) {
      if (active_[i]) gaps.push_back(T_ - sums_[i]);
    }
    return GainProfile(fs_[v], w_[v], std::move(gaps), x_cap_of(v));
  }

  void apply(NodeId v, double amount) {
    w_.add(v, amount);
    added_.add(v, amount);
    for (std::uint32_t i : through_[v]) {
      if (!active_[i]) continue;
      sums_[i] = uncapped_sum(paths_[i], w_, fs_);
      if (satisfied(i)) {
        active_[i] = 0;
        --active_count_;
        for (NodeId u : paths_[i].nodes) --active_through_[u];
      }
    }
  }

  // Largest uniform level sigma keeping some active path below T.
  double uniform_level() {
    double hi = 0.0;
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      if (!active_[i]) continue;
      for (NodeId u : paths_[i].nodes) hi = std::max(hi, x_cap_of(u));
    }
    auto some_path_short = [&](double sigma) {
      for (std::size_t i = 0; i < paths_.size(); ++i) {
        if (!active_[i]) continue;
        double sum = 0.0;
        for (NodeId u : paths_[i].nodes) sum += fs_[u](w_[u] + sigma);
        if (sum < T_) return true;
      }
      return false;
    };
    if (!some_path_short(0.0)) {
      throw ContractError("uniform level search needs a path shorter than T");
    }
    if (some_path_short(hi)) return hi;
    double lo = 0.0;
    const double tol = config_.sigma_tol_rel * hi;
    while (hi - lo > tol) {
      double mid = 0.5 * (lo + hi);
      if (some_path_short(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  }

  // Saturates the best-covering growable node of the shortest active path.
  void force_progress() {
    std::optional<std::size_t> shortest;
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      if (active_[i] && (!shortest || sums_[i] < sums_[*shortest])) shortest = i;
    }
    if (!shortest) return;
    std::optional<NodeId> pick;
    for (NodeId v : paths_[*shortest].nodes) {
      if (w_[v] >= x_cap_of(v)) continue;
      if (!pick || active_through_[v] > active_through_[*pick] ||
          (active_through_[v] == active_through_[*pick] && v < *pick)) {
        pick = v;
      }
    }
    if (!pick) {
      throw SolverError("no node on an unsatisfied path can take more impact");
    }
    apply(*pick, x_cap_of(*pick) - w_[*pick]);
    last_forced_ = *pick;
  }

  NodeId last_forced() const { return last_forced_; }

 private:
  bool satisfied(std::size_t i) const { return reaches(std::min(sums_[i], T_), target_); }

  const NodeFunctions& fs_;
  std::span<const Path> paths_;
  double T_;
  double target_;
  const BlockingConfig& config_;
  ImpactVector w_;
  ImpactVector added_;
  std::vector<double> sums_;
  std::vector<char> active_;
  std::size_t active_count_ = 0;
  std::vector<std::vector<std::uint32_t>> through_;
  std::vector<std::uint32_t> active_through_;
  std::vector<double> x_caps_;
  NodeId last_forced_ = 0;
};

double golden_section_max(const GainProfile& profile, double a, double b,
                          double tol, double& best_x) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = profile.ratio(c), fd = profile.ratio(d);
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = profile.ratio(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = profile.ratio(c);
    }
  }
  best_x = fc >= fd ? c : d;
  return std::max(fc, fd);
}

}  // namespace

GainProfile::GainProfile(const WeightFunction& f, double base_impact,
                         std::vector<double> gaps, double x_cap_abs)
    : f_(&f), base_(base_impact), base_weight_(f(base_impact)),
      scale_(x_cap_abs > 0.0 ? x_cap_abs : 1.0) {
  std::erase_if(gaps, [](double g) { return !(g > 0.0); });
  std::sort(gaps.begin(), gaps.end());
  gaps_ = std::move(gaps);
  if (gaps_.empty()) return;
  prefix_.resize(gaps_.size() + 1, 0.0);
  for (std::size_t i = 0; i < gaps_.size(); ++i) prefix_[i + 1] = prefix_[i] + gaps_[i];

  double reach = f.min_impact_for(base_weight_ + gaps_.back());
  double abs_limit = std::min(reach, x_cap_abs);
  limit_ = abs_limit - base_;
  if (!(limit_ > 0.0)) {
    limit_ = 0.0;
    return;
  }
  breakpoints_.reserve(gaps_.size() + 1);
  double prev_gap = -1.0;
  for (double g : gaps_) {
    if (g == prev_gap) continue;
    prev_gap = g;
    double x = std::min(f.min_impact_for(base_weight_ + g), abs_limit) - base_;
    if (x > 0.0 && x < limit_) breakpoints_.push_back(x);
  }
  std::vector<double> knots;
  if (f.knots(base_, abs_limit, knots)) {
    for (double k : knots) {
      double x = k - base_;
      if (x > 0.0 && x < limit_) breakpoints_.push_back(x);
    }
  }
  breakpoints_.push_back(limit_);
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()),
                     breakpoints_.end());
}

double GainProfile::gain(double x) const {
  if (gaps_.empty() || !(x > 0.0)) return 0.0;
  double y = (*f_)(base_ + x) - base_weight_;
  if (!(y > 0.0)) return 0.0;
  auto idx = static_cast<std::size_t>(
      std::upper_bound(gaps_.begin(), gaps_.end(), y) - gaps_.begin());
  return prefix_[idx] + static_cast<double>(gaps_.size() - idx) * y;
}

double largest_x_with_ratio(const GainProfile& profile, double M,
                            const BlockingConfig& config) {
  if (profile.empty()) return 0.0;
  if (!(M > 0.0)) return profile.limit();
  const auto& bp = profile.breakpoints();
  const double m_tol = M * (1.0 - kCompareTolerance);
  auto ok = [&](double x) { return profile.gain(x) >= m_tol * x; };

  if (profile.piecewise_constant()) {
    // r is constant on [bp[i], bp[i+1]), so r/x >= M there iff x <= r/M.
    for (std::size_t i = bp.size(); i-- > 0;) {
      double r = profile.gain(bp[i]);
      if (r < m_tol * bp[i]) continue;
      if (i + 1 == bp.size()) return bp[i];
      return std::clamp(r / M, bp[i], bp[i + 1]);
    }
    return 0.0;
  }

  const double tol = config.x_tol_rel * profile.scale();
  for (std::size_t i = bp.size(); i-- > 0;) {
    double hi = bp[i];
    if (ok(hi)) return hi;
    double lo = i > 0 ? bp[i - 1] : std::min(hi, config.grid_min_rel * profile.scale());
    if (!ok(lo)) continue;
    while (hi - lo > tol) {
      double mid = 0.5 * (lo + hi);
      if (ok(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  }
  return 0.0;
}

RatioOptimum best_ratio(const GainProfile& profile, double lower,
                        const BlockingConfig& config) {
  RatioOptimum best;
  if (profile.empty()) return best;
  const double limit = profile.limit();
  const double lo = std::min(std::max(lower, config.zero_probe_rel * profile.scale()), limit);

  std::vector<double> candidates{lo};
  for (double b : profile.breakpoints()) {
    if (b > lo) candidates.push_back(b);
  }
  std::size_t best_i = 0;
  best.x = lo;
  best.ratio = profile.ratio(lo);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    double r = profile.ratio(candidates[i]);
    if (r >= best.ratio * (1.0 - kRatioTie)) {
      best = {candidates[i], std::max(r, best.ratio), false};
      best_i = i;
    }
  }

  if (!profile.piecewise_constant() && candidates.size() > 1) {
    // Endpoint maxima are exact for the built-in families; refine the two
    // neighboring pieces in case the ratio bulges inside one of them.
    const double tol = config.x_tol_rel * profile.scale();
    double a = candidates[best_i > 0 ? best_i - 1 : 0];
    double b = candidates[std::min(best_i + 1, candidates.size() - 1)];
    if (b - a > tol) {
      double x = 0.0;
      double r = golden_section_max(profile, a, b, tol, x);
      // Near zero the ratio is mostly cancellation noise; a flat piece must
      // not drift there and fake a zero trap.
      if (x > tol && r > best.ratio * (1.0 + kRefineGain)) {
        best = {x, r, false};
        best_i = candidates.size();
      }
    }
  }

  if (lower <= 0.0 && best_i == 0 && lo < limit) {
    best.x = 0.0;
    best.zero_trap = true;
  }
  return best;
}

GainProfile gain_profile(std::span<const Path> paths, const ImpactVector& w,
                         NodeId v, const NodeFunctions& fs, double T,
                         const BlockingConfig& config) {
  if (v >= fs.size() || w.size() != fs.size()) {
    throw std::invalid_argument("node or impact vector does not match function table");
  }
  std::vector<double> gaps;
  for (const Path& p : paths) {
    if (p.contains(v)) gaps.push_back(T - uncapped_sum(p, w, fs));
  }
  return GainProfile(fs[v], w[v], std::move(gaps), x_cap(fs[v], T, config.x_max));
}

double init_M(std::size_t path_count, const NodeFunctions& fs, double T,
              double fallback_M, double x_max) {
  double slope = 0.0;
  for (const WeightFunction& f : fs) {
    auto s = f.max_slope(x_cap(f, T, x_max));
    if (!s) return fallback_M;
    slope = std::max(slope, *s);
  }
  return static_cast<double>(path_count) * slope;
}

double max_x_with_ratio(std::span<const Path> paths, const ImpactVector& w,
                        NodeId v, double M, const NodeFunctions& fs, double T,
                        QueryCounter& counter, const BlockingConfig& config) {
  counter.increment();
  return largest_x_with_ratio(gain_profile(paths, w, v, fs, T, config), M, config);
}

RatioOptimum argmax_ratio(std::span<const Path> paths, const ImpactVector& w,
                          NodeId v, double lower, const NodeFunctions& fs,
                          double T, QueryCounter& counter,
                          const BlockingConfig& config) {
  if (!(lower >= 0.0)) throw std::invalid_argument("lower bound must be nonnegative");
  counter.increment();
  return best_ratio(gain_profile(paths, w, v, fs, T, config), lower, config);
}

double estimate_beta(std::span<const Path> paths, const ImpactVector& base,
                     const NodeFunctions& fs, double T, std::size_t n,
                     QueryCounter& counter, const BlockingConfig& config) {
  if (n == 0) throw std::invalid_argument("node count must be positive");
  // A vanishing epsilon keeps every path shorter than T active.
  BlockingRequest req{paths, base, fs, T, std::numeric_limits<double>::min()};
  check_request(req);
  BlockingState state(req, config);
  counter.increment();
  return state.uniform_level() / static_cast<double>(n);
}

BlockingResult threshold_expansion(const BlockingRequest& req,
                                   const BlockingConfig& config) {
  check_request(req);
  if (!(config.eps_sched > 0.0 && config.eps_sched < 1.0)) {
    throw std::invalid_argument("schedule epsilon must lie in (0, 1)");
  }
  BlockingState state(req, config);
  BlockingResult result;
  const std::size_t n = state.node_count();
  if (state.active_count() == 0) {
    result.added = state.added();
    return result;
  }

  QueryCounter counter;
  double M = init_M(state.active_count(), req.functions, req.threshold,
                    config.fallback_M, config.x_max);
  const std::size_t sweep_guard = config.max_sweeps + state.active_count() + 1;
  std::size_t sweeps = 0;
  while (state.active_count() > 0) {
    for (NodeId v = 0; v < n && state.active_count() > 0; ++v) {
      counter.increment();
      GainProfile profile = state.profile(v);
      if (profile.empty()) continue;
      double x = largest_x_with_ratio(profile, M, config);
      if (x > 0.0) {
        state.apply(v, x);
        result.steps.push_back({v, x});
      }
    }
    if (state.active_count() == 0) break;
    M *= 1.0 - config.eps_sched;
    ++sweeps;
    result.thresholds.push_back(M);
    if (sweeps >= config.max_sweeps) {
      double before = state.added().norm();
      state.force_progress();
      result.steps.push_back({state.last_forced(), state.added().norm() - before});
      ++result.forced_steps;
    }
    if (sweeps > sweep_guard) {
      throw SolverError("threshold expansion exceeded " + std::to_string(sweep_guard) +
                        " sweeps with " + std::to_string(state.active_count()) +
                        " paths left");
    }
  }
  result.added = state.added();
  result.queries = counter.total();
  result.updates = result.steps.size();
  return result;
}

BlockingResult jump_start_greedy(const BlockingRequest& req,
                                 const BlockingConfig& config) {
  check_request(req);
  BlockingState state(req, config);
  BlockingResult result;
  const std::size_t n = state.node_count();
  QueryCounter counter;

  while (state.active_count() > 0) {
    if (result.steps.size() >= config.max_updates) {
      throw SolverError("jump start greedy exceeded " + std::to_string(config.max_updates) +
                        " updates with " + std::to_string(state.active_count()) +
                        " paths left");
    }
    std::optional<double> beta;
    bool jumped = false;
    NodeId best_v = 0;
    RatioOptimum best;
    for (NodeId v = 0; v < n; ++v) {
      counter.increment();
      GainProfile profile = state.profile(v);
      // Nodes off every unsatisfied path have r == 0 and cannot be picked.
      if (profile.empty()) continue;
      RatioOptimum opt = best_ratio(profile, 0.0, config);
      if (opt.zero_trap) {
        if (!beta) {
          counter.increment();
          beta = state.uniform_level() / static_cast<double>(n);
        }
        counter.increment();
        opt = best_ratio(profile, *beta, config);
        jumped = true;
      }
      if (opt.x > 0.0 && opt.ratio > best.ratio) {
        best = opt;
        best_v = v;
      }
    }
    if (!(best.x > 0.0) || !(best.ratio > 0.0)) {
      throw SolverError("jump start greedy found no node with positive gain");
    }
    if (jumped) ++result.jump_start_rounds;
    state.apply(best_v, best.x);
    result.steps.push_back({best_v, best.x});
  }
  result.added = state.added();
  result.queries = counter.total();
  result.updates = result.steps.size();
  return result;
}

BlockingResult run_blocking(BlockingAlgorithm algorithm, const BlockingRequest& request,
                            const BlockingConfig& config) {
  switch (algorithm) {
    case BlockingAlgorithm::kThresholdExpansion:
      return threshold_expansion(request, config);
    case BlockingAlgorithm::kJumpStartGreedy:
      return jump_start_greedy(request, config);
  }
  throw std::invalid_argument("unknown blocking algorithm");
}

}  // namespace lpi
