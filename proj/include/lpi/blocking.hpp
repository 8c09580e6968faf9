#ifndef LPI_BLOCKING_HPP
#define LPI_BLOCKING_HPP

// Threshold blocking: given paths and a base impact vector, find an
// additional impact vector that lifts every path to at least T(1 - eps).
//
// Both algorithms are driven by the marginal gain r(x) of adding x at one
// node: the total capped-length increase over the still-unsatisfied paths.
// With path sums S_p and gaps T - S_p, r(x) = sum_p min(g(x), gap_p) where
// g(x) = f_v(w_v + x) - f_v(w_v), so r has one analytic piece between
// consecutive gap-saturation points (and the jumps/kinks of f_v). On every
// such piece r(x)/x is monotone or convex for all supported families, which
// lets the univariate searches work from piece endpoints.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lpi/graph.hpp"
#include "lpi/weights.hpp"

namespace lpi {

struct BlockingConfig {
  // Threshold Expansion decay factor for M per sweep.
  double eps_sched = 0.1;
  // Sweeps before the forced-progress fallback kicks in.
  std::size_t max_sweeps = 200;
  // M for families without a derivative bound (step, table).
  double fallback_M = 1e6;
  // Upper bound on any univariate search domain.
  double x_max = 1e9;
  // Bisection tolerance, relative to the node's x_cap.
  double x_tol_rel = 1e-6;
  // Smallest positive amount the argmax search looks at, relative to x_cap.
  double grid_min_rel = 1e-12;
  // The argmax reads the ratio near zero at this amount (relative to x_cap),
  // far enough out that cancellation noise stays below the tie tolerance.
  // An argmax there is a zero trap.
  double zero_probe_rel = 1e-6;
  // Uniform-level binary search tolerance, relative to its bracket.
  double sigma_tol_rel = 1e-6;
  // Jump Start Greedy guard on the number of point updates.
  std::size_t max_updates = 2'000'000;
};

// Counts univariate searches (the portable runtime metric).
class QueryCounter {
 public:
  void increment(std::uint64_t by = 1) { total_.fetch_add(by, std::memory_order_relaxed); }
  std::uint64_t total() const { return total_.load(std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> total_{0};
};

// r(x) for one node, frozen at a base impact and a set of path gaps.
class GainProfile {
 public:
  GainProfile() = default;
  // `gaps` are T - (uncapped path sum) for the paths through the node;
  // nonpositive gaps are ignored.
  GainProfile(const WeightFunction& f, double base_impact,
              std::vector<double> gaps, double x_cap_abs);

  bool empty() const { return gaps_.empty() || !(limit_ > 0.0); }

  // Largest useful amount: every path through the node saturates here.
  double limit() const { return limit_; }
  // Absolute x_cap of the node's function, the tolerance scale.
  double scale() const { return scale_; }
  bool piecewise_constant() const { return f_ != nullptr && f_->piecewise_constant(); }

  double gain(double x) const;
  double ratio(double x) const { return x > 0.0 ? gain(x) / x : 0.0; }

  // Ascending points in (0, limit] where r changes piece; ends with limit.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

 private:
  const WeightFunction* f_ = nullptr;
  double base_ = 0.0;
  double base_weight_ = 0.0;
  double limit_ = 0.0;
  double scale_ = 0.0;
  std::vector<double> gaps_;    // ascending
  std::vector<double> prefix_;  // prefix_[i] = sum of gaps_[0..i)
  std::vector<double> breakpoints_;
};

// Largest x in (0, limit] with r(x)/x >= M, or 0 if none.
double largest_x_with_ratio(const GainProfile& profile, double M,
                            const BlockingConfig& config);

struct RatioOptimum {
  double x = 0.0;
  double ratio = 0.0;
  bool zero_trap = false;
};

// Maximizer of r(x)/x over [max(lower, grid_min), limit]; the largest one
// on ties. With lower == 0 a maximizer below the zero tolerance is reported
// as x = 0 and flagged.
RatioOptimum best_ratio(const GainProfile& profile, double lower,
                        const BlockingConfig& config);

// Builds the profile of node v over `paths` under w.
GainProfile gain_profile(std::span<const Path> paths, const ImpactVector& w,
                         NodeId v, const NodeFunctions& fs, double T,
                         const BlockingConfig& config = {});

// M = |P| * max derivative of f_v below T; fallback_M when some f_v has no
// derivative bound.
double init_M(std::size_t path_count, const NodeFunctions& fs, double T,
              double fallback_M, double x_max = BlockingConfig{}.x_max);

// max{x > 0 : r_{P,w,v}(x)/x >= M}. One query.
double max_x_with_ratio(std::span<const Path> paths, const ImpactVector& w,
                        NodeId v, double M, const NodeFunctions& fs, double T,
                        QueryCounter& counter, const BlockingConfig& config = {});

// argmax_{x >= lower} r_{P,w,v}(x)/x. One query.
RatioOptimum argmax_ratio(std::span<const Path> paths, const ImpactVector& w,
                          NodeId v, double lower, const NodeFunctions& fs,
                          double T, QueryCounter& counter,
                          const BlockingConfig& config = {});

// Jump-start lower bound: sigma / n for the largest uniform level sigma
// that still leaves some path of P shorter than T on top of `base`. One
// query. Throws ContractError when every path already reaches T.
double estimate_beta(std::span<const Path> paths, const ImpactVector& base,
                     const NodeFunctions& fs, double T, std::size_t n,
                     QueryCounter& counter, const BlockingConfig& config = {});

struct BlockingRequest {
  std::span<const Path> paths;
  const ImpactVector& base;
  const NodeFunctions& functions;
  double threshold = 0.0;
  double epsilon = 0.1;
};

struct BlockingResult {
  ImpactVector added;
  std::uint64_t queries = 0;
  std::size_t updates = 0;
  std::vector<PointImpact> steps;
  // Threshold Expansion: M after each completed sweep.
  std::vector<double> thresholds;
  std::size_t forced_steps = 0;
  // Jump Start Greedy: rounds where at least one node hit the zero trap.
  std::size_t jump_start_rounds = 0;
};

BlockingResult threshold_expansion(const BlockingRequest& request,
                                   const BlockingConfig& config = {});

BlockingResult jump_start_greedy(const BlockingRequest& request,
                                 const BlockingConfig& config = {});

enum class BlockingAlgorithm { kThresholdExpansion, kJumpStartGreedy };

BlockingResult run_blocking(BlockingAlgorithm algorithm,
                            const BlockingRequest& request,
                            const BlockingConfig& config = {});

}  // namespace lpi

#endif  // LPI_BLOCKING_HPP
