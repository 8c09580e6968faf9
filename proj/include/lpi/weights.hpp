#ifndef LPI_WEIGHTS_HPP
#define LPI_WEIGHTS_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lpi/graph.hpp"

namespace lpi {

// Relative slack used whenever a length is compared against a threshold.
inline constexpr double kCompareTolerance = 1e-9;

// a >= target, allowing kCompareTolerance relative rounding slack.
inline bool reaches(double a, double target) {
  return a >= target * (1.0 - kCompareTolerance);
}

enum class Family { kConcave, kConvex, kLinear, kStep, kTable };

enum class TableMode { kLinear, kConstant };

std::string_view family_name(Family f);

// Monotone non-decreasing map from impact amount to node weight.
//
//   concave  f0 + c*ln(1+x)
//   convex   f0 + c*x^2
//   linear   f0 + c*x
//   step     f0 + c*floor(x)
//   table    breakpoints (x_i, y_i), interpolated linearly or held constant
//            (right-continuous) between them, flat outside.
class WeightFunction {
 public:
  static WeightFunction concave(double c, double f0 = 0.0);
  static WeightFunction convex(double c, double f0 = 0.0);
  static WeightFunction linear(double c, double f0 = 0.0);
  static WeightFunction step(double c, double f0 = 0.0);
  // Breakpoint x must be strictly increasing and nonnegative, y
  // non-decreasing and nonnegative.
  static WeightFunction table(std::vector<std::pair<double, double>> breakpoints,
                              TableMode mode = TableMode::kLinear);

  Family family() const { return family_; }
  double coefficient() const { return c_; }
  double offset() const { return f0_; }
  TableMode table_mode() const { return mode_; }

  // Throws std::invalid_argument for negative x.
  double operator()(double x) const;

  // Smallest x >= 0 with f(x) >= level, or +inf if f stays below level.
  double min_impact_for(double level) const;

  // Upper bound of df/dx over [0, x_hi] for the differentiable families;
  // nullopt for step and table.
  std::optional<double> max_slope(double x_hi) const;

  // True when f only changes by jumps (step, constant table).
  bool piecewise_constant() const;

  // Appends the points in (lo, hi] where f jumps or changes slope.
  // Returns false, leaving `out` unspecified, if there are more than
  // `limit` of them.
  bool knots(double lo, double hi, std::vector<double>& out,
             std::size_t limit = 100000) const;

  // "family:c:f0" for analytic families, "table:<n breakpoints>" otherwise.
  std::string describe() const;

 private:
  WeightFunction(Family family, double c, double f0);

  double nudge_up(double x, double level) const;

  Family family_ = Family::kLinear;
  double c_ = 1.0;
  double f0_ = 0.0;
  TableMode mode_ = TableMode::kLinear;
  std::shared_ptr<const std::vector<std::pair<double, double>>> table_;
};

// Parses "family:c[:f0]" (concave, convex, linear, step) or
// "table:FILE[:linear|constant]". Throws ParseError.
WeightFunction parse_function_spec(std::string_view spec);

// Two-column "x y" breakpoint file, '#' comments allowed.
WeightFunction load_table_function(const std::filesystem::path& file,
                                   TableMode mode = TableMode::kLinear);
WeightFunction load_table_function(std::istream& in,
                                   TableMode mode = TableMode::kLinear);

// min{x : f(x) >= T}, or x_max when f does not reach T before x_max.
double x_cap(const WeightFunction& f, double T, double x_max);

using NodeFunctions = std::vector<WeightFunction>;

NodeFunctions uniform_functions(std::size_t n, const WeightFunction& f);

// Dense nonnegative impact amounts, one per node.
class ImpactVector {
 public:
  ImpactVector() = default;
  explicit ImpactVector(std::size_t n) : values_(n, 0.0) {}
  // Throws std::invalid_argument on a negative or non-finite entry.
  explicit ImpactVector(std::vector<double> values);

  // <v, amount>: `amount` at entry v, zero elsewhere.
  static ImpactVector point(std::size_t n, NodeId v, double amount);
  static ImpactVector uniform(std::size_t n, double amount);

  std::size_t size() const { return values_.size(); }
  double operator[](NodeId v) const { return values_[v]; }
  std::span<const double> values() const { return values_; }

  // Sum of entries.
  double norm() const;

  void add(NodeId v, double amount);
  void set(NodeId v, double amount);

  ImpactVector& operator+=(const ImpactVector& other);
  friend ImpactVector operator+(ImpactVector a, const ImpactVector& b) {
    a += b;
    return a;
  }

  // Entrywise max(a_v - b_v, 0).
  friend ImpactVector clamped_difference(const ImpactVector& a,
                                         const ImpactVector& b);

  // Entrywise partial order.
  friend bool operator<=(const ImpactVector& a, const ImpactVector& b);
  friend bool operator>=(const ImpactVector& a, const ImpactVector& b) {
    return b <= a;
  }
  friend bool operator==(const ImpactVector&, const ImpactVector&) = default;

 private:
  std::vector<double> values_;
};

struct PointImpact {
  NodeId node = 0;
  double amount = 0.0;
};

// f_v(x_v) for every node.
std::vector<double> node_weights(const NodeFunctions& fs, const ImpactVector& x);

// min(sum over p of f_v(x_v), T).
double path_length(const Path& p, const ImpactVector& x, const NodeFunctions& fs,
                   double T);

// Total capped-length increase over `paths` when `amount` is added at v on
// top of w.
double marginal_gain(std::span<const Path> paths, const ImpactVector& w,
                     NodeId v, double amount, const NodeFunctions& fs, double T);

}  // namespace lpi

#endif  // LPI_WEIGHTS_HPP
