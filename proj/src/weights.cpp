#include "lpi/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lpi/error.hpp"

namespace lpi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_real(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError("invalid number '" + tok + "'", line);
  }
  if (used != tok.size() || !std::isfinite(value)) {
    throw ParseError("invalid number '" + tok + "'", line);
  }
  return value;
}

// Impact that lands a rounding error short of a jump still counts as
// reaching it; otherwise base + added can evaluate differently from the
// sum the solver accumulated.
double snap_to_jump(double x) { return x + 1e-12 * std::max(1.0, x); }

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kConcave: return "concave";
    case Family::kConvex: return "convex";
    case Family::kLinear: return "linear";
    case Family::kStep: return "step";
    case Family::kTable: return "table";
  }
  return "unknown";
}

WeightFunction::WeightFunction(Family family, double c, double f0)
    : family_(family), c_(c), f0_(f0) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("weight function coefficient must be positive");
  }
  if (!(f0 >= 0.0) || !std::isfinite(f0)) {
    throw std::invalid_argument("weight function offset must be nonnegative");
  }
}

WeightFunction WeightFunction::concave(double c, double f0) {
  return WeightFunction(Family::kConcave, c, f0);
}
WeightFunction WeightFunction::convex(double c, double f0) {
  return WeightFunction(Family::kConvex, c, f0);
}
WeightFunction WeightFunction::linear(double c, double f0) {
  return WeightFunction(Family::kLinear, c, f0);
}
WeightFunction WeightFunction::step(double c, double f0) {
  return WeightFunction(Family::kStep, c, f0);
}

WeightFunction WeightFunction::table(
    std::vector<std::pair<double, double>> breakpoints, TableMode mode) {
  if (breakpoints.empty()) {
    throw std::invalid_argument("table function needs at least one breakpoint");
  }
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    auto [x, y] = breakpoints[i];
    if (!(x >= 0.0) || !(y >= 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw std::invalid_argument("table breakpoints must be finite and nonnegative");
    }
    if (i > 0 && (x <= breakpoints[i - 1].first || y < breakpoints[i - 1].second)) {
      throw std::invalid_argument(
          "table breakpoints must have increasing x and non-decreasing y");
    }
  }
  WeightFunction f(Family::kTable, 1.0, breakpoints.front().second);
  f.mode_ = mode;
  f.table_ = std::make_shared<const std::vector<std::pair<double, double>>>(
      std::move(breakpoints));
  return f;
}

double WeightFunction::operator()(double x) const {
  if (!(x >= 0.0)) throw std::invalid_argument("impact amount must be nonnegative");
  switch (family_) {
    case Family::kConcave: return f0_ + c_ * std::log1p(x);
    case Family::kConvex: return f0_ + c_ * x * x;
    case Family::kLinear: return f0_ + c_ * x;
    case Family::kStep: return f0_ + c_ * std::floor(snap_to_jump(x));
    case Family::kTable: break;
  }
  const auto& bp = *table_;
  // First breakpoint strictly right of x.
  const double key = mode_ == TableMode::kConstant ? snap_to_jump(x) : x;
  auto it = std::upper_bound(bp.begin(), bp.end(), key,
                             [](double v, const auto& b) { return v < b.first; });
  if (it == bp.begin()) return bp.front().second;
  if (it == bp.end()) return bp.back().second;
  const auto& left = *(it - 1);
  if (mode_ == TableMode::kConstant) return left.second;
  const auto& right = *it;
  double t = (x - left.first) / (right.first - left.first);
  return left.second + t * (right.second - left.second);
}

double WeightFunction::nudge_up(double x, double level) const {
  if (!std::isfinite(x)) return x;
  x = std::max(x, 0.0);
  double step = std::max(std::abs(x), 1.0) * std::numeric_limits<double>::epsilon();
  for (int i = 0; i < 200 && (*this)(x) < level; ++i) {
    x += step;
    step *= 2.0;
  }
  for (int i = 0; i < 8 && x > 0.0; ++i) {
    double lower = std::nextafter(x, 0.0);
    if ((*this)(lower) < level) break;
    x = lower;
  }
  return x;
}

double WeightFunction::min_impact_for(double level) const {
  if ((*this)(0.0) >= level) return 0.0;
  double need = (level - f0_) / c_;
  switch (family_) {
    case Family::kConcave:
      if (need > 700.0) return kInf;
      return nudge_up(std::expm1(need), level);
    case Family::kConvex:
      return nudge_up(std::sqrt(need), level);
    case Family::kLinear:
      return nudge_up(need, level);
    case Family::kStep: {
      if (need > 1e15) return kInf;
      double m = std::ceil(need);
      if (m >= 1.0 && (*this)(m - 1.0) >= level) m -= 1.0;
      if ((*this)(m) < level) m += 1.0;
      return m;
    }
    case Family::kTable: break;
  }
  const auto& bp = *table_;
  if (bp.back().second < level) return kInf;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    if (bp[i].second < level) continue;
    if (i == 0 || mode_ == TableMode::kConstant) return bp[i].first;
    const auto& left = bp[i - 1];
    double t = (level - left.second) / (bp[i].second - left.second);
    double x = left.first + t * (bp[i].first - left.first);
    return std::min(nudge_up(x, level), bp[i].first);
  }
  return kInf;
}

std::optional<double> WeightFunction::max_slope(double x_hi) const {
  switch (family_) {
    case Family::kConcave: return c_;
    case Family::kConvex: return 2.0 * c_ * x_hi;
    case Family::kLinear: return c_;
    case Family::kStep:
    case Family::kTable: return std::nullopt;
  }
  return std::nullopt;
}

bool WeightFunction::piecewise_constant() const {
  return family_ == Family::kStep ||
         (family_ == Family::kTable && mode_ == TableMode::kConstant);
}

bool WeightFunction::knots(double lo, double hi, std::vector<double>& out,
                           std::size_t limit) const {
  if (!(hi > lo)) return true;
  if (family_ == Family::kStep) {
    double first = std::floor(lo) + 1.0;
    double last = std::floor(hi);
    if (last - first + 1.0 > static_cast<double>(limit)) return false;
    for (double k = first; k <= last; k += 1.0) out.push_back(k);
    return true;
  }
  if (family_ == Family::kTable) {
    std::size_t added = 0;
    for (const auto& [x, y] : *table_) {
      if (x > lo && x <= hi) {
        if (++added > limit) return false;
        out.push_back(x);
      }
    }
  }
  return true;
}

std::string WeightFunction::describe() const {
  std::ostringstream os;
  os.precision(12);
  if (family_ == Family::kTable) {
    os << "table:" << table_->size() << "pts:"
       << (mode_ == TableMode::kConstant ? "constant" : "linear");
  } else {
    os << family_name(family_) << ':' << c_ << ':' << f0_;
  }
  return os.str();
}

WeightFunction parse_function_spec(std::string_view spec) {
  auto parts = split(spec, ':');
  const std::string& name = parts.front();
  if (name == "table") {
    if (parts.size() < 2 || parts.size() > 3 || parts[1].empty()) {
      throw ParseError("table function spec is table:FILE[:linear|constant]", 0);
    }
    TableMode mode = TableMode::kLinear;
    if (parts.size() == 3) {
      if (parts[2] == "constant") {
        mode = TableMode::kConstant;
      } else if (parts[2] != "linear") {
        throw ParseError("unknown table mode '" + parts[2] + "'", 0);
      }
    }
    return load_table_function(std::filesystem::path(parts[1]), mode);
  }
  if (parts.size() < 2 || parts.size() > 3) {
    throw ParseError("function spec is family:c[:f0], got '" + std::string(spec) + "'", 0);
  }
  double c = parse_real(parts[1], 0);
  double f0 = parts.size() == 3 ? parse_real(parts[2], 0) : 0.0;
  try {
    if (name == "concave") return WeightFunction::concave(c, f0);
    if (name == "convex") return WeightFunction::convex(c, f0);
    if (name == "linear") return WeightFunction::linear(c, f0);
    if (name == "step") return WeightFunction::step(c, f0);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
  throw ParseError("unknown function family '" + name + "'", 0);
}

WeightFunction load_table_function(std::istream& in, TableMode mode) {
  std::vector<std::pair<double, double>> bp;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw ParseError("expected two columns 'x y'", line_no);
    }
    bp.emplace_back(parse_real(a, line_no), parse_real(b, line_no));
  }
  try {
    return WeightFunction::table(std::move(bp), mode);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line_no);
  }
}

WeightFunction load_table_function(const std::filesystem::path& file,
                                   TableMode mode) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open breakpoint file " + file.string(), 0);
  return load_table_function(in, mode);
}

double x_cap(const WeightFunction& f, double T, double x_max) {
  return std::min(f.min_impact_for(T), x_max);
}

NodeFunctions uniform_functions(std::size_t n, const WeightFunction& f) {
  return NodeFunctions(n, f);
}

ImpactVector::ImpactVector(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("impact entries must be finite and nonnegative");
    }
  }
}

ImpactVector ImpactVector::point(std::size_t n, NodeId v, double amount) {
  ImpactVector x(n);
  x.set(v, amount);
  return x;
}

ImpactVector ImpactVector::uniform(std::size_t n, double amount) {
  return ImpactVector(std::vector<double>(n, amount));
}

double ImpactVector::norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum;
}

void ImpactVector::add(NodeId v, double amount) {
  if (!(amount >= 0.0)) throw std::invalid_argument("impact increment must be nonnegative");
  values_.at(v) += amount;
}

void ImpactVector::set(NodeId v, double amount) {
  if (!(amount >= 0.0)) throw std::invalid_argument("impact entries must be nonnegative");
  values_.at(v) = amount;
}

ImpactVector& ImpactVector::operator+=(const ImpactVector& other) {
  if (other.size() != size()) throw std::invalid_argument("impact vector length mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ImpactVector clamped_difference(const ImpactVector& a, const ImpactVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("impact vector length mismatch");
  ImpactVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.values_[i] = std::max(a.values_[i] - b.values_[i], 0.0);
  }
  return out;
}

bool operator<=(const ImpactVector& a, const ImpactVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("impact vector length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.values_[i] > b.values_[i]) return false;
  }
  return true;
}

std::vector<double> node_weights(const NodeFunctions& fs, const ImpactVector& x) {
  if (fs.size() != x.size()) throw std::invalid_argument("function/impact size mismatch");
  std::vector<double> w(fs.size());
  for (std::size_t v = 0; v < fs.size(); ++v) w[v] = fs[v](x[static_cast<NodeId>(v)]);
  return w;
}

double path_length(const Path& p, const ImpactVector& x, const NodeFunctions& fs,
                   double T) {
  double sum = 0.0;
  for (NodeId v : p.nodes) sum += fs[v](x[v]);
  return std::min(sum, T);
}

double marginal_gain(std::span<const Path> paths, const ImpactVector& w,
                     NodeId v, double amount, const NodeFunctions& fs, double T) {
  if (!(amount >= 0.0)) throw std::invalid_argument("impact amount must be nonnegative");
  ImpactVector raised = w;
  raised.add(v, amount);
  double gain = 0.0;
  for (const Path& p : paths) {
    if (!p.contains(v)) continue;
    gain += path_length(p, raised, fs, T) - path_length(p, w, fs, T);
  }
  return gain;
}

}  // namespace lpi
