#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qd {

/// Breakpoint of a piecewise-linear quantile function. `left` is the left limit
/// and `right` the value at `t`; `right > left` marks a jump (an atom).
struct Knot {
  double t;
  double left;
  double right;
};

/// Nondecreasing, right-continuous, nonnegative map [0,1] -> R+ that is linear
/// between knots and may jump at knots. Immutable once built.
class QuantileFunction {
 public:
  /// Validates and takes ownership. Knots must start at 0, end at 1, be strictly
  /// increasing in t and describe a nondecreasing nonnegative function.
  explicit QuantileFunction(std::vector<Knot> knots);

  /// Continuous piecewise-linear interpolant through (t_i, v_i).
  static QuantileFunction interpolate(std::span<const double> t, std::span<const double> v);
  static QuantileFunction constant(double c);
  static QuantileFunction zero() { return constant(0.0); }
  /// Samples `f` at `segments + 1` uniform points and interpolates linearly.
  static QuantileFunction sample(const std::function<double(double)>& f, std::size_t segments);
  /// Samples `f` on a caller-chosen grid (must start at 0 and end at 1).
  static QuantileFunction sample_on(const std::function<double(double)>& f, std::span<const double> grid);

  /// Right-continuous evaluation; throws DomainError outside [0,1].
  double operator()(double t) const;
  double left_limit(double t) const;
  /// Exact integral over [a, b], 0 <= a <= b <= 1.
  double integral(double a, double b) const;
  /// Slope of the linear piece containing (t, t+).
  double slope_right(double t) const;

  std::span<const Knot> knots() const { return knots_; }
  std::vector<double> breakpoints() const;
  double at_zero() const { return knots_.front().right; }
  double top() const { return knots_.back().right; }
  bool has_jumps() const;

 private:
  std::size_t segment_of(double t) const;
  double cumulative(double t) const;

  std::vector<Knot> knots_;
  std::vector<double> cum_;  // integral over [0, t_k]
};

double evaluate(const QuantileFunction& f, double t);

/// Half-open quantile interval [lo, hi).
struct Interval {
  double lo;
  double hi;

  void validate() const;
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Ordered disjoint pooling intervals plus an exclusion cutoff (0 = no exclusion).
struct PoolingPartition {
  std::vector<Interval> intervals;
  double exclusion_cutoff = 0.0;

  void validate() const;
  bool empty() const { return intervals.empty() && exclusion_cutoff == 0.0; }
};

double interval_mean(const QuantileFunction& f, Interval interval);
double tail_integral(const QuantileFunction& f, double x);

inline constexpr double kMajorizationTol = 1e-9;

/// X weakly majorized by Q: every tail integral of X is at most the matching tail of Q.
bool is_weakly_majorized(const QuantileFunction& x, const QuantileFunction& q, double tol = kMajorizationTol);
/// Weak majorization plus equal means (mean-preserving contraction).
bool is_majorized(const QuantileFunction& w, const QuantileFunction& v, double tol = kMajorizationTol);

/// Zero below `t_m`, F from `t_m` on. `t_m >= 1` yields the zero function.
QuantileFunction exclude_below(const QuantileFunction& f, double t_m);
/// Applies the exclusion cutoff, then replaces F on each interval by its mean there.
QuantileFunction pool(const QuantileFunction& f, const PoolingPartition& partition);

/// Sorted union of the breakpoints of two functions (plus optional extra points).
std::vector<double> merge_breakpoints(std::span<const double> a, std::span<const double> b);

/// Lebesgue-Stieltjes integral of g against dF over [0,1]: the absolutely continuous
/// part by 2-point Gauss on every piece of the union of F's breakpoints and `extra`,
/// plus g(t_j) times each jump of F. Exact when g is quadratic on each piece.
double stieltjes(const std::function<double(double)>& g, const QuantileFunction& f,
                 std::span<const double> extra = {});

}  // namespace qd
