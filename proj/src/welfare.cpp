#include "qdesign/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdesign/error.hpp"
#include "qdesign/functionals.hpp"
#include "qdesign/solvers.hpp"

namespace qd {

const char* to_string(Censorship c) {
  switch (c) {
    case Censorship::upper: return "upper";
    case Censorship::lower: return "lower";
    case Censorship::full_disclosure: return "full_disclosure";
    case Censorship::no_disclosure: return "no_disclosure";
  }
  return "?";
}

WeightFunction surplus_weight(double lambda, int m, const QuantileFunction& q) {
  if (!(lambda >= -1.0 && lambda <= 1.0)) throw DomainError("welfare weight lambda must lie in [-1,1]");
  if (m != 1 && m != -1) throw InputError("welfare sign m must be -1 or +1");
  if (q.at_zero() > 0.0) throw PreconditionError("surplus weight requires Q(0) = 0");
  const double sign = static_cast<double>(m);
  return combine(sign * (1.0 - std::abs(lambda)), excess_quality(q), sign * lambda, pointwise_revenue_left(q));
}

namespace {

// Minimizes f on [a, b] by golden-section search to the given bracket width.
template <class F>
double golden_min(F f, double a, double b, double tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Grid neighbours of t, clamped to the open unit interval.
std::pair<double, double> bracket(const std::vector<double>& grid, double t) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - grid.begin());
  const double lo = k > 0 ? grid[k - 1] : grid.front();
  const double hi = k + 1 < grid.size() ? grid[k + 1] : grid.back();
  return {std::max(lo, 1e-12), std::min(hi, 1.0 - 1e-12)};
}

constexpr double kCutoffTol = 1e-8;

// True when the chord from (a, S(a)) to (b, S(b)) lies above S on the grid
// inside (a, b) up to the envelope tolerance, i.e. pooling [a, b) is optimal
// within tolerance. Gaps shrink to nothing where S is nearly affine, so the
// hull's own intervals can stop a cell or two short of 0 or 1.
bool chord_dominates(const WeightFunction& s, double a, double b) {
  const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
  const double tol = std::max(1e-9 * (*hi - *lo), 1e-12);
  const double sa = a == 0.0 ? s.at_zero() : s(a);
  const double sb = s(b);
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const double t = s.grid[i];
    if (t <= a || t >= b) continue;
    const double chord = sa + (sb - sa) * (t - a) / (b - a);
    if (s.values[i] - chord > tol) return false;
  }
  return true;
}

}  // namespace

WelfarePoint solve_weighted(double lambda, int m, const QuantileFunction& v, const QuantileFunction& q) {
  const WeightFunction s = refine(surplus_weight(lambda, m, q));
  MpcOptimum opt = maximize_over_mpc(s, v);
  const auto& ivs = opt.partition.intervals;

  Censorship label = Censorship::full_disclosure;
  double cutoff = 1.0;
  bool shape_ok = true;
  PoolingPartition partition = opt.partition;
  if (!ivs.empty()) {
    const double first = ivs.front().lo;
    const double last = ivs.back().hi;
    if ((first == 0.0 && last == 1.0 && ivs.size() == 1) || chord_dominates(s, 0.0, 1.0)) {
      label = Censorship::no_disclosure;
      cutoff = 0.0;
      partition.intervals = {{0.0, 1.0}};
    } else if (chord_dominates(s, first, 1.0)) {
      label = Censorship::upper;
      const double s1 = s(1.0);
      auto [a, b] = bracket(s.grid, first);
      cutoff = golden_min([&](double t) { return (s1 - s(t)) / (1.0 - t); }, a, b, kCutoffTol);
      partition.intervals = {{cutoff, 1.0}};
    } else if (chord_dominates(s, 0.0, last)) {
      label = Censorship::lower;
      const double s0 = s.at_zero();
      auto [a, b] = bracket(s.grid, last);
      cutoff = golden_min([&](double t) { return -(s(t) - s0) / t; }, a, b, kCutoffTol);
      partition.intervals = {{0.0, cutoff}};
    } else {
      // not a censorship; report the hull's pools as they are
      label = Censorship::upper;
      cutoff = first;
      shape_ok = false;
    }
  }
  QuantileFunction w = pool(v, partition);
  const double r = revenue(w, q);
  const double u = consumer_surplus(w, q);
  return {lambda, m, label, cutoff, r, u, std::move(w), std::move(partition), shape_ok, opt.unique};
}

std::vector<WelfarePoint> trace_frontier(const QuantileFunction& v, const QuantileFunction& q, std::size_t steps) {
  if (steps < 4) throw InputError("trace_frontier needs at least 4 steps");
  std::vector<WelfarePoint> out;
  out.reserve(2 * steps);
  for (int m : {-1, 1}) {
    for (std::size_t i = 0; i < steps; ++i) {
      const double lambda = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(steps - 1);
      out.push_back(solve_weighted(lambda, m, v, q));
    }
  }
  return out;
}

}  // namespace qd
