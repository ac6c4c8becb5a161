#include "qdesign/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qdesign/error.hpp"

namespace qd {

namespace {

void cross_check(double direct, double formula, const char* what) {
  const double scale = std::max({1.0, std::abs(direct), std::abs(formula)});
  if (!(std::abs(direct - formula) <= 1e-6 * scale)) {
    throw NumericalError(std::string(what) + ": value formula " + std::to_string(formula) +
                         " disagrees with direct evaluation " + std::to_string(direct));
  }
}

// Exact change in  g(0)F(0) + int g dF  from replacing F on [a, b) by its mean.
// The hull only sees grid points; a weight that is strictly concave inside its
// cells can dip below a chord drawn across a small convex kink, so a gap on the
// grid does not always pay.
double pooling_gain(const WeightFunction& g, const QuantileFunction& f, Interval iv) {
  const double a = iv.lo, b = iv.hi;
  const double m = interval_mean(f, iv);
  const double ga = a == 0.0 ? g.at_zero() : g(a);
  double gain = ga * (m - f(a)) + g(b) * (f.left_limit(b) - m);
  std::vector<double> cells{a};
  for (double t : g.grid) {
    if (t > a && t < b) cells.push_back(t);
  }
  cells.push_back(b);
  const auto fb = f.breakpoints();
  cells = merge_breakpoints(cells, std::vector<double>(std::lower_bound(fb.begin(), fb.end(), a),
                                                      std::upper_bound(fb.begin(), fb.end(), b)));
  static const double node = 1.0 / std::sqrt(3.0);
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    const double lo = cells[i], hi = cells[i + 1];
    const double slope = (f.left_limit(hi) - f(lo)) / (hi - lo);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    if (slope != 0.0) gain -= slope * half * (g(mid - half * node) + g(mid + half * node));
    if (i > 0) gain -= g(lo) * (f(lo) - f.left_limit(lo));
  }
  return gain;
}

// Drops gaps that do not raise the objective; the envelope then follows g there.
void prune_pools(Envelope& env, const WeightFunction& g, const QuantileFunction& f, double t_m = 0.0) {
  std::erase_if(env.pooling_intervals, [&](const Interval& iv) {
    if (iv.hi <= t_m) return false;
    return !(pooling_gain(g, f, {std::max(iv.lo, t_m), iv.hi}) > 0.0);
  });
}

}  // namespace

MpcOptimum maximize_over_mpc(const WeightFunction& weight, const QuantileFunction& v) {
  const WeightFunction g = refine(weight);
  Envelope env = concave_envelope(g);
  prune_pools(env, g, v);
  PoolingPartition partition{env.pooling_intervals, 0.0};
  QuantileFunction w = pool(v, partition);
  auto gbar = [&env](double t) { return env(t); };
  const double value = env.values.front() * v.at_zero() + stieltjes(gbar, v, g.grid);
  return {std::move(w), std::move(partition), value, !env.affine_contact};
}

WeakOptimum maximize_over_weak(const WeightFunction& weight, const QuantileFunction& q) {
  const WeightFunction g = refine(weight);
  Envelope env = concave_envelope(g);
  std::vector<double> y = g.values;
  y.front() = g.at_zero();
  const auto best = std::max_element(y.begin(), y.end());  // first maximizer
  if (!(*best > 0.0)) {
    return {QuantileFunction::zero(), PoolingPartition{{}, 1.0}, 0.0, 1.0, true};
  }
  const std::size_t im = static_cast<std::size_t>(best - y.begin());
  const double t_m = g.grid[im];
  const bool tied = std::count(y.begin(), y.end(), *best) > 1;

  prune_pools(env, g, exclude_below(q, t_m), t_m);
  PoolingPartition partition;
  partition.exclusion_cutoff = t_m;
  for (const Interval& iv : env.pooling_intervals) {
    if (iv.hi <= t_m) continue;
    partition.intervals.push_back({std::max(iv.lo, t_m), iv.hi});
  }
  QuantileFunction x = pool(q, partition);

  auto gbar = [&env](double t) { return env(t); };
  double value = 0.0;
  if (t_m == 0.0) {
    value = env.values.front() * q.at_zero() + stieltjes(gbar, q, g.grid);
  } else {
    value = stieltjes(gbar, exclude_below(q, t_m), g.grid);
  }
  return {std::move(x), std::move(partition), value, t_m, !env.affine_contact && !tied};
}

MechanismSolution optimal_mechanism(const QuantileFunction& w, const QuantileFunction& q) {
  WeakOptimum opt = maximize_over_weak(pointwise_revenue(w), q);
  const double direct = revenue(w, opt.solution);
  cross_check(direct, opt.value, "optimal_mechanism");
  return {std::move(opt.solution), std::move(opt.partition), direct, opt.value, opt.t_m, opt.unique};
}

InfoSolution optimal_information(const QuantileFunction& v, const QuantileFunction& x) {
  MpcOptimum opt = maximize_over_mpc(excess_quality(x), v);
  const double direct = revenue(opt.solution, x);
  cross_check(direct, opt.value, "optimal_information");
  return {std::move(opt.solution), std::move(opt.partition), direct, opt.value, opt.unique};
}

MechanismSolution consumer_optimal_allocation(const QuantileFunction& w, const QuantileFunction& q) {
  if (w.at_zero() > 0.0) throw PreconditionError("consumer-optimal allocation requires W(0) = 0");
  // e_W is nonincreasing, so the weak constraint binds and the strong engine applies.
  MpcOptimum opt = maximize_over_mpc(excess_quality_after(w), q);
  const double direct = consumer_surplus(w, opt.solution);
  cross_check(direct, opt.value, "consumer_optimal_allocation");
  return {std::move(opt.solution), std::move(opt.partition), direct, opt.value, 0.0, opt.unique};
}

InfoSolution consumer_optimal_information(const QuantileFunction& v, const QuantileFunction& x) {
  if (x.at_zero() > 0.0) throw PreconditionError("consumer-optimal information requires X(0) = 0");
  MpcOptimum opt = maximize_over_mpc(pointwise_revenue_left(x), v);
  const double direct = consumer_surplus(opt.solution, x);
  cross_check(direct, opt.value, "consumer_optimal_information");
  return {std::move(opt.solution), std::move(opt.partition), direct, opt.value, opt.unique};
}

bool is_regular(const QuantileFunction& w) {
  const VirtualValue phi = virtual_value(w);
  double scale = 0.0;
  for (double v : phi.values) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 1; i < phi.values.size(); ++i) {
    if (phi.values[i] < phi.values[i - 1] - 1e-8 * scale) return false;
  }
  return true;
}

const char* to_string(Disclosure d) {
  switch (d) {
    case Disclosure::no_disclosure: return "no_disclosure";
    case Disclosure::full_disclosure: return "full_disclosure";
    case Disclosure::any_structure: return "any_structure";
    case Disclosure::indeterminate: return "indeterminate";
  }
  return "?";
}

Disclosure disclosure_dichotomy(const QuantileFunction& q) {
  if (q.at_zero() > 0.0) throw PreconditionError("disclosure dichotomy requires Q(0) = 0");
  switch (hazard_monotonicity(q)) {
    case Hazard::increasing_hazard: return Disclosure::no_disclosure;
    case Hazard::decreasing_hazard: return Disclosure::full_disclosure;
    case Hazard::constant_hazard: return Disclosure::any_structure;
    case Hazard::non_monotone: return Disclosure::indeterminate;
  }
  return Disclosure::indeterminate;
}

}  // namespace qd
