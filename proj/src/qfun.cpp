#include "qdesign/qfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdesign/error.hpp"

namespace qd {

namespace {

void check_unit(double t, const char* what) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0,1], got " + std::to_string(t));
  }
}

// Gauss-Legendre 2-point nodes on [-1, 1].
constexpr double kGaussNode = 0.57735026918962576451;

}  // namespace

QuantileFunction::QuantileFunction(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw InputError("quantile function needs at least two knots");
  if (knots_.front().t != 0.0 || knots_.back().t != 1.0) {
    throw InputError("quantile function knots must start at t=0 and end at t=1");
  }
  knots_.front().left = knots_.front().right;
  for (std::size_t k = 0; k < knots_.size(); ++k) {
    const Knot& kn = knots_[k];
    if (!std::isfinite(kn.t) || !std::isfinite(kn.left) || !std::isfinite(kn.right)) {
      throw InputError("quantile function values must be finite");
    }
    if (kn.left < 0.0) throw InputError("quantile function values must be nonnegative");
    if (kn.right < kn.left) throw InputError("quantile function jumps downward at t=" + std::to_string(kn.t));
    if (k + 1 < knots_.size()) {
      const Knot& nx = knots_[k + 1];
      if (!(nx.t > kn.t)) throw InputError("quantile function knots must be strictly increasing");
      if (nx.left < kn.right) throw InputError("quantile function decreases on [" + std::to_string(kn.t) + ", " +
                                               std::to_string(nx.t) + "]");
    }
  }
  cum_.assign(knots_.size(), 0.0);
  for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
    const double h = knots_[k + 1].t - knots_[k].t;
    cum_[k + 1] = cum_[k] + 0.5 * h * (knots_[k].right + knots_[k + 1].left);
  }
}

QuantileFunction QuantileFunction::interpolate(std::span<const double> t, std::span<const double> v) {
  if (t.size() != v.size()) throw InputError("interpolate: grid and values differ in length");
  std::vector<Knot> knots;
  knots.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) knots.push_back({t[i], v[i], v[i]});
  return QuantileFunction(std::move(knots));
}

QuantileFunction QuantileFunction::constant(double c) {
  return QuantileFunction({{0.0, c, c}, {1.0, c, c}});
}

QuantileFunction QuantileFunction::sample(const std::function<double(double)>& f, std::size_t segments) {
  if (segments < 1) throw InputError("sample: need at least one segment");
  std::vector<double> grid(segments + 1);
  for (std::size_t i = 0; i <= segments; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(segments);
  return sample_on(f, grid);
}

QuantileFunction QuantileFunction::sample_on(const std::function<double(double)>& f, std::span<const double> grid) {
  std::vector<double> v(grid.size());
  double running = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = f(grid[i]);
    if (!std::isfinite(y)) throw InputError("sampled function is not finite at t=" + std::to_string(grid[i]));
    // Rounding in closed forms can dip by an ulp; the family itself is monotone.
    running = i == 0 ? y : std::max(running, y);
    v[i] = running;
  }
  return interpolate(grid, v);
}

std::size_t QuantileFunction::segment_of(double t) const {
  // Index k with t_k <= t < t_{k+1}; t = 1 maps to the last segment.
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t, [](double x, const Knot& k) { return x < k.t; });
  std::size_t k = static_cast<std::size_t>(it - knots_.begin());
  k = k == 0 ? 0 : k - 1;
  return std::min(k, knots_.size() - 2);
}

double QuantileFunction::operator()(double t) const {
  check_unit(t, "quantile");
  const std::size_t k = segment_of(t);
  const Knot& a = knots_[k];
  const Knot& b = knots_[k + 1];
  if (t == a.t) return a.right;
  if (t == b.t) return b.right;
  const double w = (t - a.t) / (b.t - a.t);
  return a.right + w * (b.left - a.right);
}

double QuantileFunction::left_limit(double t) const {
  check_unit(t, "quantile");
  const std::size_t k = segment_of(t);
  const Knot& a = knots_[k];
  const Knot& b = knots_[k + 1];
  if (t == a.t) return a.left;
  if (t == b.t) return b.left;
  const double w = (t - a.t) / (b.t - a.t);
  return a.right + w * (b.left - a.right);
}

double QuantileFunction::slope_right(double t) const {
  check_unit(t, "quantile");
  const std::size_t k = segment_of(t);
  return (knots_[k + 1].left - knots_[k].right) / (knots_[k + 1].t - knots_[k].t);
}

double QuantileFunction::cumulative(double t) const {
  const std::size_t k = segment_of(t);
  const Knot& a = knots_[k];
  const Knot& b = knots_[k + 1];
  const double dx = t - a.t;
  const double slope = (b.left - a.right) / (b.t - a.t);
  return cum_[k] + dx * (a.right + 0.5 * slope * dx);
}

double QuantileFunction::integral(double a, double b) const {
  check_unit(a, "integral bound");
  check_unit(b, "integral bound");
  if (b < a) throw DomainError("integral: upper bound below lower bound");
  return cumulative(b) - cumulative(a);
}

std::vector<double> QuantileFunction::breakpoints() const {
  std::vector<double> out;
  out.reserve(knots_.size());
  for (const Knot& k : knots_) out.push_back(k.t);
  return out;
}

bool QuantileFunction::has_jumps() const {
  return std::any_of(knots_.begin(), knots_.end(), [](const Knot& k) { return k.right > k.left; });
}

double evaluate(const QuantileFunction& f, double t) { return f(t); }

void Interval::validate() const {
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
    throw InputError("invalid interval [" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
}

void PoolingPartition::validate() const {
  check_unit(exclusion_cutoff, "exclusion cutoff");
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    intervals[i].validate();
    if (i > 0 && intervals[i].lo < intervals[i - 1].hi) {
      throw InputError("pooling intervals overlap or are out of order");
    }
  }
  if (exclusion_cutoff > 0.0 && !intervals.empty() && exclusion_cutoff > intervals.front().lo) {
    const bool on_endpoint = std::any_of(intervals.begin(), intervals.end(), [&](const Interval& iv) {
      return iv.lo == exclusion_cutoff || iv.hi == exclusion_cutoff;
    });
    if (!on_endpoint) throw InputError("exclusion cutoff falls strictly inside a pooling interval");
  }
}

double interval_mean(const QuantileFunction& f, Interval interval) {
  interval.validate();
  return f.integral(interval.lo, interval.hi) / interval.length();
}

double tail_integral(const QuantileFunction& f, double x) {
  check_unit(x, "tail start");
  return f.integral(x, 1.0);
}

std::vector<double> merge_breakpoints(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_weakly_majorized(const QuantileFunction& x, const QuantileFunction& q, double tol) {
  const auto bx = x.breakpoints();
  const auto bq = q.breakpoints();
  const auto grid = merge_breakpoints(bx, bq);
  // D(s) = tail(Q, s) - tail(X, s) is quadratic between union breakpoints with
  // D'(s) = X(s) - Q(s); its only interior extremum is where X and Q cross.
  const double tq = tail_integral(q, 0.0);
  const double tx = tail_integral(x, 0.0);
  auto gap = [&](double s) { return (tq - q.integral(0.0, s)) - (tx - x.integral(0.0, s)); };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (gap(grid[i]) < -tol) return false;
    if (i + 1 == grid.size()) break;
    const double a = grid[i];
    const double b = grid[i + 1];
    const double da = q(a) - x(a);
    const double db = q.left_limit(b) - x.left_limit(b);
    if ((da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0)) {
      const double s = a + (b - a) * da / (da - db);
      if (s > a && s < b && gap(s) < -tol) return false;
    }
  }
  return true;
}

bool is_majorized(const QuantileFunction& w, const QuantileFunction& v, double tol) {
  if (std::abs(tail_integral(w, 0.0) - tail_integral(v, 0.0)) > tol) return false;
  return is_weakly_majorized(w, v, tol);
}

QuantileFunction exclude_below(const QuantileFunction& f, double t_m) {
  check_unit(t_m, "exclusion cutoff");
  if (t_m == 0.0) return f;
  if (t_m >= 1.0) return QuantileFunction::zero();
  std::vector<Knot> out;
  bool inserted = false;
  for (const Knot& k : f.knots()) {
    if (k.t < t_m) {
      out.push_back({k.t, 0.0, 0.0});
      continue;
    }
    if (!inserted) {
      out.push_back({t_m, 0.0, f(t_m)});
      inserted = true;
      if (k.t == t_m) continue;
    }
    out.push_back(k);
  }
  return QuantileFunction(std::move(out));
}

QuantileFunction pool(const QuantileFunction& f, const PoolingPartition& partition) {
  partition.validate();
  const QuantileFunction g = exclude_below(f, partition.exclusion_cutoff);
  if (partition.intervals.empty()) return g;

  const auto& ivs = partition.intervals;
  std::vector<double> means;
  means.reserve(ivs.size());
  for (const Interval& iv : ivs) means.push_back(interval_mean(g, iv));

  std::vector<double> points;
  for (const Knot& k : g.knots()) {
    const bool interior = std::any_of(ivs.begin(), ivs.end(), [&](const Interval& iv) { return k.t > iv.lo && k.t < iv.hi; });
    if (!interior) points.push_back(k.t);
  }
  for (const Interval& iv : ivs) {
    points.push_back(iv.lo);
    points.push_back(iv.hi);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  // Interval index whose closure contains t on the given side, or -1.
  auto covering = [&](double t, bool from_left) -> int {
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      if (from_left ? (t > ivs[i].lo && t <= ivs[i].hi) : (t >= ivs[i].lo && t < ivs[i].hi)) return static_cast<int>(i);
    }
    return -1;
  };

  std::vector<Knot> out;
  out.reserve(points.size());
  for (double t : points) {
    const int li = covering(t, true);
    const int ri = covering(t, false);
    double left = li >= 0 ? means[li] : g.left_limit(t);
    double right = ri >= 0 ? means[ri] : g(t);
    if (!out.empty()) left = std::max(left, out.back().right);
    right = std::max(right, left);
    out.push_back({t, left, right});
  }
  return QuantileFunction(std::move(out));
}

double stieltjes(const std::function<double(double)>& g, const QuantileFunction& f, std::span<const double> extra) {
  const auto own = f.breakpoints();
  std::vector<double> grid = own;
  if (!extra.empty()) {
    std::vector<double> ex(extra.begin(), extra.end());
    std::sort(ex.begin(), ex.end());
    grid = merge_breakpoints(own, ex);
  }
  double continuous = 0.0;
  double comp = 0.0;
  auto add = [&](double x) {
    const double y = x - comp;
    const double s = continuous + y;
    comp = (s - continuous) - y;
    continuous = s;
  };
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i];
    const double b = grid[i + 1];
    if (a < 0.0 || b > 1.0) continue;
    const double slope = (f.left_limit(b) - f(a)) / (b - a);
    if (slope == 0.0) continue;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    add(slope * half * (g(mid - half * kGaussNode) + g(mid + half * kGaussNode)));
  }
  for (const Knot& k : f.knots()) {
    if (k.right > k.left) add(g(k.t) * (k.right - k.left));
  }
  return continuous;
}

}  // namespace qd
