#include "qdesign/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "qdesign/error.hpp"

namespace qd {

double revenue(const QuantileFunction& w, const QuantileFunction& x) {
  const auto wb = w.breakpoints();
  const double integral = stieltjes([&w](double t) { return (1.0 - t) * w(t); }, x, wb);
  return integral + x.at_zero() * w.at_zero();
}

double consumer_surplus(const QuantileFunction& w, const QuantileFunction& x) {
  const auto xb = x.breakpoints();
  // At a jump of W the lower item's quality prices the increment (X's left limit).
  return stieltjes([&x](double t) { return (1.0 - t) * x.left_limit(t); }, w, xb);
}

namespace {

// Walks the union grid of W and X, tracking I(t) = int_0^t X dW.
struct PaymentWalk {
  const QuantileFunction& w;
  const QuantileFunction& x;
  std::vector<double> grid;

  PaymentWalk(const QuantileFunction& w_, const QuantileFunction& x_) : w(w_), x(x_) {
    const auto a = w.breakpoints();
    const auto b = x.breakpoints();
    grid = merge_breakpoints(a, b);
  }

  // int_a^b X dW over the open piece (a, b); W is linear there.
  double piece(double a, double b) const {
    const double sw = (w.left_limit(b) - w(a)) / (b - a);
    if (sw == 0.0) return 0.0;
    return sw * 0.5 * (b - a) * (x(a) + x.left_limit(b));
  }

  double jump_term(double t) const {
    const double dw = w(t) - w.left_limit(t);
    return dw > 0.0 ? x.left_limit(t) * dw : 0.0;
  }
};

}  // namespace

Tabulated payment_schedule(const QuantileFunction& w, const QuantileFunction& x) {
  PaymentWalk walk(w, x);
  Tabulated out;
  out.grid = walk.grid;
  out.values.reserve(walk.grid.size());
  double cumulative = 0.0;
  for (std::size_t i = 0; i < walk.grid.size(); ++i) {
    const double t = walk.grid[i];
    if (i > 0) cumulative += walk.piece(walk.grid[i - 1], t) + walk.jump_term(t);
    out.values.push_back(w(t) * x(t) - cumulative);
  }
  return out;
}

double expected_payment(const QuantileFunction& w, const QuantileFunction& x) {
  PaymentWalk walk(w, x);
  double cumulative = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < walk.grid.size(); ++i) {
    const double a = walk.grid[i];
    const double b = walk.grid[i + 1];
    const double m = 0.5 * (a + b);
    const double pa = w(a) * x(a) - cumulative;
    const double pm = w(m) * x(m) - (cumulative + walk.piece(a, m));
    const double through = cumulative + walk.piece(a, b);
    const double pb = w.left_limit(b) * x.left_limit(b) - through;
    total += (b - a) / 6.0 * (pa + 4.0 * pm + pb);
    cumulative = through + walk.jump_term(b);
  }
  return total;
}

WeightFunction pointwise_revenue(const QuantileFunction& w) {
  return WeightFunction::from_function([w](double t) { return w(t) * (1.0 - t); }, w.breakpoints());
}

WeightFunction pointwise_revenue_left(const QuantileFunction& w) {
  return WeightFunction::from_function([w](double t) { return w.left_limit(t) * (1.0 - t); }, w.breakpoints());
}

namespace {

WeightFunction tail_quality(const QuantileFunction& x, bool with_atom) {
  const auto knots = x.knots();
  const std::size_t n = knots.size();
  // tail[k] = e(t_k), atom at t_k included.
  std::vector<double> tail(n, 0.0);
  std::vector<double> ts(n);
  std::vector<double> slopes(n, 0.0);
  std::vector<double> atoms(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    ts[k] = knots[k].t;
    atoms[k] = (1.0 - knots[k].t) * (knots[k].right - knots[k].left);
  }
  for (std::size_t k = n - 1; k-- > 0;) {
    const double a = knots[k].t;
    const double b = knots[k + 1].t;
    const double s = (knots[k + 1].left - knots[k].right) / (b - a);
    slopes[k] = s;
    const double cont = s * ((b - a) - 0.5 * (b * b - a * a));
    tail[k] = tail[k + 1] + cont + atoms[k];
  }
  auto e = [ts, tail, slopes, atoms, with_atom](double t) {
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - ts.begin());
    if (j < ts.size() && ts[j] == t) return with_atom ? tail[j] : tail[j] - atoms[j];
    // t lies in (t_{j-1}, t_j).
    const double b = ts[j];
    return tail[j] + slopes[j - 1] * ((b - t) - 0.5 * (b * b - t * t));
  };
  return WeightFunction::from_function(e, x.breakpoints());
}

}  // namespace

WeightFunction excess_quality(const QuantileFunction& x) {
  WeightFunction out = tail_quality(x, true);
  if (x.at_zero() > 0.0) out.elevated_at_zero = out.values.front() + x.at_zero();
  return out;
}

WeightFunction excess_quality_after(const QuantileFunction& x) { return tail_quality(x, false); }

VirtualValue virtual_value(const QuantileFunction& w) {
  const auto knots = w.knots();
  VirtualValue out;
  const std::size_t n = knots.size();
  out.grid.reserve(n);
  out.values.reserve(n);
  out.at_jump.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t seg = std::min(k, n - 2);
    const double s = (knots[seg + 1].left - knots[seg].right) / (knots[seg + 1].t - knots[seg].t);
    out.grid.push_back(knots[k].t);
    out.values.push_back(knots[k].right - s * (1.0 - knots[k].t));
    out.at_jump.push_back(knots[k].right > knots[k].left);
  }
  return out;
}

const char* to_string(Hazard h) {
  switch (h) {
    case Hazard::increasing_hazard: return "increasing_hazard";
    case Hazard::decreasing_hazard: return "decreasing_hazard";
    case Hazard::constant_hazard: return "constant_hazard";
    case Hazard::non_monotone: return "non_monotone";
  }
  return "?";
}

Tabulated inverse_hazard(const QuantileFunction& q) {
  const auto knots = q.knots();
  Tabulated out;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k].t;
    const double b = knots[k + 1].t;
    const double s = (knots[k + 1].left - knots[k].right) / (b - a);
    if (!(s > 0.0)) continue;
    const double m = 0.5 * (a + b);
    out.grid.push_back(m);
    out.values.push_back(s * (1.0 - m));
  }
  return out;
}

Hazard hazard_monotonicity(const QuantileFunction& q) {
  const Tabulated h = inverse_hazard(q);
  if (h.values.empty()) throw PreconditionError("hazard rate undefined: quantile function has no increasing piece");
  // Inside a single linear piece Q'(1-t) = s(1-t) falls.
  if (h.values.size() == 1) return Hazard::increasing_hazard;
  double scale = 0.0;
  double variation = 0.0;
  for (double v : h.values) scale = std::max(scale, std::abs(v));
  bool falls = true;
  bool rises = true;
  for (std::size_t i = 1; i < h.values.size(); ++i) {
    const double d = h.values[i] - h.values[i - 1];
    variation += std::abs(d);
    if (d > 1e-8 * scale) falls = false;
    if (d < -1e-8 * scale) rises = false;
  }
  if (variation <= 1e-6 * scale) return Hazard::constant_hazard;
  if (falls) return Hazard::increasing_hazard;
  if (rises) return Hazard::decreasing_hazard;
  return Hazard::non_monotone;
}

}  // namespace qd
