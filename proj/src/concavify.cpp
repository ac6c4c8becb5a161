#include "qdesign/concavify.hpp"

#include <algorithm>
#include <cmath>

#include "qdesign/error.hpp"

namespace qd {

namespace {

double cross(double ax, double ay, double bx, double by, double cx, double cy) {
  return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
}

}  // namespace

Envelope concave_envelope(const WeightFunction& g) {
  g.validate();
  const std::size_t n = g.grid.size();
  if (n < 2) throw InputError("concave envelope needs at least two grid points");

  std::vector<double> y = g.values;
  y.front() = g.at_zero();
  const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
  const double tol = std::max(1e-9 * (*hi_it - *lo_it), 1e-12);

  std::vector<std::size_t> hull;
  hull.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      if (cross(g.grid[a], y[a], g.grid[b], y[b], g.grid[i], y[i]) >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }

  Envelope env;
  env.function = g;
  env.tolerance = tol;
  env.values.resize(n);
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const std::size_t a = hull[h];
    const std::size_t b = hull[h + 1];
    const double slope = (y[b] - y[a]) / (g.grid[b] - g.grid[a]);
    for (std::size_t i = a; i < b; ++i) env.values[i] = y[a] + slope * (g.grid[i] - g.grid[a]);
  }
  env.values.back() = y.back();
  for (std::size_t i : hull) env.values[i] = y[i];

  env.contact.resize(n);
  for (std::size_t i = 0; i < n; ++i) env.contact[i] = env.values[i] - y[i] <= tol;
  env.contact.front() = true;
  env.contact.back() = true;

  for (std::size_t i = 1; i + 1 < n;) {
    if (env.contact[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && !env.contact[j + 1]) ++j;
    env.pooling_intervals.push_back({g.grid[i - 1], g.grid[j + 1]});
    i = j + 1;
  }

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(env.contact[i - 1] && env.contact[i] && env.contact[i + 1])) continue;
    const double s1 = (env.values[i] - env.values[i - 1]) / (g.grid[i] - g.grid[i - 1]);
    const double s2 = (env.values[i + 1] - env.values[i]) / (g.grid[i + 1] - g.grid[i]);
    const double scale = std::max(std::abs(s1), std::abs(s2));
    if (std::abs(s1 - s2) <= 1e-9 * scale + 1e-15) {
      env.affine_contact = true;
      break;
    }
  }
  return env;
}

double Envelope::operator()(double t) const {
  if (t == 0.0) return values.front();
  const auto& grid = function.grid;
  for (const Interval& iv : pooling_intervals) {
    if (t > iv.lo && t < iv.hi) {
      const double ya = iv.lo == 0.0 ? values.front() : function(iv.lo);
      const double yb = function(iv.hi);
      return ya + (yb - ya) * (t - iv.lo) / (iv.hi - iv.lo);
    }
    if (iv.lo > t) break;
  }
  if (function.exact) return function.exact(t);
  if (t >= grid.back()) return values.back();
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - grid.begin()) - 1;
  const double w = (t - grid[k]) / (grid[k + 1] - grid[k]);
  return values[k] + w * (values[k + 1] - values[k]);
}

std::vector<std::size_t> Envelope::contact_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < contact.size(); ++i) {
    if (contact[i]) out.push_back(i);
  }
  return out;
}

}  // namespace qd
