#include "qdesign/weight.hpp"

#include <algorithm>
#include <cmath>

#include "qdesign/error.hpp"

namespace qd {

void WeightFunction::validate() const {
  if (grid.size() < 2 || grid.size() != values.size()) throw InputError("weight function: grid/value size mismatch");
  if (grid.front() != 0.0 || grid.back() != 1.0) throw InputError("weight function grid must cover [0,1]");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(values[i])) throw InputError("weight function values must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw InputError("weight function grid must be strictly increasing");
  }
  if (elevated_at_zero) {
    if (!std::isfinite(*elevated_at_zero)) throw InputError("elevated value must be finite");
    if (!(*elevated_at_zero > values.front())) throw InputError("elevated value must exceed the right limit at 0");
  }
}

double WeightFunction::operator()(double t) const {
  if (exact) return exact(t);
  if (t <= grid.front()) return values.front();
  if (t >= grid.back()) return values.back();
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - grid.begin()) - 1;
  const double w = (t - grid[k]) / (grid[k + 1] - grid[k]);
  return values[k] + w * (values[k + 1] - values[k]);
}

WeightFunction WeightFunction::from_function(std::function<double(double)> f, std::vector<double> grid) {
  WeightFunction out;
  out.values.reserve(grid.size());
  for (double t : grid) out.values.push_back(f(t));
  out.grid = std::move(grid);
  out.exact = std::move(f);
  return out;
}

WeightFunction refine(const WeightFunction& g, double max_width) {
  if (!g.exact) return g;
  const std::vector<double>& merged = g.grid;
  std::vector<double> grid;
  grid.reserve(merged.size());
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    const double a = merged[i];
    const double b = merged[i + 1];
    grid.push_back(a);
    const auto pieces = static_cast<std::size_t>(std::ceil((b - a) / max_width - 1e-9));
    for (std::size_t k = 1; k < pieces; ++k) grid.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(pieces));
  }
  grid.push_back(merged.back());
  if (grid.size() == g.grid.size()) return g;
  WeightFunction out = WeightFunction::from_function(g.exact, std::move(grid));
  out.elevated_at_zero = g.elevated_at_zero;
  return out;
}

WeightFunction combine(double a, const WeightFunction& f, double b, const WeightFunction& g) {
  if (f.grid != g.grid) throw InputError("combine: weight functions live on different grids");
  WeightFunction out;
  out.grid = f.grid;
  out.values.resize(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) out.values[i] = a * f.values[i] + b * g.values[i];
  const bool fe = f.elevated_at_zero.has_value();
  const bool ge = g.elevated_at_zero.has_value();
  if (fe || ge) {
    const double z = a * f.at_zero() + b * g.at_zero();
    if (z > out.values.front()) out.elevated_at_zero = z;
  }
  if (f.exact && g.exact) {
    out.exact = [a, b, fx = f.exact, gx = g.exact](double t) { return a * fx(t) + b * gx(t); };
  }
  return out;
}

double stieltjes(const WeightFunction& g, const QuantileFunction& f) {
  return stieltjes([&g](double t) { return g(t); }, f, g.grid);
}

}  // namespace qd
