#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qdesign/qfun.hpp"

namespace qd {

/// A real function tabulated on a grid covering [0,1].
struct Tabulated {
  std::vector<double> grid;
  std::vector<double> values;
};

/// Linear weight of a design problem: tabulated values, an optional value at
/// t=0 that sits strictly above the right limit there, and optionally the exact
/// function the table was taken from.
struct WeightFunction {
  std::vector<double> grid;
  std::vector<double> values;
  std::optional<double> elevated_at_zero;
  /// Exact evaluator on [0,1] (right limit at 0, without the elevation).
  std::function<double(double)> exact;

  void validate() const;
  /// Exact value if available, else linear interpolation of the table.
  double operator()(double t) const;
  /// Value used at t=0 by the design formulas: the elevated point when present.
  double at_zero() const { return elevated_at_zero.value_or(values.front()); }
  std::size_t size() const { return grid.size(); }

  /// Tabulates `f` on `grid` and keeps it as the exact evaluator.
  static WeightFunction from_function(std::function<double(double)> f, std::vector<double> grid);
};

/// Linear combination a*f + b*g of two weights on the same grid.
WeightFunction combine(double a, const WeightFunction& f, double b, const WeightFunction& g);

/// Re-tabulates g (which must carry an exact evaluator) with cells wider than
/// `max_width` subdivided evenly. Without an exact evaluator g is returned unchanged.
WeightFunction refine(const WeightFunction& g, double max_width = 1e-3);

/// Stieltjes integral of a weight function against F, refining onto the union grid.
double stieltjes(const WeightFunction& g, const QuantileFunction& f);

}  // namespace qd
