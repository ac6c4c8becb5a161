#pragma once

#include <vector>

#include "qdesign/qfun.hpp"
#include "qdesign/weight.hpp"

namespace qd {

/// Upper concave envelope of a tabulated weight together with the intervals
/// where it lies strictly above the weight.
struct Envelope {
  WeightFunction function;
  std::vector<double> values;             ///< envelope on function.grid
  std::vector<Interval> pooling_intervals;  ///< maximal gap runs, endpoints on the grid
  std::vector<bool> contact;              ///< envelope == function (within tolerance)
  double tolerance = 0.0;
  /// Set when three consecutive contact points are collinear, so the optimum
  /// is not unique (any pooling along that affine stretch does as well).
  bool affine_contact = false;

  /// Envelope at t: the affine chord inside a pooling interval, the exact
  /// function on contact stretches when it is known, otherwise interpolation.
  /// At t=0 returns the elevated point when one is present.
  double operator()(double t) const;

  std::vector<std::size_t> contact_indices() const;
};

/// Single monotone-chain pass over the grid points (with the elevated value at
/// t=0 when present). Gap tolerance 1e-9 of the weight's range, floor 1e-12.
Envelope concave_envelope(const WeightFunction& g);

}  // namespace qd
