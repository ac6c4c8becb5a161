#pragma once

#include <vector>

#include "qdesign/qfun.hpp"
#include "qdesign/weight.hpp"

namespace qd {

enum class Censorship { upper, lower, full_disclosure, no_disclosure };
const char* to_string(Censorship c);

/// Optimal information structure for the objective m((1-|lambda|) R + lambda U)
/// under the efficient allocation X = Q.
struct WelfarePoint {
  double lambda;
  int m;
  Censorship censorship;
  /// Upper: start of the top pool. Lower: end of the bottom pool.
  /// Full disclosure reports 1, no disclosure 0.
  double cutoff;
  double revenue;
  double consumer_surplus;
  QuantileFunction signal;
  PoolingPartition partition;
  /// False when the pooling set is not a single interval anchored at 0 or 1.
  bool censorship_shape_ok;
  bool unique;
};

/// m((1-|lambda|) e_Q + lambda r_Q). Requires Q(0) = 0 and lambda in [-1, 1].
WeightFunction surplus_weight(double lambda, int m, const QuantileFunction& q);

WelfarePoint solve_weighted(double lambda, int m, const QuantileFunction& v, const QuantileFunction& q);

/// Sweeps `steps` uniform lambdas in [-1, 1] for m = -1 then m = +1.
std::vector<WelfarePoint> trace_frontier(const QuantileFunction& v, const QuantileFunction& q, std::size_t steps = 201);

}  // namespace qd
