#pragma once

#include <vector>

#include "qdesign/qfun.hpp"
#include "qdesign/weight.hpp"

namespace qd {

/// Expected seller revenue R(W,X) = int (1-t) W dX + X(0) W(0).
double revenue(const QuantileFunction& w, const QuantileFunction& x);

/// Expected consumer surplus U(W,X) = int (1-t) X dW. Where W jumps, the
/// increment is priced at X's left limit, so R + U = int W X dt also holds when
/// W and X jump together.
double consumer_surplus(const QuantileFunction& w, const QuantileFunction& x);

/// p(t) = W(t) X(t) - int_0^t X dW, tabulated on the union of breakpoints.
Tabulated payment_schedule(const QuantileFunction& w, const QuantileFunction& x);

/// Exact mean over t of the payment schedule (Simpson on each piece; p is cubic there).
double expected_payment(const QuantileFunction& w, const QuantileFunction& x);

/// Revenue from a posted price that serves the top 1-t quantiles: W(t)(1-t).
WeightFunction pointwise_revenue(const QuantileFunction& w);
/// W(t-)(1-t): the same with left limits at jumps. This is the weight consumer
/// surplus puts on a jump of the signal.
WeightFunction pointwise_revenue_left(const QuantileFunction& w);

/// Excess quality e(t) = int_t^1 (1-s) dX(s); the value at 0 is lifted by X(0).
/// An atom of X at t_j counts toward e on [0, t_j].
WeightFunction excess_quality(const QuantileFunction& x);
/// int_(t,1] (1-s) dX(s): the atom at t itself is left out and there is no
/// lift at 0. Consumer surplus weighs a jump of the allocation with this.
WeightFunction excess_quality_after(const QuantileFunction& x);

/// phi(t) = W(t) - W'(t)(1-t) using exact segment slopes (the slope to the right
/// of each grid point; the last point uses the final segment).
struct VirtualValue {
  std::vector<double> grid;
  std::vector<double> values;
  /// Grid points where W jumps; phi there excludes the jump contribution.
  std::vector<bool> at_jump;
};
VirtualValue virtual_value(const QuantileFunction& w);

enum class Hazard { increasing_hazard, decreasing_hazard, constant_hazard, non_monotone };
const char* to_string(Hazard h);

/// Classifies t -> Q'(t)(1-t) (the inverse hazard rate of qualities) over the
/// strictly increasing pieces of Q. Throws PreconditionError if Q is flat everywhere.
Hazard hazard_monotonicity(const QuantileFunction& q);

/// Inverse hazard per strictly increasing piece: slope times (1 - midpoint).
/// This is minus the chord slope of the tabulated excess quality on that piece.
Tabulated inverse_hazard(const QuantileFunction& q);

}  // namespace qd
