#pragma once

#include "qdesign/concavify.hpp"
#include "qdesign/functionals.hpp"
#include "qdesign/qfun.hpp"
#include "qdesign/weight.hpp"

namespace qd {

/// Optimum of  g(0)W(0) + int g dW  over W majorized by V. Pool endpoints lie on
/// g's grid, with cells wider than 1e-3 split.
struct MpcOptimum {
  QuantileFunction solution;
  PoolingPartition partition;
  double value;  ///< envelope form: gbar(0)V(0) + int gbar dV
  bool unique;
};
MpcOptimum maximize_over_mpc(const WeightFunction& g, const QuantileFunction& v);

/// Optimum of  g(0)X(0) + int g dX  over X weakly majorized by Q.
struct WeakOptimum {
  QuantileFunction solution;
  PoolingPartition partition;  ///< exclusion_cutoff holds t_m
  double value;                ///< gbar(t_m)Q(t_m) + int_{t_m}^1 gbar dQ
  double t_m;
  bool unique;
};
WeakOptimum maximize_over_weak(const WeightFunction& g, const QuantileFunction& q);

struct MechanismSolution {
  QuantileFunction allocation;
  PoolingPartition partition;
  double objective;      ///< evaluated directly at the allocation
  double formula_value;  ///< envelope value formula
  double t_m;
  bool unique;
};

struct InfoSolution {
  QuantileFunction signal;
  PoolingPartition partition;
  double objective;
  double formula_value;
  bool unique;
};

/// Revenue-maximizing allocation for values W and inventory Q.
MechanismSolution optimal_mechanism(const QuantileFunction& w, const QuantileFunction& q);
/// Revenue-maximizing information structure for prior values V and allocation X.
InfoSolution optimal_information(const QuantileFunction& v, const QuantileFunction& x);
/// Consumer-surplus-maximizing allocation; requires W(0) = 0.
MechanismSolution consumer_optimal_allocation(const QuantileFunction& w, const QuantileFunction& q);
/// Consumer-surplus-maximizing information structure; requires X(0) = 0.
InfoSolution consumer_optimal_information(const QuantileFunction& v, const QuantileFunction& x);

/// Virtual value nondecreasing (relative tolerance 1e-8).
bool is_regular(const QuantileFunction& w);

enum class Disclosure { no_disclosure, full_disclosure, any_structure, indeterminate };
const char* to_string(Disclosure d);

/// Revenue-optimal disclosure under the efficient allocation, read off the
/// hazard rate of qualities. Requires Q(0) = 0.
Disclosure disclosure_dichotomy(const QuantileFunction& q);

}  // namespace qd
