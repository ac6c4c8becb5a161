#pragma once

#include <cstddef>
#include <vector>

#include "qdesign/qfun.hpp"

namespace qd {

/// Jointly optimal information structure and allocation on a uniform grid.
/// Every pool of quantiles is an interval of `partition`; when something is
/// excluded, the first interval is the excluded pool and `exclusion_cutoff`
/// is its right end.
struct JointSolution {
  QuantileFunction signal;
  QuantileFunction allocation;
  PoolingPartition partition;
  double objective;
  std::size_t interval_count;  ///< all pools, the excluded one included
  std::size_t served_count;    ///< pools with positive quality
};

/// One line of the menu: pooled quantiles, expected value, quality, price.
struct MenuItem {
  double lo;
  double hi;
  double value;
  double quality;
  double price;
};

/// Sum over served pools k of (1 - tau_k) w_k (x_k - x_{k-1}) with x_0 = 0.
/// The served intervals must tile [exclusion_cutoff, 1).
double joint_revenue(const PoolingPartition& partition, const QuantileFunction& v, const QuantileFunction& q);

/// Exact optimum over all partitions of the M-cell grid into consecutive
/// pools with an optional excluded prefix. O(M^3) time, O(M^2) memory.
JointSolution solve_joint(const QuantileFunction& v, const QuantileFunction& q, std::size_t m);

/// Exhaustive enumeration of the same search space; refuses M > 14.
JointSolution solve_joint_bruteforce(const QuantileFunction& v, const QuantileFunction& q, std::size_t m);

/// Excluded pool first (quality and price 0), then the served pools.
std::vector<MenuItem> menu(const JointSolution& solution);

}  // namespace qd
