#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "qdesign/families.hpp"
#include "qdesign/qfun.hpp"

namespace qd {

/// Interim winning probability t^(N-1) of a symmetric N-bidder auction.
QuantileFunction border_quantile(int n, std::size_t m = kDefaultGrid);

/// Start of the top pooling interval of the revenue-optimal signal when the
/// allocation is t^(N-1). Zero for N = 2.
double tstar(int n, double tol = 1e-12);

/// N (1 - tstar(N)). Requires N >= 3.
double competition_statistic(int n);

/// CSV `N,tstar,N_times_one_minus_tstar`.
void write_tstar_table(std::ostream& out, const std::vector<int>& ns);

}  // namespace qd
