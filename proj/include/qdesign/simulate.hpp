#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "qdesign/qfun.hpp"

namespace qd {

struct SimReport {
  double mean_revenue;
  double mean_consumer_surplus;
  double se_revenue;
  double se_cs;
  std::uint64_t replications;
  std::uint64_t seed;
};

struct SimOptions {
  unsigned threads = 1;
  /// When set, one `rep,revenue,consumer_surplus` row per replication.
  std::ostream* samples = nullptr;
};

/// Second-price auction with N bidders whose quantiles are i.i.d. uniform.
/// Bidders bid W(t) and realize V(t); ties are broken uniformly. W must be a
/// monotone partitional signal of V (PreconditionError otherwise).
/// Replication r draws from its own stream keyed on (seed, r), and statistics
/// are merged in a fixed order, so the report does not depend on `threads`.
SimReport simulate_spa(const QuantileFunction& v, const QuantileFunction& w, int n, std::uint64_t reps,
                       std::uint64_t seed, const SimOptions& options = {});

/// True if W equals V or is flat on every piece and W is majorized by V.
bool is_pooling_of(const QuantileFunction& w, const QuantileFunction& v, double tol = 1e-9);

std::string to_json(const SimReport& r);

}  // namespace qd
