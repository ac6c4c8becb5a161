#include "qdesign/joint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qdesign/error.hpp"
#include "qdesign/functionals.hpp"

namespace qd {

namespace {

inline double menu_term(double tau, double w, double x, double x_prev) { return (1.0 - tau) * w * (x - x_prev); }

// Prefix integrals of V and Q at the uniform grid points k/M.
struct GridMeans {
  std::size_t m;
  std::vector<double> t;
  std::vector<double> cv;
  std::vector<double> cq;

  GridMeans(const QuantileFunction& v, const QuantileFunction& q, std::size_t m_) : m(m_), t(m_ + 1), cv(m_ + 1), cq(m_ + 1) {
    for (std::size_t k = 0; k <= m; ++k) {
      t[k] = static_cast<double>(k) / static_cast<double>(m);
      cv[k] = v.integral(0.0, t[k]);
      cq[k] = q.integral(0.0, t[k]);
    }
  }
  double w(std::size_t i, std::size_t j) const { return (cv[j] - cv[i]) / (t[j] - t[i]); }
  double x(std::size_t i, std::size_t j) const { return (cq[j] - cq[i]) / (t[j] - t[i]); }
};

// Strictly better value, or a tie (1e-12 relative) with fewer pools.
bool improves(double value, std::size_t count, double best, std::size_t best_count) {
  const double eps = 1e-12 * std::max({1e-300, std::abs(value), std::abs(best)});
  if (value > best + eps) return true;
  return value >= best - eps && count < best_count;
}

JointSolution package(const QuantileFunction& v, const QuantileFunction& q, const GridMeans& g,
                      const std::vector<std::size_t>& cuts, bool excluded, double objective) {
  PoolingPartition partition;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) partition.intervals.push_back({g.t[cuts[k]], g.t[cuts[k + 1]]});
  if (excluded) partition.exclusion_cutoff = partition.intervals.front().hi;
  PoolingPartition information{partition.intervals, 0.0};
  QuantileFunction w = pool(v, information);
  QuantileFunction x = pool(q, partition);
  const std::size_t count = partition.intervals.size();
  return {std::move(w), std::move(x), std::move(partition), objective, count, excluded ? count - 1 : count};
}

}  // namespace

double joint_revenue(const PoolingPartition& partition, const QuantileFunction& v, const QuantileFunction& q) {
  partition.validate();
  const double cutoff = partition.exclusion_cutoff;
  double expected_lo = cutoff;
  double total = 0.0;
  double x_prev = 0.0;
  bool any = false;
  for (const Interval& iv : partition.intervals) {
    if (iv.hi <= cutoff) continue;
    if (iv.lo != expected_lo) throw InputError("joint_revenue: served pools must tile [cutoff, 1)");
    const double w = interval_mean(v, iv);
    const double x = interval_mean(q, iv);
    total += menu_term(iv.lo, w, x, x_prev);
    x_prev = x;
    expected_lo = iv.hi;
    any = true;
  }
  if (any && expected_lo != 1.0) throw InputError("joint_revenue: served pools must reach t = 1");
  return total;
}

JointSolution solve_joint(const QuantileFunction& v, const QuantileFunction& q, std::size_t m) {
  if (m < 2) throw InputError("solve_joint needs M >= 2");
  const GridMeans g(v, q, m);
  const std::size_t n = m + 1;
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  // best[i*n + j]: last served pool is [t_i, t_j); from = previous breakpoint,
  // or kStart (no exclusion) / kExcluded (excluded prefix [0, t_i)).
  constexpr std::ptrdiff_t kStart = -1;
  constexpr std::ptrdiff_t kExcluded = -2;
  std::vector<double> best(n * n, kNone);
  std::vector<std::size_t> count(n * n, 0);
  std::vector<std::ptrdiff_t> from(n * n, kStart);

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j <= m; ++j) {
      const double w = g.w(i, j);
      const double x = g.x(i, j);
      double b = menu_term(g.t[i], w, x, 0.0);
      std::size_t c = i == 0 ? 1 : 2;
      std::ptrdiff_t f = i == 0 ? kStart : kExcluded;
      for (std::size_t h = 0; h < i; ++h) {
        const double prev = best[h * n + i];
        if (prev == kNone) continue;
        const double cand = prev + menu_term(g.t[i], w, x, g.x(h, i));
        const std::size_t cc = count[h * n + i] + 1;
        if (improves(cand, cc, b, c)) {
          b = cand;
          c = cc;
          f = static_cast<std::ptrdiff_t>(h);
        }
      }
      best[i * n + j] = b;
      count[i * n + j] = c;
      from[i * n + j] = f;
    }
  }

  std::size_t last = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (improves(best[i * n + m], count[i * n + m], best[last * n + m], count[last * n + m])) last = i;
  }
  std::vector<std::size_t> cuts{m, last};
  std::size_t i = last;
  std::size_t j = m;
  bool excluded = false;
  while (true) {
    const std::ptrdiff_t f = from[i * n + j];
    if (f == kStart) break;
    if (f == kExcluded) {
      cuts.push_back(0);
      excluded = true;
      break;
    }
    j = i;
    i = static_cast<std::size_t>(f);
    cuts.push_back(i);
  }
  std::reverse(cuts.begin(), cuts.end());
  return package(v, q, g, cuts, excluded, best[last * n + m]);
}

JointSolution solve_joint_bruteforce(const QuantileFunction& v, const QuantileFunction& q, std::size_t m) {
  if (m < 2) throw InputError("solve_joint_bruteforce needs M >= 2");
  if (m > 14) throw InputError("solve_joint_bruteforce refuses M > 14");
  const GridMeans g(v, q, m);
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_count = 0;
  std::vector<std::size_t> best_cuts;
  bool best_excluded = false;
  const std::size_t subsets = std::size_t{1} << (m - 1);
  std::vector<std::size_t> cuts;
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    cuts.assign(1, 0);
    for (std::size_t b = 0; b + 1 < m; ++b) {
      if (mask & (std::size_t{1} << b)) cuts.push_back(b + 1);
    }
    cuts.push_back(m);
    for (int excluded = 0; excluded < 2; ++excluded) {
      const std::size_t pools = cuts.size() - 1;
      if (excluded && pools < 2) continue;
      double value = 0.0;
      double x_prev = 0.0;
      bool first = true;
      for (std::size_t k = excluded ? 1 : 0; k < pools; ++k) {
        const double w = g.w(cuts[k], cuts[k + 1]);
        const double x = g.x(cuts[k], cuts[k + 1]);
        const double term = menu_term(g.t[cuts[k]], w, x, x_prev);
        value = first ? term : value + term;
        first = false;
        x_prev = x;
      }
      if (improves(value, pools, best, best_count) || best_cuts.empty()) {
        best = value;
        best_count = pools;
        best_cuts = cuts;
        best_excluded = excluded != 0;
      }
    }
  }
  return package(v, q, g, best_cuts, best_excluded, best);
}

std::vector<MenuItem> menu(const JointSolution& solution) {
  std::vector<MenuItem> out;
  const auto& p = solution.partition;
  double price = 0.0;
  double x_prev = 0.0;
  for (const Interval& iv : p.intervals) {
    const double w = solution.signal(iv.lo);
    const double x = solution.allocation(iv.lo);
    if (x > 0.0) price += w * (x - x_prev);
    out.push_back({iv.lo, iv.hi, w, x, x > 0.0 ? price : 0.0});
    x_prev = x;
  }
  return out;
}

}  // namespace qd
