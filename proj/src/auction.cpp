#include "qdesign/auction.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "qdesign/error.hpp"
#include "qdesign/io.hpp"

namespace qd {

QuantileFunction border_quantile(int n, std::size_t m) {
  if (n < 2) throw InputError("border_quantile needs N >= 2, got " + std::to_string(n));
  return power_family(static_cast<double>(n - 1), m);
}

namespace {

// Tangency condition e'(t)(1-t) - (e(1) - e(t)) for e(t) = 1/N - t^(N-1) + (N-1)/N t^N.
// e(1) = 0 and e'(t) = -(N-1) t^(N-2) (1-t).
double tangency(int n, double t) {
  const double k = static_cast<double>(n);
  const double e = 1.0 / k - std::pow(t, k - 1.0) + (k - 1.0) / k * std::pow(t, k);
  return -(k - 1.0) * std::pow(t, k - 2.0) * (1.0 - t) * (1.0 - t) + e;
}

double bisect(int n, double a, double b, double tol) {
  double fa = tangency(n, a);
  while (b - a > tol) {
    const double c = 0.5 * (a + b);
    const double fc = tangency(n, c);
    if (fc == 0.0) return c;
    if ((fc > 0.0) == (fa > 0.0)) {
      a = c;
      fa = fc;
    } else {
      b = c;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double tstar(int n, double tol) {
  if (n < 2) throw InputError("tstar needs N >= 2, got " + std::to_string(n));
  if (n == 2) return 0.0;
  const double k = static_cast<double>(n);
  double a = 1.0 / k;
  double b = 1.0 - 1.0 / (2.0 * k);
  if ((tangency(n, a) > 0.0) == (tangency(n, b) > 0.0)) {
    // the polynomial also vanishes at t = 1 (double root), so scan short of it
    const int cells = 4096;
    const double top = 1.0 - 1.0 / (64.0 * k);
    double prev = tangency(n, 0.0);
    bool found = false;
    for (int i = 1; i <= cells && !found; ++i) {
      const double t = top * i / cells;
      const double f = tangency(n, t);
      if ((f > 0.0) != (prev > 0.0)) {
        a = top * (i - 1) / cells;
        b = t;
        found = true;
      }
      prev = f;
    }
    if (!found) throw NumericalError("tstar: no sign change for N = " + std::to_string(n));
  }
  return bisect(n, a, b, tol);
}

double competition_statistic(int n) {
  if (n < 3) throw InputError("competition_statistic needs N >= 3, got " + std::to_string(n));
  return n * (1.0 - tstar(n, 1e-10));
}

void write_tstar_table(std::ostream& out, const std::vector<int>& ns) {
  out << "N,tstar,N_times_one_minus_tstar\n";
  for (int n : ns) {
    const double t = tstar(n);
    out << n << ',' << format_number(t) << ',' << format_number(n * (1.0 - t)) << '\n';
  }
}

}  // namespace qd
