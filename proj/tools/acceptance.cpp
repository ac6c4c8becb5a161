// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gen.hpp"
#include "qdesign/auction.hpp"
#include "qdesign/concavify.hpp"
#include "qdesign/families.hpp"
#include "qdesign/functionals.hpp"
#include "qdesign/joint.hpp"
#include "qdesign/simulate.hpp"
#include "qdesign/solvers.hpp"
#include "qdesign/welfare.hpp"

using namespace qd;

namespace {

constexpr std::size_t M = 1000;
int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("criterion %2d %-30s %s  %s\n", id, name, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// every solver output checked for feasibility in criterion 11
struct Ledger {
  int signals = 0;
  int allocations = 0;
  std::vector<std::string> bad;

  void signal(const std::string& tag, const QuantileFunction& w, const QuantileFunction& v) {
    ++signals;
    if (!is_majorized(w, v, 1e-9)) bad.push_back(tag);
  }
  void allocation(const std::string& tag, const QuantileFunction& x, const QuantileFunction& q) {
    ++allocations;
    if (!is_weakly_majorized(x, q, 1e-9)) bad.push_back(tag);
  }
} ledger;

void c1() {
  const auto t4 = power_family(4, M);
  const auto t0 = std::chrono::steady_clock::now();
  const auto sol = optimal_mechanism(t4, t4);
  const double dt = seconds_since(t0);
  ledger.allocation("c1", sol.allocation, t4);
  // int_{4/5}^1 phi(t) t^4 dt with virtual value phi = 5t^4 - 4t^3
  const double a = 0.8;
  const double oracle = 5.0 * (1 - std::pow(a, 9)) / 9 - (1 - std::pow(a, 8)) / 2;
  const bool ok = std::abs(sol.t_m - 0.8) <= 1.0 / M && std::abs(sol.objective - 0.064876) <= 1e-4 &&
                  std::abs(sol.objective - oracle) <= 1e-4 && dt < 1.0;
  report(1, "reserve quantile", ok,
         fmt("t_m=%.6f objective=%.7f oracle=%.7f time=%.3fs", sol.t_m, sol.objective, oracle, dt));
}

void c2() {
  const auto env = concave_envelope(pointwise_revenue(power_family(4, M)));
  bool ok = env.pooling_intervals.size() == 1;
  std::string detail = fmt("%zu gap(s)", env.pooling_intervals.size());
  if (ok) {
    const auto iv = env.pooling_intervals.front();
    ok = std::abs(iv.lo) <= 2.0 / M && std::abs(iv.hi - 0.75) <= 2.0 / M;
    detail = fmt("gap=(%.4f, %.4f)", iv.lo, iv.hi);
  }
  report(2, "mechanism pooling region", ok, detail);
}

void c3() {
  const int ns[] = {2, 3, 4, 5, 10, 100};
  const double want[] = {0.0, 0.25, 0.46, 0.58, 0.81, 0.98};
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 6; ++i) {
    const double t = tstar(ns[i]);
    ok = ok && std::abs(t - want[i]) <= 0.01;
    detail += fmt("N=%d:%.4f ", ns[i], t);
  }
  const double err3 = std::abs(tstar(3) - 0.25);
  ok = ok && err3 <= 1e-6;
  report(3, "information threshold table", ok, detail + fmt("|t*(3)-1/4|=%.1e", err3));
}

void c4() {
  double lo = 1e300;
  double hi = -1e300;
  bool monotone = true;
  double prev = tstar(3);
  for (int n = 3; n <= 200; ++n) {
    const double c = competition_statistic(n);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    const double t = tstar(n);
    if (t < prev) monotone = false;
    prev = t;
  }
  // the range is attained at N=3 (exactly 2.25), so its ends are read as closed
  const double slack = 1e-9;
  const bool ok = lo >= 1.79 - slack && hi <= 2.25 + slack && monotone;
  report(4, "competition regularity", ok,
         fmt("N(1-t*) in [%.6f, %.6f] over N=3..200, t* %s", lo, hi, monotone ? "nondecreasing" : "NOT monotone"));
}

void c5() {
  std::mt19937_64 rng(20240505);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto w = qdtest::random_quantile(rng, {.zero_at_zero = true});
    const auto x = qdtest::random_quantile(rng);
    worst = std::max(worst, std::abs(revenue(w, x) - consumer_surplus(x, w)));
  }
  report(5, "payoff symmetry", worst <= 1e-9, fmt("max |R(W,X)-U(X,W)| = %.2e over 100 pairs", worst));
}

void c6() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto v = qdtest::random_quantile(rng);
    const auto q = qdtest::random_quantile(rng);
    const double prod = stieltjes([&](double t) { return v(t) * q(t); }, QuantileFunction::interpolate(
                                      std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 1.0}),
                                  merge_breakpoints(v.breakpoints(), q.breakpoints()));
    worst = std::max(worst, std::abs(revenue(v, q) + consumer_surplus(v, q) - prod));
  }
  // t^4 on a fine grid so interpolation error stays below 1e-8
  const auto fine = power_family(4, 20000);
  const double total = revenue(fine, fine) + consumer_surplus(fine, fine);
  const auto t4 = power_family(4, M);
  const auto frontier = trace_frontier(t4, t4, 201);
  const WelfarePoint* best = &frontier.front();
  for (const auto& p : frontier) {
    ledger.signal("c6 frontier", p.signal, t4);
    if (p.revenue + p.consumer_surplus > best->revenue + best->consumer_surplus) best = &p;
  }
  const WelfarePoint* half = nullptr;
  for (const auto& p : frontier) {
    if (p.m == 1 && std::abs(p.lambda - 0.5) < 1e-12) half = &p;
  }
  const double best_total = best->revenue + best->consumer_surplus;
  const bool ok = worst <= 1e-8 && std::abs(total - 1.0 / 9.0) <= 1e-8 && std::abs(best_total - 1.0 / 9.0) <= 1e-3 &&
                  half && half->censorship == Censorship::full_disclosure &&
                  std::abs(half->revenue + half->consumer_surplus - best_total) <= 1e-9;
  report(6, "total-surplus identity", ok,
         fmt("max identity err=%.1e, R+U(t^4)=%.10f, frontier max=%.10f; lambda=1/2 m=1: %s R+U=%.10f", worst,
             total, best_total, half ? to_string(half->censorship) : "missing",
             half ? half->revenue + half->consumer_surplus : 0.0));
}

void c7() {
  std::mt19937_64 rng(4242);
  int agree = 0;
  for (int i = 0; i < 50; ++i) {
    const auto v = qdtest::random_quantile(rng, {.jumps = true});
    const auto q = qdtest::random_quantile(rng, {.jumps = true});
    const auto a = solve_joint(v, q, 10);
    const auto b = solve_joint_bruteforce(v, q, 10);
    ledger.signal("c7 random", a.signal, v);
    ledger.allocation("c7 random", a.allocation, q);
    if (a.objective == b.objective && a.partition.intervals == b.partition.intervals &&
        a.partition.exclusion_cutoff == b.partition.exclusion_cutoff)
      ++agree;
  }
  const auto t4 = power_family(4, M);
  const double mech = optimal_mechanism(t4, t4).objective;
  const double info = optimal_information(t4, t4).objective;
  bool counts = true;
  bool dominates = true;
  std::string detail = fmt("DP==brute %d/50;", agree);
  for (std::size_t m : {100, 200, 400}) {
    const auto s = solve_joint(t4, t4, m);
    ledger.signal("c7 t4", s.signal, t4);
    ledger.allocation("c7 t4", s.allocation, t4);
    counts = counts && s.interval_count == 2;
    dominates = dominates && s.objective >= std::max(mech, info) - 1e-9;
    detail += fmt(" M=%zu: pools=%zu (served %zu) obj=%.6f;", m, s.interval_count, s.served_count, s.objective);
  }
  detail += fmt(" mechanism=%.6f information=%.6f", mech, info);
  report(7, "joint design", agree == 50 && counts && dominates, detail);
}

void c8() {
  const auto lin = power_family(1, M);
  bool ok = true;
  std::string detail;
  for (double k : {1.0, 4.0}) {
    const auto v = power_family(k, M);
    const auto s = optimal_information(v, lin);
    ledger.signal("c8 no-disclosure", s.signal, v);
    const bool one = s.partition.intervals.size() == 1 && s.partition.intervals.front() == Interval{0.0, 1.0};
    ok = ok && one;
    detail += fmt("Q=t,V=t^%g: %s; ", k, one ? "[0,1)" : "other");
  }
  const auto q = pareto_family(0.5, 1e-6, M);
  const auto v = power_family(1, M);
  const auto s = optimal_information(v, q);
  ledger.signal("c8 full", s.signal, v);
  const bool full = s.partition.intervals.empty();
  ok = ok && full && disclosure_dichotomy(q) == Disclosure::full_disclosure;
  detail += fmt("Q=Pareto(1/2): %s (%zu pools)", full ? "full disclosure" : "pooling", s.partition.intervals.size());
  report(8, "dichotomy", ok, detail);
}

void c9() {
  const auto x = power_family(4, M);
  bool ok = true;
  std::string detail;
  for (double k : {4.0, 1.0}) {
    const auto v = power_family(k, M);
    const auto s = consumer_optimal_information(v, x);
    ledger.signal("c9", s.signal, v);
    const auto& ivs = s.partition.intervals;
    const bool shape = ivs.size() == 1 && ivs.front().lo == 0.0;
    const double cut = shape ? ivs.front().hi : -1.0;
    ok = ok && shape && std::abs(cut - 0.75) <= 1.0 / M;
    detail += fmt("V=t^%g: cutoff=%.4f; ", k, cut);
  }
  report(9, "consumer-optimal cutoff", ok, detail);
}

void c10() {
  struct Scenario {
    const char* name;
    QuantileFunction v;
    QuantileFunction w;
    int n;
  };
  const auto uni = power_family(1, M);
  const auto t4 = power_family(4, M);
  std::vector<Scenario> sc;
  sc.push_back({"full disclosure, uniform, N=5", uni, uni, 5});
  sc.push_back({"no disclosure, uniform, N=2", uni, pool(uni, {{{0.0, 1.0}}, 0.0}), 2});
  sc.push_back({"upper censorship at t*(5), t^4, N=5", t4, pool(t4, {{{tstar(5), 1.0}}, 0.0}), 5});
  bool ok = true;
  std::string detail;
  for (const auto& s : sc) {
    ledger.signal("c10", s.w, s.v);
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = simulate_spa(s.v, s.w, s.n, 1000000, 12345);
    const double dt = seconds_since(t0);
    const auto q = border_quantile(s.n, M);
    const double rev = s.n * revenue(s.w, q);
    const double cs = s.n * consumer_surplus(s.w, q);
    const auto close = [](double sim, double an, double se) {
      return std::abs(sim - an) <= std::max(3.0 * se, 1e-12 * std::abs(an));
    };
    const bool good = close(r.mean_revenue, rev, r.se_revenue) && close(r.mean_consumer_surplus, cs, r.se_cs) && dt < 60;
    ok = ok && good;
    detail += fmt("\n    %-36s R sim=%.6f an=%.6f (%.2f SE)  U sim=%.6f an=%.6f (%.2f SE)  %.2fs", s.name,
                  r.mean_revenue, rev, r.se_revenue > 0 ? std::abs(r.mean_revenue - rev) / r.se_revenue : 0.0,
                  r.mean_consumer_surplus, cs, r.se_cs > 0 ? std::abs(r.mean_consumer_surplus - cs) / r.se_cs : 0.0,
                  dt);
  }
  report(10, "monte carlo validation", ok, detail);
}

void c11() {
  std::vector<std::pair<std::string, QuantileFunction>> corpus{
      {"uniform", power_family(1, M)},      {"t^2", power_family(2, M)},
      {"t^4", power_family(4, M)},          {"sqrt", power_family(0.5, M)},
      {"exp:0.95", exp_family(0.95, M)},    {"pareto:0.5", pareto_family(0.5, 1e-6, M)},
      {"const", QuantileFunction::constant(0.3)}};
  std::mt19937_64 rng(11);
  for (int i = 0; i < 12; ++i) corpus.push_back({"random" + std::to_string(i), qdtest::random_quantile(rng, {.jumps = true})});
  for (int i = 0; i < 6; ++i)
    corpus.push_back({"random0_" + std::to_string(i), qdtest::random_quantile(rng, {.jumps = true, .zero_at_zero = true})});
  for (const auto& [vn, v] : corpus) {
    for (const auto& [qn, q] : corpus) {
      const std::string tag = vn + "/" + qn;
      ledger.allocation("mechanism " + tag, optimal_mechanism(v, q).allocation, q);
      ledger.signal("information " + tag, optimal_information(v, q).signal, v);
      if (v.at_zero() == 0.0) ledger.allocation("consumer alloc " + tag, consumer_optimal_allocation(v, q).allocation, q);
      if (q.at_zero() == 0.0) {
        ledger.signal("consumer info " + tag, consumer_optimal_information(v, q).signal, v);
        for (double lambda : {-1.0, -0.3, 0.0, 0.5, 1.0})
          for (int m : {-1, 1}) ledger.signal("welfare " + tag, solve_weighted(lambda, m, v, q).signal, v);
      }
      const auto j = solve_joint(v, q, 40);
      ledger.signal("joint " + tag, j.signal, v);
      ledger.allocation("joint " + tag, j.allocation, q);
    }
  }
  std::string detail = fmt("%d signals, %d allocations checked", ledger.signals, ledger.allocations);
  for (std::size_t i = 0; i < ledger.bad.size() && i < 5; ++i) detail += "; infeasible: " + ledger.bad[i];
  report(11, "feasibility of solver outputs", ledger.bad.empty(), detail);
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> all{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
  for (std::size_t i = 0; i < all.size(); ++i) {
    try {
      all[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), "(exception)", false, e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, all.size());
  return failures == 0 ? 0 : 1;
}
