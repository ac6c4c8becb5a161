#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gen.hpp"
#include "oracle.hpp"
#include "qdesign/error.hpp"
#include "qdesign/families.hpp"
#include "qdesign/io.hpp"
#include "qdesign/qfun.hpp"

using namespace qd;
using doctest::Approx;

namespace {

QuantileFunction half_step() { return QuantileFunction({{0.0, 0.0, 0.0}, {0.5, 0.0, 1.0}, {1.0, 1.0, 1.0}}); }
QuantileFunction lin() { return QuantileFunction::interpolate(std::vector<double>{0, 1}, std::vector<double>{0, 1}); }

}  // namespace

TEST_CASE("evaluate") {
  CHECK(evaluate(power_family(4), 0.5) == Approx(0.0625).epsilon(1e-12));
  CHECK(evaluate(half_step(), 0.4) == 0.0);
  CHECK(evaluate(half_step(), 0.5) == 1.0);
  CHECK(half_step().left_limit(0.5) == 0.0);
  CHECK(evaluate(power_family(4), 1.0) == 1.0);
  CHECK_THROWS_AS(evaluate(lin(), -0.1), DomainError);
  CHECK_THROWS_AS(evaluate(lin(), 1.5), DomainError);
}

TEST_CASE("constructor rejects bad knots") {
  CHECK_THROWS_AS(QuantileFunction({{0.1, 0, 0}, {1, 1, 1}}), InputError);
  CHECK_THROWS_AS(QuantileFunction({{0, 0, 0}, {0.9, 1, 1}}), InputError);
  CHECK_THROWS_AS(QuantileFunction({{0, 1, 1}, {1, 0.5, 0.5}}), InputError);
  CHECK_THROWS_AS(QuantileFunction({{0, -1, -1}, {1, 1, 1}}), InputError);
  CHECK_THROWS_AS(QuantileFunction({{0, 0, 0}, {0.5, 1, 0.5}, {1, 1, 1}}), InputError);
  CHECK_THROWS_AS(QuantileFunction({{0, 0, 0}, {1, INFINITY, INFINITY}}), InputError);
}

TEST_CASE("interval_mean") {
  const auto t4 = power_family(4, 4000);
  CHECK(interval_mean(t4, {0.0, 0.75}) == Approx(0.06328125).epsilon(1e-6));
  CHECK(interval_mean(lin(), {0.0, 1.0}) == 0.5);
  CHECK(interval_mean(t4, {0.75, 1.0}) == Approx(0.61015625).epsilon(1e-6));
  CHECK_THROWS(interval_mean(lin(), {0.5, 0.5}));
}

TEST_CASE("tail_integral") {
  CHECK(tail_integral(lin(), 0.0) == 0.5);
  CHECK(tail_integral(power_family(4, 4000), 0.0) == Approx(0.2).epsilon(1e-6));
  CHECK(tail_integral(half_step(), 0.0) == 0.5);
  CHECK(tail_integral(lin(), 0.5) == 0.375);
}

TEST_CASE("majorization examples") {
  const auto t2 = power_family(2);
  CHECK(is_weakly_majorized(t2, lin()));
  CHECK_FALSE(is_weakly_majorized(lin(), t2));
  CHECK(is_weakly_majorized(QuantileFunction::zero(), t2));
  const auto t4 = power_family(4);
  CHECK(is_majorized(pool(t4, {{{0.0, 1.0}}, 0.0}), t4));
  CHECK_FALSE(is_majorized(t2, lin()));
  CHECK(is_majorized(t4, t4));
}

TEST_CASE("majorization catches a crossing between breakpoints") {
  // X = 0.6 constant has tail integrals (1-x)0.6 vs Q = t: (1-x^2)/2.
  // They cross inside (0,1) with no breakpoint there.
  const auto x = QuantileFunction::constant(0.6);
  CHECK_FALSE(is_weakly_majorized(x, lin()));
  CHECK(oracle::weakly_majorized(x, lin(), 1e-9) == false);
}

TEST_CASE("majorization agrees with a dense oracle") {
  std::mt19937_64 rng(3);
  int agree = 0;
  for (int i = 0; i < 200; ++i) {
    const auto a = qdtest::random_quantile(rng, {.jumps = true});
    const auto b = qdtest::random_quantile(rng, {.jumps = true});
    const bool fast = is_weakly_majorized(a, b, 1e-9);
    const bool slow = oracle::weakly_majorized(a, b, 1e-9);
    // the dense oracle can only miss violations, never invent them
    if (slow) CHECK(fast);
    agree += fast == slow;
  }
  CHECK(agree >= 195);
}

TEST_CASE("majorization is reflexive and transitive") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto v = qdtest::random_quantile(rng, {.jumps = true});
    CHECK(is_majorized(v, v));
    // a coarse pooling of a finer pooling of v
    const PoolingPartition inner{{{0.2, 0.4}, {0.6, 0.7}}, 0.0};
    const PoolingPartition outer{{{0.1, 0.5}, {0.55, 0.9}}, 0.0};
    const auto w1 = pool(v, inner);
    const auto w2 = pool(w1, outer);
    CHECK(is_majorized(w1, v));
    CHECK(is_majorized(w2, w1));
    CHECK(is_majorized(w2, v));
  }
}

TEST_CASE("pool") {
  const auto t4 = power_family(4);
  const auto top = pool(t4, {{{0.75, 1.0}}, 0.0});
  CHECK(top(0.8) == Approx(interval_mean(t4, {0.75, 1.0})).epsilon(1e-14));
  CHECK(top(0.999) == top(0.75));
  CHECK(top(0.5) == t4(0.5));
  CHECK(interval_mean(t4, {0.75, 1.0}) == Approx(0.61015625).epsilon(1e-5));
  const auto bottom = pool(t4, {{{0.0, 0.75}}, 0.0});
  CHECK(bottom(0.1) == Approx(0.06328125).epsilon(1e-5));
  CHECK(bottom(0.9) == t4(0.9));
  const auto same = pool(t4, {});
  CHECK(same.knots().size() == t4.knots().size());
  for (double t : {0.0, 0.3, 0.77, 1.0}) CHECK(same(t) == t4(t));
}

TEST_CASE("pool preserves monotonicity and majorization on random inputs") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto v = qdtest::random_quantile(rng, {.jumps = true});
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    std::vector<double> cuts{a, b, c, d};
    std::sort(cuts.begin(), cuts.end());
    if (cuts[0] == cuts[1] || cuts[2] == cuts[3]) continue;
    const PoolingPartition p{{{cuts[0], cuts[1]}, {cuts[2], cuts[3]}}, 0.0};
    const auto w = pool(v, p);
    CHECK(is_majorized(w, v, 1e-9));
    double prev = -1.0;
    for (int k = 0; k <= 200; ++k) {
      const double t = k / 200.0;
      CHECK(w(t) >= prev);
      prev = w(t);
    }
  }
}

TEST_CASE("exclude_below") {
  const auto t4 = power_family(4);
  const auto x = exclude_below(t4, 0.8);
  CHECK(x(0.79) == 0.0);
  CHECK(x(0.8) == Approx(0.4096).epsilon(1e-12));
  CHECK(x(0.9) == t4(0.9));
  const auto id = exclude_below(t4, 0.0);
  CHECK(id(0.5) == t4(0.5));
  const auto z = exclude_below(t4, 1.0);
  CHECK(z(0.999) == 0.0);
  for (int k = 0; k <= 100; ++k) CHECK(is_weakly_majorized(exclude_below(t4, k / 100.0), t4));
}

TEST_CASE("stieltjes") {
  const auto t4 = power_family(4, 2000);
  CHECK(stieltjes([](double t) { return (1 - t) * t; }, t4) == Approx(2.0 / 15.0).epsilon(1e-6));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const auto f = qdtest::random_quantile(rng);
    CHECK(stieltjes([](double) { return 1.0; }, f) == Approx(f.top() - f.at_zero()).epsilon(1e-12));
  }
  CHECK(stieltjes([](double t) { return 3.0 + t; }, half_step()) == Approx(3.5));
}

TEST_CASE("integral computed two ways") {
  // int_0^1 F dt = F(1) - int t dF (integration by parts)
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const auto f = qdtest::random_quantile(rng, {.jumps = true});
    const double by_parts = f.top() - stieltjes([](double t) { return t; }, f);
    CHECK(tail_integral(f, 0.0) == Approx(by_parts).epsilon(1e-12));
  }
}

TEST_CASE("evaluate is monotone") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const auto f = qdtest::random_quantile(rng, {.jumps = true});
    for (int k = 0; k < 100; ++k) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      CHECK(f(a) <= f(b));
    }
  }
}

TEST_CASE("partition validation") {
  CHECK_NOTHROW(PoolingPartition{{{0.1, 0.2}, {0.2, 0.5}}, 0.0}.validate());
  CHECK_THROWS(PoolingPartition{{{0.1, 0.3}, {0.2, 0.5}}, 0.0}.validate());
  CHECK_THROWS(PoolingPartition{{{0.3, 0.5}, {0.1, 0.2}}, 0.0}.validate());
  CHECK_THROWS(Interval{0.5, 0.4}.validate());
}

TEST_CASE("quantile CSV round trip is bit exact") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto f = qdtest::random_quantile(rng, {.jumps = true});
    std::stringstream a;
    write_quantile_csv(a, f);
    std::stringstream in(a.str());
    const auto g = read_quantile_csv(in);
    std::stringstream b;
    write_quantile_csv(b, g);
    CHECK(a.str() == b.str());
    REQUIRE(g.knots().size() == f.knots().size());
    for (std::size_t k = 0; k < f.knots().size(); ++k) {
      CHECK(g.knots()[k].t == f.knots()[k].t);
      CHECK(g.knots()[k].left == f.knots()[k].left);
      CHECK(g.knots()[k].right == f.knots()[k].right);
    }
  }
}

TEST_CASE("quantile CSV rejects malformed input") {
  std::stringstream no_header("0,1\n1,2\n");
  CHECK_THROWS_AS(read_quantile_csv(no_header), InputError);
  std::stringstream bad("t,value\n0,0\n0.5,x\n1,1\n");
  CHECK_THROWS_AS(read_quantile_csv(bad), InputError);
  std::stringstream decreasing("t,value\n0,1\n1,0\n");
  CHECK_THROWS_AS(read_quantile_csv(decreasing), InputError);
}

TEST_CASE("families") {
  CHECK(parse_family("uniform")(0.3) == Approx(0.3));
  CHECK(parse_family("power:4")(0.5) == Approx(0.0625));
  CHECK(parse_family("border:5")(0.5) == Approx(0.0625));
  CHECK(parse_family("exp:0.999")(0.5) == Approx(std::log(2.0)).epsilon(1e-4));
  CHECK(parse_family("exp:0.5")(0.9) == Approx(std::log(2.0)).epsilon(1e-9));
  CHECK_THROWS_AS(parse_family("power:"), InputError);
  CHECK_THROWS_AS(parse_family("nonsense"), InputError);
  CHECK_THROWS_AS(parse_family("border:1"), InputError);
  CHECK_THROWS_AS(parse_family("table:/nonexistent/file.csv"), InputError);
}
