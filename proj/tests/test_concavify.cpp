#include <doctest.h>

#include <cmath>
#include <random>

#include "gen.hpp"
#include "qdesign/concavify.hpp"
#include "qdesign/error.hpp"
#include "qdesign/families.hpp"
#include "qdesign/functionals.hpp"

using namespace qd;
using doctest::Approx;

namespace {

std::vector<double> uniform_grid(int m) {
  std::vector<double> g;
  for (int i = 0; i <= m; ++i) g.push_back(static_cast<double>(i) / m);
  return g;
}

WeightFunction random_weight(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> n(0.0, 1.0);
  WeightFunction g;
  g.grid = uniform_grid(m);
  double walk = 0.0;
  for (int i = 0; i <= m; ++i) {
    walk += n(rng);
    g.values.push_back(walk);
  }
  return g;
}

// Brute-force hull: the envelope at x_i is the max over all chords through
// a pair of points bracketing x_i.
std::vector<double> hull_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> h(y);
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = a + 1; b < x.size(); ++b) {
      for (std::size_t i = a + 1; i < b; ++i) {
        const double c = y[a] + (y[b] - y[a]) * (x[i] - x[a]) / (x[b] - x[a]);
        h[i] = std::max(h[i], c);
      }
    }
  }
  return h;
}

}  // namespace

TEST_CASE("concave input has no pooling") {
  const auto g = WeightFunction::from_function([](double t) { return t * (1 - t); }, uniform_grid(200));
  const auto e = concave_envelope(g);
  CHECK(e.pooling_intervals.empty());
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(e.values[i] == Approx(g.values[i]));
}

TEST_CASE("pointwise revenue of t^4 pools [0, 3/4]") {
  const auto e = concave_envelope(pointwise_revenue(power_family(4, 4000)));
  REQUIRE(e.pooling_intervals.size() == 1);
  CHECK(e.pooling_intervals[0].lo == 0.0);
  CHECK(e.pooling_intervals[0].hi == Approx(0.75).epsilon(1e-3));
  // the chord from the origin is tangent at 3/4: slope r(t)/t = t^3(1-t)
  CHECK(e(0.5) == Approx(0.5 * 0.75 * 0.75 * 0.75 * 0.25).epsilon(1e-5));
}

TEST_CASE("excess quality of t^4 pools the top above about 0.58") {
  const auto e = concave_envelope(excess_quality(power_family(4, 4000)));
  REQUIRE(e.pooling_intervals.size() == 1);
  CHECK(e.pooling_intervals[0].hi == 1.0);
  CHECK(e.pooling_intervals[0].lo == Approx(0.5844).epsilon(2e-3));
}

TEST_CASE("envelope matches a brute-force hull") {
  std::mt19937_64 rng(71);
  for (int k = 0; k < 30; ++k) {
    const auto g = random_weight(rng, 40);
    const auto e = concave_envelope(g);
    const auto h = hull_oracle(g.grid, g.values);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(e.values[i] == Approx(h[i]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("envelope invariants on random input") {
  std::mt19937_64 rng(73);
  for (int k = 0; k < 50; ++k) {
    const auto g = random_weight(rng, 120);
    const auto e = concave_envelope(g);
    const double tol = e.tolerance;
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(e.values[i] >= g.values[i] - tol);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
      const double second = e.values[i - 1] - 2 * e.values[i] + e.values[i + 1];
      CHECK(second <= 1e-9);
    }
    for (std::size_t i : e.contact_indices()) CHECK(std::abs(e.values[i] - g.values[i]) <= tol);
    for (const auto& iv : e.pooling_intervals) {
      // affine across the gap
      const double a = e(iv.lo), b = e(iv.hi);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double t = g.grid[i];
        if (t <= iv.lo || t >= iv.hi) continue;
        CHECK(e.values[i] == Approx(a + (b - a) * (t - iv.lo) / (iv.hi - iv.lo)).scale(1.0).epsilon(1e-9));
        CHECK_FALSE(e.contact[i]);
      }
    }
  }
}

TEST_CASE("idempotence") {
  std::mt19937_64 rng(79);
  for (int k = 0; k < 20; ++k) {
    const auto g = random_weight(rng, 80);
    const auto e = concave_envelope(g);
    WeightFunction h{g.grid, e.values, std::nullopt, nullptr};
    const auto ee = concave_envelope(h);
    CHECK(ee.pooling_intervals.empty());
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(ee.values[i] - e.values[i]) <= ee.tolerance);
  }
}

TEST_CASE("minimality: lowering a gap point breaks concavity") {
  std::mt19937_64 rng(83);
  for (int k = 0; k < 20; ++k) {
    const auto g = random_weight(rng, 60);
    const auto e = concave_envelope(g);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
      if (e.contact[i]) continue;
      auto lowered = e.values;
      lowered[i] -= 2 * e.tolerance + 1e-12;
      // i lies strictly inside a chord, so the midpoint inequality with the
      // gap's contact ends fails
      std::size_t a = i, b = i;
      while (!e.contact[a]) --a;
      while (!e.contact[b]) ++b;
      const double chord = lowered[a] + (lowered[b] - lowered[a]) * (g.grid[i] - g.grid[a]) / (g.grid[b] - g.grid[a]);
      CHECK(lowered[i] < chord);
    }
  }
}

TEST_CASE("elevated point at zero starts the first pool") {
  // X(0) = 1/2 then linear to 1: e_X jumps up at 0
  const QuantileFunction x({{0.0, 0.5, 0.5}, {1.0, 1.0, 1.0}});
  const auto g = refine(excess_quality(x), 0.01);
  REQUIRE(g.elevated_at_zero.has_value());
  REQUIRE(g.size() == 101);
  const auto e = concave_envelope(g);
  CHECK(e(0.0) == *g.elevated_at_zero);
  REQUIRE_FALSE(e.pooling_intervals.empty());
  CHECK(e.pooling_intervals.front().lo == 0.0);
  // e = (1-t)^2/4 is convex, so the chord to (1, 0) covers everything
  CHECK(e.pooling_intervals.front().hi == 1.0);
  CHECK(e(0.5) == Approx(0.375));
}

TEST_CASE("collinear points stay contact points") {
  const auto g = WeightFunction::from_function([](double t) { return 1 - t; }, uniform_grid(10));
  const auto e = concave_envelope(g);
  CHECK(e.pooling_intervals.empty());
  CHECK(e.affine_contact);
  CHECK(e.contact_indices().size() == g.size());
}

TEST_CASE("bad input") {
  WeightFunction g{{0.0, 0.5, 1.0}, {0.0, NAN, 1.0}, std::nullopt, nullptr};
  CHECK_THROWS_AS(concave_envelope(g), InputError);
}
