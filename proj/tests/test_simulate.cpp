#include <doctest.h>

#include <sstream>

#include "qdesign/auction.hpp"
#include "qdesign/error.hpp"
#include "qdesign/families.hpp"
#include "qdesign/functionals.hpp"
#include "qdesign/simulate.hpp"

#include <json.hpp>

#include "oracle.hpp"

using namespace qd;
using doctest::Approx;

TEST_CASE("full disclosure matches order statistics") {
  const auto v = power_family(1);
  for (int n : {2, 3, 5}) {
    const auto r = simulate_spa(v, v, n, 200000, 7, {.threads = 4});
    const double want = (n - 1.0) / (n + 1.0);
    CHECK(std::abs(r.mean_revenue - want) <= 3 * r.se_revenue);
    CHECK(n * revenue(v, border_quantile(n)) == Approx(want).epsilon(1e-6));
    const double cs = n * consumer_surplus(v, border_quantile(n));
    CHECK(std::abs(r.mean_consumer_surplus - cs) <= 3 * r.se_cs);
  }
}

TEST_CASE("power-law values") {
  const auto v = power_family(4);
  for (int n : {2, 3, 5}) {
    const auto r = simulate_spa(v, v, n, 200000, 11, {.threads = 2});
    CHECK(std::abs(r.mean_revenue - n * revenue(v, border_quantile(n))) <= 3 * r.se_revenue);
    CHECK(std::abs(r.mean_consumer_surplus - n * consumer_surplus(v, border_quantile(n))) <= 3 * r.se_cs);
  }
}

TEST_CASE("no disclosure: everyone bids the mean") {
  const auto v = power_family(1);
  const auto w = pool(v, {{{0.0, 1.0}}, 0.0});
  const auto r = simulate_spa(v, w, 2, 1000, 3);
  CHECK(r.mean_revenue == Approx(0.5).epsilon(1e-12));
  CHECK(r.se_revenue == 0.0);
}

TEST_CASE("upper censorship matches the analytic pipeline") {
  const auto v = power_family(4);
  const auto w = pool(v, {{{tstar(5), 1.0}}, 0.0});
  const auto r = simulate_spa(v, w, 5, 200000, 99, {.threads = 3});
  const auto x = border_quantile(5);
  CHECK(std::abs(r.mean_revenue - 5 * revenue(w, x)) <= 3 * r.se_revenue);
  // realized surplus uses true values; ex ante the winner's expected value is
  // W against the pooled winning probability
  const PoolingPartition p{{{tstar(5), 1.0}}, 0.0};
  const auto xp = pool(x, p);
  const double total = 5 * oracle::integral([&](double t) { return w(t) * xp(t); });
  CHECK(std::abs(r.mean_consumer_surplus - (total - 5 * revenue(w, x))) <= 3 * r.se_cs);
  CHECK(std::abs(r.mean_consumer_surplus - 5 * consumer_surplus(w, x)) <= 3 * r.se_cs);
}

TEST_CASE("reports do not depend on the thread count") {
  const auto v = power_family(2);
  const auto w = pool(v, {{{0.3, 0.6}, {0.8, 1.0}}, 0.0});
  const auto a = simulate_spa(v, w, 4, 50000, 5, {.threads = 1});
  for (unsigned t : {2u, 3u, 8u}) {
    const auto b = simulate_spa(v, w, 4, 50000, 5, {.threads = t});
    CHECK(a.mean_revenue == b.mean_revenue);
    CHECK(a.mean_consumer_surplus == b.mean_consumer_surplus);
    CHECK(a.se_revenue == b.se_revenue);
    CHECK(a.se_cs == b.se_cs);
  }
  const auto c = simulate_spa(v, w, 4, 50000, 6);
  CHECK(c.mean_revenue != a.mean_revenue);
}

TEST_CASE("sample rows agree with the summary") {
  const auto v = power_family(1);
  std::ostringstream rows;
  const auto r = simulate_spa(v, v, 3, 500, 1, {.threads = 2, .samples = &rows});
  std::istringstream in(rows.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "rep,revenue,consumer_surplus");
  double sum = 0.0;
  int count = 0;
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    CHECK(std::stoi(line.substr(0, c1)) == count);
    sum += std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    ++count;
  }
  CHECK(count == 500);
  CHECK(sum / count == Approx(r.mean_revenue).epsilon(1e-12));
}

TEST_CASE("errors") {
  const auto v = power_family(1);
  CHECK_THROWS_AS(simulate_spa(v, v, 1, 10, 0), InputError);
  CHECK_THROWS_AS(simulate_spa(v, v, 2, 0, 0), InputError);
  CHECK_THROWS_AS(simulate_spa(v, power_family(2), 2, 10, 0), PreconditionError);
  CHECK_FALSE(is_pooling_of(QuantileFunction::constant(0.9), v));
  CHECK(is_pooling_of(pool(v, {{{0.2, 0.5}}, 0.0}), v));
}

TEST_CASE("json report") {
  const auto r = simulate_spa(power_family(1), power_family(1), 2, 100, 42);
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["replications"] == 100);
  CHECK(j["seed"] == 42);
  CHECK(j["mean_revenue"].get<double>() == r.mean_revenue);
}
