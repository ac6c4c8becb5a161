#include "qdesign/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qdesign/error.hpp"
#include "qdesign/io.hpp"

namespace qd {

namespace {

// SplitMix64: a counter-based generator; seeding with a hash of (seed, rep)
// gives every replication an independent, reproducible stream.
struct SplitMix {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

SplitMix stream(std::uint64_t seed, std::uint64_t rep) {
  SplitMix h{seed};
  const std::uint64_t a = h.next();
  SplitMix k{a ^ (rep * 0xD1B54A32D192ED03ull)};
  return SplitMix{k.next()};
}

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  // Chan et al. pairwise combination
  static Moments merge(const Moments& a, const Moments& b) {
    if (a.n == 0.0) return b;
    if (b.n == 0.0) return a;
    Moments c;
    c.n = a.n + b.n;
    const double d = b.mean - a.mean;
    c.mean = a.mean + d * (b.n / c.n);
    c.m2 = a.m2 + b.m2 + d * d * (a.n * b.n / c.n);
    return c;
  }
  double se() const { return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0; }
};

struct Block {
  Moments revenue;
  Moments surplus;
};

template <class T, class F>
T tree_reduce(std::vector<T> items, F merge) {
  while (items.size() > 1) {
    std::vector<T> next;
    next.reserve((items.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < items.size(); i += 2) next.push_back(merge(items[i], items[i + 1]));
    if (items.size() % 2) next.push_back(items.back());
    items.swap(next);
  }
  return items.front();
}

constexpr std::uint64_t kBlock = 4096;

}  // namespace

bool is_pooling_of(const QuantileFunction& w, const QuantileFunction& v, double tol) {
  const double scale = std::max(1.0, v.top());
  if (!is_majorized(w, v, tol * scale)) return false;
  const auto wb = w.breakpoints();
  const auto vb = v.breakpoints();
  const auto pts = merge_breakpoints(wb, vb);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i];
    const double b = pts[i + 1];
    const double mid = 0.5 * (a + b);
    const bool flat = std::abs(w.left_limit(b) - w(a)) <= tol * scale;
    const bool equal = std::abs(w(mid) - v(mid)) <= tol * scale && std::abs(w(a) - v(a)) <= tol * scale;
    if (!flat && !equal) return false;
  }
  return true;
}

SimReport simulate_spa(const QuantileFunction& v, const QuantileFunction& w, int n, std::uint64_t reps,
                       std::uint64_t seed, const SimOptions& options) {
  if (n < 2) throw InputError("simulate_spa needs N >= 2");
  if (reps < 1) throw InputError("simulate_spa needs reps >= 1");
  if (!is_pooling_of(w, v)) throw PreconditionError("simulate_spa: W is not a monotone partition of V");

  const std::uint64_t blocks = (reps + kBlock - 1) / kBlock;
  std::vector<Block> results(blocks);
  std::vector<double> rev_samples;
  std::vector<double> cs_samples;
  if (options.samples) {
    rev_samples.resize(reps);
    cs_samples.resize(reps);
  }

  auto run_block = [&](std::uint64_t b) {
    Block out;
    std::vector<double> bids(static_cast<std::size_t>(n));
    std::vector<double> vals(static_cast<std::size_t>(n));
    std::vector<int> top;
    const std::uint64_t end = std::min(reps, (b + 1) * kBlock);
    for (std::uint64_t r = b * kBlock; r < end; ++r) {
      SplitMix rng = stream(seed, r);
      for (int i = 0; i < n; ++i) {
        const double t = rng.uniform();
        bids[i] = w(t);
        vals[i] = v(t);
      }
      const double best = *std::max_element(bids.begin(), bids.end());
      top.clear();
      double second = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        if (bids[i] == best) top.push_back(i);
        else second = std::max(second, bids[i]);
      }
      int winner = top.front();
      if (top.size() > 1) {
        second = best;
        const auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(top.size()));
        winner = top[std::min(pick, top.size() - 1)];
      }
      const double surplus = vals[winner] - second;
      out.revenue.add(second);
      out.surplus.add(surplus);
      if (options.samples) {
        rev_samples[r] = second;
        cs_samples[r] = surplus;
      }
    }
    results[b] = out;
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(blocks)));
  if (threads == 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) {
      pool.emplace_back([&, k] {
        for (std::uint64_t b = k; b < blocks; b += threads) run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  const Block total = tree_reduce(results, [](const Block& a, const Block& b) {
    return Block{Moments::merge(a.revenue, b.revenue), Moments::merge(a.surplus, b.surplus)};
  });

  if (options.samples) {
    std::ostream& os = *options.samples;
    os << "rep,revenue,consumer_surplus\n";
    for (std::uint64_t r = 0; r < reps; ++r) os << r << ',' << format_number(rev_samples[r]) << ',' << format_number(cs_samples[r]) << '\n';
  }
  return {total.revenue.mean, total.surplus.mean, total.revenue.se(), total.surplus.se(), reps, seed};
}

std::string to_json(const SimReport& r) {
  nlohmann::json j{{"mean_revenue", r.mean_revenue},
                   {"mean_consumer_surplus", r.mean_consumer_surplus},
                   {"se_revenue", r.se_revenue},
                   {"se_cs", r.se_cs},
                   {"replications", r.replications},
                   {"seed", r.seed}};
  return j.dump(2);
}

}  // namespace qd
