// qdesign: command-line front end for the design solvers.
//
//   qdesign mechanism --values power:4 --inventory power:4 --out mech.csv --plot mech.svg
//   qdesign frontier --values power:4 --inventory power:4 --steps 101 --out frontier.csv
//
// Exit status: 0 ok, 2 bad configuration, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdesign/auction.hpp"
#include "qdesign/error.hpp"
#include "qdesign/families.hpp"
#include "qdesign/functionals.hpp"
#include "qdesign/io.hpp"
#include "qdesign/joint.hpp"
#include "qdesign/simulate.hpp"
#include "qdesign/solvers.hpp"
#include "qdesign/svg.hpp"
#include "qdesign/welfare.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Config {
  std::string values;
  std::string inventory;
  std::size_t grid_m = qd::kDefaultGrid;
  std::string out;
  std::string plot;
  std::string objective = "revenue";
  double lambda = 0.0;
  int m = 1;
  std::vector<int> n;  // tstar-table falls back to 2,3,4,5,10,100
  std::uint64_t reps = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::size_t steps = 201;
  std::size_t cells = 200;
  std::string disclosure = "full";
  std::string samples;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

qd::QuantileFunction family(const std::string& field, const std::string& spec, std::size_t m) {
  if (spec.empty()) throw ConfigError("missing --" + field);
  try {
    return qd::parse_family(spec, m);
  } catch (const std::exception& e) {
    throw ConfigError("--" + field + ": " + e.what());
  }
}

json partition_json(const qd::PoolingPartition& p) {
  json ivs = json::array();
  for (const auto& iv : p.intervals) ivs.push_back({iv.lo, iv.hi});
  return {{"intervals", ivs}, {"exclusion_cutoff", p.exclusion_cutoff}};
}

// t,W,X,p on the union of breakpoints.
void write_solution_csv(std::ostream& out, const qd::QuantileFunction& w, const qd::QuantileFunction& x) {
  const qd::Tabulated p = qd::payment_schedule(w, x);
  out << "t,W,X,p\n";
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const double t = p.grid[i];
    out << qd::format_number(t) << ',' << qd::format_number(w(t)) << ',' << qd::format_number(x(t)) << ','
        << qd::format_number(p.values[i]) << '\n';
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("--out: cannot write '" + path + "'");
  return f;
}

std::string sibling(const std::string& path, const std::string& suffix, const std::string& ext) {
  fs::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + ext)).string();
}

// CSV to --out, the quantile functions next to it, summary next to it and on stdout.
void emit(const Config& cfg, const json& summary, const qd::QuantileFunction* w, const qd::QuantileFunction* x,
          const std::function<void(std::ostream&)>& csv) {
  if (!cfg.out.empty()) {
    auto f = open_out(cfg.out);
    csv(f);
    if (w) qd::save_quantile_csv(sibling(cfg.out, "_W", ".csv"), *w);
    if (x) qd::save_quantile_csv(sibling(cfg.out, "_X", ".csv"), *x);
    std::ofstream js(sibling(cfg.out, "", ".json"));
    js << summary.dump(2) << '\n';
  }
  std::cout << summary.dump(2) << '\n';
}

void plot_lines(const Config& cfg, const std::string& title, const std::vector<qd::svg::Series>& series) {
  if (cfg.plot.empty()) return;
  std::ofstream f(cfg.plot);
  if (!f) throw ConfigError("--plot: cannot write '" + cfg.plot + "'");
  qd::svg::line_chart(f, title, "quantile t", "value", series);
}

int run_mechanism(const Config& cfg) {
  const auto w = family("values", cfg.values, cfg.grid_m);
  const auto q = family("inventory", cfg.inventory, cfg.grid_m);
  qd::MechanismSolution s = cfg.objective == "consumer" ? qd::consumer_optimal_allocation(w, q)
                                                        : qd::optimal_mechanism(w, q);
  const json summary{{"command", "mechanism"},
                     {"objective_kind", cfg.objective},
                     {"objective", s.objective},
                     {"formula_value", s.formula_value},
                     {"t_m", s.t_m},
                     {"partition", partition_json(s.partition)},
                     {"unique", s.unique},
                     {"revenue", qd::revenue(w, s.allocation)},
                     {"consumer_surplus", qd::consumer_surplus(w, s.allocation)},
                     {"grid_m", cfg.grid_m}};
  emit(cfg, summary, &w, &s.allocation, [&](std::ostream& os) { write_solution_csv(os, w, s.allocation); });
  plot_lines(cfg, "Optimal allocation",
             {qd::svg::trace("values W", w), qd::svg::trace("inventory Q", q), qd::svg::trace("allocation X", s.allocation)});
  return 0;
}

int run_welfare(const Config& cfg, const qd::QuantileFunction& v, const qd::QuantileFunction& x) {
  if (!(cfg.lambda >= -1.0 && cfg.lambda <= 1.0)) throw ConfigError("--lambda must lie in [-1,1]");
  if (cfg.m != 1 && cfg.m != -1) throw ConfigError("--m must be -1 or 1");
  const auto p = qd::solve_weighted(cfg.lambda, cfg.m, v, x);
  const json summary{{"command", "info"},
                     {"objective_kind", "welfare"},
                     {"lambda", p.lambda},
                     {"m", p.m},
                     {"censorship", qd::to_string(p.censorship)},
                     {"cutoff", p.cutoff},
                     {"revenue", p.revenue},
                     {"consumer_surplus", p.consumer_surplus},
                     {"partition", partition_json(p.partition)},
                     {"censorship_shape_ok", p.censorship_shape_ok},
                     {"unique", p.unique},
                     {"grid_m", cfg.grid_m}};
  emit(cfg, summary, &p.signal, &x, [&](std::ostream& os) { write_solution_csv(os, p.signal, x); });
  plot_lines(cfg, "Welfare-optimal information",
             {qd::svg::trace("values V", v), qd::svg::trace("signal W", p.signal), qd::svg::trace("allocation X", x)});
  return 0;
}

int run_info(const Config& cfg) {
  const auto v = family("values", cfg.values, cfg.grid_m);
  const auto x = family("inventory", cfg.inventory, cfg.grid_m);
  if (cfg.objective == "welfare") return run_welfare(cfg, v, x);
  qd::InfoSolution s = cfg.objective == "consumer" ? qd::consumer_optimal_information(v, x)
                                                   : qd::optimal_information(v, x);
  const json summary{{"command", "info"},
                     {"objective_kind", cfg.objective},
                     {"objective", s.objective},
                     {"formula_value", s.formula_value},
                     {"partition", partition_json(s.partition)},
                     {"unique", s.unique},
                     {"revenue", qd::revenue(s.signal, x)},
                     {"consumer_surplus", qd::consumer_surplus(s.signal, x)},
                     {"grid_m", cfg.grid_m}};
  emit(cfg, summary, &s.signal, &x, [&](std::ostream& os) { write_solution_csv(os, s.signal, x); });
  plot_lines(cfg, "Optimal information",
             {qd::svg::trace("values V", v), qd::svg::trace("signal W", s.signal), qd::svg::trace("allocation X", x)});
  return 0;
}

int run_joint(const Config& cfg) {
  const auto v = family("values", cfg.values, cfg.grid_m);
  const auto q = family("inventory", cfg.inventory, cfg.grid_m);
  if (cfg.cells < 2) throw ConfigError("--cells must be at least 2");
  const auto s = qd::solve_joint(v, q, cfg.cells);
  const auto lines = qd::menu(s);
  json items = json::array();
  for (const auto& it : lines) {
    items.push_back({{"lo", it.lo}, {"hi", it.hi}, {"value", it.value}, {"quality", it.quality}, {"price", it.price}});
  }
  const json summary{{"command", "joint"},
                     {"objective", s.objective},
                     {"interval_count", s.interval_count},
                     {"served_count", s.served_count},
                     {"partition", partition_json(s.partition)},
                     {"menu", items},
                     {"cells", cfg.cells}};
  // the menu is the result here; the functions go to the _W/_X siblings
  emit(cfg, summary, &s.signal, &s.allocation, [&](std::ostream& os) {
    os << "lo,hi,value,quality,price\n";
    for (const auto& it : lines) {
      os << qd::format_number(it.lo) << ',' << qd::format_number(it.hi) << ',' << qd::format_number(it.value) << ','
         << qd::format_number(it.quality) << ',' << qd::format_number(it.price) << '\n';
    }
  });
  plot_lines(cfg, "Joint design",
             {qd::svg::trace("values V", v), qd::svg::trace("signal W", s.signal),
              qd::svg::trace("inventory Q", q), qd::svg::trace("allocation X", s.allocation)});
  return 0;
}

int run_frontier(const Config& cfg) {
  const auto v = family("values", cfg.values, cfg.grid_m);
  const auto q = family("inventory", cfg.inventory, cfg.grid_m);
  if (cfg.steps < 4) throw ConfigError("--steps must be at least 4");
  const auto pts = qd::trace_frontier(v, q, cfg.steps);
  double best = -1e300;
  const qd::WelfarePoint* arg = nullptr;
  bool shapes = true;
  for (const auto& p : pts) {
    shapes = shapes && p.censorship_shape_ok;
    if (p.revenue + p.consumer_surplus > best) {
      best = p.revenue + p.consumer_surplus;
      arg = &p;
    }
  }
  const json summary{{"command", "frontier"},
                     {"points", pts.size()},
                     {"max_total_surplus", best},
                     {"max_total_surplus_at", {{"lambda", arg->lambda}, {"m", arg->m}, {"censorship", qd::to_string(arg->censorship)}}},
                     {"censorship_shape_ok", shapes}};
  emit(cfg, summary, nullptr, nullptr, [&](std::ostream& os) {
    os << "lambda,m,censorship,cutoff,revenue,consumer_surplus\n";
    for (const auto& p : pts) {
      os << qd::format_number(p.lambda) << ',' << p.m << ',' << qd::to_string(p.censorship) << ','
         << qd::format_number(p.cutoff) << ',' << qd::format_number(p.revenue) << ','
         << qd::format_number(p.consumer_surplus) << '\n';
    }
  });
  if (!cfg.plot.empty()) {
    std::ofstream f(cfg.plot);
    if (!f) throw ConfigError("--plot: cannot write '" + cfg.plot + "'");
    std::vector<std::pair<double, double>> xy;
    for (const auto& p : pts) xy.emplace_back(p.revenue, p.consumer_surplus);
    qd::svg::scatter_loop(f, "Revenue and consumer surplus frontier", "revenue", "consumer surplus", xy);
  }
  return 0;
}

int run_tstar(const Config& cfg) {
  const std::vector<int> ns = cfg.n.empty() ? std::vector<int>{2, 3, 4, 5, 10, 100} : cfg.n;
  json rows = json::array();
  std::vector<std::pair<double, double>> xy;
  for (int n : ns) {
    if (n < 2) throw ConfigError("--n: every N must be at least 2");
    const double t = qd::tstar(n);
    rows.push_back({{"N", n}, {"tstar", t}, {"N_times_one_minus_tstar", n * (1.0 - t)}});
    xy.emplace_back(n, t);
  }
  const json summary{{"command", "tstar-table"}, {"rows", rows}};
  emit(cfg, summary, nullptr, nullptr, [&](std::ostream& os) { qd::write_tstar_table(os, ns); });
  plot_lines(cfg, "Pooling threshold", {{"t*(N)", xy}});
  return 0;
}

qd::QuantileFunction signal_for(const Config& cfg, const qd::QuantileFunction& v) {
  const std::string& d = cfg.disclosure;
  if (d == "full") return v;
  if (d == "none") return qd::pool(v, {{{0.0, 1.0}}, 0.0});
  const auto colon = d.find(':');
  const std::string kind = d.substr(0, colon);
  if (colon == std::string::npos || (kind != "upper" && kind != "lower")) {
    throw ConfigError("--disclosure: expected full, none, upper:<c> or lower:<c>, got '" + d + "'");
  }
  double c = 0.0;
  try {
    std::size_t used = 0;
    c = std::stod(d.substr(colon + 1), &used);
    if (used != d.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("--disclosure: bad cutoff in '" + d + "'");
  }
  if (!(c > 0.0 && c < 1.0)) throw ConfigError("--disclosure: cutoff must lie in (0,1)");
  const qd::Interval iv = kind == "upper" ? qd::Interval{c, 1.0} : qd::Interval{0.0, c};
  return qd::pool(v, {{iv}, 0.0});
}

int run_simulate(const Config& cfg) {
  const auto v = family("values", cfg.values, cfg.grid_m);
  if (cfg.n.empty()) throw ConfigError("missing --n");
  if (cfg.n.size() != 1) throw ConfigError("--n: simulate takes a single bidder count");
  const int n = cfg.n.front();
  if (n < 2) throw ConfigError("--n must be at least 2");
  if (cfg.reps < 1) throw ConfigError("--reps must be at least 1");
  const auto w = signal_for(cfg, v);
  std::ofstream samples;
  qd::SimOptions opt;
  opt.threads = cfg.threads;
  if (!cfg.samples.empty()) {
    samples.open(cfg.samples);
    if (!samples) throw ConfigError("--samples: cannot write '" + cfg.samples + "'");
    opt.samples = &samples;
  }
  const auto r = qd::simulate_spa(v, w, n, cfg.reps, cfg.seed, opt);
  const auto q = qd::border_quantile(n, cfg.grid_m);
  json summary = json::parse(qd::to_json(r));
  summary["command"] = "simulate";
  summary["analytic_revenue"] = n * qd::revenue(w, q);
  summary["analytic_consumer_surplus"] = n * qd::consumer_surplus(w, q);
  summary["disclosure"] = cfg.disclosure;
  summary["N"] = n;
  emit(cfg, summary, &w, nullptr, [&](std::ostream& os) {
    os << "mean_revenue,se_revenue,mean_consumer_surplus,se_cs,replications,seed\n"
       << qd::format_number(r.mean_revenue) << ',' << qd::format_number(r.se_revenue) << ','
       << qd::format_number(r.mean_consumer_surplus) << ',' << qd::format_number(r.se_cs) << ',' << r.replications
       << ',' << r.seed << '\n';
  });
  return 0;
}

// Fills options the user did not pass on the command line from the config file.
void apply_config_file(const std::string& path, const std::map<std::string, CLI::Option*>& opts, Config& cfg) {
  std::ifstream f(path);
  if (!f) throw ConfigError("--config: cannot read '" + path + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError("--config: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("--config: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = it.key();
    auto o = opts.find(key);
    if (o == opts.end()) throw ConfigError("--config: field '" + key + "' does not apply to this command");
    if (o->second->count() > 0) continue;
    try {
      const json& val = it.value();
      if (key == "values") cfg.values = val.get<std::string>();
      else if (key == "inventory") cfg.inventory = val.get<std::string>();
      else if (key == "grid_m") cfg.grid_m = val.get<std::size_t>();
      else if (key == "out") cfg.out = val.get<std::string>();
      else if (key == "plot") cfg.plot = val.get<std::string>();
      else if (key == "objective") cfg.objective = val.get<std::string>();
      else if (key == "lambda") cfg.lambda = val.get<double>();
      else if (key == "m") cfg.m = val.get<int>();
      else if (key == "n") cfg.n = val.is_array() ? val.get<std::vector<int>>() : std::vector<int>{val.get<int>()};
      else if (key == "reps") cfg.reps = val.get<std::uint64_t>();
      else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
      else if (key == "threads") cfg.threads = val.get<unsigned>();
      else if (key == "steps") cfg.steps = val.get<std::size_t>();
      else if (key == "cells") cfg.cells = val.get<std::size_t>();
      else if (key == "disclosure") cfg.disclosure = val.get<std::string>();
      else if (key == "samples") cfg.samples = val.get<std::string>();
    } catch (const json::exception&) {
      throw ConfigError("--config: field '" + key + "' has the wrong type");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  if (const char* env = std::getenv("QD_GRID_M")) {
    try {
      cfg.grid_m = std::stoul(env);
    } catch (const std::exception&) {
      std::cerr << "error: QD_GRID_M is not an integer: '" << env << "'\n";
      return 2;
    }
  }

  CLI::App app{"Quantile-space mechanism and information design"};
  app.require_subcommand(1);
  std::string config_path;

  struct Sub {
    CLI::App* app;
    std::map<std::string, CLI::Option*> opts;
  };
  std::map<std::string, Sub> subs;
  auto make = [&](const std::string& name, const std::string& help, bool specs) {
    Sub s{app.add_subcommand(name, help), {}};
    auto& o = s.opts;
    s.app->add_option("--config", config_path, "JSON scenario file; flags override it");
    if (specs) {
      o["values"] = s.app->add_option("--values", cfg.values, "value quantile function spec");
      o["inventory"] = s.app->add_option("--inventory", cfg.inventory, "inventory quantile function spec");
    }
    o["grid_m"] = s.app->add_option("--grid-m", cfg.grid_m, "grid cells for sampled families");
    o["out"] = s.app->add_option("--out", cfg.out, "CSV output path");
    o["plot"] = s.app->add_option("--plot", cfg.plot, "SVG output path");
    subs[name] = std::move(s);
    return &subs[name];
  };

  auto* mech = make("mechanism", "optimal allocation for given values and inventory", true);
  mech->opts["objective"] = mech->app->add_option("--objective", cfg.objective, "revenue or consumer")
                                ->check(CLI::IsMember({"revenue", "consumer"}));
  auto* info = make("info", "optimal information structure for given values and allocation", true);
  info->opts["objective"] = info->app->add_option("--objective", cfg.objective, "revenue, consumer or welfare")
                                ->check(CLI::IsMember({"revenue", "consumer", "welfare"}));
  info->opts["lambda"] = info->app->add_option("--lambda", cfg.lambda, "welfare weight in [-1,1]");
  info->opts["m"] = info->app->add_option("--m", cfg.m, "welfare sign, -1 or 1");
  auto* joint = make("joint", "joint information and allocation design on a uniform grid", true);
  joint->opts["cells"] = joint->app->add_option("--cells", cfg.cells, "grid cells for the joint search");
  auto* front = make("frontier", "revenue / consumer surplus frontier over welfare weights", true);
  front->opts["steps"] = front->app->add_option("--steps", cfg.steps, "lambda grid points per sign");
  auto* table = make("tstar-table", "pooling threshold table for N-bidder auctions", false);
  table->opts["n"] = table->app->add_option("--n", cfg.n, "bidder counts")->delimiter(',');
  auto* sim = make("simulate", "Monte Carlo second-price auction", false);
  sim->opts["values"] = sim->app->add_option("--values", cfg.values, "value quantile function spec");
  sim->opts["n"] = sim->app->add_option("--n", cfg.n, "number of bidders")->delimiter(',');
  sim->opts["reps"] = sim->app->add_option("--reps", cfg.reps, "replications");
  sim->opts["seed"] = sim->app->add_option("--seed", cfg.seed, "random seed");
  sim->opts["threads"] = sim->app->add_option("--threads", cfg.threads, "worker threads");
  sim->opts["disclosure"] = sim->app->add_option("--disclosure", cfg.disclosure, "full, none, upper:<c>, lower:<c>");
  sim->opts["samples"] = sim->app->add_option("--samples", cfg.samples, "per-replication CSV (off by default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string name;
  for (auto& [k, s] : subs) {
    if (s.app->parsed()) name = k;
  }
  try {
    if (!config_path.empty()) apply_config_file(config_path, subs[name].opts, cfg);
    if (cfg.grid_m < 8) throw ConfigError("--grid-m must be at least 8");
    if (name == "mechanism") return run_mechanism(cfg);
    if (name == "info") return run_info(cfg);
    if (name == "joint") return run_joint(cfg);
    if (name == "frontier") return run_frontier(cfg);
    if (name == "tstar-table") return run_tstar(cfg);
    if (name == "simulate") return run_simulate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const qd::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const qd::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const qd::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
