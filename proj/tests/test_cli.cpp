#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

#ifndef QD_CLI_PATH
#error "QD_CLI_PATH must name the qdesign binary"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    std::random_device rd;
    fs::path d = fs::temp_directory_path() / ("qdesign_cli_" + std::to_string(rd()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

Run run(const std::string& args, const std::string& env = "") {
  const fs::path o = scratch() / "stdout.txt";
  const fs::path e = scratch() / "stderr.txt";
  const std::string cmd = env + " \"" + std::string(QD_CLI_PATH) + "\" " + args + " >\"" + o.string() + "\" 2>\"" +
                          e.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(o), slurp(e)};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream f(p);
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::stringstream s(line);
    std::string c;
    while (std::getline(s, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

std::string path(const std::string& name) { return "\"" + (scratch() / name).string() + "\""; }

}  // namespace

TEST_CASE("mechanism reports the reserve quantile") {
  const auto r = run("mechanism --values power:4 --inventory power:4 --out " + path("mech.csv") + " --plot " +
                     path("mech.svg"));
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(std::abs(j["t_m"].get<double>() - 0.8) <= 1.0 / 1000);
  CHECK(std::abs(j["objective"].get<double>() - 0.0648763) <= 1e-6);
  const auto rows = read_csv(scratch() / "mech.csv");
  REQUIRE(rows.size() > 2);
  CHECK(rows[0] == std::vector<std::string>{"t", "W", "X", "p"});
  CHECK(fs::exists(scratch() / "mech_W.csv"));
  CHECK(fs::exists(scratch() / "mech_X.csv"));
  CHECK(json::parse(slurp(scratch() / "mech.json")) == j);
  const std::string svg = slurp(scratch() / "mech.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("tstar table") {
  const auto r = run("tstar-table --n 2,3,4,5,10,100 --out " + path("tstar.csv"));
  REQUIRE(r.code == 0);
  const auto rows = read_csv(scratch() / "tstar.csv");
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == std::vector<std::string>{"N", "tstar", "N_times_one_minus_tstar"});
  const double table[] = {0.0, 0.25, 0.46, 0.58, 0.81, 0.98};
  for (int i = 0; i < 6; ++i) CHECK(std::abs(std::stod(rows[i + 1][1]) - table[i]) <= 0.01);
}

TEST_CASE("frontier smoke test") {
  const auto r = run("frontier --values power:4 --inventory power:4 --steps 4 --out " + path("front.csv") + " --plot " +
                     path("front.svg"));
  REQUIRE(r.code == 0);
  const auto rows = read_csv(scratch() / "front.csv");
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == std::vector<std::string>{"lambda", "m", "censorship", "cutoff", "revenue", "consumer_surplus"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::isfinite(std::stod(rows[i][4])));
    CHECK(std::isfinite(std::stod(rows[i][5])));
  }
  CHECK(slurp(scratch() / "front.svg").find("<svg") != std::string::npos);
}

TEST_CASE("joint menu") {
  const auto r = run("joint --values power:4 --inventory power:4 --cells 100 --out " + path("joint.csv"));
  REQUIRE(r.code == 0);
  const auto rows = read_csv(scratch() / "joint.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"lo", "hi", "value", "quality", "price"});
  CHECK(rows[1][3] == "0");
  CHECK(json::parse(r.out)["interval_count"] == 2);
}

TEST_CASE("table round trip is bit identical") {
  REQUIRE(run("info --values power:4 --inventory power:4 --out " + path("a.csv")).code == 0);
  // the inventory comes back out unchanged as the _X sibling
  REQUIRE(run("info --values power:4 --inventory table:" + path("a_W.csv") + " --out " + path("b.csv")).code == 0);
  CHECK(slurp(scratch() / "a_W.csv") == slurp(scratch() / "b_X.csv"));
  REQUIRE(run("info --values power:2 --inventory table:" + path("b_X.csv") + " --out " + path("c.csv")).code == 0);
  CHECK(slurp(scratch() / "b_X.csv") == slurp(scratch() / "c_X.csv"));
}

TEST_CASE("configuration errors exit with 2") {
  auto bad = run("mechanism --values nonsense --inventory power:4");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("--values") != std::string::npos);
  bad = run("mechanism --inventory power:4");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("--values") != std::string::npos);
  CHECK(run("mechanism --values power:4 --inventory power:4 --grid-m 3").code == 2);
  CHECK(run("info --values power:4 --inventory power:4 --objective welfare --lambda 2").code == 2);
  CHECK(run("simulate --values uniform --n 1").code == 2);
  CHECK(run("simulate --values uniform --n 3 --disclosure upper:x").code == 2);
  CHECK(run("bogus").code == 2);
  CHECK(run("mechanism --values power:4 --inventory power:4", "QD_GRID_M=abc").code == 2);
  CHECK(run("info --values power:4 --inventory uniform --objective consumer --config " + path("missing.json")).code == 2);
}

TEST_CASE("flags override the config file, which overrides the environment") {
  {
    std::ofstream f(scratch() / "scenario.json");
    f << R"({"values": "power:4", "inventory": "power:4", "grid_m": 200})";
  }
  auto r = run("mechanism --config " + path("scenario.json"));
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["grid_m"] == 200);
  r = run("mechanism --config " + path("scenario.json") + " --grid-m 100");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["grid_m"] == 100);
  r = run("mechanism --config " + path("scenario.json"), "QD_GRID_M=50");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["grid_m"] == 200);
  r = run("mechanism --values power:4 --inventory power:4", "QD_GRID_M=50");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["grid_m"] == 50);
  {
    std::ofstream f(scratch() / "wrong.json");
    f << R"({"values": "power:4", "inventory": "power:4", "steps": 10})";
  }
  CHECK(run("mechanism --config " + path("wrong.json")).code == 2);
}

TEST_CASE("simulate is deterministic across runs and threads") {
  const std::string base = "simulate --values power:4 --n 5 --reps 20000 --seed 9 --disclosure upper:0.5844";
  const auto a = run(base + " --threads 1");
  const auto b = run(base + " --threads 4");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  const auto j = json::parse(a.out);
  CHECK(std::abs(j["mean_revenue"].get<double>() - j["analytic_revenue"].get<double>()) <=
        4 * j["se_revenue"].get<double>());
  const auto s = run("simulate --values uniform --n 2 --reps 50 --samples " + path("samples.csv"));
  REQUIRE(s.code == 0);
  CHECK(read_csv(scratch() / "samples.csv").size() == 51);
}

TEST_CASE("welfare info") {
  const auto r = run("info --values power:4 --inventory power:4 --objective welfare --lambda 1 --m 1");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["censorship"] == "lower");
  CHECK(std::abs(j["cutoff"].get<double>() - 0.75) <= 1e-3);
}

TEST_CASE("cleanup") { fs::remove_all(scratch()); }
