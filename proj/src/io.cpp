#include "qdesign/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "qdesign/error.hpp"

namespace qd {

std::string format_number(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw InputError("cannot format number");
  return std::string(buf.data(), ptr);
}

void write_quantile_csv(std::ostream& out, const QuantileFunction& f) {
  out << "t,value\n";
  for (const Knot& k : f.knots()) {
    if (k.right > k.left) out << format_number(k.t) << ',' << format_number(k.left) << '\n';
    out << format_number(k.t) << ',' << format_number(k.right) << '\n';
  }
}

void save_quantile_csv(const std::string& path, const QuantileFunction& f) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  write_quantile_csv(out, f);
}

namespace {

double parse_field(std::string_view text, std::size_t line) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '"')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '"' || text.back() == '\r')) text.remove_suffix(1);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InputError("quantile CSV line " + std::to_string(line) + ": bad number '" + std::string(text) + "'");
  }
  return out;
}

}  // namespace

QuantileFunction read_quantile_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<Knot> knots;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "t,value") throw InputError("quantile CSV must start with header 't,value'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InputError("quantile CSV line " + std::to_string(lineno) + ": expected two fields");
    const double t = parse_field(std::string_view(line).substr(0, comma), lineno);
    const double v = parse_field(std::string_view(line).substr(comma + 1), lineno);
    if (!knots.empty() && knots.back().t == t) {
      if (knots.back().right != knots.back().left) {
        throw InputError("quantile CSV line " + std::to_string(lineno) + ": t repeated more than twice");
      }
      knots.back().right = v;
      continue;
    }
    if (!knots.empty() && t < knots.back().t) {
      throw InputError("quantile CSV line " + std::to_string(lineno) + ": t must be increasing");
    }
    knots.push_back({t, v, v});
  }
  if (!header) throw InputError("quantile CSV is empty");
  return QuantileFunction(std::move(knots));
}

QuantileFunction load_quantile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open quantile table '" + path + "'");
  return read_quantile_csv(in);
}

void write_weight_csv(std::ostream& out, const WeightFunction& g) {
  if (g.elevated_at_zero) out << "#elevated_at_zero=" << format_number(*g.elevated_at_zero) << '\n';
  out << "t,value\n";
  for (std::size_t i = 0; i < g.grid.size(); ++i) {
    out << format_number(g.grid[i]) << ',' << format_number(g.values[i]) << '\n';
  }
}

}  // namespace qd
