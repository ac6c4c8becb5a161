#include "qdesign/families.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include "qdesign/error.hpp"
#include "qdesign/io.hpp"

namespace qd {

QuantileFunction power_family(double k, std::size_t m) {
  if (!(k > 0.0) || !std::isfinite(k)) throw InputError("power family needs a positive exponent");
  return QuantileFunction::sample([k](double t) { return std::pow(t, k); }, m);
}

QuantileFunction exp_family(double c, std::size_t m) {
  if (!(c > 0.0 && c < 1.0)) throw InputError("exp family truncation must lie in (0,1)");
  const double step = -std::log1p(-c) / static_cast<double>(m);
  std::vector<double> t(m + 2);
  std::vector<double> v(m + 2);
  for (std::size_t k = 0; k <= m; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(m);
    t[k] = k == 0 ? 0.0 : -std::expm1(frac * std::log1p(-c));
    v[k] = static_cast<double>(k) * step;
  }
  t[m] = c;
  t[m + 1] = 1.0;
  v[m + 1] = v[m];
  return QuantileFunction::interpolate(t, v);
}

QuantileFunction pareto_family(double a, double eps, std::size_t m) {
  if (!(a > 0.0) || !(eps > 0.0)) throw InputError("pareto family needs positive shape and shift");
  const double base = std::pow(1.0 + eps, -a);
  return QuantileFunction::sample([=](double t) { return std::pow(1.0 - t + eps, -a) - base; }, m);
}

namespace {

double parse_number(const std::string& text, const std::string& spec) {
  double out = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw InputError("cannot parse number '" + text + "' in spec '" + spec + "'");
  }
  return out;
}

}  // namespace

QuantileFunction parse_family(const std::string& spec, std::size_t m) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  if (kind == "uniform" && arg.empty()) return power_family(1.0, m);
  if (colon == std::string::npos) throw InputError("unknown distribution spec '" + spec + "'");
  if (kind == "power") return power_family(parse_number(arg, spec), m);
  if (kind == "border") {
    const double n = parse_number(arg, spec);
    if (n < 2.0 || n != std::floor(n)) throw InputError("border:<N> needs an integer N >= 2, got '" + spec + "'");
    return power_family(n - 1.0, m);
  }
  if (kind == "exp") return exp_family(parse_number(arg, spec), m);
  if (kind == "pareto") {
    const auto comma = arg.find(',');
    if (comma == std::string::npos) return pareto_family(parse_number(arg, spec), 1e-6, m);
    return pareto_family(parse_number(arg.substr(0, comma), spec), parse_number(arg.substr(comma + 1), spec), m);
  }
  if (kind == "table") return load_quantile_csv(arg);
  throw InputError("unknown distribution spec '" + spec + "'");
}

}  // namespace qd
