#pragma once

#include <cstddef>
#include <string>

#include "qdesign/qfun.hpp"

namespace qd {

inline constexpr std::size_t kDefaultGrid = 1000;

/// t^k on a uniform grid.
QuantileFunction power_family(double k, std::size_t m = kDefaultGrid);
/// -ln(1 - min(t, c)): constant inverse hazard up to c, flat above. Breakpoints
/// are geometric in 1-t so that every piece adds the same quality increment.
QuantileFunction exp_family(double c, std::size_t m = kDefaultGrid);
/// (1 - t + eps)^-a - (1 + eps)^-a: Pareto-type qualities, shifted to stay finite.
QuantileFunction pareto_family(double a, double eps = 1e-6, std::size_t m = kDefaultGrid);

/// Parses `power:<k>`, `uniform`, `border:<N>`, `exp:<c>`, `pareto:<a>[,<eps>]`
/// or `table:<path>`. Throws InputError naming the offending spec.
QuantileFunction parse_family(const std::string& spec, std::size_t m = kDefaultGrid);

}  // namespace qd
