#pragma once

#include <iosfwd>
#include <string>

#include "qdesign/qfun.hpp"
#include "qdesign/weight.hpp"

namespace qd {

// Quantile CSV: header `t,value`, t nondecreasing from 0.0 to 1.0; a repeated t
// encodes a jump (first row left limit, second row value). Numbers are written
// with 17 significant digits so a load/save cycle is bit-exact.

void write_quantile_csv(std::ostream& out, const QuantileFunction& f);
void save_quantile_csv(const std::string& path, const QuantileFunction& f);
QuantileFunction read_quantile_csv(std::istream& in);
QuantileFunction load_quantile_csv(const std::string& path);

/// `t,value` rows with an optional leading `#elevated_at_zero=<v>` comment line.
void write_weight_csv(std::ostream& out, const WeightFunction& g);

/// Shortest round-trippable decimal form.
std::string format_number(double x);

}  // namespace qd
