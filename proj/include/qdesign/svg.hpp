#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qdesign/qfun.hpp"

namespace qd::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Polylines on a shared pair of axes.
void line_chart(std::ostream& out, const std::string& title, const std::string& xlabel, const std::string& ylabel,
                const std::vector<Series>& series);

/// Dots joined into a closed loop, e.g. the revenue/consumer-surplus frontier.
void scatter_loop(std::ostream& out, const std::string& title, const std::string& xlabel, const std::string& ylabel,
                  const std::vector<std::pair<double, double>>& points);

/// A quantile function as a polyline, with a vertical segment at each jump.
Series trace(const std::string& label, const QuantileFunction& f);

}  // namespace qd::svg
