#include "qdesign/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "qdesign/io.hpp"

namespace qd::svg {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 50;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

Frame fit(const std::vector<std::pair<double, double>>& pts) {
  Frame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (auto [x, y] : pts) {
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    f.x0 = std::min(f.x0, x);
    f.x1 = std::max(f.x1, x);
    f.y0 = std::min(f.y0, y);
    f.y1 = std::max(f.y1, y);
  }
  if (!(f.x0 < f.x1)) {
    f.x0 = std::isfinite(f.x0) ? f.x0 - 0.5 : 0.0;
    f.x1 = f.x0 + 1.0;
  }
  if (!(f.y0 < f.y1)) {
    f.y0 = std::isfinite(f.y0) ? f.y0 - 0.5 : 0.0;
    f.y1 = f.y0 + 1.0;
  }
  const double pad = 0.04 * (f.y1 - f.y0);
  f.y0 -= pad;
  f.y1 += pad;
  return f;
}

std::string num(double x) {
  // pixel coordinates: two decimals are plenty
  return format_number(std::round(x * 100.0) / 100.0);
}

void header(std::ostream& out, const std::string& title, const std::string& xlabel, const std::string& ylabel,
            const Frame& f) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
  const double bx = kLeft;
  const double by = kHeight - kBottom;
  out << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << by
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << bx << "\" y2=\"" << kTop << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    out << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << by + 16 << "\" text-anchor=\"middle\">"
        << format_number(std::round(xv * 1000.0) / 1000.0) << "</text>\n";
    out << "<text x=\"" << bx - 6 << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\">"
        << format_number(std::round(yv * 1000.0) / 1000.0) << "</text>\n";
  }
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">" << escape(xlabel)
      << "</text>\n"
      << "<text x=\"16\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kHeight / 2
      << ")\">" << escape(ylabel) << "</text>\n";
}

}  // namespace

void line_chart(std::ostream& out, const std::string& title, const std::string& xlabel, const std::string& ylabel,
                const std::vector<Series>& series) {
  std::vector<std::pair<double, double>> all;
  for (const auto& s : series) all.insert(all.end(), s.points.begin(), s.points.end());
  const Frame f = fit(all);
  header(out, title, xlabel, ylabel, f);
  std::size_t k = 0;
  for (const auto& s : series) {
    const char* color = kColors[k % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : s.points) {
      if (std::isfinite(x) && std::isfinite(y)) out << num(f.px(x)) << ',' << num(f.py(y)) << ' ';
    }
    out << "\"/>\n";
    const double ly = kTop + 14.0 * static_cast<double>(k);
    out << "<text x=\"" << kLeft + 10 << "\" y=\"" << ly + 4 << "\" fill=\"" << color << "\">" << escape(s.label)
        << "</text>\n";
    ++k;
  }
  out << "</svg>\n";
}

void scatter_loop(std::ostream& out, const std::string& title, const std::string& xlabel, const std::string& ylabel,
                  const std::vector<std::pair<double, double>>& points) {
  const Frame f = fit(points);
  header(out, title, xlabel, ylabel, f);
  out << "<polygon fill=\"#1f77b4\" fill-opacity=\"0.08\" stroke=\"#1f77b4\" points=\"";
  for (auto [x, y] : points) {
    if (std::isfinite(x) && std::isfinite(y)) out << num(f.px(x)) << ',' << num(f.py(y)) << ' ';
  }
  out << "\"/>\n";
  for (auto [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    out << "<circle cx=\"" << num(f.px(x)) << "\" cy=\"" << num(f.py(y)) << "\" r=\"2\" fill=\"#d62728\"/>\n";
  }
  out << "</svg>\n";
}

Series trace(const std::string& label, const QuantileFunction& f) {
  Series s{label, {}};
  for (const Knot& k : f.knots()) {
    if (k.right != k.left) s.points.emplace_back(k.t, k.left);
    s.points.emplace_back(k.t, k.right);
  }
  return s;
}

}  // namespace qd::svg
