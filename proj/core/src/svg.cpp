#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qclab/errors.hpp"
#include "qclab/report.hpp"

namespace qclab {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;
  double map(double v) const { return log ? std::log10(v) : v; }
};

Axis fit_axis(const std::vector<PlotSeries>& series, bool log, bool use_x) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : series)
    for (double v : use_x ? s.x : s.y) {
      if (!std::isfinite(v) || (log && v <= 0)) continue;
      lo = std::min(lo, a.map(v));
      hi = std::max(hi, a.map(v));
    }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (hi - lo < 1e-300) lo -= 0.5, hi += 0.5;
  a.lo = lo;
  a.hi = hi;
  return a;
}

std::vector<double> ticks(const Axis& a) {
  std::vector<double> out;
  if (a.log) {
    for (double e = std::ceil(a.lo); e <= a.hi + 1e-9; e += 1.0) out.push_back(e);
    return out;
  }
  const double raw = (a.hi - a.lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-9 * step; v += step) out.push_back(v);
  return out;
}

std::string tick_label(const Axis& a, double v) {
  std::ostringstream s;
  if (a.log)
    s << "1e" << static_cast<int>(std::lround(v));
  else
    s << (std::abs(v) < 1e-12 ? 0.0 : v);
  return s.str();
}

}  // namespace

std::string svg_plot(const std::vector<PlotSeries>& series, const PlotOptions& options) {
  for (const auto& s : series)
    if (s.x.size() != s.y.size()) throw DomainError("plot series '" + s.name + "' has mismatched x and y");
  Axis ax = fit_axis(series, options.log_x, true);
  Axis ay = fit_axis(series, options.log_y, false);

  const double left = 70, right = 20, top = 36, bottom = 50;
  const double pw = options.width - left - right, ph = options.height - top - bottom;
  if (options.equal_aspect) {
    const double sx = pw / (ax.hi - ax.lo), sy = ph / (ay.hi - ay.lo);
    const double s = std::min(sx, sy);
    const double cx = 0.5 * (ax.lo + ax.hi), cy = 0.5 * (ay.lo + ay.hi);
    ax.lo = cx - 0.5 * pw / s, ax.hi = cx + 0.5 * pw / s;
    ay.lo = cy - 0.5 * ph / s, ay.hi = cy + 0.5 * ph / s;
  }
  auto px = [&](double v) { return left + (ax.map(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double v) { return top + ph - (ay.map(v) - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::ostringstream out;
  out.precision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << options.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
      << escape(options.title) << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : ticks(ax)) {
    const double x = left + (t - ax.lo) / (ax.hi - ax.lo) * pw;
    out << "<line x1=\"" << x << "\" y1=\"" << top + ph << "\" x2=\"" << x << "\" y2=\"" << top + ph + 5
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << tick_label(ax, t)
        << "</text>\n";
  }
  for (double t : ticks(ay)) {
    const double y = top + ph - (t - ay.lo) / (ay.hi - ay.lo) * ph;
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << tick_label(ay, t)
        << "</text>\n";
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << options.height - 10 << "\" text-anchor=\"middle\">"
      << escape(options.x_label) << "</text>\n";
  out << "<text x=\"14\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << top + ph / 2 << ")\">" << escape(options.y_label) << "</text>\n";

  out << "<g fill=\"none\" stroke-width=\"1.2\">\n";
  double legend_y = top + 14;
  for (const auto& s : series) {
    out << "<polyline stroke=\"" << s.color << "\"" << (s.dashed ? " stroke-dasharray=\"5,3\"" : "")
        << " points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if ((options.log_x && s.x[i] <= 0) || (options.log_y && s.y[i] <= 0)) continue;
      out << (first ? "" : " ") << px(s.x[i]) << ',' << py(s.y[i]);
      first = false;
    }
    out << "\"/>\n";
    if (!s.name.empty()) {
      out << "<line x1=\"" << left + pw - 120 << "\" y1=\"" << legend_y << "\" x2=\"" << left + pw - 100
          << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color << "\"/>\n";
      out << "<text x=\"" << left + pw - 95 << "\" y=\"" << legend_y + 4 << "\" stroke=\"none\" fill=\"black\">"
          << escape(s.name) << "</text>\n";
      legend_y += 14;
    }
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace qclab
