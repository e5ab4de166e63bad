#include "qclab/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "qclab/distortion.hpp"
#include "qclab/errors.hpp"
#include "qclab/random_dilatation.hpp"

namespace qclab {

PrincipalMapSolution generate_quasiline(double k, std::uint64_t seed, const GridSpec& spec, double radius) {
  QcConstants::from_k(k);
  return solve_principal(random_antisymmetric_dilatation(spec, k, seed, {}, radius));
}

double CoveringSumSeries::sum_at(int generation) const noexcept {
  for (const auto& r : records)
    if (r.generation == generation) return r.sum;
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

double image_diameter(const PrincipalMapSolution& f, double a, double b, int points) {
  std::vector<cplx> img(static_cast<std::size_t>(points));
  for (int p = 0; p < points; ++p) {
    const double x = p == points - 1 ? b : a + (b - a) * p / (points - 1);
    img[p] = evaluate(f, {x, 0.0});
  }
  double diam = 0.0;
  for (std::size_t u = 0; u < img.size(); ++u)
    for (std::size_t v = u + 1; v < img.size(); ++v) diam = std::max(diam, std::abs(img[u] - img[v]));
  return diam;
}

}  // namespace

CoveringSumSeries covering_sums(const PrincipalMapSolution& f, const std::vector<Interval>& set, double ball_center,
                                double ball_radius, double s, int max_generation, double k) {
  if (!(s > 0.0) || !(s <= 2.0)) throw DomainError("covering exponent s must lie in (0, 2]");
  if (max_generation < 1) throw DomainError("covering sums need at least one generation");
  if (!(ball_radius > 0.0)) throw DomainError("ball radius must be positive");
  const GridSpec& spec = f.spec();
  for (const Interval& e : set) {
    if (!(e.b >= e.a)) throw DomainError("interval with b < a");
    if (!spec.in_guard_band({e.a, 0.0}) || !spec.in_guard_band({e.b, 0.0}))
      throw DomainError("covered set leaves the guard band");
  }

  CoveringSumSeries series;
  series.k = k;
  series.s = s;
  series.set = set;
  series.ball_center = ball_center;
  series.ball_radius = ball_radius;
  series.requested_generations = max_generation;

  double length = 0.0;
  for (const Interval& e : set) length += e.length();
  const double unit = 2.0 * ball_radius;
  series.normalizer = std::pow(image_diameter_of_disk(f, {ball_center, 0.0}, ball_radius), s) *
                      std::pow(length / unit, 1.0 - k * k);

  const double origin = ball_center - ball_radius;
  const double min_length = 4.0 * spec.spacing();
  for (int m = 1; m <= max_generation; ++m) {
    const double len = std::ldexp(unit, -m);
    if (len < min_length * (1.0 - 1e-12)) {
      series.truncated = true;
      break;
    }
    CoveringRecord rec;
    rec.generation = m;
    for (const Interval& e : set) {
      const auto first = static_cast<std::int64_t>(std::floor((e.a - origin) / len));
      const auto last = static_cast<std::int64_t>(std::ceil((e.b - origin) / len));
      for (std::int64_t idx = first; idx < last; ++idx) {
        const double a = std::max(e.a, origin + static_cast<double>(idx) * len);
        const double b = std::min(e.b, origin + static_cast<double>(idx + 1) * len);
        if (!(b > a)) continue;
        ++rec.count;
        rec.sum += std::pow(image_diameter(f, a, b, 5), s);
        rec.sum_dense += std::pow(image_diameter(f, a, b, 33), s);
      }
    }
    series.records.push_back(rec);
  }
  if (series.truncated) {
    std::ostringstream msg;
    msg << "covering sums stop at generation " << series.records.size() << " of " << max_generation
        << ": intervals would be shorter than 4 grid spacings";
    warn(msg.str());
  }
  return series;
}

std::vector<Interval> ball_preimage_on_line(const PrincipalMapSolution& f, cplx center, double radius, double lo,
                                            double hi, double step) {
  if (!(step > 0.0) || !(hi > lo)) throw DomainError("degenerate sweep");
  auto g = [&](double x) { return std::abs(evaluate(f, {x, 0.0}) - center) - radius; };
  auto crossing = [&](double a, double b) {
    // g(a) and g(b) differ in sign; returns the point where g changes.
    const bool inside_a = g(a) <= 0.0;
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (a + b);
      if ((g(m) <= 0.0) == inside_a)
        a = m;
      else
        b = m;
    }
    return 0.5 * (a + b);
  };
  std::vector<Interval> out;
  const auto steps = static_cast<std::int64_t>(std::floor((hi - lo) / step));
  double prev_x = lo;
  bool prev_in = g(lo) <= 0.0;
  double start = lo;
  for (std::int64_t i = 1; i <= steps; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    const bool in = g(x) <= 0.0;
    if (in && !prev_in) start = crossing(prev_x, x);
    if (!in && prev_in) out.push_back({start, crossing(prev_x, x)});
    prev_in = in;
    prev_x = x;
  }
  if (prev_in) {
    warn("ball preimage reaches the end of the sweep");
    out.push_back({start, prev_x});
  }
  return out;
}

MainCheckReport theorem_main_check(const PrincipalMapSolution& f, double k, double x0, double radius,
                                   int max_generation) {
  const GridSpec& spec = f.spec();
  MainCheckReport report;
  report.k = k;
  report.parameter = x0;
  report.radius = radius;
  report.center = evaluate(f, {x0, 0.0});
  const double band = 0.5 * spec.half_width();
  report.preimage = ball_preimage_on_line(f, report.center, radius, -band, band, 0.25 * spec.spacing());
  if (report.preimage.empty()) throw DomainError("ball around a curve point has empty preimage");
  const double lo = report.preimage.front().a;
  const double hi = report.preimage.back().b;
  const double s = 1.0 + k * k;
  report.series = covering_sums(f, report.preimage, 0.5 * (lo + hi), 0.5 * (hi - lo), s, max_generation, k);
  for (const auto& r : report.series.records) report.sup_ratio = std::max(report.sup_ratio, r.sum / std::pow(radius, s));
  return report;
}

double quasisymmetry_ratio(const PrincipalMapSolution& f, double a, double b, int generations) {
  double worst = 1.0;
  for (int g = 1; g <= generations; ++g) {
    const std::int64_t pieces = std::int64_t{1} << g;
    const double d = (b - a) / static_cast<double>(pieces);
    for (std::int64_t i = 1; i < pieces; ++i) {
      const double x = a + static_cast<double>(i) * d;
      const cplx fx = evaluate(f, {x, 0.0});
      const double right = std::abs(evaluate(f, {x + d, 0.0}) - fx);
      const double left = std::abs(fx - evaluate(f, {x - d, 0.0}));
      if (right == 0.0 || left == 0.0) return std::numeric_limits<double>::infinity();
      worst = std::max({worst, right / left, left / right});
    }
  }
  return worst;
}

std::vector<cplx> sample_curve(const PrincipalMapSolution& f, double a, double b, int count) {
  if (count < 2) throw DomainError("curve sampling needs at least two points");
  std::vector<cplx> out(static_cast<std::size_t>(count));
  for (int p = 0; p < count; ++p) out[p] = evaluate(f, {p == count - 1 ? b : a + (b - a) * p / (count - 1), 0.0});
  return out;
}

DimensionFit box_dimension(const std::vector<cplx>& curve, double coarsest, int levels, double k) {
  if (curve.size() < 10000) throw DomainError("box counting needs at least 10^4 curve samples");
  if (levels < 4) throw DomainError("box counting fit needs at least 4 scales");
  if (!(coarsest > 0.0)) throw DomainError("degenerate scale range");
  double gap = 0.0;
  for (std::size_t p = 1; p < curve.size(); ++p) gap = std::max(gap, std::abs(curve[p] - curve[p - 1]));
  const double finest = std::ldexp(coarsest, -(levels - 1));
  if (finest < 2.0 * gap) {
    std::ostringstream msg;
    msg << "finest box scale " << finest << " is below twice the sample gap " << gap;
    throw DomainError(msg.str());
  }

  DimensionFit fit;
  fit.reference_upper = 1.0 + k * k;
  fit.reference_lower = 1.0 + 0.69 * k * k;
  std::vector<std::pair<std::int64_t, std::int64_t>> boxes(curve.size());
  for (int j = 0; j < levels; ++j) {
    const double delta = std::ldexp(coarsest, -j);
    for (std::size_t p = 0; p < curve.size(); ++p)
      boxes[p] = {static_cast<std::int64_t>(std::floor(curve[p].real() / delta)),
                  static_cast<std::int64_t>(std::floor(curve[p].imag() / delta))};
    std::sort(boxes.begin(), boxes.end());
    const auto distinct = std::unique(boxes.begin(), boxes.end()) - boxes.begin();
    fit.scales.push_back(delta);
    fit.counts.push_back(static_cast<double>(distinct));
  }
  const auto n = static_cast<double>(levels);
  double sx = 0, sy = 0;
  for (int j = 0; j < levels; ++j) {
    sx += std::log(1.0 / fit.scales[j]);
    sy += std::log(fit.counts[j]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (int j = 0; j < levels; ++j) {
    const double dx = std::log(1.0 / fit.scales[j]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(fit.counts[j]) - my);
  }
  fit.slope = sxy / sxx;
  double rss = 0.0;
  for (int j = 0; j < levels; ++j) {
    const double pred = my + fit.slope * (std::log(1.0 / fit.scales[j]) - mx);
    rss += std::pow(std::log(fit.counts[j]) - pred, 2);
  }
  fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  if (!std::isfinite(fit.slope)) throw DomainError("box-counting slope is not finite");
  return fit;
}

}  // namespace qclab
