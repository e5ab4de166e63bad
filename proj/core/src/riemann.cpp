#include "qclab/riemann.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qclab/errors.hpp"
#include "qclab/random_dilatation.hpp"

namespace qclab {

PowerMapSpec PowerMapSpec::make(double k) {
  if (!(k > 0.0) || !(k < 1.0)) throw InvalidBoundError("power map needs 0 < k < 1");
  return PowerMapSpec{k};
}

cplx PowerMapSpec::value(cplx z) const { return std::pow(0.5 * (1.0 + z), 1.0 - k); }

cplx PowerMapSpec::derivative(cplx z) const { return 0.5 * (1.0 - k) * std::pow(0.5 * (1.0 + z), -k); }

double PowerMapSpec::derivative_modulus(cplx z) const {
  return 0.5 * (1.0 - k) * std::pow(0.5 * std::abs(1.0 + z), -k);
}

double PowerMapSpec::derivative_at_origin() const { return (1.0 - k) * std::exp2(k - 1.0); }

double PowerMapSpec::superlevel_radius(double rho) const { return 2.0 * std::pow(2.0 * rho / (1.0 - k), -1.0 / k); }

double PowerMapSpec::superlevel_measure(double rho) const {
  return lens_area(std::min(2.0, superlevel_radius(rho)));
}

double PowerMapSpec::scaled_limit() const { return 2.0 * std::numbers::pi * std::pow(0.5 * (1.0 - k), 2.0 / k); }

double PowerMapSpec::cap_integral(double delta) const {
  if (!(delta > 0.0) || delta > 2.0) throw DomainError("cap radius must lie in (0, 2]");
  // Polar coordinates about -1: D = {r < 2 cos theta}, |phi'|^2 = C0 r^{-2k}.
  const double c0 = 0.25 * (1.0 - k) * (1.0 - k) * std::exp2(2.0 * k);
  const double e = 2.0 - 2.0 * k;
  const double theta_star = std::acos(0.5 * delta);
  const double u_star = 0.5 * std::numbers::pi - theta_star;  // asin(delta / 2)
  // \int_0^{u*} (2 sin u)^e du by composite Simpson after u = u* v^2, which
  // removes the endpoint singularity of the derivative.
  const int n = 4000;
  auto integrand = [&](double v) {
    const double u = u_star * v * v;
    return std::pow(2.0 * std::sin(u), e) * 2.0 * u_star * v;
  };
  double acc = integrand(0.0) + integrand(1.0);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(static_cast<double>(i) / n);
  const double edge = acc / (3.0 * n);
  return c0 / e * (2.0 * theta_star * std::pow(delta, e) + 2.0 * edge);
}

bool PowerMapSpec::injective_on_samples(int count) const {
  auto halton = [](int index, int base) {
    double f = 1.0, r = 0.0;
    for (int i = index; i > 0; i /= base) {
      f /= base;
      r += f * (i % base);
    }
    return r;
  };
  std::vector<std::pair<cplx, cplx>> pts;  // (image, point)
  for (int i = 1; static_cast<int>(pts.size()) < count; ++i) {
    const cplx z(2.0 * halton(i, 2) - 1.0, 2.0 * halton(i, 3) - 1.0);
    if (std::abs(z) < 1.0) pts.emplace_back(value(z), z);
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first.real() < b.first.real(); });
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size() && pts[b].first.real() - pts[a].first.real() < 1e-9; ++b) {
      if (std::abs(pts[a].first - pts[b].first) < 1e-9 && std::abs(pts[a].second - pts[b].second) > 1e-9) return false;
    }
  }
  return true;
}

double lens_area(double c) {
  if (!(c >= 0.0) || c > 2.0) throw DomainError("lens radius must lie in [0, 2]");
  // c^2 acos(c/2) + [2 asin(c/2) - c sqrt(1 - c^2/4)]; the bracket cancels badly
  // for small c and is replaced by its series there.
  const double x = 0.5 * c;
  double bracket;
  if (x < 1e-3) {
    const double x2 = x * x;
    bracket = x * x2 * (4.0 / 3.0 + x2 * (2.0 / 5.0 + x2 * 3.0 / 14.0));
  } else {
    bracket = 2.0 * std::asin(x) - c * std::sqrt(1.0 - x * x);
  }
  return c * c * std::acos(x) + bracket;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || per_decade < 1) throw DomainError("degenerate logarithmic grid");
  const double decades = std::log10(hi / lo);
  const int steps = std::max(1, static_cast<int>(std::ceil(decades * per_decade - 1e-9)));
  std::vector<double> out(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / steps);
  out.back() = hi;
  return out;
}

std::vector<double> power_map_thresholds(const PowerMapSpec& map, double decades, double c_max, int per_decade) {
  const double lo = 0.5 * (1.0 - map.k) * std::pow(0.5 * c_max, -map.k);
  return log_grid(lo, lo * std::pow(10.0, decades), per_decade);
}

double TailStatistics::sup_scaled() const {
  return scaled.empty() ? 0.0 : *std::max_element(scaled.begin(), scaled.end());
}

TailStatistics tail_statistics(const ScalarSampler& derivative_modulus, double k, const std::vector<double>& thresholds,
                               const AreaRegion& region, const TailOptions& options) {
  if (!(k > 0.0) || !(k < 1.0)) throw InvalidBoundError("tail statistics need 0 < k < 1");
  if (thresholds.size() < 2) throw DomainError("tail statistics need at least two thresholds");
  if (std::log10(thresholds.back() / thresholds.front()) < options.min_decades - 1e-9) {
    std::ostringstream msg;
    msg << "threshold grid spans fewer than " << options.min_decades << " decades";
    throw DomainError(msg.str());
  }

  const SuperlevelResult level = superlevel_measures(derivative_modulus, region, thresholds, options.quadrature);
  TailStatistics out;
  out.k = k;
  out.thresholds = thresholds;
  out.measures = level.measures;
  out.region_area = level.area;
  out.cells = level.cells;
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    out.scaled.push_back(std::pow(thresholds[i], 2.0 / k) * out.measures[i]);
  out.degenerate = std::all_of(out.measures.begin(), out.measures.end(), [](double m) { return m == 0.0; });
  if (out.degenerate) warn("every superlevel set on the threshold grid is empty");

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double frac = out.region_area > 0.0 ? out.measures[i] / out.region_area : 0.0;
    if (out.measures[i] > 0.0 && frac >= options.fit_min_fraction && frac <= options.fit_max_fraction) {
      if (xs.empty()) out.fit_first = i;
      xs.push_back(std::log(thresholds[i]));
      ys.push_back(std::log(out.measures[i]));
    }
  }
  out.fit_count = xs.size();
  if (xs.size() < 2) {
    out.slope = std::numeric_limits<double>::quiet_NaN();
    out.slope_stderr = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const auto n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  out.slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) rss += std::pow(ys[i] - my - out.slope * (xs[i] - mx), 2);
  out.slope_stderr = xs.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
  return out;
}

AreaDistortionReport area_distortion(const ScalarSampler& derivative_modulus, const AreaRegion& region, double k,
                                     double derivative_at_origin, bool extends_to_boundary,
                                     const QuadratureOptions& options) {
  AreaDistortionReport out;
  out.k = k;
  out.derivative_at_origin = derivative_at_origin;
  if (region.empty()) return out;

  const auto box = region.bounds();
  const double h = std::max(box[2] - box[0], box[3] - box[1]) / options.base_resolution;
  double reach = 0.0;
  for (double x : {box[0], box[2]})
    for (double y : {box[1], box[3]}) reach = std::max(reach, std::abs(cplx(x, y)));
  out.boundary_flag = !extends_to_boundary && reach > 1.0 - 2.0 * h;
  if (out.boundary_flag) warn("area-distortion region reaches within 2h of the unit circle");

  const IntegralResult fine = integrate_squared(derivative_modulus, region, options);
  QuadratureOptions half = options;
  half.base_resolution = std::max(2, options.base_resolution / 2);
  const IntegralResult coarse = integrate_squared(derivative_modulus, region, half);
  out.image_area = fine.value;
  out.coarse_image_area = coarse.value;
  out.region_area = fine.area;
  out.consistency = fine.value > 0.0 ? std::abs(fine.value - coarse.value) / fine.value : 0.0;
  if (out.consistency > 0.02) {
    std::ostringstream msg;
    msg << "area quadrature changes by " << 100.0 * out.consistency << "% at half resolution";
    throw ResolutionError(msg.str());
  }
  if (out.region_area > 0.0)
    out.ratio = out.image_area / (derivative_at_origin * derivative_at_origin * std::pow(out.region_area, 1.0 - k));
  return out;
}

LayerCakeReport layer_cake_consistency(const TailStatistics& tails, double direct_integral) {
  LayerCakeReport out;
  out.direct = direct_integral;
  const auto& rho = tails.thresholds;
  const auto& m = tails.measures;
  const double area = tails.region_area;
  if (rho.empty()) throw DomainError("layer cake needs a threshold grid");
  out.split = area > 0.0 ? std::pow(area, -0.5 * tails.k) : 0.0;
  if (area == 0.0) return out;
  if (m.front() < area * (1.0 - 1e-9))
    warn("smallest threshold is above the infimum on the region; the head term overestimates");

  out.head = rho.front() * rho.front() * area;
  out.below_split = rho.front() <= out.split ? out.head : 0.0;
  double body = 0.0;
  for (std::size_t i = 0; i + 1 < rho.size(); ++i) {
    const double piece = (rho[i] * m[i] + rho[i + 1] * m[i + 1]) * (rho[i + 1] - rho[i]);
    body += piece;
    if (rho[i + 1] <= out.split) out.below_split += piece;
  }
  const std::size_t n = rho.size() - 1;
  if (m[n] > 0.0) {
    if (n == 0 || m[n - 1] <= 0.0) throw ResolutionError("cannot extrapolate the tail beyond the threshold grid");
    const double p = -std::log(m[n] / m[n - 1]) / std::log(rho[n] / rho[n - 1]);
    if (!(p > 2.0)) throw ResolutionError("tail beyond the threshold grid decays too slowly to extrapolate");
    out.tail = 2.0 * m[n] * rho[n] * rho[n] / (p - 2.0);
  }
  out.layer_cake = out.head + body + out.tail;
  out.discrepancy = direct_integral > 0.0 ? std::abs(out.layer_cake - direct_integral) / direct_integral
                                          : std::abs(out.layer_cake);
  if (out.discrepancy > 0.1) {
    std::ostringstream msg;
    msg << "layer-cake integral differs from direct quadrature by " << 100.0 * out.discrepancy
        << "%; refine the threshold grid";
    throw ResolutionError(msg.str());
  }
  return out;
}

BeltramiCoefficient random_annulus_dilatation(const GridSpec& spec, double k, std::uint64_t seed, double inner,
                                              double outer) {
  if (!(inner > 1.0) || !(outer > inner)) throw DomainError("annulus must satisfy 1 < inner < outer");
  if (outer > 0.5 * spec.half_width()) throw ResolutionError("annulus leaves the guard band");
  constexpr int bands = 5;
  constexpr int sectors = 24;
  ComplexField raw = ComplexField::from_function(spec, [&](cplx z) -> cplx {
    const double r = std::abs(z);
    if (r < inner || r > outer) return 0.0;
    const int band = std::min(bands - 1, static_cast<int>((r - inner) / (outer - inner) * bands));
    const double angle = std::arg(z) + std::numbers::pi;
    const int sector = std::min(sectors - 1, static_cast<int>(angle / (2.0 * std::numbers::pi) * sectors));
    const double phase =
        2.0 * std::numbers::pi * unit_hash(derive_seed(seed, static_cast<std::uint64_t>(band * sectors + sector)));
    return std::polar(k, phase);
  });
  return make_coefficient(std::move(raw), k);
}

SolverTailReport solver_backed_riemann_tail(double k, std::uint64_t seed, const SolverTailOptions& options) {
  QcConstants::from_k(k);
  SolverTailReport out;
  out.k = k;
  out.seed = seed;
  const GridSpec spec(options.half_width, options.resolution);
  PrincipalMapSolution f =
      solve_principal(random_annulus_dilatation(spec, k, seed, options.inner_radius, options.outer_radius));
  f.interpolation = Interpolation::bicubic;
  out.iterations = f.iterations;
  out.residual = f.residual;

  const double r = 4.0 * spec.spacing();
  const ScalarSampler g = [&f, r](cplx z) { return std::abs(derivative_on_conformal_disk(f, z, r).value); };
  double lo = INFINITY, hi = 0.0;
  const int n = spec.resolution();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx z = spec.point(i, j);
      if (std::abs(z) > options.disk_radius) continue;
      const double v = g(z);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) {
    lo = 0.5 * lo;
    hi = 2.0 * hi;
  }
  std::vector<double> thresholds(static_cast<std::size_t>(options.thresholds));
  for (int i = 0; i < options.thresholds; ++i)
    thresholds[i] = 0.98 * lo * std::pow(1.02 * hi / (0.98 * lo), static_cast<double>(i) / (options.thresholds - 1));

  TailOptions tail_opt;
  tail_opt.quadrature.base_resolution = options.base_resolution;
  tail_opt.quadrature.log_tolerance = 1e-2;
  tail_opt.fit_min_fraction = 0.01;
  tail_opt.fit_max_fraction = 0.5;
  tail_opt.min_decades = 0.0;
  out.tails = k > 0.0 ? tail_statistics(g, k, thresholds, AreaRegion::disk(0.0, options.disk_radius), tail_opt)
                      : TailStatistics{};
  out.reference_slope = k > 0.0 ? -2.0 / k : -INFINITY;
  out.pass = k == 0.0 || out.tails.fit_count < 2 || out.tails.slope <= out.reference_slope + 0.1;
  return out;
}

}  // namespace qclab
