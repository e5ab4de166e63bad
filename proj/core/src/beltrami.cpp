#include "qclab/beltrami.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qclab/errors.hpp"
#include "qclab/transforms.hpp"

namespace qclab {

QcConstants QcConstants::from_k(double k) {
  if (!(k >= 0.0) || !(k < 1.0)) throw InvalidBoundError("dilatation bound k must lie in [0, 1)");
  return {k, (1.0 + k) / (1.0 - k)};
}

QcConstants QcConstants::from_K(double K) {
  if (!(K >= 1.0) || !std::isfinite(K)) throw InvalidBoundError("distortion K must be finite and >= 1");
  return {(K - 1.0) / (K + 1.0), K};
}

std::string_view to_string(Symmetry s) noexcept {
  switch (s) {
    case Symmetry::antisymmetric:
      return "antisymmetric";
    case Symmetry::symmetric:
      return "symmetric";
    case Symmetry::none:
      break;
  }
  return "none";
}

Symmetry symmetry_from_string(std::string_view s) {
  if (s == "none") return Symmetry::none;
  if (s == "antisymmetric") return Symmetry::antisymmetric;
  if (s == "symmetric") return Symmetry::symmetric;
  throw ConfigError("unknown symmetry '" + std::string(s) + "'");
}

namespace {

void check_bound(double k) {
  if (!(k >= 0.0) || !(k < 1.0)) throw InvalidBoundError("dilatation bound must satisfy 0 <= k < 1");
}

void clip_and_mask(ComplexField& field, double k, const Region& support) {
  const GridSpec& spec = field.spec();
  const int n = spec.resolution();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cplx& v = field(i, j);
      if (!support.empty() && !support.contains(spec.point(i, j))) {
        v = 0.0;
        continue;
      }
      const double a = std::abs(v);
      if (a > k) v *= k / a;
    }
  }
}

// Fill rows below the axis from rows above it; sign = -1 antisymmetric, +1 symmetric.
ComplexField reflect(const ComplexField& raw, double sign) {
  const GridSpec& spec = raw.spec();
  const int n = spec.resolution();
  const int axis = spec.real_axis_row();
  ComplexField out(spec);
  for (int i = 0; i < n; ++i) {
    for (int j = axis + 1; j < n; ++j) {
      out(i, j) = raw(i, j);
      out(i, spec.mirror_row(j)) = sign * std::conj(raw(i, j));
    }
    out(i, axis) = 0.0;
    out(i, 0) = 0.0;
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

void fill_decay_diagnostics(PrincipalMapSolution& sol) {
  const GridSpec& spec = sol.spec();
  const int n = spec.resolution();
  const double ring = 0.8 * spec.half_width();
  std::vector<double> values;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx z = spec.point(i, j);
      if (std::max(std::abs(z.real()), std::abs(z.imag())) >= ring)
        values.push_back(std::abs(z) * std::abs(sol.displacement(i, j)));
    }
  }
  sol.decay_max = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  sol.decay_median = median(std::move(values));
}

// Keys cubic convolution kernel (a = -1/2); reproduces quadratics.
double keys_weight(double s) {
  s = std::abs(s);
  if (s < 1.0) return (1.5 * s - 2.5) * s * s + 1.0;
  if (s < 2.0) return ((-0.5 * s + 2.5) * s - 4.0) * s + 2.0;
  return 0.0;
}

}  // namespace

BeltramiCoefficient make_coefficient(ComplexField raw, double k, Region support) {
  check_bound(k);
  clip_and_mask(raw, k, support);
  return {std::move(raw), k, Symmetry::none, std::move(support)};
}

BeltramiCoefficient make_antisymmetric(const ComplexField& raw, double k, Region support) {
  check_bound(k);
  ComplexField clipped = raw;
  clip_and_mask(clipped, k, support);
  return {reflect(clipped, -1.0), k, Symmetry::antisymmetric, std::move(support)};
}

BeltramiCoefficient make_symmetric(const ComplexField& raw, double k, Region support) {
  check_bound(k);
  ComplexField clipped = raw;
  clip_and_mask(clipped, k, support);
  return {reflect(clipped, 1.0), k, Symmetry::symmetric, std::move(support)};
}

double antisymmetry_defect(const ComplexField& mu) {
  const GridSpec& spec = mu.spec();
  const int n = spec.resolution();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(mu(i, j) + std::conj(mu(i, spec.mirror_row(j)))));
  return worst;
}

PrincipalMapSolution identity_solution(const GridSpec& spec) {
  PrincipalMapSolution sol{BeltramiCoefficient{ComplexField(spec), 0.0, Symmetry::none, {}},
                           ComplexField(spec), ComplexField(spec)};
  return sol;
}

PrincipalMapSolution solve_principal(const BeltramiCoefficient& mu, const SolverOptions& options) {
  check_bound(mu.bound);
  if (options.max_iter < 1) throw ConfigError("max_iter must be positive");
  const double sup = mu.field.sup_norm();
  if (sup > mu.bound * (1.0 + 1e-12) + 1e-15)
    throw InvalidBoundError("coefficient samples exceed the declared bound");
  if (sup >= 1.0) throw InvalidBoundError("coefficient reaches modulus 1");

  const GridSpec& spec = mu.field.spec();
  PrincipalMapSolution sol{mu, ComplexField(spec), ComplexField(spec)};
  const double mu_norm = mu.field.l2_norm();
  if (mu_norm == 0.0) {
    fill_decay_diagnostics(sol);
    return sol;
  }

  const FourierMultiplier beurling = beurling_multiplier();
  ComplexField h = mu.field;
  for (int it = 0; it < options.max_iter; ++it) {
    ComplexField next = apply_multiplier(h, beurling);
    next.multiply(mu.field);
    next += mu.field;
    const double residual = (next - h).l2_norm() / mu_norm;
    sol.residual_history.push_back(residual);
    h = std::move(next);
    if (residual <= options.tol) {
      sol.residual = residual;
      sol.iterations = it + 1;
      sol.h_field = std::move(h);
      sol.displacement = planar_cauchy_transform(sol.h_field);
      fill_decay_diagnostics(sol);
      return sol;
    }
  }
  std::ostringstream msg;
  msg << "Neumann iteration did not reach tol " << options.tol << " in " << options.max_iter
      << " iterations (last residual " << sol.residual_history.back() << ")";
  throw ConvergenceError(msg.str(), sol.residual_history.back(), options.max_iter);
}

PrincipalMapSolution solution_from_displacement(ComplexField displacement, Interpolation interp) {
  const GridSpec spec = displacement.spec();
  PrincipalMapSolution sol{BeltramiCoefficient{ComplexField(spec), 0.0, Symmetry::none, {}}, ComplexField(spec),
                           std::move(displacement)};
  sol.interpolation = interp;
  fill_decay_diagnostics(sol);
  return sol;
}

cplx interpolate(const ComplexField& field, cplx z, Interpolation interp) {
  const GridSpec& spec = field.spec();
  if (!spec.contains(z)) {
    std::ostringstream msg;
    msg << "point " << z << " lies outside the sampled square [-L, L)^2, L = " << spec.half_width();
    throw OutOfDomainError(msg.str());
  }
  const int n = spec.resolution();
  const double h = spec.spacing();
  const double L = spec.half_width();
  const double u = (z.real() + L) / h;
  const double v = (z.imag() + L) / h;

  if (interp == Interpolation::bilinear) {
    // Last column/row extrapolates from the final interior cell instead of wrapping.
    const int i0 = std::clamp(static_cast<int>(std::floor(u)), 0, n - 2);
    const int j0 = std::clamp(static_cast<int>(std::floor(v)), 0, n - 2);
    const double s = u - i0;
    const double t = v - j0;
    return (1 - s) * (1 - t) * field(i0, j0) + s * (1 - t) * field(i0 + 1, j0) + (1 - s) * t * field(i0, j0 + 1) +
           s * t * field(i0 + 1, j0 + 1);
  }

  const int i0 = std::clamp(static_cast<int>(std::floor(u)) - 1, 0, n - 4);
  const int j0 = std::clamp(static_cast<int>(std::floor(v)) - 1, 0, n - 4);
  double wx[4];
  double wy[4];
  for (int a = 0; a < 4; ++a) {
    wx[a] = keys_weight(u - (i0 + a));
    wy[a] = keys_weight(v - (j0 + a));
  }
  cplx acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    cplx row = 0.0;
    for (int b = 0; b < 4; ++b) row += wy[b] * field(i0 + a, j0 + b);
    acc += wx[a] * row;
  }
  return acc;
}

cplx evaluate(const PrincipalMapSolution& f, cplx z, Interpolation interp) {
  return z + interpolate(f.displacement, z, interp);
}

cplx evaluate(const PrincipalMapSolution& f, cplx z) { return evaluate(f, z, f.interpolation); }

DerivativeEstimate derivative_on_conformal_disk(const PrincipalMapSolution& f, cplx center, double radius,
                                                int samples) {
  if (samples < 8) throw DomainError("derivative_on_conformal_disk needs at least 8 angular samples");
  if (!(radius > 0.0)) throw DomainError("disk radius must be positive");

  DerivativeEstimate est;
  const GridSpec& spec = f.spec();
  const double h = spec.spacing();
  const int n = spec.resolution();
  const double L = spec.half_width();
  const int i_lo = std::max(0, static_cast<int>(std::floor((center.real() - radius + L) / h)));
  const int i_hi = std::min(n - 1, static_cast<int>(std::ceil((center.real() + radius + L) / h)));
  const int j_lo = std::max(0, static_cast<int>(std::floor((center.imag() - radius + L) / h)));
  const int j_hi = std::min(n - 1, static_cast<int>(std::ceil((center.imag() + radius + L) / h)));
  for (int i = i_lo; i <= i_hi; ++i)
    for (int j = j_lo; j <= j_hi; ++j)
      if (std::abs(spec.point(i, j) - center) < radius)
        est.max_dilatation_on_disk = std::max(est.max_dilatation_on_disk, std::abs(f.coefficient.field(i, j)));
  if (est.max_dilatation_on_disk > 1e-12) {
    est.conformal = false;
    std::ostringstream msg;
    msg << "dilatation reaches " << est.max_dilatation_on_disk << " on B(" << center << ", " << radius << ")";
    est.warning = msg.str();
  }

  const double rho = 0.25 * radius;
  const cplx base = interpolate(f.displacement, center, f.interpolation);
  cplx acc = 0.0;
  for (int q = 0; q < samples; ++q) {
    const cplx w = std::polar(rho, 2.0 * std::numbers::pi * q / samples);
    acc += (interpolate(f.displacement, center + w, f.interpolation) - base) / w;
  }
  est.value = 1.0 + acc / static_cast<double>(samples);
  return est;
}

std::pair<BeltramiCoefficient, BeltramiCoefficient> truncate_dilatation(const BeltramiCoefficient& mu,
                                                                        const Region& region) {
  const GridSpec& spec = mu.field.spec();
  const int n = spec.resolution();
  ComplexField inside(spec);
  ComplexField outside(spec);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (region.contains(spec.point(i, j)))
        inside(i, j) = mu.field(i, j);
      else
        outside(i, j) = mu.field(i, j);
    }
  }
  const Symmetry kept = region.conjugation_symmetric() ? mu.symmetry : Symmetry::none;
  return {BeltramiCoefficient{std::move(inside), mu.bound, kept, region},
          BeltramiCoefficient{std::move(outside), mu.bound, kept, mu.support}};
}

BeltramiCoefficient second_factor_coefficient(const BeltramiCoefficient& mu_f, const PrincipalMapSolution& f1,
                                              double jacobian_threshold) {
  const GridSpec& spec = mu_f.field.spec();
  if (!(spec == f1.spec())) throw ConfigError("second_factor_coefficient: grids differ");
  check_bound(mu_f.bound);
  const int n = spec.resolution();
  const double h = spec.spacing();
  const ComplexField& mu1 = f1.coefficient.field;

  // d f1 = 1 + S h1
  ComplexField df1 = apply_multiplier(f1.h_field, beurling_multiplier());
  for (cplx& v : df1.samples()) v += 1.0;

  ComplexField pulled(spec);
  bool any = false;
  double lo_x = INFINITY, hi_x = -INFINITY, lo_y = INFINITY, hi_y = -INFINITY;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx a = mu_f.field(i, j);
      const cplx b = mu1(i, j);
      if (std::abs(a - b) == 0.0) continue;
      const cplx d = df1(i, j);
      if (std::abs(d) < jacobian_threshold) {
        std::ostringstream msg;
        msg << "|d f1| = " << std::abs(d) << " below threshold at " << spec.point(i, j);
        throw DegenerateError(msg.str());
      }
      pulled(i, j) = (a - b) / (1.0 - std::conj(b) * a) * (d / std::conj(d));
      const cplx w = spec.point(i, j) + f1.displacement(i, j);
      lo_x = std::min(lo_x, w.real());
      hi_x = std::max(hi_x, w.real());
      lo_y = std::min(lo_y, w.imag());
      hi_y = std::max(hi_y, w.imag());
      any = true;
    }
  }

  ComplexField nu(spec);
  double sup = 0.0;
  if (any) {
    const MapInverter inverse(f1);
    const double L = spec.half_width();
    const int i_lo = std::max(0, static_cast<int>(std::floor((lo_x - 2 * h + L) / h)));
    const int i_hi = std::min(n - 1, static_cast<int>(std::ceil((hi_x + 2 * h + L) / h)));
    const int j_lo = std::max(0, static_cast<int>(std::floor((lo_y - 2 * h + L) / h)));
    const int j_hi = std::min(n - 1, static_cast<int>(std::ceil((hi_y + 2 * h + L) / h)));
    for (int i = i_lo; i <= i_hi; ++i) {
      for (int j = j_lo; j <= j_hi; ++j) {
        const cplx z = inverse(spec.point(i, j));
        const int ni = std::clamp(static_cast<int>(std::lround((z.real() + L) / h)), 0, n - 1);
        const int nj = std::clamp(static_cast<int>(std::lround((z.imag() + L) / h)), 0, n - 1);
        nu(i, j) = pulled(ni, nj);
        sup = std::max(sup, std::abs(nu(i, j)));
      }
    }
  }
  const double bound = std::max(mu_f.bound, sup);
  if (bound >= 1.0) throw InvalidBoundError("second factor dilatation reaches modulus 1");
  return {std::move(nu), bound, Symmetry::none, {}};
}

}  // namespace qclab
