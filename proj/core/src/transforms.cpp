#include "qclab/transforms.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qclab/errors.hpp"
#include "qclab/fft.hpp"

namespace qclab {

namespace {

constexpr cplx I{0.0, 1.0};

cplx beurling_symbol(cplx zeta) { return std::conj(zeta) / zeta; }
cplx cauchy_symbol(cplx zeta) { return -2.0 * I / zeta; }
cplx d_bar_symbol(cplx zeta) { return 0.5 * I * zeta; }
cplx d_z_symbol(cplx zeta) { return 0.5 * I * std::conj(zeta); }

void check_guard_band(const ComplexField& f, const char* op) {
  const double outside = f.outside_guard_band();
  if (outside > 1e-12 * std::max(1.0, f.sup_norm())) {
    std::ostringstream msg;
    msg << op << ": input not supported in the guard band (max |f| outside = " << outside << ")";
    warn(msg.str());
  }
}

}  // namespace

FourierMultiplier beurling_multiplier() noexcept { return {beurling_symbol, 0.0}; }
FourierMultiplier cauchy_multiplier() noexcept { return {cauchy_symbol, 0.0}; }
FourierMultiplier d_bar_multiplier() noexcept { return {d_bar_symbol, 0.0}; }
FourierMultiplier d_z_multiplier() noexcept { return {d_z_symbol, 0.0}; }

cplx dual_frequency(const GridSpec& spec, int p, int q) noexcept {
  const int n = spec.resolution();
  const double scale = std::numbers::pi / spec.half_width();
  return {scale * fft::signed_frequency(p, n), scale * fft::signed_frequency(q, n)};
}

void apply_multiplier_in_place(ComplexField& f, const FourierMultiplier& m) {
  const GridSpec& spec = f.spec();
  const int n = spec.resolution();
  fft::forward(f.samples(), n);
  // Grid origin -L shifts every mode by a unimodular phase that the inverse
  // transform undoes, so the symbol can act on raw DFT coefficients.
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      cplx& c = f(p, q);
      if (p == 0 && q == 0)
        c *= m.dc_value;
      else
        c *= m.symbol(dual_frequency(spec, p, q));
    }
  }
  fft::inverse(f.samples(), n);
}

ComplexField apply_multiplier(const ComplexField& f, const FourierMultiplier& m) {
  ComplexField out = f;
  apply_multiplier_in_place(out, m);
  return out;
}

ComplexField beurling_transform(const ComplexField& f) {
  check_guard_band(f, "beurling_transform");
  return apply_multiplier(f, beurling_multiplier());
}

ComplexField cauchy_transform(const ComplexField& f) {
  check_guard_band(f, "cauchy_transform");
  return apply_multiplier(f, cauchy_multiplier());
}

ComplexField planar_cauchy_transform(const ComplexField& f) {
  check_guard_band(f, "planar_cauchy_transform");
  ComplexField out = apply_multiplier(f, cauchy_multiplier());
  const GridSpec& spec = f.spec();
  const int n = spec.resolution();
  const double cell = spec.spacing() * spec.spacing();
  cplx moment0 = 0.0;
  cplx moment1 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      moment0 += f(i, j);
      moment1 += f(i, j) * std::conj(spec.point(i, j));
    }
  }
  moment0 *= cell;
  moment1 *= cell;
  const double area = 4.0 * spec.half_width() * spec.half_width();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) += (std::conj(spec.point(i, j)) * moment0 - moment1) / area;
  return out;
}

ComplexField d_bar(const ComplexField& f) { return apply_multiplier(f, d_bar_multiplier()); }
ComplexField d_z(const ComplexField& f) { return apply_multiplier(f, d_z_multiplier()); }

}  // namespace qclab
