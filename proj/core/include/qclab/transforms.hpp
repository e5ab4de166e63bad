#pragma once

#include "qclab/field.hpp"

namespace qclab {

/// Diagonal operator in the periodic Fourier basis e^{i Re(conj(zeta) z)}.
/// The discrete dual lattice is zeta = (pi/L)(m + i n), m, n in (-N/2, N/2].
struct FourierMultiplier {
  cplx (*symbol)(cplx zeta);
  cplx dc_value;
};

/// conj(zeta)/zeta, dc 0. Unimodular off the origin.
FourierMultiplier beurling_multiplier() noexcept;
/// Inverse of the d_bar symbol (i/2) zeta, dc 0.
FourierMultiplier cauchy_multiplier() noexcept;
FourierMultiplier d_bar_multiplier() noexcept;
FourierMultiplier d_z_multiplier() noexcept;

cplx dual_frequency(const GridSpec& spec, int p, int q) noexcept;

/// No guard-band check; used by inner loops that already validated input.
ComplexField apply_multiplier(const ComplexField& f, const FourierMultiplier& m);
void apply_multiplier_in_place(ComplexField& f, const FourierMultiplier& m);

/// Beurling transform  S f = -(1/pi) p.v. \int f(xi) / (z - xi)^2.
/// Warns (does not throw) when f is not confined to the guard band.
ComplexField beurling_transform(const ComplexField& f);

/// Periodic Cauchy transform: d_bar(cauchy_transform(f)) = f - mean(f).
ComplexField cauchy_transform(const ComplexField& f);

/// Cauchy transform of the planar problem, recovered from the periodic one by
/// undoing the two leading terms of the periodic kernel
///   K(w) = 1/(pi w) - conj(w)/A + O(|w|^3),   A = (2L)^2.
/// Satisfies d_bar = f exactly (not only for mean-zero f) and decays like 1/z.
ComplexField planar_cauchy_transform(const ComplexField& f);

ComplexField d_bar(const ComplexField& f);
ComplexField d_z(const ComplexField& f);

}  // namespace qclab
