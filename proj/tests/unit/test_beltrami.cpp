#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qclab/beltrami.hpp"
#include "qclab/errors.hpp"

using namespace qclab;

namespace {

ComplexField radial_mu_raw(const GridSpec& spec) {
  return ComplexField::from_function(spec, [](cplx z) {
    if (std::abs(z) > 1.0 || z == cplx(0.0)) return cplx(0.0);
    return (1.0 / 3.0) * z / std::conj(z);
  });
}

ComplexField random_disk_field(const GridSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  return ComplexField::from_function(spec, [&](cplx z) {
    const double a = phase(rng);
    return std::abs(z) < 1.0 ? std::polar(1.0, a) : cplx(0.0);
  });
}

}  // namespace

TEST_CASE("distortion constants") {
  const auto c = QcConstants::from_K(2.0);
  CHECK(c.k == doctest::Approx(1.0 / 3.0));
  CHECK(QcConstants::from_k(1.0 / 3.0).K == doctest::Approx(2.0));
  CHECK_THROWS_AS(QcConstants::from_k(1.0), InvalidBoundError);
  CHECK(symmetry_from_string(to_string(Symmetry::antisymmetric)) == Symmetry::antisymmetric);
}

TEST_CASE("antisymmetric coefficients") {
  const GridSpec spec(4.0, 64);
  const int n = spec.resolution();
  CHECK_THROWS_AS(make_antisymmetric(ComplexField(spec), 1.0), InvalidBoundError);
  CHECK(make_antisymmetric(ComplexField(spec), 0.5).field.sup_norm() == 0.0);

  const cplx c = std::polar(0.4, 0.7);
  const ComplexField raw = ComplexField::from_function(
      spec, [&](cplx z) { return std::abs(z) <= 1.0 && z.imag() > 0 ? c : cplx(0.0); });
  const BeltramiCoefficient mu = make_antisymmetric(raw, 0.4);
  CHECK(mu.symmetry == Symmetry::antisymmetric);
  CHECK(antisymmetry_defect(mu.field) == 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx z = spec.point(i, j);
      cplx want = 0.0;
      if (std::abs(z) <= 1.0 && z.imag() > 0) want = c;
      if (std::abs(z) <= 1.0 && z.imag() < 0) want = -std::conj(c);
      REQUIRE(mu.field(i, j) == want);
    }

  const BeltramiCoefficient twice = make_antisymmetric(mu.field, 0.4);
  CHECK(relative_l2_error(twice.field, mu.field) == 0.0);

  // clipping to the bound
  const BeltramiCoefficient clipped = make_antisymmetric(raw, 0.2);
  CHECK(clipped.field.sup_norm() == doctest::Approx(0.2));
}

TEST_CASE("zero dilatation gives the identity") {
  const GridSpec spec(4.0, 128);
  const PrincipalMapSolution f = solve_principal(make_coefficient(ComplexField(spec), 0.0));
  CHECK(f.iterations == 0);
  CHECK(f.displacement.sup_norm() <= 1e-12);
  CHECK(evaluate(f, {0.3, -0.2}) == cplx(0.3, -0.2));
}

TEST_CASE("radial stretch K = 2") {
  const GridSpec spec(4.0, 512);
  const BeltramiCoefficient mu = make_coefficient(radial_mu_raw(spec), 1.0 / 3.0, Region::disk(0.0, 1.0));
  const PrincipalMapSolution f = solve_principal(mu);
  CHECK(f.residual <= 1e-8);
  // geometric convergence at a rate close to k
  const auto& hist = f.residual_history;
  REQUIRE(hist.size() > 4);
  CHECK(std::pow(hist.back() / hist.front(), 1.0 / (hist.size() - 1)) <= 1.0 / 3.0 + 0.05);
  for (double r : {0.25, 0.5, 0.75, 1.5})
    for (int a = 0; a < 8; ++a) {
      const cplx z = std::polar(r, 2 * std::numbers::pi * a / 8 + 0.1);
      const cplx want = r <= 1.0 ? z * r : z;
      CHECK(std::abs(evaluate(f, z) - want) <= 0.02 * std::abs(want));
    }
  CHECK(std::abs(evaluate(f, 0.5) - 0.25) <= 0.005);
}

TEST_CASE("non-convergence carries the last residual") {
  const GridSpec spec(4.0, 64);
  const BeltramiCoefficient mu = make_coefficient(random_disk_field(spec, 3) * 0.9, 0.9);
  try {
    solve_principal(mu, {1e-12, 2});
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.last_residual() > 1e-12);
    CHECK(e.iterations() == 2);
  }
}

TEST_CASE("symmetric dilatation preserves the real axis") {
  const GridSpec spec(4.0, 256);
  // smooth and away from the axis, so the Nyquist modes carry nothing
  const ComplexField raw = ComplexField::from_function(spec, [](cplx z) {
    const double q = std::norm(z - cplx(0.1, 0.5)) / 0.16;
    return q < 1 ? 0.5 * std::exp(1 - 1 / (1 - q)) * std::polar(1.0, 3 * z.real()) : cplx(0.0);
  });
  const BeltramiCoefficient mu = make_symmetric(raw, 0.5);
  const PrincipalMapSolution f = solve_principal(mu);
  const int j0 = spec.real_axis_row();
    // exact up to the solver tolerance
  for (int i = 0; i < spec.resolution(); i += 7) CHECK(std::abs(evaluate(f, spec.point(i, j0)).imag()) <= 1e-8);
}

TEST_CASE("manufactured holomorphic displacement") {
  const GridSpec spec(2.0, 512);
  const ComplexField disp = ComplexField::from_function(spec, [](cplx z) { return z * z - z; });
  const PrincipalMapSolution f = solution_from_displacement(disp, Interpolation::bicubic);
  for (cplx z0 : {cplx(0.3, 0.2), cplx(-0.5, 0.1), cplx(0.0, -0.4)}) {
    const DerivativeEstimate d = derivative_on_conformal_disk(f, z0, 0.2);
    CHECK(d.conformal);
    CHECK(std::abs(d.value - 2.0 * z0) <= 1e-6);
  }
  CHECK(evaluate(f, spec.point(100, 200)) == spec.point(100, 200) + disp(100, 200));
  CHECK_THROWS_AS(evaluate(f, {5.0, 0.0}), OutOfDomainError);
}

TEST_CASE("derivative estimate flags dilatation on the disk") {
  const GridSpec spec(4.0, 128);
  const BeltramiCoefficient mu = make_coefficient(radial_mu_raw(spec), 1.0 / 3.0);
  const PrincipalMapSolution f = solve_principal(mu);
  const DerivativeEstimate d = derivative_on_conformal_disk(f, 0.5, 0.2);
  CHECK_FALSE(d.conformal);
  CHECK_FALSE(d.warning.empty());
  CHECK(derivative_on_conformal_disk(f, {0.0, 1.8}, 0.3).conformal);
}

TEST_CASE("numerical inverse") {
  const GridSpec spec(4.0, 256);
  const PrincipalMapSolution f = solve_principal(make_antisymmetric(random_disk_field(spec, 9) * 0.5, 0.5));
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.7, 0.3), cplx(0.4, -0.6), cplx(1.5, 0.5)}) {
    const cplx w = evaluate(f, z);
    const cplx back = numerical_inverse(f, w);
    CHECK(std::abs(evaluate(f, back) - w) <= spec.spacing());
    CHECK(std::abs(back - z) <= 2 * spec.spacing());
  }
  CHECK_THROWS_AS(numerical_inverse(f, {40.0, 0.0}), OutOfDomainError);
}

TEST_CASE("truncation splits the coefficient") {
  const GridSpec spec(4.0, 64);
  const BeltramiCoefficient mu = make_antisymmetric(random_disk_field(spec, 2) * 0.3, 0.3);
  const Region v = Region::disk(0.0, 0.5);
  const auto [in, out] = truncate_dilatation(mu, v);
  CHECK(relative_l2_error(in.field + out.field, mu.field) == 0.0);
  CHECK(in.symmetry == Symmetry::antisymmetric);
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      const cplx z = spec.point(i, j);
      if (v.contains(z))
        REQUIRE(out.field(i, j) == cplx(0.0));
      else
        REQUIRE(in.field(i, j) == cplx(0.0));
    }
  const auto off = truncate_dilatation(mu, Region::disk({0.0, 0.5}, 0.3));
  CHECK(off.first.symmetry == Symmetry::none);
}

TEST_CASE("solution cache round trip") {
  const GridSpec spec(4.0, 64);
  const PrincipalMapSolution f = solve_principal(make_antisymmetric(random_disk_field(spec, 4) * 0.4, 0.4));
  std::stringstream buf;
  save_solution(f, buf);
  const PrincipalMapSolution g = load_solution(buf);
  CHECK(g.spec() == f.spec());
  CHECK(relative_l2_error(g.displacement, f.displacement) == 0.0);
  CHECK(relative_l2_error(g.coefficient.field, f.coefficient.field) == 0.0);
  CHECK(g.coefficient.symmetry == Symmetry::antisymmetric);
  CHECK(g.iterations == f.iterations);

  std::stringstream junk("not a solution");
  CHECK_THROWS_AS(load_solution(junk), Error);
}
