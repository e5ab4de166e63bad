#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qclab/distortion.hpp"
#include "qclab/errors.hpp"
#include "qclab/random_dilatation.hpp"

using namespace qclab;

TEST_CASE("exponent t(k)") {
  CHECK(std::abs(exponent_t_of_k(2.0, 0.7) - 2.0) <= 1e-14);
  CHECK(std::abs(exponent_t_of_k(1.0, 0.5) - 1.25) <= 1e-14);
  CHECK(std::abs(exponent_t_of_k(0.8, 0.0) - 0.8) <= 1e-14);
  // the defining relation
  for (double t : {0.3, 0.9, 1.7})
    for (double k : {0.1, 0.5, 0.9}) {
      const double tk = exponent_t_of_k(t, k);
      CHECK(1 / tk - 0.5 == doctest::Approx((1 - k * k) / (1 + k * k) * (1 / t - 0.5)).epsilon(1e-13));
    }
  CHECK_THROWS_AS(exponent_t_of_k(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(exponent_t_of_k(2.5, 0.5), DomainError);
  CHECK_THROWS_AS(exponent_t_of_k(1.0, 1.0), DomainError);
}

TEST_CASE("layout validation") {
  CHECK_NOTHROW(validate_layout({{-0.5, 0.2}, {0.3, 0.1}}));
  CHECK_THROWS_AS(validate_layout({}), DomainError);
  CHECK_THROWS_AS(validate_layout({{0.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(validate_layout({{0.9, 0.2}}), DomainError);
  CHECK_THROWS_AS(validate_layout({{0.0, 0.3}, {0.5, 0.25}}), DomainError);
  for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK_NOTHROW(validate_layout(random_disk_layout(64, seed)));
  const auto regular = regular_disk_layout(3, 0.1, 0.5);
  CHECK(regular.size() == 8);
  CHECK_NOTHROW(validate_layout(regular, 0.1, 0.5));
}

TEST_CASE("seed derivation") {
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  CHECK(derive_seed(7, 3) != derive_seed(7, 4));
  CHECK(derive_seed(7, 3) != derive_seed(8, 3));
  const double u = unit_hash(12345);
  CHECK(u >= 0.0);
  CHECK(u < 1.0);
}

TEST_CASE("random antisymmetric dilatation avoids the disks") {
  const GridSpec spec(4.0, 256);
  const std::vector<DiskOnLine> disks{{-0.4, 0.2}, {0.35, 0.15}};
  const Region avoid = disks_region(disks);
  const BeltramiCoefficient mu = random_antisymmetric_dilatation(spec, 0.4, 17, avoid);
  CHECK(antisymmetry_defect(mu.field) <= 1e-15);
  CHECK(mu.field.sup_norm() <= 0.4 + 1e-15);
  CHECK(mu.field.sup_norm() >= 0.4 - 1e-12);
  for (int i = 0; i < 256; ++i)
    for (int j = 0; j < 256; ++j) {
      const cplx z = spec.point(i, j);
      if (avoid.contains(z) || std::abs(z) > 1.0) REQUIRE(mu.field(i, j) == cplx(0.0));
    }
  const BeltramiCoefficient again = random_antisymmetric_dilatation(spec, 0.4, 17, avoid);
  CHECK(relative_l2_error(again.field, mu.field) == 0.0);
}

TEST_CASE("zero dilatation: hand arithmetic") {
  const GridSpec spec(4.0, 128);
  const PrincipalMapSolution id = identity_solution(spec);
  const SmirnovReport r = smirnov_report(id, {{0.0, 0.25}}, 0.5, 1.0, 0);
  CHECK(r.t_of_k == doctest::Approx(1.25));
  CHECK(r.lhs == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r.rhs == doctest::Approx(8.0 * std::pow(0.25, 0.6)).epsilon(1e-12));
  CHECK(r.pass);

  const std::vector<DiskOnLine> disks{{-0.5, 0.1}, {0.2, 0.3}};
  const SmirnovReport two = smirnov_report(id, disks, 0.3, 1.5, 0);
  const double tk = exponent_t_of_k(1.5, 0.3);
  CHECK(two.lhs == doctest::Approx(std::pow(std::pow(0.1, tk) + std::pow(0.3, tk), 1 / tk)).epsilon(1e-12));

  const CorollaryReport c = corollary_report(id, {{0.1, 0.05}}, 0.0, 0.5, 0.4, 0);
  CHECK(c.ratio == doctest::Approx(std::pow(0.1, 2 * 0.16)).epsilon(1e-12));
}

TEST_CASE("Smirnov trial at fixed seed") {
  const TrialGrid grid{4.0, 256};
  const auto disks = random_disk_layout(6, 42);
  const SmirnovReport a = run_smirnov_trial(0.4, 1.0, disks, 9, grid);
  const SmirnovReport b = run_smirnov_trial(0.4, 1.0, disks, 9, grid);
  CHECK(a.ratio == b.ratio);
  CHECK(a.nonconformal_disks == 0);
  CHECK(a.pass);
  CHECK_THROWS_AS(run_smirnov_trial(0.4, 1.0, {{0.0, 0.3}, {0.2, 0.3}}, 9, grid), DomainError);
}

TEST_CASE("conformal outside: zero dilatation") {
  const SquareFamily fam({{-0.5, -0.5}, 1.0}, {{2, 0, 0}, {2, 2, 1}, {3, 7, 7}}, 1.0);
  ConformalOutsideOptions opt;
  opt.k = 0.0;
  opt.resolution = 256;
  opt.tau_bound = 4.0;
  opt.alpha_bound = 4.0;
  const ConformalOutsideReport r = run_conformal_outside_trial(fam, opt);
  CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.preconditions_verified);

  opt.alpha_bound = 1e-3;
  CHECK_FALSE(run_conformal_outside_trial(fam, opt).preconditions_verified);
}
