#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qclab/errors.hpp"
#include "qclab/hausdorff.hpp"

using namespace qclab;

namespace {

PrincipalMapSolution radial_stretch(const GridSpec& spec) {
  const ComplexField raw = ComplexField::from_function(spec, [](cplx z) {
    return std::abs(z) > 1.0 || z == cplx(0.0) ? cplx(0.0) : (1.0 / 3.0) * z / std::conj(z);
  });
  PrincipalMapSolution f = solve_principal(make_coefficient(raw, 1.0 / 3.0));
  f.interpolation = Interpolation::bicubic;
  return f;
}

}  // namespace

TEST_CASE("covering sums of the identity") {
  set_warning_sink(nullptr);
  const GridSpec spec(2.0, 512);
  const PrincipalMapSolution id = identity_solution(spec);
  const std::vector<Interval> e{{-0.5, -0.1}, {0.2, 0.5}};
  const CoveringSumSeries one = covering_sums(id, e, 0.0, 0.5, 1.0, 5, 0.0);
  REQUIRE(one.records.size() == 5);
  CHECK_FALSE(one.truncated);
  for (const auto& r : one.records) CHECK(r.sum == doctest::Approx(0.7).epsilon(1e-12));

  const std::vector<Interval> whole{{-0.5, 0.5}};
  const CoveringSumSeries s125 = covering_sums(id, whole, 0.0, 0.5, 1.25, 5, 0.0);
  for (const auto& r : s125.records) {
    CHECK(r.count == (std::int64_t{1} << r.generation));
    CHECK(r.sum == doctest::Approx(std::pow(2.0, -0.25 * r.generation)).epsilon(1e-12));
  }
  CHECK(std::isnan(s125.sum_at(12)));
}

TEST_CASE("covering sums stop above four grid spacings") {
  const GridSpec spec(2.0, 256);
  const CoveringSumSeries s = covering_sums(identity_solution(spec), {{-0.5, 0.5}}, 0.0, 0.5, 1.0, 10, 0.0);
  CHECK(s.truncated);
  CHECK(s.records.size() == 4);  // 2^-4 = 4 h
  CHECK_THROWS_AS(covering_sums(identity_solution(spec), {{-0.5, 1.5}}, 0.0, 0.5, 1.0, 3, 0.0), DomainError);
}

TEST_CASE("radial stretch image length") {
  const GridSpec spec(4.0, 512);
  const PrincipalMapSolution f = radial_stretch(spec);
  const CoveringSumSeries s = covering_sums(f, {{-0.5, 0.5}}, 0.0, 0.5, 1.0, 4, 1.0 / 3.0);
  for (const auto& r : s.records) CHECK(std::abs(r.sum - 0.5) <= 0.05 * 0.5);
}

TEST_CASE("main check on a straight line") {
  const GridSpec spec(2.0, 512);
  const PrincipalMapSolution line = generate_quasiline(0.0, 5, spec);
  CHECK(line.displacement.sup_norm() == 0.0);
  const MainCheckReport r = theorem_main_check(line, 0.0, 0.1, 0.3, 5);
  REQUIRE(r.preimage.size() == 1);
  CHECK(r.preimage.front().a == doctest::Approx(-0.2).epsilon(1e-9));
  CHECK(r.preimage.front().b == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(r.sup_ratio == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("quasiline reproducibility and quasisymmetry") {
  const GridSpec spec(2.0, 256);
  const PrincipalMapSolution a = generate_quasiline(0.3, 11, spec);
  const PrincipalMapSolution b = generate_quasiline(0.3, 11, spec);
  CHECK(relative_l2_error(a.displacement, b.displacement) == 0.0);
  CHECK(antisymmetry_defect(a.coefficient.field) == 0.0);
  CHECK(quasisymmetry_ratio(identity_solution(spec), -0.5, 0.5, 5) == doctest::Approx(1.0));
  const double q = quasisymmetry_ratio(a, -0.5, 0.5, 5);
  CHECK(q >= 1.0);
  CHECK(q <= 4.0);
}

TEST_CASE("box dimension of smooth curves") {
  const int count = 200000;
  std::vector<cplx> segment, circle;
  for (int p = 0; p < count; ++p) {
    const double s = p / (count - 1.0);
    segment.push_back(std::polar(1.8 * s, 0.3) - cplx(0.8, 0.2));
    circle.push_back(std::polar(0.7, 2 * std::numbers::pi * s));
  }
  // scales well below the curve size, where the box count is ~ length / delta
  CHECK(std::abs(box_dimension(segment, 1.0 / 32, 6).slope - 1.0) <= 0.02);
  CHECK(std::abs(box_dimension(circle, 1.0 / 32, 6).slope - 1.0) <= 0.02);

  const GridSpec spec(2.0, 256);
  const auto line = sample_curve(generate_quasiline(0.0, 1, spec), -0.5, 0.5, count);
  CHECK(std::abs(box_dimension(line, 1.0 / 64, 6).slope - 1.0) <= 0.02);

  CHECK_THROWS_AS(box_dimension(std::vector<cplx>(100), 0.25, 5), DomainError);
  CHECK_THROWS_AS(box_dimension(segment, 0.25, 20), DomainError);
}
