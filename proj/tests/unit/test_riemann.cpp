#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qclab/errors.hpp"
#include "qclab/riemann.hpp"

using namespace qclab;

namespace {

const ScalarSampler unit = [](cplx) { return 1.0; };

}  // namespace

TEST_CASE("power map basics") {
  const PowerMapSpec map = PowerMapSpec::make(0.5);
  CHECK(map.derivative_at_origin() == doctest::Approx(0.5 * std::pow(2.0, -0.5)));
  CHECK(std::abs(map.derivative({0.0, 0.0})) == doctest::Approx(map.derivative_at_origin()));
  // numerical derivative
  const cplx z{0.2, -0.3};
  const double eps = 1e-6;
  const cplx fd = (map.value(z + eps) - map.value(z - eps)) / (2 * eps);
  CHECK(std::abs(fd - map.derivative(z)) <= 1e-8);
  // superlevel set is a lens of the stated radius
  const double rho = 3.0;
  const double c = map.superlevel_radius(rho);
  const cplx inside = -1.0 + cplx(0.999 * c, 0.0), outside = -1.0 + cplx(1.001 * c, 0.0);
  CHECK(map.derivative_modulus(inside) > rho);
  CHECK(map.derivative_modulus(outside) < rho);
  CHECK(map.injective_on_samples(2000));
  CHECK_THROWS_AS(PowerMapSpec::make(1.0), InvalidBoundError);
}

TEST_CASE("lens area and cap integral against quadrature") {
  const QuadratureOptions opt{512, 1e-3, 30, 20'000'000};
  CHECK(lens_area(0.0) == 0.0);
  CHECK(lens_area(2.0) == doctest::Approx(std::numbers::pi));
  for (double c : {0.05, 0.4, 1.0, 1.7}) {
    const IntegralResult r = integrate_squared(unit, AreaRegion::unit_disk_cap(-1.0, c), opt);
    CHECK(r.value == doctest::Approx(lens_area(c)).epsilon(2e-3));
  }
  const PowerMapSpec map = PowerMapSpec::make(0.4);
  const ScalarSampler g = [map](cplx z) { return map.derivative_modulus(z); };
  for (double delta : {0.5, 0.125, 1.0 / 64}) {
    const IntegralResult r = integrate_squared(g, AreaRegion::unit_disk_cap(-1.0, delta), {512, 1e-2, 44, 20'000'000});
    CHECK(r.value == doctest::Approx(map.cap_integral(delta)).epsilon(1e-2));
  }
}

TEST_CASE("identity tails") {
  const std::vector<double> thresholds = log_grid(0.5, 500.0, 20);
  CHECK(thresholds.front() == doctest::Approx(0.5));
  CHECK(thresholds.back() == doctest::Approx(500.0));
  TailOptions opt;
  opt.quadrature.base_resolution = 512;
  const TailStatistics t = tail_statistics(unit, 0.5, thresholds, AreaRegion::disk(0.0, 1.0), opt);
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] < 1.0)
      CHECK(t.measures[i] == doctest::Approx(std::numbers::pi).epsilon(1e-3));
    else
      CHECK(t.measures[i] == 0.0);
    CHECK(std::isfinite(t.scaled[i]));
  }
  CHECK_THROWS_AS(tail_statistics(unit, 0.5, log_grid(0.5, 5.0, 20), AreaRegion::disk(0.0, 1.0), opt), DomainError);
}

TEST_CASE("scaling the map shifts the tails") {
  const PowerMapSpec map = PowerMapSpec::make(0.5);
  const ScalarSampler g = [map](cplx z) { return map.derivative_modulus(z); };
  const double c = 3.0;
  const ScalarSampler cg = [map, c](cplx z) { return c * map.derivative_modulus(z); };
  TailOptions opt;
  opt.quadrature.base_resolution = 256;
  const auto rho = power_map_thresholds(map, 3.0, 0.02, 10);
  std::vector<double> scaled_rho;
  for (double r : rho) scaled_rho.push_back(c * r);
  const TailStatistics a = tail_statistics(g, 0.5, rho, AreaRegion::disk(0.0, 1.0), opt);
  const TailStatistics b = tail_statistics(cg, 0.5, scaled_rho, AreaRegion::disk(0.0, 1.0), opt);
  for (std::size_t i = 0; i < rho.size(); ++i) CHECK(b.measures[i] == doctest::Approx(a.measures[i]).epsilon(1e-9));
  CHECK(b.sup_scaled() == doctest::Approx(std::pow(c, 4.0) * a.sup_scaled()).epsilon(1e-9));
}

TEST_CASE("power map tail slope and constant") {
  const PowerMapSpec map = PowerMapSpec::make(0.5);
  const ScalarSampler g = [map](cplx z) { return map.derivative_modulus(z); };
  TailOptions opt;
  opt.quadrature.base_resolution = 1024;
  const TailStatistics t = tail_statistics(g, 0.5, power_map_thresholds(map), AreaRegion::disk(0.0, 1.0), opt);
  CHECK(std::abs(t.slope + 4.0) <= 0.05);
  CHECK(std::abs(t.sup_scaled() / map.scaled_limit() - 1.0) <= 0.05);
}

TEST_CASE("area distortion of the identity") {
  const QuadratureOptions opt{512, 1e-2, 44, 20'000'000};
  AreaRegion e = AreaRegion::disk({0.2, 0.1}, 0.3);
  e.add_piece({Disk{{-0.5, 0.0}, 0.2}});
  const double area = std::numbers::pi * (0.09 + 0.04);
  const AreaDistortionReport r = area_distortion(unit, e, 0.4, 1.0, false, opt);
  CHECK(r.region_area == doctest::Approx(area).epsilon(2e-3));
  CHECK(r.ratio == doctest::Approx(std::pow(r.region_area, 0.4)).epsilon(1e-9));
  CHECK_FALSE(r.boundary_flag);

  const AreaDistortionReport empty = area_distortion(unit, AreaRegion{}, 0.4, 1.0, false, opt);
  CHECK(empty.image_area == 0.0);
  CHECK(empty.ratio == 0.0);
}

TEST_CASE("layer cake") {
  // identity on a disk: a jump at rho = 1; a fine grid through 1 resolves it
  const AreaRegion e = AreaRegion::disk({0.1, 0.0}, 0.5);
  std::vector<double> rho = log_grid(0.5, 1.0, 1000);
  rho.back() = 1.0;
  for (double r : log_grid(1.0, 500.0, 20)) if (r > 1.0) rho.push_back(r);
  const TailOptions opt{{512, 1e-3, 44, 20'000'000}, 0.0, 1.0, 3.0};
  const TailStatistics t = tail_statistics(unit, 0.5, rho, e, opt);
  const LayerCakeReport lc = layer_cake_consistency(t, t.region_area);
  CHECK(lc.discrepancy <= 0.01);
  CHECK(lc.split == doctest::Approx(std::pow(t.region_area, -0.25)));

  // power map on a cap
  const PowerMapSpec map = PowerMapSpec::make(0.5);
  const ScalarSampler g = [map](cplx z) { return map.derivative_modulus(z); };
  const double delta = 1.0 / 32;
  const AreaRegion cap = AreaRegion::unit_disk_cap(-1.0, delta);
  const double rho0 = map.derivative_at_origin() * std::pow(delta, -0.5);
  const QuadratureOptions quad{1024, 1e-3, 44, 20'000'000};
  const TailStatistics ct = tail_statistics(g, 0.5, log_grid(rho0 * 0.999, rho0 * 1e3, 20), cap, {quad, 0.0, 1.0, 3.0});
  CHECK(layer_cake_consistency(ct, map.cap_integral(delta)).discrepancy <= 0.03);

  const TailStatistics none = tail_statistics(unit, 0.5, rho, AreaRegion{}, opt);
  const LayerCakeReport zero = layer_cake_consistency(none, 0.0);
  CHECK(zero.layer_cake == 0.0);
}

TEST_CASE("solver-backed tails") {
  SolverTailOptions opt;
  opt.resolution = 256;
  opt.base_resolution = 128;
  const SolverTailReport zero = solver_backed_riemann_tail(0.0, 3, opt);
  CHECK(zero.iterations == 0);
  CHECK(zero.pass);

  const SolverTailReport a = solver_backed_riemann_tail(0.5, 3, opt);
  const SolverTailReport b = solver_backed_riemann_tail(0.5, 3, opt);
  CHECK(a.tails.measures == b.tails.measures);
  CHECK(a.reference_slope == -4.0);
}
