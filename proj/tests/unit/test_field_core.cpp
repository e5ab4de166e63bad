#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "qclab/errors.hpp"
#include "qclab/field.hpp"
#include "qclab/transforms.hpp"

using namespace qclab;

namespace {

ComplexField gaussian(const GridSpec& spec, double sigma, cplx c = 0.0) {
  return ComplexField::from_function(spec, [&](cplx z) { return cplx(std::exp(-std::norm(z - c) / (2 * sigma * sigma))); });
}

ComplexField random_band_field(const GridSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  return ComplexField::from_function(spec, [&](cplx z) {
    return spec.in_guard_band(z) ? cplx(g(rng), g(rng)) : cplx(0.0);
  });
}

// 1-D smooth step: 1 for |x| <= a, 0 for |x| >= b.
double smooth_cut(double x, double a, double b) {
  const double s = (std::abs(x) - a) / (b - a);
  if (s <= 0) return 1.0;
  if (s >= 1) return 0.0;
  const double p = std::exp(-1.0 / s), q = std::exp(-1.0 / (1.0 - s));
  return q / (p + q);
}

double max_abs_where(const ComplexField& f, const ComplexField& ref, auto&& pred) {
  double err = 0.0;
  const GridSpec& spec = f.spec();
  for (int i = 0; i < spec.resolution(); ++i)
    for (int j = 0; j < spec.resolution(); ++j)
      if (pred(spec.point(i, j))) err = std::max(err, std::abs(f(i, j) - ref(i, j)));
  return err;
}

double rel_l2_where(const ComplexField& f, auto&& exact, auto&& pred) {
  double num = 0.0, den = 0.0;
  const GridSpec& spec = f.spec();
  for (int i = 0; i < spec.resolution(); ++i)
    for (int j = 0; j < spec.resolution(); ++j) {
      const cplx z = spec.point(i, j);
      if (!pred(z)) continue;
      num += std::norm(f(i, j) - exact(z));
      den += std::norm(exact(z));
    }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(GridSpec(0.0, 64), ConfigError);
  CHECK_THROWS_AS(GridSpec(4.0, 63), ConfigError);
  CHECK_THROWS_AS(GridSpec(4.0, 8), ConfigError);
  const GridSpec spec(4.0, 64);
  CHECK(spec.spacing() == doctest::Approx(0.125));
  CHECK(spec.point(0, 0) == cplx(-4.0, -4.0));
  CHECK(spec.mirror_row(0) == 0);
  CHECK(spec.mirror_row(1) == 63);
  CHECK(spec.point(5, spec.mirror_row(20)) == std::conj(spec.point(5, 20)));
  CHECK_THROWS_AS(ComplexField(spec, std::vector<cplx>(10)), ConfigError);
  CHECK_THROWS_AS(ComplexField(spec) + ComplexField(GridSpec(4.0, 32)), ConfigError);
}

TEST_CASE("zero and constant fields") {
  const GridSpec spec(4.0, 64);
  const ComplexField zero(spec);
  CHECK(beurling_transform(zero).sup_norm() == 0.0);
  CHECK(cauchy_transform(zero).sup_norm() == 0.0);
  const ComplexField one = ComplexField::from_function(spec, [](cplx) { return cplx(1.0); });
  CHECK(d_bar(one).sup_norm() < 1e-14);
  CHECK(d_z(one).sup_norm() < 1e-14);
}

TEST_CASE("Parseval for mean-zero fields") {
  const GridSpec spec(4.0, 128);
  ComplexField f = random_band_field(spec, 11);
  const cplx m = f.mean();
  for (auto& v : f.samples()) v -= m;
  const double ratio = beurling_transform(f).l2_norm() / f.l2_norm();
  CHECK(std::abs(ratio - 1.0) <= 1e-12);
}

TEST_CASE("linearity") {
  const GridSpec spec(4.0, 64);
  const ComplexField a = random_band_field(spec, 1), b = random_band_field(spec, 2);
  const cplx s{0.3, -1.7};
  for (auto op : {beurling_transform, cauchy_transform, d_bar}) {
    const ComplexField lhs = op(a + s * b);
    const ComplexField rhs = op(a) + s * op(b);
    CHECK(relative_l2_error(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("S d_bar = d on a Gaussian bump") {
  const GridSpec spec(4.0, 512);
  const ComplexField phi = gaussian(spec, 0.3);
  CHECK(relative_l2_error(beurling_transform(d_bar(phi)), d_z(phi)) <= 1e-8);
}

TEST_CASE("d_bar inverts the Cauchy transform on mean-zero fields") {
  const GridSpec spec(4.0, 256);
  ComplexField f = gaussian(spec, 0.3, {0.4, 0.2}) - gaussian(spec, 0.25, {-0.3, 0.1});
  const cplx m = f.mean();
  for (auto& v : f.samples()) v -= m;
  CHECK(relative_l2_error(d_bar(cauchy_transform(f)), f) <= 1e-10);
}

TEST_CASE("planar Cauchy transform of a radial bump") {
  // (1/(pi z)) times the mass inside |xi| < |z|
  const GridSpec spec(4.0, 256);
  const double sigma = 0.3;
  const ComplexField c = planar_cauchy_transform(gaussian(spec, sigma));
  auto exact = [&](cplx z) {
    return z == cplx(0.0) ? cplx(0.0) : 2 * sigma * sigma * (1 - std::exp(-std::norm(z) / (2 * sigma * sigma))) / z;
  };
  // what remains is the O(|w|^3 / L^4) part of the periodic kernel
  CHECK(rel_l2_where(c, exact, [&](cplx z) { return spec.in_guard_band(z); }) <= 0.01);
}

TEST_CASE("holomorphic monomial under a smooth cutoff") {
  const GridSpec spec(4.0, 512);
  const ComplexField phi = ComplexField::from_function(
      spec, [](cplx z) { return z * smooth_cut(z.real(), 2.0, 3.8) * smooth_cut(z.imag(), 2.0, 3.8); });
  const ComplexField one = ComplexField::from_function(spec, [](cplx) { return cplx(1.0); });
  const ComplexField zero(spec);
  auto inside = [&](cplx z) { return std::abs(z.real()) < 1.9 && std::abs(z.imag()) < 1.9; };
  CHECK(max_abs_where(d_z(phi), one, inside) <= 1e-8);
  CHECK(max_abs_where(d_bar(phi), zero, inside) <= 1e-8);
}

TEST_CASE("disk indicator against closed forms") {
  std::vector<std::string> warnings;
  set_warning_sink([&](const std::string& w) { warnings.push_back(w); });
  const GridSpec spec(4.0, 512);
  const ComplexField chi = unit_disk_indicator(spec);
  auto ring = [](cplx z) { return std::abs(z) > 1.1 && std::abs(z) < 2.0; };
  auto core = [](cplx z) { return std::abs(z) < 0.9; };

  const ComplexField s = beurling_transform(chi);
  CHECK(rel_l2_where(s, [](cplx z) { return -1.0 / (z * z); }, ring) <= 0.02);
  double inner = 0.0;
  for (int i = 0; i < 512; ++i)
    for (int j = 0; j < 512; ++j)
      if (core(spec.point(i, j))) inner = std::max(inner, std::abs(s(i, j)));
  CHECK(inner <= 0.1);

  const ComplexField c = planar_cauchy_transform(chi);
  CHECK(rel_l2_where(c, [](cplx z) { return 1.0 / z; }, ring) <= 0.02);
  CHECK(rel_l2_where(c, [](cplx z) { return std::conj(z); }, core) <= 0.02);
  CHECK(warnings.empty());
  set_warning_sink(nullptr);
}

TEST_CASE("guard band violations warn but do not throw") {
  std::vector<std::string> warnings;
  set_warning_sink([&](const std::string& w) { warnings.push_back(w); });
  const GridSpec spec(4.0, 64);
  const ComplexField f = gaussian(spec, 1.5, {2.5, 0.0});
  CHECK_NOTHROW(beurling_transform(f));
  CHECK(warnings.size() == 1);
  set_warning_sink(nullptr);
}
