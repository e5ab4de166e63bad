#include "qclab/random_dilatation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qclab/errors.hpp"

namespace qclab {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index));
}

double unit_hash(std::uint64_t key) noexcept { return static_cast<double>(splitmix64(key) >> 11) * 0x1.0p-53; }

namespace {

struct Rect {
  double x0, x1, y0, y1;
};

bool meets(const Rect& r, const Region& region) {
  for (const Disk& d : region.disks()) {
    const double dx = std::max({r.x0 - d.center.real(), 0.0, d.center.real() - r.x1});
    const double dy = std::max({r.y0 - d.center.imag(), 0.0, d.center.imag() - r.y1});
    if (dx * dx + dy * dy <= d.radius * d.radius) return true;
  }
  for (const AxisSquare& s : region.squares()) {
    if (r.x0 <= s.center.real() + s.half_side && s.center.real() - s.half_side <= r.x1 &&
        r.y0 <= s.center.imag() + s.half_side && s.center.imag() - s.half_side <= r.y1)
      return true;
  }
  return false;
}

}  // namespace

BeltramiCoefficient random_antisymmetric_dilatation(const GridSpec& spec, double k, std::uint64_t seed,
                                                    const Region& avoid, double radius) {
  if (!(radius > 0.0)) throw DomainError("support radius must be positive");
  if (radius > spec.half_width() / 2)
    throw ResolutionError("support disk leaves the guard band");
  const int n = spec.resolution();
  const double h = spec.spacing();
  // Bottom layer: the smallest dyadic side not below 2h.
  const int finest = static_cast<int>(std::floor(std::log2(1.0 / (2.0 * h))));
  const double s_min = std::ldexp(1.0, -finest);

  ComplexField raw(spec);
  for (int i = 0; i < n; ++i) {
    for (int j = spec.real_axis_row() + 1; j < n; ++j) {
      const cplx z = spec.point(i, j);
      if (std::abs(z) > radius) continue;
      int level = -static_cast<int>(std::floor(std::log2(z.imag())));  // z.imag() in [2^-level, 2^-level+1)
      double s = std::ldexp(1.0, -level);
      double y0 = s;
      if (level > finest) {
        level = finest + 1;
        s = s_min;
        y0 = 0.0;
      }
      const auto col = static_cast<std::int64_t>(std::floor(z.real() / s));
      const Rect cell{col * s, (col + 1) * s, y0, y0 + s};
      if (!avoid.empty() && meets(cell, avoid)) continue;
      const std::uint64_t key = splitmix64(seed ^ splitmix64((static_cast<std::uint64_t>(level) << 48) ^
                                                             static_cast<std::uint64_t>(col)));
      const double phase = 2.0 * std::numbers::pi * unit_hash(key);
      raw(i, j) = std::polar(k, phase);
    }
  }
  return make_antisymmetric(raw, k, Region::disk(0.0, radius));
}

BeltramiCoefficient random_dilatation_on_squares(const GridSpec& spec, const SquareFamily& family, double k,
                                                 std::uint64_t seed) {
  const std::vector<int> owner = rasterize_members(family, spec);
  ComplexField raw(spec);
  Region support;
  for (std::size_t m = 0; m < family.size(); ++m) {
    const DyadicSquare& q = family.members()[m];
    const double s = q.side(family.lattice());
    support.add(AxisSquare{q.center(family.lattice()), 0.5 * s});
  }
  for (std::size_t p = 0; p < owner.size(); ++p) {
    if (owner[p] < 0) continue;
    const double phase = 2.0 * std::numbers::pi * unit_hash(derive_seed(seed, static_cast<std::uint64_t>(owner[p])));
    raw.data()[p] = std::polar(k, phase);
  }
  return make_coefficient(std::move(raw), k, std::move(support));
}

}  // namespace qclab
