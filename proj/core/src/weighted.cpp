#include "qclab/weighted.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "qclab/errors.hpp"
#include "qclab/random_dilatation.hpp"
#include "qclab/transforms.hpp"

namespace qclab {

namespace {

cplx adjoint_beurling_symbol(cplx zeta) { return zeta / std::conj(zeta); }

struct IndexRange {
  int lo, hi;
};

// Samples with coordinate in [lo, hi).
IndexRange sample_range(double lo, double hi, const GridSpec& spec) {
  const double L = spec.half_width();
  const double h = spec.spacing();
  const int n = spec.resolution();
  const int a = static_cast<int>(std::ceil((lo + L) / h - 1e-9));
  const int b = static_cast<int>(std::ceil((hi + L) / h - 1e-9));
  return {std::clamp(a, 0, n), std::clamp(b, 0, n)};
}

template <typename Fn>
void for_samples_in(const GridSpec& spec, cplx corner, double side, Fn&& fn) {
  const IndexRange xr = sample_range(corner.real(), corner.real() + side, spec);
  const IndexRange yr = sample_range(corner.imag(), corner.imag() + side, spec);
  for (int i = xr.lo; i < xr.hi; ++i)
    for (int j = yr.lo; j < yr.hi; ++j) fn(spec.index(i, j));
}

double weighted_sq(std::span<const cplx> f, const std::vector<double>& omega) {
  double sum = 0.0;
  for (std::size_t p = 0; p < omega.size(); ++p)
    if (omega[p] != 0.0) sum += std::norm(f[p]) * omega[p];
  return sum;
}

// chi_P S(chi_P f)
ComplexField restricted_beurling(const ComplexField& f, const std::vector<double>& omega) {
  ComplexField g = f;
  for (std::size_t p = 0; p < omega.size(); ++p)
    if (omega[p] == 0.0) g.data()[p] = 0.0;
  apply_multiplier_in_place(g, beurling_multiplier());
  for (std::size_t p = 0; p < omega.size(); ++p)
    if (omega[p] == 0.0) g.data()[p] = 0.0;
  return g;
}

// Adjoint of the map above in L2(omega): omega^{-1} chi_P S*(omega g).
ComplexField restricted_beurling_adjoint(const ComplexField& g, const std::vector<double>& omega) {
  ComplexField u(g.spec());
  for (std::size_t p = 0; p < omega.size(); ++p) u.data()[p] = omega[p] * g.data()[p];
  apply_multiplier_in_place(u, FourierMultiplier{adjoint_beurling_symbol, 0.0});
  for (std::size_t p = 0; p < omega.size(); ++p) u.data()[p] = omega[p] == 0.0 ? cplx(0.0) : u.data()[p] / omega[p];
  return u;
}

double trial_ratio(const ComplexField& f, const std::vector<double>& omega) {
  const double den = weighted_sq(f.samples(), omega);
  if (den == 0.0) return 0.0;
  return std::sqrt(weighted_sq(restricted_beurling(f, omega).samples(), omega) / den);
}

}  // namespace

double weighted_norm(const ComplexField& f, const std::vector<double>& omega) {
  if (omega.size() != f.samples().size()) throw ConfigError("weight and field grids differ");
  const double h = f.spec().spacing();
  return h * std::sqrt(weighted_sq(f.samples(), omega));
}

double weighted_norm(const ComplexField& f, const PackingWeight& w) {
  return weighted_norm(f, rasterize_weight(w, f.spec()));
}

WeightedNormReport estimate_operator_norm(const PackingWeight& w, const GridSpec& spec,
                                          const OperatorNormOptions& options) {
  if (options.trials < 1) throw DomainError("operator norm estimate needs at least one trial");
  const std::vector<double> omega = rasterize_weight(w, spec);
  const std::vector<int> owner = rasterize_members(w.family, spec);
  const std::size_t members = w.family.size();

  WeightedNormReport report;
  report.family = options.family_label;
  report.t = w.t();
  report.tau = smoothness_tau(w.family);
  report.alpha = packing_alpha(w.family, w.t()).alpha;
  report.level = options.level;
  report.seed = options.seed;

  auto record = [&report](const std::string& kind, double ratio) {
    report.kinds.push_back(kind);
    report.ratios.push_back(ratio);
  };
  auto per_square = [&](auto&& coefficient) {
    ComplexField f(spec);
    for (std::size_t p = 0; p < owner.size(); ++p)
      if (owner[p] >= 0) f.data()[p] = coefficient(static_cast<std::size_t>(owner[p]));
    return f;
  };

  ComplexField power_start(spec);
  for (int trial = 0; trial < options.trials; ++trial) {
    std::mt19937_64 rng(derive_seed(options.seed, static_cast<std::uint64_t>(trial)));
    std::normal_distribution<double> normal;
    ComplexField f(spec);
    if (trial % 2 == 0) {
      std::vector<cplx> c(members);
      for (auto& v : c) v = {normal(rng), normal(rng)};
      f = per_square([&c](std::size_t m) { return c[m]; });
      record("random", trial_ratio(f, omega));
    } else {
      for (std::size_t p = 0; p < owner.size(); ++p)
        if (owner[p] >= 0) f.data()[p] = {normal(rng), normal(rng)};
      record("noise", trial_ratio(f, omega));
    }
    if (trial == 0) power_start = f;
  }
  record("constant", trial_ratio(per_square([](std::size_t) { return cplx(1.0); }), omega));
  record("alternating",
         trial_ratio(per_square([](std::size_t m) { return cplx(m % 2 == 0 ? 1.0 : -1.0); }), omega));
  std::vector<std::size_t> spikes{0, members / 2, members - 1};
  spikes.erase(std::unique(spikes.begin(), spikes.end()), spikes.end());
  for (std::size_t s : spikes)
    record("spike", trial_ratio(per_square([s](std::size_t m) { return cplx(m == s ? 1.0 : 0.0); }), omega));

  if (options.power_steps > 0) {
    ComplexField f = power_start;
    for (int step = 0; step < options.power_steps; ++step) {
      ComplexField next = restricted_beurling_adjoint(restricted_beurling(f, omega), omega);
      const double scale = std::sqrt(weighted_sq(next.samples(), omega));
      if (scale == 0.0) break;
      next *= cplx(1.0 / scale);
      f = std::move(next);
    }
    record("power", trial_ratio(f, omega));
  }
  report.trials = static_cast<int>(report.ratios.size());
  report.estimate = *std::max_element(report.ratios.begin(), report.ratios.end());
  return report;
}

double maximal_operator(const ComplexField& f, const PackingWeight& w, cplx x) {
  const GridSpec& spec = f.spec();
  const std::vector<double> omega = rasterize_weight(w, spec);
  const DyadicLattice& lattice = w.family.lattice();
  const double h2 = spec.spacing() * spec.spacing();
  double best = 0.0;
  for (int g = w.family.finest_generation(); g >= 0; --g) {
    const double side = std::ldexp(lattice.root_side, -g);
    const cplx rel = (x - lattice.origin) / side;
    const DyadicSquare q{g, static_cast<std::int64_t>(std::floor(rel.real())),
                         static_cast<std::int64_t>(std::floor(rel.imag()))};
    double integral = 0.0;
    for_samples_in(spec, q.corner(lattice), side, [&](std::size_t p) { integral += std::abs(f.data()[p]) * omega[p]; });
    best = std::max(best, integral * h2 / std::pow(side, w.t()));
  }
  return best;
}

double majorant_distance(const DyadicLattice& lattice, const DyadicSquare& p, const DyadicSquare& q) {
  // Integer coordinates in units of the finer of the two sides.
  const int g = std::max(p.generation, q.generation);
  auto bounds = [g](const DyadicSquare& s) {
    const std::int64_t w = std::int64_t{1} << (g - s.generation);
    return std::array<std::int64_t, 4>{s.i * w, (s.i + 1) * w, s.j * w, (s.j + 1) * w};
  };
  const auto a = bounds(p);
  const auto b = bounds(q);
  const std::int64_t dx = std::max<std::int64_t>({0, b[0] - a[1], a[0] - b[1]});
  const std::int64_t dy = std::max<std::int64_t>({0, b[2] - a[3], a[2] - b[3]});
  const double unit = std::ldexp(lattice.root_side, -g);
  return unit * std::hypot(static_cast<double>(dx), static_cast<double>(dy)) + p.side(lattice) + q.side(lattice);
}

double nonlocal_majorant(const ComplexField& f, const SquareFamily& family, const DyadicSquare& p) {
  if (!family.contains_member(p)) throw DomainError("square is not a member of the family");
  const GridSpec& spec = f.spec();
  const double h2 = spec.spacing() * spec.spacing();
  const DyadicLattice& lattice = family.lattice();
  double total = 0.0;
  for (const DyadicSquare& q : family.members()) {
    if (q == p) continue;
    double integral = 0.0;
    for_samples_in(spec, q.corner(lattice), q.side(lattice), [&](std::size_t s) { integral += std::abs(f.data()[s]); });
    const double d = majorant_distance(lattice, p, q);
    total += integral * h2 / (d * d);
  }
  return total;
}

double split_domination_constant(const ComplexField& f, const SquareFamily& family, const DyadicSquare& p) {
  if (!family.contains_member(p)) throw DomainError("square is not a member of the family");
  const GridSpec& spec = f.spec();
  const DyadicLattice& lattice = family.lattice();
  const std::vector<int> owner = rasterize_members(family, spec);

  const double s = p.side(lattice);
  const cplx c = p.center(lattice);
  ComplexField all(spec), local(spec), modulus(spec);
  for (std::size_t q = 0; q < owner.size(); ++q) {
    modulus.data()[q] = std::abs(f.data()[q]);
    if (owner[q] < 0) continue;
    all.data()[q] = f.data()[q];
    const int i = static_cast<int>(q / static_cast<std::size_t>(spec.resolution()));
    const int j = static_cast<int>(q % static_cast<std::size_t>(spec.resolution()));
    const cplx z = spec.point(i, j);
    if (std::abs(z.real() - c.real()) <= s && std::abs(z.imag() - c.imag()) <= s) local.data()[q] = f.data()[q];
  }
  apply_multiplier_in_place(all, beurling_multiplier());
  apply_multiplier_in_place(local, beurling_multiplier());
  const double T = nonlocal_majorant(modulus, family, p);
  if (T == 0.0) return 0.0;
  double worst = 0.0;
  for_samples_in(spec, p.corner(lattice), s, [&](std::size_t q) {
    worst = std::max(worst, (std::abs(all.data()[q]) - std::abs(local.data()[q])) / T);
  });
  return worst;
}

namespace {

void build_cell(const DyadicSquare& cell, int depth, std::vector<DyadicSquare>& out) {
  if (depth == 0) {
    out.push_back({cell.generation + 2, 4 * cell.i + 1, 4 * cell.j + 1});
    return;
  }
  const DyadicSquare c0{cell.generation + 1, 2 * cell.i, 2 * cell.j};
  const DyadicSquare c1{cell.generation + 1, 2 * cell.i + 1, 2 * cell.j};
  const DyadicSquare c3{cell.generation + 1, 2 * cell.i + 1, 2 * cell.j + 1};
  build_cell(c0, depth - 1, out);
  out.push_back({c1.generation + 2, 4 * c1.i + 1, 4 * c1.j + 1});
  build_cell(c3, depth - 1, out);
}

}  // namespace

SquareFamily refinement_construction(int level, double t) {
  if (level < 2) throw DomainError("refinement construction needs level >= 2");
  std::vector<DyadicSquare> members;
  build_cell(DyadicSquare{0, 0, 0}, level - 2, members);
  return SquareFamily(DyadicLattice{{-0.5, -0.5}, 1.0}, std::move(members), t);
}

std::string refinement_description(int level) {
  std::ostringstream out;
  out << "self-similar: unit root at -1/2-1/2i, " << (level - 2)
      << " splits, diagonal children recurse, off-diagonal child holds a quarter-size member, finest side 2^-"
      << level;
  return out.str();
}

}  // namespace qclab
