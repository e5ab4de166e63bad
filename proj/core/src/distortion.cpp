#include "qclab/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qclab/errors.hpp"
#include "qclab/random_dilatation.hpp"

namespace qclab {

double exponent_t_of_k(double t, double k) {
  if (!(t > 0.0) || !(t <= 2.0)) throw DomainError("exponent t must lie in (0, 2]");
  if (!(k >= 0.0) || !(k < 1.0)) throw InvalidBoundError("k must lie in [0, 1)");
  const double a = 1.0 + k * k;
  const double b = 1.0 - k * k;
  return 2.0 * t * a / (t * a + (2.0 - t) * b);
}

void validate_layout(const std::vector<DiskOnLine>& disks, double ambient_center, double ambient_radius) {
  if (disks.empty()) throw DomainError("disk layout is empty");
  std::vector<DiskOnLine> sorted = disks;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.center < b.center; });
  for (std::size_t d = 0; d < sorted.size(); ++d) {
    const DiskOnLine& disk = sorted[d];
    if (!(disk.radius > 0.0)) throw DomainError("disk radius must be positive");
    if (std::abs(disk.center - ambient_center) + disk.radius > ambient_radius)
      throw DomainError("disk leaves the ambient disk");
    if (d > 0 && sorted[d - 1].center + sorted[d - 1].radius >= disk.center - disk.radius)
      throw DomainError("disks in the layout overlap");
  }
}

std::vector<DiskOnLine> random_disk_layout(int count, std::uint64_t seed, double margin) {
  if (count < 1) throw DomainError("layout needs at least one disk");
  std::mt19937_64 rng(seed);
  const double lo = -1.0 + margin;
  const double hi = 1.0 - margin;
  std::uniform_real_distribution<double> cut(lo, hi);
  std::uniform_real_distribution<double> fill(0.3, 0.9);
  std::vector<double> edges{lo, hi};
  for (int c = 1; c < count; ++c) edges.push_back(cut(rng));
  std::sort(edges.begin(), edges.end());
  std::vector<DiskOnLine> disks;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double half = 0.5 * (edges[e + 1] - edges[e]);
    const double radius = fill(rng) * half;
    if (radius <= 0.0) continue;
    disks.push_back({0.5 * (edges[e] + edges[e + 1]), radius});
  }
  return disks;
}

std::vector<DiskOnLine> regular_disk_layout(int level, double center, double radius) {
  if (level < 0 || level > 20) throw DomainError("refinement level out of range");
  const int count = 1 << level;
  const double piece = 2.0 * radius / count;
  std::vector<DiskOnLine> disks;
  for (int c = 0; c < count; ++c) disks.push_back({center - radius + (c + 0.5) * piece, 0.25 * piece});
  return disks;
}

Region disks_region(const std::vector<DiskOnLine>& disks) {
  Region region;
  for (const auto& d : disks) region.add(Disk{{d.center, 0.0}, d.radius});
  return region;
}

PrincipalMapSolution solve_for_layout(const std::vector<DiskOnLine>& disks, double k, std::uint64_t seed,
                                      const TrialGrid& grid) {
  validate_layout(disks);
  const GridSpec spec(grid.half_width, grid.resolution);
  PrincipalMapSolution f = solve_principal(random_antisymmetric_dilatation(spec, k, seed, disks_region(disks)));
  f.interpolation = Interpolation::bicubic;
  return f;
}

SmirnovReport smirnov_report(const PrincipalMapSolution& f, const std::vector<DiskOnLine>& disks, double k, double t,
                             std::uint64_t seed) {
  SmirnovReport r;
  r.k = k;
  r.t = t;
  r.t_of_k = exponent_t_of_k(t, k);
  r.seed = seed;
  r.disks = disks;
  r.solver_iterations = f.iterations;
  r.solver_residual = f.residual;
  double lhs_sum = 0.0;
  double r_sum = 0.0;
  for (const auto& d : disks) {
    const DerivativeEstimate est = derivative_on_conformal_disk(f, {d.center, 0.0}, d.radius);
    if (!est.conformal) ++r.nonconformal_disks;
    const double modulus = std::abs(est.value);
    r.derivative_moduli.push_back(modulus);
    lhs_sum += std::pow(modulus * d.radius, r.t_of_k);
    r_sum += std::pow(d.radius, t);
  }
  const double q = (1.0 - k * k) / (1.0 + k * k);
  r.lhs = std::pow(lhs_sum, 1.0 / r.t_of_k);
  r.rhs = 8.0 * std::pow(r_sum, q / t);
  r.ratio = r.lhs / r.rhs;
  r.pass = r.ratio <= 1.0 + kSmirnovSlack && r.nonconformal_disks == 0;
  return r;
}

SmirnovReport run_smirnov_trial(double k, double t, const std::vector<DiskOnLine>& disks, std::uint64_t seed,
                                const TrialGrid& grid) {
  exponent_t_of_k(t, k);
  const PrincipalMapSolution f = solve_for_layout(disks, k, seed, grid);
  return smirnov_report(f, disks, k, t, seed);
}

double image_diameter_of_disk(const PrincipalMapSolution& f, cplx center, double radius, int samples) {
  if (samples < 16) throw DomainError("image diameter needs at least 16 boundary samples");
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s)
    pts.push_back(evaluate(f, center + std::polar(radius, 2.0 * std::numbers::pi * s / samples)));
  double diam = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) diam = std::max(diam, std::abs(pts[a] - pts[b]));
  return diam;
}

CorollaryReport corollary_report(const PrincipalMapSolution& f, const std::vector<DiskOnLine>& disks,
                                 double ball_center, double ball_radius, double k, std::uint64_t seed) {
  validate_layout(disks, ball_center, ball_radius);
  CorollaryReport r;
  r.k = k;
  r.seed = seed;
  r.ball_center = ball_center;
  r.ball_radius = ball_radius;
  r.disks = disks;
  const double s = 1.0 + k * k;
  double diam_sum = 0.0;
  for (const auto& d : disks) {
    r.image_sum += std::pow(image_diameter_of_disk(f, {d.center, 0.0}, d.radius), s);
    diam_sum += 2.0 * d.radius;
  }
  r.density = diam_sum / (2.0 * ball_radius);
  r.image_ball_diam = image_diameter_of_disk(f, {ball_center, 0.0}, ball_radius);
  r.ratio = r.image_sum / (std::pow(r.density, 1.0 - k * k) * std::pow(r.image_ball_diam, s));
  return r;
}

CorollaryReport run_corollary_trial(double k, const std::vector<DiskOnLine>& disks, double ball_center,
                                    double ball_radius, std::uint64_t seed, const TrialGrid& grid) {
  validate_layout(disks, ball_center, ball_radius);
  const GridSpec spec(grid.half_width, grid.resolution);
  PrincipalMapSolution f = solve_principal(random_antisymmetric_dilatation(spec, k, seed, disks_region(disks)));
  f.interpolation = Interpolation::bicubic;
  return corollary_report(f, disks, ball_center, ball_radius, k, seed);
}

ConformalOutsideReport run_conformal_outside_trial(const SquareFamily& family, const ConformalOutsideOptions& options) {
  if (family.size() == 0) throw DomainError("conformal-outside trial needs a nonempty family");
  ConformalOutsideReport r;
  r.k = options.k;
  r.t = options.t;
  r.seed = options.seed;
  r.tau = smoothness_tau(family);
  const PackingResult base = packing_alpha(family, options.t);
  r.alpha = base.alpha;
  r.preconditions_verified = r.tau <= options.tau_bound && r.alpha <= options.alpha_bound;
  if (!r.preconditions_verified) {
    std::ostringstream msg;
    msg << "conformal-outside family has tau " << r.tau << ", alpha " << r.alpha << " beyond the requested bounds";
    warn(msg.str());
  }

  const GridSpec spec(options.half_width, options.resolution);
  const PrincipalMapSolution f =
      solve_principal(random_dilatation_on_squares(spec, family, options.k, options.seed));
  const DyadicLattice& lattice = family.lattice();
  double image = 0.0;
  double base_sum = 0.0;
  for (const DyadicSquare& q : family.members()) {
    image += std::pow(quasisquare_diameter(f, lattice, q, options.boundary_samples), options.t);
    base_sum += std::pow(std::numbers::sqrt2 * q.side(lattice), options.t);
  }
  r.ratio = image / base_sum;
  const PackingResult quasi = packing_alpha_quasi(QuasisquareFamily{family, &f, options.boundary_samples}, options.t);
  r.image_alpha = quasi.alpha;
  r.image_admissible = quasi.admissible;
  return r;
}

}  // namespace qclab
