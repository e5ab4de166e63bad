#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qclab/beltrami.hpp"
#include "qclab/dyadic.hpp"

namespace qclab {

/// Solves 1/t(k) - 1/2 = ((1-k^2)/(1+k^2)) (1/t - 1/2) for t(k).
double exponent_t_of_k(double t, double k);

struct DiskOnLine {
  double center = 0.0;
  double radius = 0.0;
};

/// Throws DomainError unless the disks are pairwise disjoint, have positive
/// radius and lie in the closed ambient disk B(ambient_center, ambient_radius).
void validate_layout(const std::vector<DiskOnLine>& disks, double ambient_center = 0.0,
                     double ambient_radius = 1.0);

/// `count` disjoint disks on R inside B(0, 1 - margin): a random partition of
/// the diameter, each piece carrying a centred disk filling 30-90% of it.
std::vector<DiskOnLine> random_disk_layout(int count, std::uint64_t seed, double margin = 0.05);

/// Layout of 2^level equal disks centred in the equal pieces of the diameter
/// of B(center, radius); each disk fills half of its piece.
std::vector<DiskOnLine> regular_disk_layout(int level, double center, double radius);

Region disks_region(const std::vector<DiskOnLine>& disks);

struct SmirnovReport {
  double k = 0.0;
  double t = 0.0;
  double t_of_k = 0.0;
  std::uint64_t seed = 0;
  std::vector<DiskOnLine> disks;
  std::vector<double> derivative_moduli;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool pass = false;
  int solver_iterations = 0;
  double solver_residual = 0.0;
  /// Disks on which the dilatation was not numerically zero.
  int nonconformal_disks = 0;
};

inline constexpr double kSmirnovSlack = 0.1;

struct TrialGrid {
  double half_width = 4.0;
  int resolution = 512;
};

/// Random antisymmetric dilatation of modulus k on the unit disk avoiding the
/// disks, solved with bicubic evaluation.
PrincipalMapSolution solve_for_layout(const std::vector<DiskOnLine>& disks, double k, std::uint64_t seed,
                                      const TrialGrid& grid = {});

/// Evaluates the inequality for one exponent on an already solved map.
SmirnovReport smirnov_report(const PrincipalMapSolution& f, const std::vector<DiskOnLine>& disks, double k,
                             double t, std::uint64_t seed);

SmirnovReport run_smirnov_trial(double k, double t, const std::vector<DiskOnLine>& disks, std::uint64_t seed,
                                const TrialGrid& grid = {});

/// Largest pairwise distance among `samples` images of equally spaced points
/// on the circle |z - center| = radius.
double image_diameter_of_disk(const PrincipalMapSolution& f, cplx center, double radius, int samples = 64);

struct CorollaryReport {
  double k = 0.0;
  std::uint64_t seed = 0;
  double ball_center = 0.0;
  double ball_radius = 0.0;
  int level = 0;
  std::vector<DiskOnLine> disks;
  double image_sum = 0.0;       // sum diam f(B_j)^{1+k^2}
  double density = 0.0;         // sum diam B_j / diam B
  double image_ball_diam = 0.0; // diam f(B)
  double ratio = 0.0;
};

CorollaryReport corollary_report(const PrincipalMapSolution& f, const std::vector<DiskOnLine>& disks,
                                 double ball_center, double ball_radius, double k, std::uint64_t seed);
CorollaryReport run_corollary_trial(double k, const std::vector<DiskOnLine>& disks, double ball_center,
                                    double ball_radius, std::uint64_t seed, const TrialGrid& grid = {});

struct ConformalOutsideReport {
  double k = 0.0;
  double t = 0.0;
  std::uint64_t seed = 0;
  double tau = 0.0;
  double alpha = 0.0;
  /// False when the family was not tau-smooth or alpha-packed for the
  /// requested bounds; the numbers are still reported.
  bool preconditions_verified = false;
  double ratio = 0.0;  // sum diam f(Q)^t / sum diam Q^t
  double image_alpha = 0.0;
  bool image_admissible = false;
};

struct ConformalOutsideOptions {
  double k = 0.3;
  double t = 1.0;
  std::uint64_t seed = 0;
  double tau_bound = 2.0;
  double alpha_bound = 1.0;
  double half_width = 1.0;
  int resolution = 512;
  int boundary_samples = 64;
};

/// The quasisquare family is taken with g = identity, so the input squares
/// are dyadic. mu has modulus k with a random phase per member.
ConformalOutsideReport run_conformal_outside_trial(const SquareFamily& family, const ConformalOutsideOptions& options);

}  // namespace qclab
