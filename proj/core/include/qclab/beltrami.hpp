#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qclab/field.hpp"
#include "qclab/region.hpp"

namespace qclab {

/// Distortion constants of a K-quasiconformal map, k = (K-1)/(K+1).
struct QcConstants {
  double k = 0.0;
  double K = 1.0;

  static QcConstants from_k(double k);
  static QcConstants from_K(double K);
};

enum class Symmetry { none, antisymmetric, symmetric };

std::string_view to_string(Symmetry s) noexcept;
Symmetry symmetry_from_string(std::string_view s);

/// Compactly supported dilatation with |mu| <= bound < 1 on every sample.
struct BeltramiCoefficient {
  ComplexField field;
  double bound = 0.0;
  Symmetry symmetry = Symmetry::none;
  /// Geometric description of where mu may be nonzero; empty means "guard band".
  Region support;
};

/// Clips samples to modulus k and zeroes them outside `support` (when given).
BeltramiCoefficient make_coefficient(ComplexField raw, double k, Region support = {});

/// mu = raw above the real axis, mu(z) = -conj(raw(conj z)) below it, zero on
/// the lattice row nearest R. Samples are clipped to modulus k first.
BeltramiCoefficient make_antisymmetric(const ComplexField& raw, double k, Region support = {});

/// mu(conj z) = conj(mu(z)); the solved map then commutes with conjugation.
BeltramiCoefficient make_symmetric(const ComplexField& raw, double k, Region support = {});

/// Largest |mu(z) + conj(mu(conj z))| over mirrored lattice pairs.
double antisymmetry_defect(const ComplexField& mu);

enum class Interpolation { bilinear, bicubic };

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 400;
};

/// Principal solution f(z) = z + displacement(z) of  d_bar f = mu d f.
struct PrincipalMapSolution {
  PrincipalMapSolution(BeltramiCoefficient mu, ComplexField h, ComplexField disp)
      : coefficient(std::move(mu)), h_field(std::move(h)), displacement(std::move(disp)) {}

  BeltramiCoefficient coefficient;
  /// h = d_bar f, the fixed point of h = mu + mu S h.
  ComplexField h_field;
  ComplexField displacement;
  double residual = 0.0;
  int iterations = 0;
  /// Relative residual ||h_n - (mu + mu S h_n)|| / ||mu|| per iteration.
  std::vector<double> residual_history;
  /// max and median of |z| |displacement(z)| on the ring 0.8 L <= |z|_inf.
  double decay_max = 0.0;
  double decay_median = 0.0;
  Interpolation interpolation = Interpolation::bilinear;

  const GridSpec& spec() const noexcept { return displacement.spec(); }
};

/// Identity map on the given grid (mu = 0).
PrincipalMapSolution identity_solution(const GridSpec& spec);

/// Neumann iteration h_{n+1} = mu + mu S h_n from h_0 = mu; displacement is the
/// planar Cauchy transform of h. Throws ConvergenceError past max_iter.
PrincipalMapSolution solve_principal(const BeltramiCoefficient& mu, const SolverOptions& options = {});

/// Builds a solution around a prescribed displacement (manufactured solutions
/// and reloaded caches). mu is set to zero.
PrincipalMapSolution solution_from_displacement(ComplexField displacement, Interpolation interp);

/// z + displacement(z), interpolated. Exact at lattice points.
cplx evaluate(const PrincipalMapSolution& f, cplx z);
cplx evaluate(const PrincipalMapSolution& f, cplx z, Interpolation interp);

/// Interpolated value of an arbitrary field at an off-lattice point.
cplx interpolate(const ComplexField& field, cplx z, Interpolation interp);

struct DerivativeEstimate {
  cplx value;
  /// False when mu is not numerically zero on the disk.
  bool conformal = true;
  double max_dilatation_on_disk = 0.0;
  std::string warning;
};

/// Angular average of difference quotients at radius r/4 around z0.
DerivativeEstimate derivative_on_conformal_disk(const PrincipalMapSolution& f, cplx center, double radius,
                                                int samples = 16);

/// (chi_V mu, chi_{C \ V} mu). Symmetry tags survive when V is conjugation symmetric.
std::pair<BeltramiCoefficient, BeltramiCoefficient> truncate_dilatation(const BeltramiCoefficient& mu,
                                                                        const Region& region);

/// Dilatation nu of f2 in f = f2 o f1, sampled on the grid through the numerical
/// inverse of f1 with nearest-lattice lookup.
BeltramiCoefficient second_factor_coefficient(const BeltramiCoefficient& mu_f, const PrincipalMapSolution& f1,
                                              double jacobian_threshold = 1e-6);

/// Reusable preimage search for one solution.
class MapInverter {
 public:
  explicit MapInverter(const PrincipalMapSolution& f);
  /// z with |f(z) - w| <= h; throws OutOfDomainError otherwise.
  cplx operator()(cplx w) const;

 private:
  cplx nearest_lattice_preimage(cplx w) const;

  const PrincipalMapSolution& map_;
  std::vector<cplx> images_;
  double bucket_size_;
  cplx origin_;
  int buckets_x_ = 0;
  int buckets_y_ = 0;
  std::vector<int> bucket_start_;
  std::vector<int> bucket_items_;
};

cplx numerical_inverse(const PrincipalMapSolution& f, cplx w);

/// Versioned binary cache of a solve.
void save_solution(const PrincipalMapSolution& f, std::ostream& out);
PrincipalMapSolution load_solution(std::istream& in);
void save_solution(const PrincipalMapSolution& f, const std::string& path);
PrincipalMapSolution load_solution(const std::string& path);

}  // namespace qclab
