#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qclab/dyadic.hpp"
#include "qclab/field.hpp"

namespace qclab {

/// (h^2 sum |f|^2 omega)^{1/2}. Throws ResolutionError when the finest member
/// has fewer than 8 samples per side.
double weighted_norm(const ComplexField& f, const PackingWeight& w);
/// Same with omega already rasterized on f's grid.
double weighted_norm(const ComplexField& f, const std::vector<double>& omega);

struct WeightedNormReport {
  std::string family;  // free-form descriptor
  double t = 0.0;
  double tau = 0.0;
  double alpha = 0.0;
  int level = 0;
  std::uint64_t seed = 0;
  int trials = 0;
  /// ||S(f chi_P)||_{L2(omega)} / ||f||_{L2(omega)} per trial, in trial order.
  std::vector<double> ratios;
  std::vector<std::string> kinds;
  double estimate = 0.0;
};

struct OperatorNormOptions {
  int trials = 8;  // random trials; structured candidates are added on top
  int power_steps = 12;
  std::uint64_t seed = 0;
  int level = 0;
  std::string family_label;
};

/// Largest observed ratio over random coefficient fields, white noise,
/// constant and alternating signs, single-square spikes, and a few steps of
/// power iteration on the weighted operator.
WeightedNormReport estimate_operator_norm(const PackingWeight& w, const GridSpec& spec,
                                          const OperatorNormOptions& options);

/// sup over dyadic Q containing x, from the finest member generation up to
/// generation 0 of the lattice, of l(Q)^{-t} \int_Q |f| omega.
double maximal_operator(const ComplexField& f, const PackingWeight& w, cplx x);

/// dist(P, Q) + l(P) + l(Q) for closed squares on the same lattice.
double majorant_distance(const DyadicLattice& lattice, const DyadicSquare& p, const DyadicSquare& q);

/// sum_{Q != P} D(P,Q)^{-2} \int_Q |f|.  Throws DomainError when P is not a member.
double nonlocal_majorant(const ComplexField& f, const SquareFamily& family, const DyadicSquare& p);

/// Largest (|S(f chi_P)(x)| - |S(f chi_{2P cap P})(x)|) / T|f| over samples x
/// of member p; the constant in the local/nonlocal domination.
double split_domination_constant(const ComplexField& f, const SquareFamily& family, const DyadicSquare& p);

/// Self-similar family used for the boundedness trend: the unit root cell is
/// split n = level - 2 times, two diagonal children recurse, one child holds a
/// quarter-size member and one stays empty; terminal cells hold a
/// quarter-size member. Finest side 2^-level, tau = 1.
SquareFamily refinement_construction(int level, double t);
std::string refinement_description(int level);

}  // namespace qclab
