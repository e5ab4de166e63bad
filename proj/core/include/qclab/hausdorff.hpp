#pragma once

#include <cstdint>
#include <vector>

#include "qclab/beltrami.hpp"

namespace qclab {

/// Principal map with a seeded random antisymmetric dilatation of modulus k
/// on B(0, radius); the quasiline is the image of the real axis.
PrincipalMapSolution generate_quasiline(double k, std::uint64_t seed, const GridSpec& spec, double radius = 1.0);

struct Interval {
  double a = 0.0;
  double b = 0.0;
  double length() const noexcept { return b - a; }
};

struct CoveringRecord {
  int generation = 0;
  std::int64_t count = 0;
  double sum = 0.0;        // 5-point diameters
  double sum_dense = 0.0;  // 33-point diameters
};

struct CoveringSumSeries {
  double k = 0.0;
  double s = 0.0;
  std::vector<Interval> set;
  double ball_center = 0.0;
  double ball_radius = 0.0;
  double normalizer = 0.0;
  std::vector<CoveringRecord> records;
  int requested_generations = 0;
  /// Set when generations were dropped because intervals fell below 4 h.
  bool truncated = false;

  /// S_m for generation m, or NaN when not computed.
  double sum_at(int generation) const noexcept;
};

/// Splits E into pieces of the dyadic intervals of length 2^-m diam(B),
/// anchored at the left end of B, for m = 1..max_generation, and sums
/// diam f(I)^s. B is centred on R.
CoveringSumSeries covering_sums(const PrincipalMapSolution& f, const std::vector<Interval>& set, double ball_center,
                                double ball_radius, double s, int max_generation, double k);

struct MainCheckReport {
  double k = 0.0;
  cplx center;
  double radius = 0.0;
  double parameter = 0.0;  // x with f(x) = center
  std::vector<Interval> preimage;
  CoveringSumSeries series;
  double sup_ratio = 0.0;  // sup_m S_m(1+k^2) / r^{1+k^2}
};

/// Parameter intervals where |f(x) - center| <= radius, found by a sweep of
/// step `step` over [lo, hi) refined by bisection.
std::vector<Interval> ball_preimage_on_line(const PrincipalMapSolution& f, cplx center, double radius, double lo,
                                            double hi, double step);

/// Ball of radius r centred at f(x0) on the quasiline; E = f^-1(closed ball)
/// on the real axis; covering sums with s = 1 + k^2.
MainCheckReport theorem_main_check(const PrincipalMapSolution& f, double k, double x0, double radius,
                                   int max_generation);

/// Largest max(q, 1/q), q = |f(x+d) - f(x)| / |f(x) - f(x-d)|, over dyadic
/// triples of [a, b] of generations 1..generations.
double quasisymmetry_ratio(const PrincipalMapSolution& f, double a, double b, int generations);

/// f(x) at `count` equally spaced parameters of [a, b].
std::vector<cplx> sample_curve(const PrincipalMapSolution& f, double a, double b, int count);

struct DimensionFit {
  std::vector<double> scales;
  std::vector<double> counts;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double reference_upper = 0.0;  // 1 + k^2
  double reference_lower = 0.0;  // 1 + 0.69 k^2
};

/// Box counts at scales delta = coarsest * 2^-j for j = 0..levels-1 and the
/// least-squares slope of log N against log(1/delta). Needs >= 10^4 samples
/// dense enough for the finest scale.
DimensionFit box_dimension(const std::vector<cplx>& curve, double coarsest, int levels, double k = 0.0);

}  // namespace qclab
