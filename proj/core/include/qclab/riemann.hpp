#pragma once

#include <cstdint>
#include <vector>

#include "qclab/beltrami.hpp"
#include "qclab/quadrature.hpp"

namespace qclab {

/// phi(z) = ((1+z)/2)^{1-k} on the unit disk. The superlevel sets of |phi'|
/// are the lenses D cap B(-1, c) with c = 2 (2 rho / (1-k))^{-1/k}.
struct PowerMapSpec {
  double k = 0.5;

  static PowerMapSpec make(double k);
  cplx value(cplx z) const;
  cplx derivative(cplx z) const;
  double derivative_modulus(cplx z) const;
  double derivative_at_origin() const;  // (1-k) 2^{k-1}
  /// Radius c of the lens where |phi'| > rho.
  double superlevel_radius(double rho) const;
  double superlevel_measure(double rho) const;
  /// lim rho^{2/k} |{|phi'| > rho}| = 2 pi ((1-k)/2)^{2/k}, also the supremum.
  double scaled_limit() const;
  /// \int over D cap B(-1, delta) of |phi'|^2, from polar coordinates about -1.
  double cap_integral(double delta) const;
  /// No two of `count` Halton points of D have images within 1e-9 unless
  /// the points themselves are that close.
  bool injective_on_samples(int count = 10000) const;
};

/// |D cap B(-1, c)| for 0 <= c <= 2.
double lens_area(double c);

/// Increasing log-spaced grid with `per_decade` points per decade.
std::vector<double> log_grid(double lo, double hi, int per_decade);

/// Thresholds for the power map spanning `decades` decades, starting where
/// the lens radius equals c_max.
std::vector<double> power_map_thresholds(const PowerMapSpec& map, double decades = 3.0, double c_max = 0.02,
                                         int per_decade = 20);

struct TailStatistics {
  double k = 0.0;
  std::vector<double> thresholds;
  std::vector<double> measures;
  std::vector<double> scaled;  // rho^{2/k} measure
  double slope = 0.0;
  double slope_stderr = 0.0;
  std::size_t fit_first = 0;
  std::size_t fit_count = 0;
  double region_area = 0.0;
  bool degenerate = false;
  std::size_t cells = 0;

  double sup_scaled() const;
};

struct TailOptions {
  QuadratureOptions quadrature;
  /// The slope fit uses thresholds whose measure lies within these fractions
  /// of the region area (and is positive).
  double fit_min_fraction = 0.0;
  double fit_max_fraction = 1.0;
  double min_decades = 3.0;
};

TailStatistics tail_statistics(const ScalarSampler& derivative_modulus, double k, const std::vector<double>& thresholds,
                               const AreaRegion& region, const TailOptions& options = {});

struct AreaDistortionReport {
  double k = 0.0;
  double image_area = 0.0;   // \int_E |phi'|^2
  double coarse_image_area = 0.0;
  double region_area = 0.0;
  double derivative_at_origin = 0.0;
  double ratio = 0.0;  // |phi(E)| / (|phi'(0)|^2 |E|^{1-k})
  double consistency = 0.0;  // relative change against half resolution
  /// Set when E comes within 2h of the unit circle and the map was not
  /// declared to extend continuously there.
  bool boundary_flag = false;
};

/// Throws ResolutionError when the half-resolution run differs by more than 2%.
AreaDistortionReport area_distortion(const ScalarSampler& derivative_modulus, const AreaRegion& region, double k,
                                     double derivative_at_origin, bool extends_to_boundary,
                                     const QuadratureOptions& options = {2048, 1e-2, 44, 60'000'000});

struct LayerCakeReport {
  double direct = 0.0;
  double layer_cake = 0.0;
  double discrepancy = 0.0;  // |layer_cake - direct| / direct
  double split = 0.0;        // T = |E|^{-k/2}
  double below_split = 0.0;  // part of the layer-cake integral with rho <= T
  double head = 0.0;
  double tail = 0.0;
};

/// 2 \int rho m(rho) d rho as head rho_0^2 |E| + trapezoid over the grid +
/// power-law tail beyond the last threshold. Throws ResolutionError when the
/// discrepancy against the direct integral exceeds 10%.
LayerCakeReport layer_cake_consistency(const TailStatistics& tails, double direct_integral);

struct SolverTailOptions {
  double half_width = 4.0;
  int resolution = 512;
  double inner_radius = 1.1;
  double outer_radius = 1.6;
  double disk_radius = 0.95;
  int base_resolution = 512;
  int thresholds = 48;
};

struct SolverTailReport {
  double k = 0.0;
  std::uint64_t seed = 0;
  TailStatistics tails;
  double reference_slope = 0.0;  // -2/k
  /// Fitted decay is at least the weak-L^{2/k} rate: slope <= -2/k + 0.1.
  bool pass = false;
  int iterations = 0;
  double residual = 0.0;
};

/// Random dilatation of modulus k on the annulus inner <= |z| <= outer,
/// piecewise constant on polar cells.
BeltramiCoefficient random_annulus_dilatation(const GridSpec& spec, double k, std::uint64_t seed, double inner,
                                              double outer);

SolverTailReport solver_backed_riemann_tail(double k, std::uint64_t seed, const SolverTailOptions& options = {});

}  // namespace qclab
