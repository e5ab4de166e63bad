#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "qclab/region.hpp"

namespace qclab {

/// Union of pieces, each an intersection of closed disks. Membership near a
/// disk boundary is evaluated as (r - dx)(r + dx) - dy^2 >= 0, which keeps
/// full relative accuracy close to the points center +- r.
class AreaRegion {
 public:
  AreaRegion() = default;
  static AreaRegion disk(cplx center, double radius);
  /// D intersected with B(center, radius).
  static AreaRegion unit_disk_cap(cplx center, double radius);
  AreaRegion& add_piece(std::vector<Disk> intersection);

  bool empty() const noexcept { return pieces_.empty(); }
  bool contains(cplx z) const noexcept;
  /// True when some disk boundary of some piece passes through the closed cell.
  bool boundary_crosses(double x0, double y0, double side) const noexcept;
  /// Bounding box (x0, y0, x1, y1); throws DomainError on an empty region.
  std::array<double, 4> bounds() const;
  const std::vector<std::vector<Disk>>& pieces() const noexcept { return pieces_; }

 private:
  std::vector<std::vector<Disk>> pieces_;
};

using ScalarSampler = std::function<double(cplx)>;

struct QuadratureOptions {
  /// Cells per side of the base grid over the dyadic bounding square.
  int base_resolution = 2048;
  /// A cell is split when max/min of the sampler over its corners and centre
  /// exceeds 1 + log_tolerance and the cell matters (see below).
  double log_tolerance = 1e-3;
  int max_depth = 44;
  std::size_t max_cells = 60'000'000;
};

struct SuperlevelResult {
  std::vector<double> measures;  // |{z in E : g(z) > rho_i}|
  double area = 0.0;             // midpoint area of E
  std::size_t cells = 0;
  std::size_t depth_limited = 0;
};

/// Midpoint quadrature of the distribution function of g on E for sorted
/// thresholds. Cells are refined where a threshold lies between the sampled
/// extremes, or where the region boundary crosses a cell on which g exceeds
/// the smallest threshold, as long as g varies by more than the tolerance.
SuperlevelResult superlevel_measures(const ScalarSampler& g, const AreaRegion& region,
                                     const std::vector<double>& thresholds, const QuadratureOptions& options);

struct IntegralResult {
  double value = 0.0;
  double area = 0.0;
  std::size_t cells = 0;
  std::size_t depth_limited = 0;
};

/// Midpoint quadrature of g^2 over E, refining wherever g varies by more than
/// the tolerance.
IntegralResult integrate_squared(const ScalarSampler& g, const AreaRegion& region, const QuadratureOptions& options);

}  // namespace qclab
