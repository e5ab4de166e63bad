#pragma once

#include <vector>

#include "qclab/field.hpp"

namespace qclab {

struct Disk {
  cplx center;
  double radius = 0.0;
  bool contains(cplx z) const noexcept { return std::abs(z - center) <= radius; }
};

/// Closed axis-aligned square.
struct AxisSquare {
  cplx center;
  double half_side = 0.0;
  bool contains(cplx z) const noexcept {
    return std::abs(z.real() - center.real()) <= half_side && std::abs(z.imag() - center.imag()) <= half_side;
  }
};

/// Finite union of closed disks and squares. An empty region contains nothing.
class Region {
 public:
  Region() = default;
  Region(std::vector<Disk> disks, std::vector<AxisSquare> squares)
      : disks_(std::move(disks)), squares_(std::move(squares)) {}

  static Region disk(cplx center, double radius) { return Region({Disk{center, radius}}, {}); }

  Region& add(const Disk& d) {
    disks_.push_back(d);
    return *this;
  }
  Region& add(const AxisSquare& s) {
    squares_.push_back(s);
    return *this;
  }

  bool contains(cplx z) const noexcept;
  bool empty() const noexcept { return disks_.empty() && squares_.empty(); }
  /// True when z in region <=> conj(z) in region for each piece's mirror.
  bool conjugation_symmetric() const noexcept;

  const std::vector<Disk>& disks() const noexcept { return disks_; }
  const std::vector<AxisSquare>& squares() const noexcept { return squares_; }

  /// Indicator sampled by center-point membership.
  ComplexField indicator(const GridSpec& spec) const;

 private:
  std::vector<Disk> disks_;
  std::vector<AxisSquare> squares_;
};

}  // namespace qclab
