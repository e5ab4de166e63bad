#include "qclab/region.hpp"

#include <algorithm>

namespace qclab {

bool Region::contains(cplx z) const noexcept {
  return std::any_of(disks_.begin(), disks_.end(), [z](const Disk& d) { return d.contains(z); }) ||
         std::any_of(squares_.begin(), squares_.end(), [z](const AxisSquare& s) { return s.contains(z); });
}

bool Region::conjugation_symmetric() const noexcept {
  auto disk_mirrored = [this](const Disk& d) {
    return std::any_of(disks_.begin(), disks_.end(), [&d](const Disk& e) {
      return e.radius == d.radius && e.center == std::conj(d.center);
    });
  };
  auto square_mirrored = [this](const AxisSquare& s) {
    return std::any_of(squares_.begin(), squares_.end(), [&s](const AxisSquare& e) {
      return e.half_side == s.half_side && e.center == std::conj(s.center);
    });
  };
  return std::all_of(disks_.begin(), disks_.end(), disk_mirrored) &&
         std::all_of(squares_.begin(), squares_.end(), square_mirrored);
}

ComplexField Region::indicator(const GridSpec& spec) const {
  return ComplexField::from_function(spec, [this](cplx z) { return contains(z) ? cplx(1.0) : cplx(0.0); });
}

}  // namespace qclab
