#include "qclab/field.hpp"

#include <algorithm>
#include <cmath>

#include "qclab/errors.hpp"

namespace qclab {

GridSpec::GridSpec(double half_width, int resolution)
    : half_width_(half_width), resolution_(resolution), spacing_(2.0 * half_width / resolution) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ConfigError("grid half width must be positive and finite");
  if (resolution < 16 || resolution % 2 != 0)
    throw ConfigError("grid resolution must be even and >= 16, got " + std::to_string(resolution));
}

bool GridSpec::in_guard_band(cplx z) const noexcept {
  const double half = 0.5 * half_width_;
  return std::abs(z.real()) <= half && std::abs(z.imag()) <= half;
}

bool GridSpec::contains(cplx z) const noexcept {
  return z.real() >= -half_width_ && z.real() < half_width_ && z.imag() >= -half_width_ &&
         z.imag() < half_width_;
}

ComplexField::ComplexField(const GridSpec& spec) : spec_(spec), samples_(spec.sample_count()) {}

ComplexField::ComplexField(const GridSpec& spec, std::vector<cplx> samples)
    : spec_(spec), samples_(std::move(samples)) {
  if (samples_.size() != spec_.sample_count())
    throw ConfigError("field sample count " + std::to_string(samples_.size()) + " does not match grid " +
                      std::to_string(spec_.resolution()) + "^2");
}

double ComplexField::l2_norm() const noexcept {
  double sum = 0.0;
  for (const cplx& v : samples_) sum += std::norm(v);
  return spec_.spacing() * std::sqrt(sum);
}

double ComplexField::sup_norm() const noexcept {
  double best = 0.0;
  for (const cplx& v : samples_) best = std::max(best, std::abs(v));
  return best;
}

cplx ComplexField::mean() const noexcept {
  cplx sum = 0.0;
  for (const cplx& v : samples_) sum += v;
  return sum / static_cast<double>(samples_.size());
}

cplx ComplexField::integral() const noexcept {
  cplx sum = 0.0;
  for (const cplx& v : samples_) sum += v;
  return sum * (spec_.spacing() * spec_.spacing());
}

double ComplexField::outside_guard_band() const noexcept {
  double best = 0.0;
  const int n = spec_.resolution();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!spec_.in_guard_band(spec_.point(i, j))) best = std::max(best, std::abs((*this)(i, j)));
  return best;
}

void ComplexField::require_same_grid(const ComplexField& other) const {
  if (!(spec_ == other.spec_)) throw ConfigError("fields live on different grids");
}

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  require_same_grid(other);
  for (std::size_t n = 0; n < samples_.size(); ++n) samples_[n] += other.samples_[n];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
  require_same_grid(other);
  for (std::size_t n = 0; n < samples_.size(); ++n) samples_[n] -= other.samples_[n];
  return *this;
}

ComplexField& ComplexField::operator*=(cplx scalar) noexcept {
  for (cplx& v : samples_) v *= scalar;
  return *this;
}

ComplexField& ComplexField::multiply(const ComplexField& other) {
  require_same_grid(other);
  for (std::size_t n = 0; n < samples_.size(); ++n) samples_[n] *= other.samples_[n];
  return *this;
}

double relative_l2_error(const ComplexField& a, const ComplexField& b) {
  const double denom = b.l2_norm();
  const double num = (a - b).l2_norm();
  if (denom == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return num / denom;
}

ComplexField unit_disk_indicator(const GridSpec& spec, double radius) {
  return ComplexField::from_function(spec, [radius](cplx z) { return std::abs(z) <= radius ? cplx(1.0) : cplx(0.0); });
}

}  // namespace qclab
