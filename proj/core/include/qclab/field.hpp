#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qclab {

using cplx = std::complex<double>;

/// Periodic sampling of the square [-L, L)^2 with N points per axis.
///
/// Sample (i, j) sits at z = (-L + i h) + i(-L + j h), h = 2L/N. The
/// "guard band" is the central square max(|Re z|, |Im z|) <= L/2; fields
/// that stand in for compactly supported planar data must vanish outside it
/// so the periodic images do not interact.
class GridSpec {
 public:
  GridSpec(double half_width, int resolution);

  double half_width() const noexcept { return half_width_; }
  int resolution() const noexcept { return resolution_; }
  double spacing() const noexcept { return spacing_; }
  std::size_t sample_count() const noexcept {
    return static_cast<std::size_t>(resolution_) * static_cast<std::size_t>(resolution_);
  }

  cplx point(int i, int j) const noexcept {
    return {-half_width_ + i * spacing_, -half_width_ + j * spacing_};
  }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(resolution_) + static_cast<std::size_t>(j);
  }
  bool in_guard_band(cplx z) const noexcept;
  bool contains(cplx z) const noexcept;

  /// Row index mirrored across the real axis (j -> N - j, periodic).
  int mirror_row(int j) const noexcept { return (resolution_ - j) % resolution_; }
  /// Row nearest to the real axis.
  int real_axis_row() const noexcept { return resolution_ / 2; }

  friend bool operator==(const GridSpec& a, const GridSpec& b) noexcept {
    return a.half_width_ == b.half_width_ && a.resolution_ == b.resolution_;
  }

 private:
  double half_width_;
  int resolution_;
  double spacing_;
};

/// N x N complex samples on a GridSpec, row-major in (i, j) with i the
/// x index. Value type; copies are deep.
class ComplexField {
 public:
  explicit ComplexField(const GridSpec& spec);
  ComplexField(const GridSpec& spec, std::vector<cplx> samples);

  template <typename F>
  static ComplexField from_function(const GridSpec& spec, F&& fn) {
    ComplexField out(spec);
    const int n = spec.resolution();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.samples_[spec.index(i, j)] = fn(spec.point(i, j));
    return out;
  }

  const GridSpec& spec() const noexcept { return spec_; }
  int resolution() const noexcept { return spec_.resolution(); }

  cplx& operator()(int i, int j) noexcept { return samples_[spec_.index(i, j)]; }
  const cplx& operator()(int i, int j) const noexcept { return samples_[spec_.index(i, j)]; }

  std::span<cplx> samples() noexcept { return samples_; }
  std::span<const cplx> samples() const noexcept { return samples_; }
  std::vector<cplx>& data() noexcept { return samples_; }
  const std::vector<cplx>& data() const noexcept { return samples_; }

  /// h * (sum |f|^2)^{1/2}
  double l2_norm() const noexcept;
  double sup_norm() const noexcept;
  cplx mean() const noexcept;
  cplx integral() const noexcept;
  /// Largest |sample| outside the guard band.
  double outside_guard_band() const noexcept;

  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  ComplexField& operator*=(cplx scalar) noexcept;
  /// Samplewise product.
  ComplexField& multiply(const ComplexField& other);

  friend ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
  friend ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
  friend ComplexField operator*(ComplexField a, cplx s) { return a *= s; }
  friend ComplexField operator*(cplx s, ComplexField a) { return a *= s; }

 private:
  void require_same_grid(const ComplexField& other) const;

  GridSpec spec_;
  std::vector<cplx> samples_;
};

/// Relative discrete L2 distance ||a - b|| / ||b|| (0 when both vanish).
double relative_l2_error(const ComplexField& a, const ComplexField& b);

/// Indicator of the closed unit disk sampled by center-point membership.
ComplexField unit_disk_indicator(const GridSpec& spec, double radius = 1.0);

}  // namespace qclab
