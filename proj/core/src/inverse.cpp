#include <algorithm>
#include <cmath>
#include <sstream>

#include "qclab/beltrami.hpp"
#include "qclab/errors.hpp"

namespace qclab {

// Lattice images are bucketed on a square grid of roughly one spacing; a
// query starts from the lattice point whose image is nearest and is then
// refined by damped Newton steps on the interpolated map.
MapInverter::MapInverter(const PrincipalMapSolution& f) : map_(f) {
  const GridSpec& spec = f.spec();
  const int n = spec.resolution();
  images_.resize(spec.sample_count());
  double lo_x = INFINITY, hi_x = -INFINITY, lo_y = INFINITY, hi_y = -INFINITY;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx w = spec.point(i, j) + f.displacement(i, j);
      images_[spec.index(i, j)] = w;
      lo_x = std::min(lo_x, w.real());
      hi_x = std::max(hi_x, w.real());
      lo_y = std::min(lo_y, w.imag());
      hi_y = std::max(hi_y, w.imag());
    }
  }
  bucket_size_ = spec.spacing();
  origin_ = {lo_x, lo_y};
  buckets_x_ = static_cast<int>((hi_x - lo_x) / bucket_size_) + 1;
  buckets_y_ = static_cast<int>((hi_y - lo_y) / bucket_size_) + 1;
  const std::size_t total = static_cast<std::size_t>(buckets_x_) * static_cast<std::size_t>(buckets_y_);
  std::vector<int> counts(total + 1, 0);
  auto bucket_of = [this](cplx w) {
    const int bx = std::clamp(static_cast<int>((w.real() - origin_.real()) / bucket_size_), 0, buckets_x_ - 1);
    const int by = std::clamp(static_cast<int>((w.imag() - origin_.imag()) / bucket_size_), 0, buckets_y_ - 1);
    return static_cast<std::size_t>(bx) * static_cast<std::size_t>(buckets_y_) + static_cast<std::size_t>(by);
  };
  for (const cplx& w : images_) ++counts[bucket_of(w) + 1];
  for (std::size_t b = 0; b < total; ++b) counts[b + 1] += counts[b];
  bucket_start_ = counts;
  bucket_items_.resize(images_.size());
  std::vector<int> fill(counts.begin(), counts.end() - 1);
  for (std::size_t p = 0; p < images_.size(); ++p) bucket_items_[fill[bucket_of(images_[p])]++] = static_cast<int>(p);
}

cplx MapInverter::nearest_lattice_preimage(cplx w) const {
  const GridSpec& spec = map_.spec();
  const int n = spec.resolution();
  const double gx = (w.real() - origin_.real()) / bucket_size_;
  const double gy = (w.imag() - origin_.imag()) / bucket_size_;
  if (gx < -2.0 || gy < -2.0 || gx > buckets_x_ + 2.0 || gy > buckets_y_ + 2.0) {
    std::ostringstream msg;
    msg << "no preimage of " << w << " inside the sampled grid";
    throw OutOfDomainError(msg.str());
  }
  const int bx = std::clamp(static_cast<int>(gx), 0, buckets_x_ - 1);
  const int by = std::clamp(static_cast<int>(gy), 0, buckets_y_ - 1);
  int best = -1;
  double best_dist = INFINITY;
  // Expand rings until a candidate is found and the ring is farther than it.
  for (int radius = 0; radius < std::max(buckets_x_, buckets_y_); ++radius) {
    for (int x = bx - radius; x <= bx + radius; ++x) {
      if (x < 0 || x >= buckets_x_) continue;
      for (int y = by - radius; y <= by + radius; ++y) {
        if (y < 0 || y >= buckets_y_) continue;
        if (std::max(std::abs(x - bx), std::abs(y - by)) != radius) continue;
        const std::size_t b = static_cast<std::size_t>(x) * static_cast<std::size_t>(buckets_y_) + static_cast<std::size_t>(y);
        for (int k = bucket_start_[b]; k < bucket_start_[b + 1]; ++k) {
          const int p = bucket_items_[k];
          const double d = std::abs(images_[p] - w);
          if (d < best_dist) {
            best_dist = d;
            best = p;
          }
        }
      }
    }
    if (best >= 0 && best_dist < (radius - 1) * bucket_size_) break;
  }
  if (best < 0) throw OutOfDomainError("preimage search found no lattice candidates");
  return spec.point(best / n, best % n);
}

cplx MapInverter::operator()(cplx w) const {
  const GridSpec& spec = map_.spec();
  const double h = spec.spacing();
  const double L = spec.half_width();
  const double fd = h / 8.0;
  auto clamp_to_grid = [L, h](cplx z) {
    return cplx(std::clamp(z.real(), -L, L - 1e-9 * h), std::clamp(z.imag(), -L, L - 1e-9 * h));
  };

  cplx z = nearest_lattice_preimage(w);
  cplx residual = evaluate(map_, z) - w;
  for (int it = 0; it < 40 && std::abs(residual) > 1e-13 * std::max(1.0, std::abs(w)); ++it) {
    const cplx fx = (evaluate(map_, clamp_to_grid(z + fd)) - evaluate(map_, clamp_to_grid(z - fd))) / (2 * fd);
    const cplx fy = (evaluate(map_, clamp_to_grid(z + cplx(0, fd))) - evaluate(map_, clamp_to_grid(z - cplx(0, fd)))) /
                    (2 * fd);
    // Real 2x2 Jacobian [Re fx, Re fy; Im fx, Im fy].
    const double a = fx.real(), b = fy.real(), c = fx.imag(), d = fy.imag();
    const double det = a * d - b * c;
    if (std::abs(det) < 1e-14) break;
    const double rx = residual.real(), ry = residual.imag();
    cplx step((d * rx - b * ry) / det, (-c * rx + a * ry) / det);
    double damping = 1.0;
    cplx trial = clamp_to_grid(z - step);
    cplx trial_residual = evaluate(map_, trial) - w;
    while (std::abs(trial_residual) > std::abs(residual) && damping > 1e-3) {
      damping *= 0.5;
      trial = clamp_to_grid(z - damping * step);
      trial_residual = evaluate(map_, trial) - w;
    }
    if (std::abs(trial_residual) >= std::abs(residual)) break;
    z = trial;
    residual = trial_residual;
  }
  if (std::abs(residual) > h) {
    std::ostringstream msg;
    msg << "numerical inverse of " << w << " left residual " << std::abs(residual);
    throw OutOfDomainError(msg.str());
  }
  return z;
}

cplx numerical_inverse(const PrincipalMapSolution& f, cplx w) { return MapInverter(f)(w); }

}  // namespace qclab
