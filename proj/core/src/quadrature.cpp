#include "qclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qclab/errors.hpp"

namespace qclab {

namespace {

double clearance(const Disk& d, cplx z) noexcept {
  const double dx = z.real() - d.center.real();
  const double dy = z.imag() - d.center.imag();
  return (d.radius - dx) * (d.radius + dx) - dy * dy;
}

}  // namespace

AreaRegion AreaRegion::disk(cplx center, double radius) {
  AreaRegion r;
  r.add_piece({Disk{center, radius}});
  return r;
}

AreaRegion AreaRegion::unit_disk_cap(cplx center, double radius) {
  AreaRegion r;
  r.add_piece({Disk{0.0, 1.0}, Disk{center, radius}});
  return r;
}

AreaRegion& AreaRegion::add_piece(std::vector<Disk> intersection) {
  if (intersection.empty()) throw DomainError("region piece needs at least one disk");
  for (const Disk& d : intersection)
    if (!(d.radius > 0.0)) throw DomainError("region disk radius must be positive");
  pieces_.push_back(std::move(intersection));
  return *this;
}

bool AreaRegion::contains(cplx z) const noexcept {
  return std::any_of(pieces_.begin(), pieces_.end(), [z](const std::vector<Disk>& piece) {
    return std::all_of(piece.begin(), piece.end(), [z](const Disk& d) { return clearance(d, z) >= 0.0; });
  });
}

bool AreaRegion::boundary_crosses(double x0, double y0, double side) const noexcept {
  for (const auto& piece : pieces_) {
    for (const Disk& d : piece) {
      const double cx = d.center.real(), cy = d.center.imag();
      const double nx = std::clamp(cx, x0, x0 + side) - cx;
      const double ny = std::clamp(cy, y0, y0 + side) - cy;
      const double fx = std::max(std::abs(x0 - cx), std::abs(x0 + side - cx));
      const double fy = std::max(std::abs(y0 - cy), std::abs(y0 + side - cy));
      const double r2 = d.radius * d.radius;
      if (nx * nx + ny * ny <= r2 && fx * fx + fy * fy >= r2) return true;
    }
  }
  return false;
}

std::array<double, 4> AreaRegion::bounds() const {
  if (pieces_.empty()) throw DomainError("empty region has no bounds");
  std::array<double, 4> out{INFINITY, INFINITY, -INFINITY, -INFINITY};
  for (const auto& piece : pieces_) {
    std::array<double, 4> b{-INFINITY, -INFINITY, INFINITY, INFINITY};
    for (const Disk& d : piece) {
      b[0] = std::max(b[0], d.center.real() - d.radius);
      b[1] = std::max(b[1], d.center.imag() - d.radius);
      b[2] = std::min(b[2], d.center.real() + d.radius);
      b[3] = std::min(b[3], d.center.imag() + d.radius);
    }
    if (b[0] > b[2] || b[1] > b[3]) continue;
    out[0] = std::min(out[0], b[0]);
    out[1] = std::min(out[1], b[1]);
    out[2] = std::max(out[2], b[2]);
    out[3] = std::max(out[3], b[3]);
  }
  if (!(out[0] <= out[2])) throw DomainError("region pieces are all empty");
  return out;
}

namespace {

struct Cell {
  double x0, y0, side;
  int depth;
  // corners (x0,y0), (x1,y0), (x0,y1), (x1,y1), then centre
  std::array<double, 5> g;
};

double sample(const ScalarSampler& g, double x, double y) {
  const double v = g({x, y});
  return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}

// Walks the quadtree; `split` decides refinement, `leaf` receives the cells
// that are kept.
template <typename Split, typename Leaf>
void walk(const ScalarSampler& g, const AreaRegion& region, const QuadratureOptions& opt, std::size_t& cells,
          std::size_t& limited, Split&& split, Leaf&& leaf) {
  if (opt.base_resolution < 2) throw DomainError("quadrature base resolution must be at least 2");
  const auto box = region.bounds();
  const double extent = std::max(box[2] - box[0], box[3] - box[1]);
  // Dyadic cell size and origin keep every sub-cell coordinate exact.
  const double s = std::exp2(std::ceil(std::log2(extent / opt.base_resolution)));
  const double x0 = std::floor(box[0] / s) * s;
  const double y0 = std::floor(box[1] / s) * s;
  const int nx = static_cast<int>(std::ceil((box[2] - x0) / s));
  const int ny = static_cast<int>(std::ceil((box[3] - y0) / s));

  std::vector<double> corner(static_cast<std::size_t>(nx + 1) * static_cast<std::size_t>(ny + 1));
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j)
      corner[static_cast<std::size_t>(i) * (ny + 1) + j] = sample(g, x0 + i * s, y0 + j * s);

  std::vector<Cell> stack;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      auto at = [&](int a, int b) { return corner[static_cast<std::size_t>(a) * (ny + 1) + b]; };
      const double cx = x0 + i * s, cy = y0 + j * s;
      stack.push_back({cx, cy, s, 0,
                       {at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1), sample(g, cx + 0.5 * s, cy + 0.5 * s)}});
      while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        if (++cells > opt.max_cells) throw ResolutionError("adaptive quadrature exceeded its cell budget");
        const cplx mid(c.x0 + 0.5 * c.side, c.y0 + 0.5 * c.side);
        const bool crosses = region.boundary_crosses(c.x0, c.y0, c.side);
        const bool inside = region.contains(mid);
        if (!crosses && !inside) continue;
        const auto [lo, hi] = std::minmax_element(c.g.begin(), c.g.end());
        const bool varies = !std::isfinite(*hi) || *hi > *lo * (1.0 + opt.log_tolerance);
        if (varies && split(*lo, *hi, crosses)) {
          if (c.depth < opt.max_depth) {
            const double h = 0.5 * c.side;
            const double xm = c.x0 + h, ym = c.y0 + h, x1 = c.x0 + c.side, y1 = c.y0 + c.side;
            const double bottom = sample(g, xm, c.y0), top = sample(g, xm, y1);
            const double left = sample(g, c.x0, ym), right = sample(g, x1, ym);
            const double q = 0.5 * h;
            stack.push_back({c.x0, c.y0, h, c.depth + 1, {c.g[0], bottom, left, c.g[4], sample(g, c.x0 + q, c.y0 + q)}});
            stack.push_back({xm, c.y0, h, c.depth + 1, {bottom, c.g[1], c.g[4], right, sample(g, xm + q, c.y0 + q)}});
            stack.push_back({c.x0, ym, h, c.depth + 1, {left, c.g[4], c.g[2], top, sample(g, c.x0 + q, ym + q)}});
            stack.push_back({xm, ym, h, c.depth + 1, {c.g[4], right, top, c.g[3], sample(g, xm + q, ym + q)}});
            continue;
          }
          ++limited;
        }
        if (inside) leaf(c.side * c.side, c.g[4]);
      }
    }
  }
}

}  // namespace

SuperlevelResult superlevel_measures(const ScalarSampler& g, const AreaRegion& region,
                                     const std::vector<double>& thresholds, const QuadratureOptions& options) {
  if (thresholds.empty()) throw DomainError("threshold grid is empty");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) throw DomainError("thresholds must be increasing");
  SuperlevelResult out;
  out.measures.assign(thresholds.size(), 0.0);
  if (region.empty()) return out;
  std::vector<double> bucket(thresholds.size() + 1, 0.0);
  auto index_of = [&thresholds](double v) {
    return static_cast<std::size_t>(std::lower_bound(thresholds.begin(), thresholds.end(), v) - thresholds.begin());
  };
  walk(
      g, region, options, out.cells, out.depth_limited,
      [&](double lo, double hi, bool crosses) {
        return index_of(lo) != index_of(hi) || (crosses && hi > thresholds.front());
      },
      [&](double area, double centre) {
        bucket[index_of(centre)] += area;
        out.area += area;
      });
  // measure_i collects cells whose centre value exceeds rho_i, i.e. buckets > i.
  double acc = 0.0;
  for (std::size_t i = thresholds.size(); i-- > 0;) {
    acc += bucket[i + 1];
    out.measures[i] = acc;
  }
  return out;
}

IntegralResult integrate_squared(const ScalarSampler& g, const AreaRegion& region, const QuadratureOptions& options) {
  IntegralResult out;
  if (region.empty()) return out;
  walk(
      g, region, options, out.cells, out.depth_limited, [](double, double, bool) { return true; },
      [&](double area, double centre) {
        out.value += area * centre * centre;
        out.area += area;
      });
  return out;
}

}  // namespace qclab
