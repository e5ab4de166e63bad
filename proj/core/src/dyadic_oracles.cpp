#include <algorithm>
#include <cmath>
#include <random>

#include "qclab/dyadic.hpp"
#include "qclab/errors.hpp"

namespace qclab {

namespace {

int common_generation(const SquareFamily& family) {
  const auto& members = family.members();
  for (int g = family.coarsest_generation();; --g) {
    const DyadicSquare a = members.front().ancestor(g);
    if (std::all_of(members.begin(), members.end(), [&](const DyadicSquare& q) { return q.ancestor(g) == a; }))
      return g;
  }
}

}  // namespace

PackingResult packing_alpha_enumerated(const SquareFamily& family, double t) {
  PackingResult result;
  if (family.size() < 2) return result;
  const auto& members = family.members();
  const int top = common_generation(family);
  const int finest = family.finest_generation();
  for (int g = top; g < finest; ++g) {
    std::int64_t i0 = INT64_MAX, i1 = INT64_MIN, j0 = INT64_MAX, j1 = INT64_MIN;
    for (const auto& q : members) {
      const DyadicSquare a = q.ancestor(std::min(g, q.generation));
      const int shift = g - a.generation;
      i0 = std::min(i0, a.i << shift);
      i1 = std::max(i1, ((a.i + 1) << shift) - 1);
      j0 = std::min(j0, a.j << shift);
      j1 = std::max(j1, ((a.j + 1) << shift) - 1);
    }
    for (std::int64_t i = i0; i <= i1; ++i) {
      for (std::int64_t j = j0; j <= j1; ++j) {
        const DyadicSquare r{g, i, j};
        int count = 0;
        double sum = 0.0;
        for (const auto& q : members) {
          if (q.generation > g && r.contains(q)) {
            ++count;
            sum += packing_term(q.generation - g, t);
          }
        }
        if (count < 2) continue;
        if (!result.admissible || sum > result.alpha) {
          result.alpha = sum;
          result.maximizer = r;
          result.admissible = true;
        }
      }
    }
  }
  return result;
}

SmoothnessParts smoothness_parts_enumerated(const SquareFamily& family) {
  if (family.size() == 0) throw DomainError("smoothness of an empty family is undefined");
  const auto& members = family.members();
  const DyadicLattice unit{};
  struct Box {
    double x0, x1, y0, y1;
  };
  std::vector<Box> boxes;
  for (const auto& q : members) {
    const double s = q.side(unit);
    const cplx c = q.corner(unit);
    boxes.push_back({c.real() - s / 2, c.real() + 1.5 * s, c.imag() - s / 2, c.imag() + 1.5 * s});
  }
  SmoothnessParts parts;
  for (std::size_t a = 0; a < boxes.size(); ++a)
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      if (a == b) continue;
      const Box &p = boxes[a], &q = boxes[b];
      if (p.x0 <= q.x1 && q.x0 <= p.x1 && p.y0 <= q.y1 && q.y0 <= p.y1)
        parts.side_ratio = std::max(parts.side_ratio, members[a].side(unit) / members[b].side(unit));
    }

  const double step = std::ldexp(1.0, -family.finest_generation()) / 4.0;
  double x0 = boxes.front().x0, x1 = boxes.front().x1, y0 = boxes.front().y0, y1 = boxes.front().y1;
  for (const auto& b : boxes) {
    x0 = std::min(x0, b.x0), x1 = std::max(x1, b.x1);
    y0 = std::min(y0, b.y0), y1 = std::max(y1, b.y1);
  }
  const auto nx = static_cast<std::int64_t>(std::llround((x1 - x0) / step));
  const auto ny = static_cast<std::int64_t>(std::llround((y1 - y0) / step));
  if (nx * ny > 50'000'000) throw DomainError("family too fine for the enumerated overlap count");
  for (std::int64_t a = 0; a <= nx; ++a) {
    const double x = x0 + static_cast<double>(a) * step;
    for (std::int64_t b = 0; b <= ny; ++b) {
      const double y = y0 + static_cast<double>(b) * step;
      int count = 0;
      for (const auto& box : boxes) count += box.x0 <= x && x <= box.x1 && box.y0 <= y && y <= box.y1;
      parts.max_overlap = std::max(parts.max_overlap, count);
    }
  }
  return parts;
}

SquareFamily random_square_family(std::uint64_t seed, int max_members, int max_generation, double t) {
  if (max_members < 2 || max_generation < 1 || max_generation > 30)
    throw DomainError("random family needs max_members >= 2 and 1 <= max_generation <= 30");
  std::mt19937_64 rng(seed);
  const int target = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_members - 1));
  std::vector<DyadicSquare> members;
  for (int attempt = 0; attempt < 200 * target && static_cast<int>(members.size()) < target; ++attempt) {
    const int g = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_generation));
    const std::uint64_t n = std::uint64_t{1} << g;
    const DyadicSquare q{g, static_cast<std::int64_t>(rng() % n), static_cast<std::int64_t>(rng() % n)};
    if (std::none_of(members.begin(), members.end(), [&](const DyadicSquare& p) { return p.overlaps(q); }))
      members.push_back(q);
  }
  if (members.size() < 2) members = {{1, 0, 0}, {1, 1, 1}};
  return SquareFamily(DyadicLattice{}, std::move(members), t);
}

}  // namespace qclab
