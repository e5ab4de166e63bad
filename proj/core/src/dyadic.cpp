#include "qclab/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "qclab/beltrami.hpp"
#include "qclab/errors.hpp"

namespace qclab {

double DyadicSquare::side(const DyadicLattice& lattice) const noexcept {
  return std::ldexp(lattice.root_side, -generation);
}

cplx DyadicSquare::corner(const DyadicLattice& lattice) const noexcept {
  const double s = side(lattice);
  return lattice.origin + cplx(static_cast<double>(i) * s, static_cast<double>(j) * s);
}

cplx DyadicSquare::center(const DyadicLattice& lattice) const noexcept {
  const double s = side(lattice);
  return corner(lattice) + cplx(0.5 * s, 0.5 * s);
}

double packing_term(int depth, double t) noexcept { return std::exp2(-t * depth); }

namespace {

void check_exponent(double t) {
  if (!(t > 0.0) || !(t <= 2.0)) throw DomainError("packing exponent t must lie in (0, 2]");
}

// Smallest d >= 0 with (v >> d) in {0, -1}.
int depth_to_fixed_point(std::int64_t v) {
  int d = 0;
  while (v != 0 && v != -1) {
    v >>= 1;
    ++d;
  }
  return d;
}

// Generation at and above which each member's ancestors are one of the four
// squares touching the lattice origin; the member sets stop changing there.
int stable_generation(const std::vector<DyadicSquare>& members) {
  int g = members.front().generation;
  for (const DyadicSquare& q : members)
    g = std::min(g, q.generation - std::max(depth_to_fixed_point(q.i), depth_to_fixed_point(q.j)));
  return g;
}

// Collects, for every strict ancestor down to `stop`, the member indices in
// family order.
std::map<DyadicSquare, std::vector<int>> ancestor_table(const std::vector<DyadicSquare>& members) {
  std::map<DyadicSquare, std::vector<int>> table;
  const int stop = stable_generation(members);
  for (int m = 0; m < static_cast<int>(members.size()); ++m) {
    const DyadicSquare& q = members[m];
    for (int g = q.generation - 1; g >= stop; --g) table[q.ancestor(g)].push_back(m);
  }
  return table;
}

struct IntRect {
  std::int64_t x0, x1, y0, y1;  // closed
};

// Closed doubles 2Q in integer units of a quarter of the finest side.
std::vector<IntRect> doubled_rects(const SquareFamily& family) {
  const int finest = family.finest_generation();
  const int coarsest = family.coarsest_generation();
  if (finest - coarsest > 58) throw DomainError("generation spread too large for exact dyadic arithmetic");
  std::vector<IntRect> rects;
  rects.reserve(family.size());
  for (const DyadicSquare& q : family.members()) {
    const std::int64_t s = std::int64_t{4} << (finest - q.generation);
    const std::int64_t x = q.i * s;
    const std::int64_t y = q.j * s;
    rects.push_back({x - s / 2, x + s + s / 2, y - s / 2, y + s + s / 2});
  }
  return rects;
}

}  // namespace

SquareFamily::SquareFamily(DyadicLattice lattice, std::vector<DyadicSquare> members, double t)
    : lattice_(lattice), members_(std::move(members)), t_(t) {
  if (!(lattice_.root_side > 0.0)) throw ConfigError("lattice root side must be positive");
  check_exponent(t_);
  if (members_.empty()) return;
  std::set<DyadicSquare> seen(members_.begin(), members_.end());
  if (seen.size() != members_.size()) throw DomainError("family lists a square twice");
  const int top = coarsest_generation();
  for (const DyadicSquare& q : members_) {
    for (int g = q.generation - 1; g >= top; --g) {
      if (seen.count(q.ancestor(g))) {
        std::ostringstream msg;
        msg << "family squares overlap: (" << q.generation << ", " << q.i << ", " << q.j << ") lies inside a member";
        throw DomainError(msg.str());
      }
    }
  }
}

bool SquareFamily::contains_member(const DyadicSquare& q) const {
  return std::find(members_.begin(), members_.end(), q) != members_.end();
}

int SquareFamily::finest_generation() const {
  int g = members_.front().generation;
  for (const auto& q : members_) g = std::max(g, q.generation);
  return g;
}

int SquareFamily::coarsest_generation() const {
  int g = members_.front().generation;
  for (const auto& q : members_) g = std::min(g, q.generation);
  return g;
}

SmoothnessParts smoothness_parts(const SquareFamily& family) {
  if (family.size() == 0) throw DomainError("smoothness of an empty family is undefined");
  const auto& members = family.members();
  const std::vector<IntRect> rects = doubled_rects(family);
  const std::size_t n = rects.size();

  SmoothnessParts parts;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const bool meet = rects[a].x0 <= rects[b].x1 && rects[b].x0 <= rects[a].x1 && rects[a].y0 <= rects[b].y1 &&
                        rects[b].y0 <= rects[a].y1;
      if (!meet) continue;
      const int dg = std::abs(members[a].generation - members[b].generation);
      parts.side_ratio = std::max(parts.side_ratio, std::ldexp(1.0, dg));
    }
  }

  // Point of maximal overlap: every cell of the arrangement contains a point
  // whose x is an edge or the midpoint between consecutive edges (doubled
  // coordinates keep midpoints integral).
  std::vector<std::int64_t> xs;
  for (const auto& r : rects) {
    xs.push_back(2 * r.x0);
    xs.push_back(2 * r.x1);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<std::int64_t> probes;
  for (std::size_t a = 0; a < xs.size(); ++a) {
    probes.push_back(xs[a]);
    if (a + 1 < xs.size()) probes.push_back((xs[a] + xs[a + 1]) / 2);
  }
  std::vector<std::pair<std::int64_t, int>> events;
  for (std::int64_t x : probes) {
    events.clear();
    for (const auto& r : rects) {
      if (2 * r.x0 <= x && x <= 2 * r.x1) {
        events.emplace_back(r.y0, -1);  // opening sorts before closing at equal y
        events.emplace_back(r.y1, +1);
      }
    }
    std::sort(events.begin(), events.end());
    int count = 0;
    for (const auto& [y, kind] : events) {
      count -= kind;
      parts.max_overlap = std::max(parts.max_overlap, count);
    }
  }
  return parts;
}

double smoothness_tau(const SquareFamily& family) {
  const SmoothnessParts parts = smoothness_parts(family);
  return std::max({1.0, parts.side_ratio, static_cast<double>(parts.max_overlap)});
}

PackingResult packing_alpha(const SquareFamily& family, double t) {
  check_exponent(t);
  PackingResult result;
  if (family.size() < 2) return result;
  const auto& members = family.members();
  for (const auto& [r, inside] : ancestor_table(members)) {
    if (inside.size() < 2) continue;
    double sum = 0.0;
    for (int m : inside) sum += packing_term(members[m].generation - r.generation, t);
    if (!result.admissible || sum > result.alpha) {
      result.alpha = sum;
      result.maximizer = r;
      result.admissible = true;
    }
  }
  return result;
}

double quasisquare_diameter(const PrincipalMapSolution& map, const DyadicLattice& lattice, const DyadicSquare& q,
                            int boundary_samples) {
  if (boundary_samples < 16) throw DomainError("quasisquare diameter needs at least 16 boundary samples");
  const double s = q.side(lattice);
  const cplx c = q.corner(lattice);
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(boundary_samples));
  for (int p = 0; p < boundary_samples; ++p) {
    const double arc = 4.0 * s * p / boundary_samples;
    const int edge = std::min(3, static_cast<int>(arc / s));
    const double u = arc - edge * s;
    cplx z;
    switch (edge) {
      case 0: z = c + cplx(u, 0.0); break;
      case 1: z = c + cplx(s, u); break;
      case 2: z = c + cplx(s - u, s); break;
      default: z = c + cplx(0.0, s - u); break;
    }
    pts.push_back(evaluate(map, z));
  }
  double diam = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) diam = std::max(diam, std::abs(pts[a] - pts[b]));
  return diam;
}

PackingResult packing_alpha_quasi(const QuasisquareFamily& family, double t) {
  check_exponent(t);
  if (!family.map) throw ConfigError("quasisquare family has no map");
  PackingResult result;
  const auto& members = family.base.members();
  if (members.size() < 2) return result;
  const DyadicLattice& lattice = family.base.lattice();
  std::vector<double> member_term(members.size());
  for (std::size_t m = 0; m < members.size(); ++m)
    member_term[m] = std::pow(quasisquare_diameter(*family.map, lattice, members[m], family.boundary_samples), t);
  for (const auto& [r, inside] : ancestor_table(members)) {
    if (inside.size() < 2) continue;
    double sum = 0.0;
    for (int m : inside) sum += member_term[m];
    sum /= std::pow(quasisquare_diameter(*family.map, lattice, r, family.boundary_samples), t);
    if (!result.admissible || sum > result.alpha) {
      result.alpha = sum;
      result.maximizer = r;
      result.admissible = true;
    }
  }
  return result;
}

PackingWeight::PackingWeight(SquareFamily fam) : family(std::move(fam)) {
  density.reserve(family.size());
  for (const auto& q : family.members()) density.push_back(std::pow(q.side(family.lattice()), family.t() - 2.0));
}

double PackingWeight::total_mass() const {
  double sum = 0.0;
  for (const auto& q : family.members()) sum += std::pow(q.side(family.lattice()), family.t());
  return sum;
}

double weight_measure(const PackingWeight& w, const std::vector<DyadicSquare>& region) {
  std::vector<DyadicSquare> pieces;
  for (const auto& r : region) {
    const bool covered = std::any_of(region.begin(), region.end(),
                                     [&r](const DyadicSquare& o) { return o != r && o.contains(r); });
    if (!covered && std::find(pieces.begin(), pieces.end(), r) == pieces.end()) pieces.push_back(r);
  }
  const DyadicLattice& lattice = w.family.lattice();
  double total = 0.0;
  for (std::size_t m = 0; m < w.family.size(); ++m) {
    const DyadicSquare& p = w.family.members()[m];
    for (const auto& r : pieces) {
      if (r.contains(p)) {
        total += w.density[m] * p.side(lattice) * p.side(lattice);
      } else if (p.contains(r)) {
        total += w.density[m] * r.side(lattice) * r.side(lattice);
      }
    }
  }
  return total;
}

namespace {

struct IndexRange {
  int lo, hi;  // [lo, hi)
};

IndexRange sample_range(double lo, double hi, const GridSpec& spec) {
  const double L = spec.half_width();
  const double h = spec.spacing();
  const int n = spec.resolution();
  const int a = static_cast<int>(std::ceil((lo + L) / h - 1e-9));
  const int b = static_cast<int>(std::ceil((hi + L) / h - 1e-9));
  return {std::clamp(a, 0, n), std::clamp(b, 0, n)};
}

}  // namespace

std::vector<int> rasterize_members(const SquareFamily& family, const GridSpec& spec) {
  std::vector<int> owner(spec.sample_count(), -1);
  for (std::size_t m = 0; m < family.size(); ++m) {
    const DyadicSquare& q = family.members()[m];
    const cplx c = q.corner(family.lattice());
    const double s = q.side(family.lattice());
    const IndexRange xr = sample_range(c.real(), c.real() + s, spec);
    const IndexRange yr = sample_range(c.imag(), c.imag() + s, spec);
    for (int i = xr.lo; i < xr.hi; ++i)
      for (int j = yr.lo; j < yr.hi; ++j) owner[spec.index(i, j)] = static_cast<int>(m);
  }
  return owner;
}

std::vector<double> rasterize_weight(const PackingWeight& w, const GridSpec& spec, int min_samples) {
  const DyadicLattice& lattice = w.family.lattice();
  for (const auto& q : w.family.members()) {
    if (q.side(lattice) < min_samples * spec.spacing() * (1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << "square of side " << q.side(lattice) << " has fewer than " << min_samples
          << " samples per side at spacing " << spec.spacing();
      throw ResolutionError(msg.str());
    }
    const cplx c = q.corner(lattice);
    const double s = q.side(lattice);
    if (!spec.in_guard_band(c) || !spec.in_guard_band(c + cplx(s, s)))
      throw ResolutionError("family leaves the guard band of the grid");
  }
  const std::vector<int> owner = rasterize_members(w.family, spec);
  std::vector<double> out(owner.size(), 0.0);
  for (std::size_t p = 0; p < owner.size(); ++p)
    if (owner[p] >= 0) out[p] = w.density[static_cast<std::size_t>(owner[p])];
  return out;
}

std::vector<SquareFamily> split_into_packed_subfamilies(const SquareFamily& family, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("target packing constant must be positive");
  if (family.size() == 0) return {};
  const auto& members = family.members();
  const DyadicLattice& lattice = family.lattice();
  const int g = members.front().generation;
  const std::int64_t row = members.front().j;
  for (const auto& q : members) {
    if (q.generation != g || q.j != row) throw DomainError("split needs equal squares on one row");
  }
  const double centre_y = members.front().center(lattice).imag();
  if (std::abs(centre_y) > 1e-12 * std::max(1.0, members.front().side(lattice)))
    throw DomainError("split needs squares centred on the real axis");

  std::vector<DyadicSquare> sorted = members;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.i < b.i; });
  for (std::size_t parts = 1; parts <= sorted.size(); ++parts) {
    std::vector<std::vector<DyadicSquare>> buckets(parts);
    for (std::size_t q = 0; q < sorted.size(); ++q) buckets[q % parts].push_back(sorted[q]);
    std::vector<SquareFamily> out;
    bool ok = true;
    for (auto& b : buckets) {
      SquareFamily part(lattice, std::move(b), family.t());
      if (packing_alpha(part, family.t()).alpha > alpha) {
        ok = false;
        break;
      }
      out.push_back(std::move(part));
    }
    if (ok) return out;
  }
  throw DomainError("no round-robin split verifies the packing bound");  // unreachable: singletons have alpha 0
}

void write_family(const SquareFamily& family, std::ostream& out) {
  out.precision(17);
  out << "# qclab dyadic family v1\n";
  out << "lattice " << family.lattice().origin.real() << ' ' << family.lattice().origin.imag() << ' '
      << family.lattice().root_side << '\n';
  out << "t " << family.t() << '\n';
  for (const auto& q : family.members()) out << q.generation << ' ' << q.i << ' ' << q.j << '\n';
}

SquareFamily read_family(std::istream& in) {
  DyadicLattice lattice;
  double t = 1.0;
  std::vector<DyadicSquare> members;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    std::string head;
    row >> head;
    bool ok = true;
    if (head == "lattice") {
      double re = 0, im = 0;
      ok = static_cast<bool>(row >> re >> im >> lattice.root_side);
      lattice.origin = {re, im};
    } else if (head == "t") {
      ok = static_cast<bool>(row >> t);
    } else {
      DyadicSquare q;
      std::istringstream full(line);
      ok = static_cast<bool>(full >> q.generation >> q.i >> q.j);
      members.push_back(q);
    }
    if (!ok) throw ConfigError("family file line " + std::to_string(line_no) + ": cannot parse '" + line + "'");
  }
  return SquareFamily(lattice, std::move(members), t);
}

}  // namespace qclab
