#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qclab/field.hpp"

namespace qclab {

struct PrincipalMapSolution;

/// Placement of the dyadic lattice: generation 0 squares have side
/// `root_side` and corners at origin + root_side (i + i j).
struct DyadicLattice {
  cplx origin{0.0, 0.0};
  double root_side = 1.0;
  friend bool operator==(const DyadicLattice&, const DyadicLattice&) = default;
};

/// Square [i, i+1) x [j, j+1) scaled by 2^-generation. All containment and
/// distance logic runs on the integer indices.
struct DyadicSquare {
  int generation = 0;
  std::int64_t i = 0;
  std::int64_t j = 0;

  DyadicSquare parent() const noexcept { return {generation - 1, i >> 1, j >> 1}; }
  /// Ancestor at a coarser (or equal) generation.
  DyadicSquare ancestor(int gen) const noexcept {
    const int d = generation - gen;
    return {gen, i >> d, j >> d};
  }
  bool contains(const DyadicSquare& other) const noexcept {
    return other.generation >= generation && other.ancestor(generation) == *this;
  }
  bool overlaps(const DyadicSquare& other) const noexcept { return contains(other) || other.contains(*this); }

  double side(const DyadicLattice& lattice) const noexcept;
  cplx corner(const DyadicLattice& lattice) const noexcept;
  cplx center(const DyadicLattice& lattice) const noexcept;

  friend auto operator<=>(const DyadicSquare&, const DyadicSquare&) = default;
};

/// One summand l(Q)^t / l(R)^t for Q sitting `depth` generations below R.
/// Shared by every routine that compares packing sums bit for bit.
double packing_term(int depth, double t) noexcept;

/// Finite family of pairwise disjoint dyadic squares with a packing exponent.
class SquareFamily {
 public:
  SquareFamily(DyadicLattice lattice, std::vector<DyadicSquare> members, double t);

  const DyadicLattice& lattice() const noexcept { return lattice_; }
  const std::vector<DyadicSquare>& members() const noexcept { return members_; }
  double t() const noexcept { return t_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains_member(const DyadicSquare& q) const;
  int finest_generation() const;
  int coarsest_generation() const;

 private:
  DyadicLattice lattice_;
  std::vector<DyadicSquare> members_;
  double t_;
};

/// Least tau >= 1 for which the family is tau-smooth: neighbours whose closed
/// doubles meet have side ratio <= tau, and the doubles overlap at most tau
/// times. Throws DomainError on an empty family.
double smoothness_tau(const SquareFamily& family);

struct SmoothnessParts {
  double side_ratio = 1.0;
  int max_overlap = 0;
};
SmoothnessParts smoothness_parts(const SquareFamily& family);

struct PackingResult {
  double alpha = 0.0;
  /// False when no dyadic square holds two members (alpha reported as 0).
  bool admissible = false;
  std::optional<DyadicSquare> maximizer;
};

/// max over dyadic R holding >= 2 members of sum_{Q in R} l(Q)^t / l(R)^t.
/// Candidates are the ancestors of members; the maximum sits at a minimal
/// common ancestor of some pair.
PackingResult packing_alpha(const SquareFamily& family, double t);

/// Images of a dyadic family under a solved map; diameters are estimated from
/// `boundary_samples` equally spaced boundary points.
struct QuasisquareFamily {
  SquareFamily base;
  const PrincipalMapSolution* map = nullptr;
  int boundary_samples = 64;
};

double quasisquare_diameter(const PrincipalMapSolution& map, const DyadicLattice& lattice, const DyadicSquare& q,
                            int boundary_samples);

/// packing_alpha with l(.) replaced by sampled image diameters; R ranges over
/// images of dyadic ancestors of members.
PackingResult packing_alpha_quasi(const QuasisquareFamily& family, double t);

/// omega = sum_P l(P)^{t-2} chi_P.
struct PackingWeight {
  SquareFamily family;
  std::vector<double> density;  // l(P)^{t-2}, aligned with family.members()

  explicit PackingWeight(SquareFamily fam);
  double t() const noexcept { return family.t(); }
  /// omega(C) = sum_P l(P)^t
  double total_mass() const;
};

/// omega(region) for a union of dyadic squares (nested region pieces are merged).
double weight_measure(const PackingWeight& w, const std::vector<DyadicSquare>& region);

/// Samplewise omega on a grid; members must be aligned with the lattice and
/// resolved by >= min_samples points per side (ResolutionError otherwise).
std::vector<double> rasterize_weight(const PackingWeight& w, const GridSpec& spec, int min_samples = 8);
/// Member index covering each sample (-1 when none).
std::vector<int> rasterize_members(const SquareFamily& family, const GridSpec& spec);

/// Round-robin split of a row of equal squares centred on R into parts whose
/// packing constant is <= alpha, using the fewest parts that verify.
std::vector<SquareFamily> split_into_packed_subfamilies(const SquareFamily& family, double alpha);

/// Text format: header "# qclab dyadic family v1", "lattice re im side", "t value",
/// then one "g i j" line per member.
void write_family(const SquareFamily& family, std::ostream& out);
SquareFamily read_family(std::istream& in);

/// Reference implementations by exhaustive enumeration, for cross-checks.
/// Every dyadic R from the family's common ancestor down to the finest
/// member generation is visited.
PackingResult packing_alpha_enumerated(const SquareFamily& family, double t);
/// Side ratios from all pairs of doubles in floating point; overlap counted
/// at every point of the lattice of quarter-finest-side spacing.
SmoothnessParts smoothness_parts_enumerated(const SquareFamily& family);

/// Random disjoint family inside the generation-0 square (0, 0) with between
/// 2 and max_members members of generations 1..max_generation.
SquareFamily random_square_family(std::uint64_t seed, int max_members, int max_generation, double t);

}  // namespace qclab
