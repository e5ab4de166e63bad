#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "qclab/beltrami.hpp"
#include "qclab/dyadic.hpp"
#include "qclab/errors.hpp"

using namespace qclab;

namespace {

SquareFamily family(std::vector<DyadicSquare> members, double t = 1.0, DyadicLattice lattice = {}) {
  return SquareFamily(lattice, std::move(members), t);
}

}  // namespace

TEST_CASE("integer square arithmetic") {
  const DyadicSquare q{3, 5, 2};
  CHECK(q.parent() == DyadicSquare{2, 2, 1});
  CHECK(q.ancestor(0) == DyadicSquare{0, 0, 0});
  CHECK(DyadicSquare{1, 1, 0}.contains(q));
  CHECK_FALSE(q.contains(DyadicSquare{1, 1, 0}));
  CHECK(q.side({}) == 0.125);
  const DyadicLattice shifted{{-0.5, -0.5}, 2.0};
  CHECK(q.corner(shifted) == cplx(-0.5 + 5 * 0.25, -0.5 + 2 * 0.25));
  CHECK(packing_term(3, 1.0) == 0.125);
  CHECK(packing_term(0, 1.5) == 1.0);
  CHECK_THROWS_AS(family({{2, 0, 0}, {1, 0, 0}}), DomainError);  // nested members
}

TEST_CASE("smoothness examples") {
  CHECK(smoothness_tau(family({{0, 0, 0}})) == 1.0);
  const SquareFamily adjacent = family({{0, 0, 0}, {0, 1, 0}});
  const SmoothnessParts parts = smoothness_parts(adjacent);
  CHECK(parts.side_ratio == 1.0);
  CHECK(parts.max_overlap == 2);
  CHECK(smoothness_tau(adjacent) == 2.0);
  CHECK(smoothness_tau(family({{0, 0, 0}, {0, 11, 0}})) == 1.0);
  CHECK_THROWS_AS(smoothness_tau(family({})), DomainError);
  // neighbours of different size
  CHECK(smoothness_parts(family({{1, 0, 0}, {3, 4, 0}})).side_ratio == 4.0);
}

TEST_CASE("packing examples") {
  const SquareFamily two = family({{2, 0, 0}, {2, 2, 0}});
  const PackingResult r = packing_alpha(two, 1.0);
  CHECK(r.admissible);
  CHECK(r.alpha == 0.5);
  CHECK(r.maximizer == DyadicSquare{0, 0, 0});

  const SquareFamily children = family({{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}}, 2.0);
  CHECK(packing_alpha(children, 2.0).alpha == 1.0);

  const PackingResult single = packing_alpha(family({{2, 1, 1}}), 1.0);
  CHECK_FALSE(single.admissible);
  CHECK(single.alpha == 0.0);
}

TEST_CASE("packing and smoothness agree with enumeration on random families") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const double t = 0.5 + 0.03 * static_cast<double>(seed);
    const SquareFamily f = random_square_family(seed, 20, 5, t);
    const PackingResult fast = packing_alpha(f, t);
    const PackingResult slow = packing_alpha_enumerated(f, t);
    REQUIRE(fast.admissible == slow.admissible);
    REQUIRE(fast.alpha == slow.alpha);
    const SmoothnessParts a = smoothness_parts(f), b = smoothness_parts_enumerated(f);
    REQUIRE(a.side_ratio == b.side_ratio);
    REQUIRE(a.max_overlap == b.max_overlap);
  }
}

TEST_CASE("removing a member never increases alpha") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const SquareFamily f = random_square_family(seed, 12, 4, 1.0);
    const double alpha = packing_alpha(f, 1.0).alpha;
    for (std::size_t drop = 0; drop < f.size(); ++drop) {
      std::vector<DyadicSquare> rest = f.members();
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(drop));
      REQUIRE(packing_alpha(family(rest), 1.0).alpha <= alpha);
    }
  }
}

TEST_CASE("weight measure") {
  const SquareFamily f = family({{1, 0, 0}, {2, 2, 0}, {3, 7, 7}}, 1.5);
  const PackingWeight w(f);
  double all = 0.0;
  for (const auto& q : f.members()) all += std::pow(q.side({}), 1.5);
  CHECK(w.total_mass() == doctest::Approx(all).epsilon(1e-15));
  CHECK(weight_measure(w, {{0, 0, 0}}) == doctest::Approx(all).epsilon(1e-15));
  CHECK(weight_measure(w, {{2, 0, 3}}) == 0.0);
  // half of the generation-1 member: two of its children
  CHECK(weight_measure(w, {{2, 0, 0}, {2, 1, 0}}) == doctest::Approx(std::pow(0.5, 1.5) / 2).epsilon(1e-15));
  // nested region pieces count once
  CHECK(weight_measure(w, {{1, 0, 0}, {2, 0, 0}}) == doctest::Approx(std::pow(0.5, 1.5)).epsilon(1e-15));
}

TEST_CASE("splitting into packed subfamilies") {
  const DyadicLattice row_lattice{{0.0, -0.5}, 1.0};
  for (int j = 1; j <= 5; ++j) {
    std::vector<DyadicSquare> row;
    for (int q = 0; q < (1 << j); ++q) row.push_back({0, 2 * q, 0});
    const SquareFamily f = family(row, 1.0, row_lattice);
    const auto parts = split_into_packed_subfamilies(f, 0.5);
    std::size_t total = 0;
    for (const auto& p : parts) {
      CHECK(packing_alpha(p, 1.0).alpha <= 0.5);
      total += p.size();
    }
    CHECK(total == f.size());
  }
  const SquareFamily single = family({{0, 0, 0}}, 1.0, row_lattice);
  CHECK(split_into_packed_subfamilies(single, 0.5).size() == 1);
  const SquareFamily packed = family({{0, 0, 0}, {0, 4, 0}}, 1.0, row_lattice);
  CHECK(split_into_packed_subfamilies(packed, packing_alpha(packed, 1.0).alpha).size() == 1);
  CHECK_THROWS_AS(split_into_packed_subfamilies(packed, 0.0), DomainError);
}

TEST_CASE("quasisquare packing") {
  const SquareFamily two = family({{2, 0, 0}, {2, 2, 0}});
  const GridSpec spec(4.0, 256);
  const PrincipalMapSolution id = identity_solution(spec);
  const PackingResult quasi = packing_alpha_quasi({two, &id, 64}, 1.0);
  CHECK(quasi.admissible);
  CHECK(quasi.alpha == doctest::Approx(packing_alpha(two, 1.0).alpha).epsilon(1e-12));

  const ComplexField raw = ComplexField::from_function(spec, [](cplx z) {
    return std::abs(z) > 1.0 || z == cplx(0.0) ? cplx(0.0) : (1.0 / 3.0) * z / std::conj(z);
  });
  const PrincipalMapSolution stretch = solve_principal(make_coefficient(raw, 1.0 / 3.0));
  const double reported = packing_alpha_quasi({two, &stretch, 64}, 1.0).alpha;
  auto dense = [&](const DyadicSquare& q) { return quasisquare_diameter(stretch, {}, q, 256); };
  const double oracle = (dense({2, 0, 0}) + dense({2, 2, 0})) / dense({0, 0, 0});
  CHECK(std::abs(reported - oracle) <= 0.1 * oracle);

  const SquareFamily one = family({{2, 0, 0}});
  const PackingResult none = packing_alpha_quasi({one, &id, 64}, 1.0);
  CHECK_FALSE(none.admissible);
  CHECK(none.alpha == 0.0);
}

TEST_CASE("family text format") {
  const SquareFamily f = family({{1, 0, 0}, {3, 7, 5}}, 1.25, {{-0.5, -0.5}, 1.0});
  std::stringstream buf;
  write_family(f, buf);
  const SquareFamily g = read_family(buf);
  CHECK(g.members() == f.members());
  CHECK(g.t() == 1.25);
  CHECK(g.lattice() == f.lattice());
  std::stringstream bad("# qclab dyadic family v1\nt 1\n1 0\n");
  CHECK_THROWS_AS(read_family(bad), Error);
}
