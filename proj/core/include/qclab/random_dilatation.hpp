#pragma once

#include <cstdint>

#include "qclab/beltrami.hpp"
#include "qclab/dyadic.hpp"

namespace qclab {

std::uint64_t splitmix64(std::uint64_t x) noexcept;
/// Seed of trial `index` under a master seed; independent of execution order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;
/// Uniform double in [0, 1) from a 64-bit key.
double unit_hash(std::uint64_t key) noexcept;

/// Antisymmetric dilatation of modulus k on the disk B(0, radius), piecewise
/// constant with uniform random phase on the Whitney cells of the upper half
/// plane (side s at heights [s, 2s)). Cells meeting `avoid` are left empty.
/// Cells thinner than two grid spacings are merged into one bottom layer.
BeltramiCoefficient random_antisymmetric_dilatation(const GridSpec& spec, double k, std::uint64_t seed,
                                                    const Region& avoid = {}, double radius = 1.0);

/// Modulus k with one random phase per member square; zero elsewhere.
BeltramiCoefficient random_dilatation_on_squares(const GridSpec& spec, const SquareFamily& family, double k,
                                                 std::uint64_t seed);

}  // namespace qclab
