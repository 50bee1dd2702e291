#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aclab/dist.hpp"
#include "aclab/forms.hpp"

namespace aclab {

// Ordered split of {0..n-1} into Y and Z with |Y| = |Z| or |Y| = |Z| + 1
// (the Y side takes the extra variable when n is odd).
struct Partition {
    std::vector<std::size_t> y, z;

    static Partition from_y(std::size_t n, std::vector<std::size_t> y_indices);
    std::size_t size() const { return y.size() + z.size(); }
};

struct PartitionFamily {
    std::size_t n = 0;
    std::vector<Partition> partitions;
};

struct DecouplingCheckResult {
    Rational lhs; // P(E)^2
    Rational rhs; // P(E(Y,Z) and E(Y,Z'))
    bool holds = false;
};

// P(E)^2 <= P(E(Y,Z) and E(Y,Z')) with Z' an independent copy, exactly.
// table[y_lin][z_lin] indexes assignments in odometer order (variable 0
// fastest).
DecouplingCheckResult decoupling_check(const std::vector<std::vector<bool>>& table,
                                       std::span<const AtomDistribution> y_atoms,
                                       std::span<const AtomDistribution> z_atoms,
                                       const EngineConfig& cfg = default_config());

// Every x_i in Y sees at least r nonzero a_ij with j in Z.
bool is_balanced(const QuadraticForm& form, const Partition& p, std::size_t r);

// First quadruple of distinct indices (i,j,k,l) such that no partition has
// {i,j} in Y and {k,l} in Z; empty when the family shatters.
std::optional<std::array<std::size_t, 4>> shatter_verify(std::size_t n, const PartitionFamily& family);

// ceil(5 ln n / ln(17/16)): the sampled family size.
std::size_t shatter_family_size(std::size_t n);

// Sample families of equal splits (seeded, derived per attempt) until one is
// both balanced for (form, r) and shatters; for n < 8 the exhaustive family
// of all equal splits replaces sampling. Exhausting max_attempts signals
// ShatterFailure.
PartitionFamily shatter_build(const QuadraticForm& form, std::size_t r, std::uint64_t seed,
                              std::size_t max_attempts = 50);

struct QuadToBilinear {
    BilinearForm form;                 // |Y| x |Z| matrix with entries 2*a_ij
    AtomDistribution difference_atom;  // law of z_j - z_j' for independent copies
    std::string note;
};

// The |Y| x |Z| decoupled bilinear form. The y-side variables are the
// differences z_j - z_j' of independent copies; for Rademacher atoms their
// law is {0: 1/2, +2: 1/4, -2: 1/4} (asserted during construction).
QuadToBilinear quad_to_bilinear(const QuadraticForm& form, const Partition& p);

// P( 2 sum_{i in Y, j in Z} a_ij x_i (z_j - z_j') = L_Z(z) - L_Z(z')
//      - z^T A_ZZ z + z'^T A_ZZ z' ), exactly. Computed per y-assignment as
// the collision probability of g_y(z) = 2(y^T A_YZ) z + z^T A_ZZ z - L_Z(z)
// across the two independent copies.
Rational decoupled_event_probability(const QuadraticForm& form, const Partition& p,
                                     const EngineConfig& cfg = default_config());

} // namespace aclab
