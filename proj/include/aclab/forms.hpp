#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "aclab/atoms.hpp"
#include "aclab/certificates.hpp"
#include "aclab/rational.hpp"

namespace aclab {

struct LinearForm {
    LinearForm(std::vector<GaussianRational> coeffs, AtomDistribution atom);

    const std::vector<GaussianRational>& coeffs() const { return coeffs_; }
    const AtomDistribution& atom() const { return atom_; }
    std::size_t size() const { return coeffs_.size(); }
    std::size_t nonzero_count() const { return nonzero_count_; }

private:
    std::vector<GaussianRational> coeffs_;
    AtomDistribution atom_;
    std::size_t nonzero_count_;
};

class BilinearForm {
public:
    BilinearForm(std::size_t rows, std::size_t cols, std::vector<GaussianRational> entries,
                 AtomDistribution x_atom, AtomDistribution y_atom);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const GaussianRational& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    const std::vector<GaussianRational>& entries() const { return entries_; }
    const AtomDistribution& x_atom() const { return x_atom_; }
    const AtomDistribution& y_atom() const { return y_atom_; }

    const std::vector<std::size_t>& row_nonzero_counts() const { return row_nonzeros_; }
    // r such that every row has at least r nonzero entries.
    std::size_t min_row_nonzeros() const;

private:
    std::size_t rows_, cols_;
    std::vector<GaussianRational> entries_; // row-major
    AtomDistribution x_atom_, y_atom_;
    std::vector<std::size_t> row_nonzeros_;
};

class QuadraticForm {
public:
    // entries must be exactly symmetric.
    QuadraticForm(std::size_t n, std::vector<GaussianRational> entries, std::vector<GaussianRational> linear,
                  GaussianRational constant, AtomDistribution atom);

    std::size_t size() const { return n_; }
    const GaussianRational& at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    const std::vector<GaussianRational>& entries() const { return entries_; }
    const std::vector<GaussianRational>& linear() const { return linear_; }
    const GaussianRational& constant() const { return constant_; }
    const AtomDistribution& atom() const { return atom_; }
    const std::vector<std::size_t>& row_nonzero_counts() const { return row_nonzeros_; }

private:
    std::size_t n_;
    std::vector<GaussianRational> entries_;
    std::vector<GaussianRational> linear_;
    GaussianRational constant_;
    AtomDistribution atom_;
    std::vector<std::size_t> row_nonzeros_;
};

class MultilinearForm {
public:
    using Index = std::vector<std::uint32_t>; // one 0-based index per slot

    MultilinearForm(std::size_t order, std::size_t n, std::map<Index, GaussianRational> coeffs,
                    std::vector<AtomDistribution> atoms);

    std::size_t order() const { return order_; }
    std::size_t dimension() const { return n_; }
    const std::map<Index, GaussianRational>& coeffs() const { return coeffs_; }
    const std::vector<AtomDistribution>& atoms() const { return atoms_; }

private:
    std::size_t order_, n_;
    std::map<Index, GaussianRational> coeffs_; // zero coefficients never stored
    std::vector<AtomDistribution> atoms_;
};

// Right-hand side f(y) of a conditional event P(x^T A y = f(y)).
class TargetFunction {
public:
    enum class Kind { Constant, AffineInY, Table };

    static TargetFunction constant(GaussianRational c);
    static TargetFunction affine(std::vector<GaussianRational> coeffs, GaussianRational c);
    // Keyed by the y assignment's support indices (one per variable).
    static TargetFunction table(std::map<std::vector<std::uint8_t>, GaussianRational> entries);

    Kind kind() const { return kind_; }
    const GaussianRational& constant_value() const { return constant_; }

    GaussianRational evaluate(std::span<const std::uint8_t> support_indices,
                              std::span<const GaussianRational> values) const;

private:
    Kind kind_ = Kind::Constant;
    GaussianRational constant_;
    std::vector<GaussianRational> coeffs_;
    std::map<std::vector<std::uint8_t>, GaussianRational> table_;
};

// --- Generators -------------------------------------------------------------

// All-ones m x n matrix: the extremal factored bilinear form.
BilinearForm gen_extremal_bilinear(std::size_t m, std::size_t n);

// Entry (i,j) = f(i) + g(j): the low-rank sum family.
BilinearForm gen_lowrank_sum(std::span<const Rational> f, std::span<const Rational> g);

// Outer product u v^T with `corrupt_rows` rows and `corrupt_cols` columns
// overwritten by entries that break every 2x2 proportionality against the
// intact block. Returns the ground-truth certificate for the intact block.
std::pair<BilinearForm, RankOneCertificate> gen_planted_rank_one(std::size_t m, std::size_t n,
                                                                 std::size_t corrupt_rows,
                                                                 std::size_t corrupt_cols,
                                                                 std::uint64_t seed);

// (sum b_i x_i)^2 = sum c_i x_i + d as a quadratic-form event:
// matrix b b^T, linear part c, constant d. All b_i must be nonzero.
QuadraticForm quadratic_from_square(std::span<const Rational> b, std::span<const Rational> c, const Rational& d);

// --- Seeded random instances (fixture corpus) -------------------------------

std::vector<GaussianRational> random_rational_vector(std::size_t n, std::uint64_t seed, long max_abs_num = 9,
                                                     long max_den = 4, bool allow_zero = false);

// Random m x n small-integer matrix with every row having at least r nonzeros.
BilinearForm random_bilinear_min_row_support(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed,
                                             long max_abs = 9);

// Random symmetric n x n small-integer matrix (zero diagonal allowed), with a
// random linear part.
QuadraticForm random_symmetric_quadratic(std::size_t n, std::uint64_t seed, long max_abs = 5);

} // namespace aclab
