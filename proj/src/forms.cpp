#include "aclab/forms.hpp"

#include <algorithm>

#include "aclab/rng.hpp"

namespace aclab {

LinearForm::LinearForm(std::vector<GaussianRational> coeffs, AtomDistribution atom)
    : coeffs_(std::move(coeffs)), atom_(std::move(atom)) {
    if (coeffs_.empty()) raise(Errc::InvalidArgument, "linear form: at least one coefficient required");
    nonzero_count_ = 0;
    for (const auto& c : coeffs_) {
        if (!c.is_zero()) ++nonzero_count_;
    }
}

BilinearForm::BilinearForm(std::size_t rows, std::size_t cols, std::vector<GaussianRational> entries,
                           AtomDistribution x_atom, AtomDistribution y_atom)
    : rows_(rows), cols_(cols), entries_(std::move(entries)), x_atom_(std::move(x_atom)),
      y_atom_(std::move(y_atom)) {
    if (rows_ == 0 || cols_ == 0 || entries_.size() != rows_ * cols_)
        raise(Errc::InvalidArgument, "bilinear form: bad dimensions");
    row_nonzeros_.assign(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            if (!at(i, j).is_zero()) ++row_nonzeros_[i];
        }
    }
}

std::size_t BilinearForm::min_row_nonzeros() const {
    return *std::min_element(row_nonzeros_.begin(), row_nonzeros_.end());
}

QuadraticForm::QuadraticForm(std::size_t n, std::vector<GaussianRational> entries,
                             std::vector<GaussianRational> linear, GaussianRational constant, AtomDistribution atom)
    : n_(n), entries_(std::move(entries)), linear_(std::move(linear)), constant_(std::move(constant)),
      atom_(std::move(atom)) {
    if (n_ == 0 || entries_.size() != n_ * n_) raise(Errc::InvalidArgument, "quadratic form: bad dimensions");
    if (linear_.empty()) linear_.assign(n_, GaussianRational(0));
    if (linear_.size() != n_) raise(Errc::InvalidArgument, "quadratic form: linear part has wrong length");
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (at(i, j) != at(j, i)) raise(Errc::InvalidArgument, "quadratic form: matrix must be symmetric");
        }
    }
    row_nonzeros_.assign(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            if (!at(i, j).is_zero()) ++row_nonzeros_[i];
        }
    }
}

MultilinearForm::MultilinearForm(std::size_t order, std::size_t n, std::map<Index, GaussianRational> coeffs,
                                 std::vector<AtomDistribution> atoms)
    : order_(order), n_(n), coeffs_(std::move(coeffs)), atoms_(std::move(atoms)) {
    if (order_ == 0 || n_ == 0) raise(Errc::InvalidArgument, "multilinear form: bad dimensions");
    if (atoms_.size() != order_) raise(Errc::InvalidArgument, "multilinear form: one atom model per slot required");
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->first.size() != order_) raise(Errc::InvalidArgument, "multilinear form: index arity mismatch");
        for (auto idx : it->first) {
            if (idx >= n_) raise(Errc::InvalidArgument, "multilinear form: index out of range");
        }
        if (it->second.is_zero()) {
            it = coeffs_.erase(it); // sparse invariant: no stored zeros
        } else {
            ++it;
        }
    }
}

TargetFunction TargetFunction::constant(GaussianRational c) {
    TargetFunction f;
    f.kind_ = Kind::Constant;
    f.constant_ = std::move(c);
    return f;
}

TargetFunction TargetFunction::affine(std::vector<GaussianRational> coeffs, GaussianRational c) {
    TargetFunction f;
    f.kind_ = Kind::AffineInY;
    f.coeffs_ = std::move(coeffs);
    f.constant_ = std::move(c);
    return f;
}

TargetFunction TargetFunction::table(std::map<std::vector<std::uint8_t>, GaussianRational> entries) {
    if (!entries.empty() && entries.begin()->first.size() > 26)
        raise(Errc::InvalidArgument, "table target: y-dimension must be <= 26");
    TargetFunction f;
    f.kind_ = Kind::Table;
    f.table_ = std::move(entries);
    return f;
}

GaussianRational TargetFunction::evaluate(std::span<const std::uint8_t> support_indices,
                                          std::span<const GaussianRational> values) const {
    switch (kind_) {
    case Kind::Constant:
        return constant_;
    case Kind::AffineInY: {
        if (coeffs_.size() != values.size())
            raise(Errc::InvalidArgument, "affine target: arity mismatch");
        GaussianRational acc = constant_;
        for (std::size_t j = 0; j < values.size(); ++j) acc += coeffs_[j] * values[j];
        return acc;
    }
    case Kind::Table: {
        std::vector<std::uint8_t> key(support_indices.begin(), support_indices.end());
        auto it = table_.find(key);
        if (it == table_.end()) raise(Errc::InvalidArgument, "table target: assignment missing from table");
        return it->second;
    }
    }
    raise(Errc::Internal, "unreachable target kind");
}

// --- Generators -------------------------------------------------------------

BilinearForm gen_extremal_bilinear(std::size_t m, std::size_t n) {
    if (m == 0 || n == 0) raise(Errc::InvalidArgument, "gen_extremal_bilinear: dimensions must be >= 1");
    std::vector<GaussianRational> entries(m * n, GaussianRational(1));
    return BilinearForm(m, n, std::move(entries), AtomDistribution::rademacher(), AtomDistribution::rademacher());
}

BilinearForm gen_lowrank_sum(std::span<const Rational> f, std::span<const Rational> g) {
    if (f.empty() || g.empty()) raise(Errc::InvalidArgument, "gen_lowrank_sum: lengths must be >= 1");
    std::vector<GaussianRational> entries;
    entries.reserve(f.size() * g.size());
    for (const Rational& fi : f) {
        for (const Rational& gj : g) entries.emplace_back(fi + gj);
    }
    return BilinearForm(f.size(), g.size(), std::move(entries), AtomDistribution::rademacher(),
                        AtomDistribution::rademacher());
}

namespace {

Rational random_nonzero_int(Rng& rng, long max_abs) {
    long v = rng.range(1, max_abs);
    return Rational(rng.coin() ? v : -v);
}

// True iff row `cand` (as entries over all cols) has some 2x2 minor against
// the intact block that does not vanish.
bool breaks_proportionality_row(const std::vector<GaussianRational>& entries, std::size_t cols,
                                std::size_t cand_row, const std::vector<std::size_t>& block_rows,
                                const std::vector<std::size_t>& block_cols) {
    for (std::size_t i : block_rows) {
        for (std::size_t a = 0; a + 1 < block_cols.size(); ++a) {
            for (std::size_t b = a + 1; b < block_cols.size(); ++b) {
                std::size_t k = block_cols[a], l = block_cols[b];
                const GaussianRational& aik = entries[i * cols + k];
                const GaussianRational& ail = entries[i * cols + l];
                const GaussianRational& ajk = entries[cand_row * cols + k];
                const GaussianRational& ajl = entries[cand_row * cols + l];
                if (aik * ajl != ail * ajk) return true;
            }
        }
    }
    return false;
}

bool breaks_proportionality_col(const std::vector<GaussianRational>& entries, std::size_t cols,
                                std::size_t cand_col, const std::vector<std::size_t>& block_rows,
                                const std::vector<std::size_t>& block_cols) {
    for (std::size_t j : block_cols) {
        for (std::size_t a = 0; a + 1 < block_rows.size(); ++a) {
            for (std::size_t b = a + 1; b < block_rows.size(); ++b) {
                std::size_t i = block_rows[a], r = block_rows[b];
                const GaussianRational& aij = entries[i * cols + j];
                const GaussianRational& arj = entries[r * cols + j];
                const GaussianRational& aic = entries[i * cols + cand_col];
                const GaussianRational& arc = entries[r * cols + cand_col];
                if (aij * arc != arj * aic) return true;
            }
        }
    }
    return false;
}

} // namespace

std::pair<BilinearForm, RankOneCertificate> gen_planted_rank_one(std::size_t m, std::size_t n,
                                                                 std::size_t corrupt_rows,
                                                                 std::size_t corrupt_cols, std::uint64_t seed) {
    if (m == 0 || n == 0) raise(Errc::InvalidArgument, "gen_planted_rank_one: dimensions must be >= 1");
    if (corrupt_rows >= m || corrupt_cols >= n)
        raise(Errc::InvalidArgument, "gen_planted_rank_one: corruption must leave the block nonempty");
    Rng rng(derive_seed(seed, "planted-rank-one"));

    std::vector<Rational> u(m), v(n);
    for (auto& x : u) x = random_nonzero_int(rng, 5);
    for (auto& x : v) x = random_nonzero_int(rng, 5);

    // Pick corrupted lines.
    std::vector<std::size_t> rows_perm(m), cols_perm(n);
    for (std::size_t i = 0; i < m; ++i) rows_perm[i] = i;
    for (std::size_t j = 0; j < n; ++j) cols_perm[j] = j;
    for (std::size_t i = m; i > 1; --i) std::swap(rows_perm[i - 1], rows_perm[rng.below(i)]);
    for (std::size_t j = n; j > 1; --j) std::swap(cols_perm[j - 1], cols_perm[rng.below(j)]);
    std::vector<bool> row_bad(m, false), col_bad(n, false);
    for (std::size_t i = 0; i < corrupt_rows; ++i) row_bad[rows_perm[i]] = true;
    for (std::size_t j = 0; j < corrupt_cols; ++j) col_bad[cols_perm[j]] = true;

    std::vector<std::size_t> block_rows, block_cols;
    for (std::size_t i = 0; i < m; ++i)
        if (!row_bad[i]) block_rows.push_back(i);
    for (std::size_t j = 0; j < n; ++j)
        if (!col_bad[j]) block_cols.push_back(j);

    std::vector<GaussianRational> entries(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) entries[i * n + j] = GaussianRational(u[i] * v[j]);
    }
    auto randomize_row = [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) entries[i * n + j] = GaussianRational(Rational(rng.range(-9, 9)));
    };
    auto randomize_col = [&](std::size_t j) {
        for (std::size_t i = 0; i < m; ++i) entries[i * n + j] = GaussianRational(Rational(rng.range(-9, 9)));
    };
    for (std::size_t i = 0; i < m; ++i) {
        if (!row_bad[i]) continue;
        do {
            randomize_row(i);
        } while (block_cols.size() >= 2 && !breaks_proportionality_row(entries, n, i, block_rows, block_cols));
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!col_bad[j]) continue;
        do {
            randomize_col(j);
        } while (block_rows.size() >= 2 && !breaks_proportionality_col(entries, n, j, block_rows, block_cols));
    }

    RankOneCertificate cert;
    cert.rows = block_rows;
    cert.cols = block_cols;
    for (std::size_t i : block_rows) cert.u.emplace_back(u[i]);
    for (std::size_t j : block_cols) cert.v.emplace_back(v[j]);

    return {BilinearForm(m, n, std::move(entries), AtomDistribution::rademacher(), AtomDistribution::rademacher()),
            std::move(cert)};
}

QuadraticForm quadratic_from_square(std::span<const Rational> b, std::span<const Rational> c, const Rational& d) {
    if (b.empty()) raise(Errc::InvalidArgument, "quadratic_from_square: empty coefficient vector");
    for (const Rational& bi : b) {
        if (bi.is_zero()) raise(Errc::InvalidCoefficient, "quadratic_from_square: all b_i must be nonzero");
    }
    const std::size_t n = b.size();
    std::vector<GaussianRational> entries(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) entries[i * n + j] = GaussianRational(b[i] * b[j]);
    }
    std::vector<GaussianRational> linear(n, GaussianRational(0));
    for (std::size_t i = 0; i < c.size() && i < n; ++i) linear[i] = GaussianRational(c[i]);
    if (c.size() > n) raise(Errc::InvalidArgument, "quadratic_from_square: linear part longer than b");
    return QuadraticForm(n, std::move(entries), std::move(linear), GaussianRational(d),
                         AtomDistribution::rademacher());
}

std::vector<GaussianRational> random_rational_vector(std::size_t n, std::uint64_t seed, long max_abs_num,
                                                     long max_den, bool allow_zero) {
    Rng rng(derive_seed(seed, "rational-vector"));
    std::vector<GaussianRational> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        long num = rng.range(allow_zero ? 0 : 1, max_abs_num);
        if (num != 0 && rng.coin()) num = -num;
        long den = rng.range(1, max_den);
        out.emplace_back(Rational(num, den));
    }
    return out;
}

BilinearForm random_bilinear_min_row_support(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed,
                                             long max_abs) {
    if (r > n) raise(Errc::InvalidArgument, "random bilinear: r cannot exceed column count");
    Rng rng(derive_seed(seed, "bilinear-min-row"));
    std::vector<GaussianRational> entries(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        // r guaranteed nonzeros in random columns, the rest free (possibly 0).
        std::vector<std::size_t> cols(n);
        for (std::size_t j = 0; j < n; ++j) cols[j] = j;
        for (std::size_t j = n; j > 1; --j) std::swap(cols[j - 1], cols[rng.below(j)]);
        for (std::size_t j = 0; j < n; ++j) {
            long v;
            if (j < r) {
                v = rng.range(1, max_abs);
                if (rng.coin()) v = -v;
            } else {
                v = rng.range(-max_abs, max_abs);
            }
            entries[i * n + cols[j]] = GaussianRational(Rational(v));
        }
    }
    return BilinearForm(m, n, std::move(entries), AtomDistribution::rademacher(), AtomDistribution::rademacher());
}

QuadraticForm random_symmetric_quadratic(std::size_t n, std::uint64_t seed, long max_abs) {
    Rng rng(derive_seed(seed, "symmetric-quadratic"));
    std::vector<GaussianRational> entries(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            GaussianRational v{Rational(rng.range(-max_abs, max_abs))};
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    std::vector<GaussianRational> linear(n);
    for (std::size_t i = 0; i < n; ++i) linear[i] = GaussianRational(Rational(rng.range(-max_abs, max_abs)));
    return QuadraticForm(n, std::move(entries), std::move(linear), GaussianRational(0),
                         AtomDistribution::rademacher());
}

} // namespace aclab
