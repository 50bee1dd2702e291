#include "aclab/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "engine_detail.hpp"

namespace aclab {

const FittedConstants& default_constants() {
    static const FittedConstants c;
    return c;
}

SqrtRational lo_bound(long m) {
    if (m < 1) raise(Errc::InvalidArgument, "lo_bound: m must be >= 1");
    if (m <= 4) return SqrtRational(Rational(1, 2), Int(1));
    return SqrtRational::inv_sqrt(Int(m));
}

bool lo_check(const Rational& p, long m) {
    if (m < 1) raise(Errc::InvalidArgument, "lo_check: m must be >= 1");
    if (p > Rational(1, 2)) return false;
    return p * p * Rational(m) <= Rational(1);
}

double bilo_bound(long r) {
    if (r < 1) raise(Errc::InvalidArgument, "bilo_bound: r must be >= 1");
    const double rd = static_cast<double>(r);
    return std::min(1.0, 4.0 / std::sqrt(rd) + std::sqrt(4.0 / (3.0 * rd)));
}

bool bilo_check(const Rational& p, long r) {
    if (r < 1) raise(Errc::InvalidArgument, "bilo_check: r must be >= 1");
    if (p > Rational(1)) return false;
    // bound = (4 + 2/sqrt(3)) / sqrt(r), capped at 1; the cap bites iff
    // (4 + 2/sqrt(3))^2 = 52/3 + 16/sqrt(3) >= r, i.e. iff r <= 26.
    if (r <= 26) return true;
    // p <= bound  <=>  p^2 r - 52/3 <= 16/sqrt(3)  <=>  t <= 0 or t^2 <= 256/3
    const Rational t = p * p * Rational(r) - Rational(52, 3);
    if (t.sign() <= 0) return true;
    return t * t <= Rational(256, 3);
}

ValueDistribution row_zero_count_distribution(const BilinearForm& form, std::span<const std::size_t> rows,
                                              const EngineConfig& cfg) {
    for (std::size_t i : rows) {
        if (i >= form.rows()) raise(Errc::InvalidArgument, "row_zero_count_distribution: row index out of range");
    }
    std::vector<AtomDistribution> atoms(form.cols(), form.y_atom());
    AssignmentEnumerator space(atoms, cfg);
    std::map<GaussianRational, Int> counts;
    space.for_each([&](std::span<const std::uint8_t> idx, const Int& weight) {
        long zeros = 0;
        for (std::size_t i : rows) {
            GaussianRational w;
            for (std::size_t j = 0; j < form.cols(); ++j) w += form.at(i, j) * form.y_atom().values()[idx[j]];
            if (w.is_zero()) ++zeros;
        }
        counts[GaussianRational(zeros)] += weight;
    });
    ValueDistribution::Support support;
    for (const auto& [v, w] : counts) support.emplace(v, Rational(w, space.total_weight()));
    return ValueDistribution(std::move(support));
}

namespace {

// k-sum multiplicity table: value -> number of ordered k-tuples.
std::map<GaussianRational, Int> ksum_counts(std::span<const GaussianRational> coeffs, unsigned k) {
    const std::size_t n = coeffs.size();
    std::size_t budget = 1;
    for (unsigned j = 0; j < k; ++j) {
        if (budget > std::size_t(100'000'000) / std::max<std::size_t>(n, 1))
            raise(Errc::BudgetExceeded, "k-sum budget n^k exceeds 10^8");
        budget *= n;
    }
    std::map<GaussianRational, Int> cur, next;
    cur.emplace(GaussianRational(0), Int(1));
    for (unsigned j = 0; j < k; ++j) {
        next.clear();
        for (const auto& [v, c] : cur) {
            for (const auto& a : coeffs) next[v + a] += c;
        }
        cur.swap(next);
    }
    return cur;
}

} // namespace

Int halasz_rk(std::span<const GaussianRational> coeffs, unsigned k, const EngineConfig& cfg) {
    (void)cfg;
    if (k == 0) raise(Errc::InvalidArgument, "halasz_rk: k must be >= 1");
    auto counts = ksum_counts(coeffs, k);
    Int rk(0);
    for (const auto& [v, c] : counts) rk += c * c;
    return rk;
}

BoundReport halasz_bound_report(const LinearForm& form, unsigned k, const FittedConstants& constants,
                                const EngineConfig& cfg) {
    if (form.nonzero_count() != form.size())
        raise(Errc::InvalidArgument, "halasz_bound_report: all coefficients must be nonzero");
    const std::size_t n = form.size();
    const Rational p = concentration(linear_distribution(form, cfg)).sup_prob;
    const Int rk = halasz_rk(form.coeffs(), k, cfg);

    BoundReport rep;
    rep.bound_name = "halasz-ratio-k" + std::to_string(k);
    rep.exact_prob = p;
    rep.observed_prob = p.to_double();
    // ratio = p * n^(2k + 1/2) / R_k; pass iff ratio <= c exactly:
    // p^2 * n^(4k+1) <= c^2 * R_k^2.
    Int n4k1;
    mpz_ui_pow_ui(n4k1.get_mpz_t(), static_cast<unsigned long>(n), 4UL * k + 1UL);
    const Rational lhs = p * p * Rational(n4k1);
    const Rational rhs = constants.c_halasz * constants.c_halasz * Rational(rk * rk);
    rep.passes = lhs <= rhs;
    rep.ratio = p.to_double() * std::pow(static_cast<double>(n), 2.0 * k + 0.5) / Rational(rk).to_double();
    rep.bound_value = constants.c_halasz.to_double();
    return rep;
}

Int joint_multiplicity(std::span<const GaussianRational> a, std::span<const GaussianRational> b, unsigned j,
                       const EngineConfig& cfg) {
    (void)cfg;
    if (j == 0) raise(Errc::InvalidArgument, "joint_multiplicity: j must be >= 1");
    if (a.size() != b.size()) raise(Errc::InvalidArgument, "joint_multiplicity: length mismatch");
    const std::size_t n = a.size();
    std::size_t budget = 1;
    for (unsigned t = 0; t < j; ++t) {
        if (budget > std::size_t(100'000'000) / std::max<std::size_t>(n, 1))
            raise(Errc::BudgetExceeded, "joint multiplicity budget n^j exceeds 10^8");
        budget *= n;
    }
    using Pair = std::pair<GaussianRational, GaussianRational>;
    std::map<Pair, Int> cur, next;
    cur.emplace(Pair{GaussianRational(0), GaussianRational(0)}, Int(1));
    for (unsigned t = 0; t < j; ++t) {
        next.clear();
        for (const auto& [v, c] : cur) {
            for (std::size_t i = 0; i < n; ++i) {
                next[Pair{v.first + a[i], v.second + b[i]}] += c;
            }
        }
        cur.swap(next);
    }
    Int best(0);
    for (const auto& [v, c] : cur) best = std::max(best, c);
    return best;
}

std::size_t subspace_deficiency_2d(std::span<const std::pair<GaussianRational, GaussianRational>> vectors) {
    // d=2: proper subspaces are the lines through the origin. Key each
    // nonzero vector by its projective direction; zero vectors sit on every
    // line.
    std::map<std::pair<GaussianRational, GaussianRational>, std::size_t> line_counts;
    std::size_t zeros = 0;
    for (const auto& [x, y] : vectors) {
        if (x.is_zero() && y.is_zero()) {
            ++zeros;
            continue;
        }
        std::pair<GaussianRational, GaussianRational> dir;
        if (!x.is_zero()) {
            dir = {GaussianRational(1), y / x};
        } else {
            dir = {GaussianRational(0), GaussianRational(1)};
        }
        ++line_counts[dir];
    }
    std::size_t best_line = 0;
    for (const auto& [dir, c] : line_counts) best_line = std::max(best_line, c);
    return vectors.size() - (best_line + zeros);
}

BoundReport st_incidence_report(const JointDistribution& points, const JointDistribution& lines,
                                const FittedConstants& constants) {
    Rational q_p(0), q_l(0);
    for (const auto& [v, p] : points.support()) {
        if (v.size() != 2) raise(Errc::InvalidArgument, "st_incidence_report: points must be (x, y) pairs");
        q_p = std::max(q_p, p);
    }
    for (const auto& [v, p] : lines.support()) {
        if (v.size() != 2) raise(Errc::InvalidArgument, "st_incidence_report: lines must be (slope, intercept)");
        q_l = std::max(q_l, p);
    }
    Rational incidence(0);
    for (const auto& [pt, pp] : points.support()) {
        for (const auto& [ln, pl] : lines.support()) {
            if (pt[1] == ln[0] * pt[0] + ln[1]) incidence += pp * pl;
        }
    }
    BoundReport rep;
    rep.bound_name = "szemeredi-trotter";
    rep.exact_prob = incidence;
    rep.observed_prob = incidence.to_double();
    const double qp = q_p.to_double();
    const double ql = q_l.to_double();
    const double bound = std::cbrt(qp * ql) + qp + ql;
    rep.bound_value = bound;
    rep.ratio = bound > 0 ? rep.observed_prob / bound : 0.0;
    // P <= c*((q_p q_l)^(1/3) + q_p + q_l), exact: cube the residual.
    const Rational t = incidence / constants.c_st - q_p - q_l;
    rep.passes = t.sign() <= 0 || t * t * t <= q_p * q_l;
    return rep;
}

} // namespace aclab
