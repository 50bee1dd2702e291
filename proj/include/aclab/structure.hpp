#pragma once

#include <optional>
#include <utility>

#include "aclab/certificates.hpp"
#include "aclab/dist.hpp"
#include "aclab/forms.hpp"
#include "aclab/rational.hpp"

namespace aclab {

// Shortest arithmetic progression through 0 covering all values:
// d = gcd_all(values), R = max(j,0) - min(j,0) over the integer indices
// j_i = a_i / d. All-zero input signals AllZero.
APCertificate shortest_ap(std::span<const Rational> values);

// Every covered value equals j * difference with min_index <= j <= max_index,
// 0 in range, and covered plus exceptional partition the index set.
bool verify_ap(std::span<const Rational> values, const APCertificate& cert);

enum class CommMode { Comm, CommStar };

// Exact commensurability of one tuple: either a rational (1/R, or 1 for the
// all-zero tuple, or 0 under CommStar with a zero entry) or the truncation
// floor r^(-1/2 + eps/4). Values that do not lie on a rational line through
// 0 admit no progression, so the floor applies.
struct CommValue {
    bool is_floor = false;
    Rational rational; // meaningful when !is_floor
    double value(long r, const Rational& eps) const;
};

CommValue commensurability_value(std::span<const GaussianRational> values, long r, const Rational& eps,
                                 CommMode mode = CommMode::Comm);

// max(r^(-1/2+eps/4), 1/R) as a double (display form of the above).
double commensurability(std::span<const Rational> values, long r, const Rational& eps);
double comm_star(std::span<const Rational> values, long r, const Rational& eps);

// E_y Comm(v_1^T y, ..., v_k^T y), exactly: a_part + floor_mass * floor,
// where floor = r^(-1/2+eps/4). Rational whenever the floor never binds.
struct CommExpectation {
    Rational a_part;
    Rational floor_mass;
    long r = 2;
    Rational eps;
    bool neighborly = false; // value >= (1/6) r^(-1/2+5eps/8), exact

    double value() const;
    bool is_rational() const { return floor_mass.is_zero(); }
    Rational as_rational() const;
};

CommExpectation expected_commensurability(std::span<const std::vector<GaussianRational>> rows,
                                          const AtomDistribution& atom, long r, const Rational& eps,
                                          CommMode mode = CommMode::Comm,
                                          const EngineConfig& cfg = default_config());

// #nonzeros of Ay >= ceil(r^(1-eps/4)), exact integer comparison.
bool classify_typical(const BilinearForm& form, std::span<const GaussianRational> y, long r, const Rational& eps);

// Coprime integer pair (l1, l2), |l1|,|l2| <= search_bound, maximizing the
// number of coordinates where l1*a = l2*b, subject to agreements >= n - r/5.
std::optional<std::pair<long, long>> degenerate_pair(std::span<const GaussianRational> a,
                                                     std::span<const GaussianRational> b, long r,
                                                     long search_bound);

// Ratios d_j minimizing |{i : v_1(i) != d_j v_j(i)}| (ties: smallest height,
// then positive real, then canonical order), disagreement sets, score and
// the capped product metric.
TupleStructure tuple_structure(std::span<const std::vector<GaussianRational>> vectors, long r);

// P(v_1^T y = ... = v_k^T y = 0), exact.
Rational friendly_probability(std::span<const std::vector<GaussianRational>> vectors, const AtomDistribution& atom,
                              const EngineConfig& cfg = default_config());

// P >= (1/3) r^(-1+eps), exact comparison.
bool is_friendly(const Rational& p, long r, const Rational& eps);

// The demote-and-delete loop: while the (X1 u X2) x Y1 block is not rank
// one, find a violating 2x2 minor straddling X1/X2, move the X2 row to X3
// and delete both columns. Absent a seed, X1 is the largest proportional
// row class.
RankOneCertificate rank_one_extract(const BilinearForm& form,
                                    const std::optional<RankOneCertificate>& seed = std::nullopt);

bool verify_rank_one(const BilinearForm& form, const RankOneCertificate& cert);

// Heuristic dilate search: candidates a_i / t over a size-capped index
// sample and t in [1..bound]; keeps coords that land on integers with
// |b_i| <= bound; certificate with fewest exceptions, if within budget.
// Returned certificates are always re-verified exactly.
std::optional<GAPCertificate> gap_fit(std::span<const GaussianRational> coeffs, long bound,
                                      std::size_t max_exceptions);

bool verify_gap(std::span<const GaussianRational> coeffs, const GAPCertificate& cert);

// k-core peeling on the off-diagonal nonzero pattern; on the surviving set
// every row has >= threshold off-diagonal nonzeros.
std::vector<std::size_t> dense_principal_minor(const QuadraticForm& form, std::size_t threshold);

struct CountLowHeightResult {
    long count = 0;
    std::vector<long> skipped; // z with cz + d = 0
};

// #{z in 1..n : height((az+b)/(cz+d)) <= q}, exact. ad = bc signals
// DegenerateMap.
CountLowHeightResult count_low_height(long a, long b, long c, long d, long n, long q);

// k0 = floor((ln r)^7), the tuple-census length scale.
long tuple_census_k0(long r);

} // namespace aclab
