#pragma once

#include <string>

#include "aclab/dist.hpp"
#include "aclab/forms.hpp"
#include "aclab/rational.hpp"

namespace aclab {

// Constants for the bounds whose proofs leave the constant unspecified.
// Calibrated once on the fixed bring-up corpus, then frozen.
struct FittedConstants {
    Rational c_halasz = Rational(8);
    Rational c_st = Rational(16);
};

const FittedConstants& default_constants();

struct BoundReport {
    std::string bound_name;
    double bound_value = 0.0;
    double observed_prob = 0.0;
    double ratio = 0.0;
    bool passes = false;
    Rational exact_prob; // the exact probability behind observed_prob
};

// min(1/2, 1/sqrt(m)) as an exact radical.
SqrtRational lo_bound(long m);
// p <= 1/2 and p^2 * m <= 1, exact integer comparisons.
bool lo_check(const Rational& p, long m);

// min(1, 4/sqrt(r) + sqrt(4/(3r))): Markov step on W = #{i : W_i = 0} plus the
// >=3r/4-nonzero-coefficient linear step, constants made explicit.
double bilo_bound(long r);
// p <= bilo_bound(r), exact (squaring twice removes both radicals).
bool bilo_check(const Rational& p, long r);

// Law of W = #{i in rows : (Ay)_i = 0}.
ValueDistribution row_zero_count_distribution(const BilinearForm& form, std::span<const std::size_t> rows,
                                              const EngineConfig& cfg = default_config());

// R_k: ordered 2k-tuples (i_1..i_k, j_1..j_k) with equal k-sums, counted by
// hashing the k-sum multiplicities (budget n^k <= 10^8).
Int halasz_rk(std::span<const GaussianRational> coeffs, unsigned k, const EngineConfig& cfg = default_config());

// ratio = sup_c P * n^(2k+1/2) / R_k, checked exactly against c_halasz.
BoundReport halasz_bound_report(const LinearForm& form, unsigned k,
                                const FittedConstants& constants = default_constants(),
                                const EngineConfig& cfg = default_config());

// L_j: maximum multiplicity of a joint j-sum pair over ordered j-tuples.
Int joint_multiplicity(std::span<const GaussianRational> a, std::span<const GaussianRational> b, unsigned j,
                       const EngineConfig& cfg = default_config());

// m = n - (max number of vectors on one line through the origin; zero vectors
// count as on every line).
std::size_t subspace_deficiency_2d(std::span<const std::pair<GaussianRational, GaussianRational>> vectors);

// P(p in l) <= c_st * ((q_p q_l)^(1/3) + q_p + q_l), exact (cubing removes the
// radical). Points are (x, y) pairs; lines are (slope, intercept) pairs.
BoundReport st_incidence_report(const JointDistribution& points, const JointDistribution& lines,
                                const FittedConstants& constants = default_constants());

} // namespace aclab
