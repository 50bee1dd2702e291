#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "aclab/atoms.hpp"
#include "aclab/config.hpp"
#include "aclab/forms.hpp"
#include "aclab/rational.hpp"

namespace aclab {

// Exact finite law. Probabilities are positive rationals summing to exactly
// 1; the support is ordered by (re, im), which is also the canonical
// serialization order.
class ValueDistribution {
public:
    using Support = std::map<GaussianRational, Rational>;

    ValueDistribution() = default;
    explicit ValueDistribution(Support support);

    static ValueDistribution point_mass(const GaussianRational& v);

    const Support& support() const { return support_; }
    std::size_t size() const { return support_.size(); }
    Rational prob_at(const GaussianRational& v) const;
    Rational max_prob() const;

    // Exact expectation; requires a real-valued support.
    Rational expectation() const;

private:
    Support support_;
};

struct ConcentrationReport {
    enum class Method { Exact, MonteCarlo };

    Rational sup_prob;
    std::vector<GaussianRational> argmax_values; // every value attaining sup_prob, sorted
    Method method = Method::Exact;
    std::optional<std::uint64_t> sample_count;   // Monte Carlo only
    std::optional<double> ci_halfwidth;          // Monte Carlo only
    // P of the event at the supplied target/constant, when the operation has
    // one (conditional bilinear / quadratic / multilinear).
    std::optional<Rational> at_target;
};

// Law of a vector of linear forms evaluated on shared variables.
class JointDistribution {
public:
    using Support = std::map<std::vector<GaussianRational>, Rational>;

    JointDistribution() = default;
    explicit JointDistribution(Support support);

    const Support& support() const { return support_; }
    std::size_t size() const { return support_.size(); }
    Rational prob_at(const std::vector<GaussianRational>& v) const;

private:
    Support support_;
};

// Law of sum a_i x_i by iterated sparse convolution.
ValueDistribution linear_distribution(const LinearForm& f, const EngineConfig& cfg = default_config());

// Exact maximum point mass and all attaining values.
ConcentrationReport concentration(const ValueDistribution& d);

// P(x^T A y = f(y)), conditioning on y and running the linear engine in x.
// For constant targets the report additionally carries sup_c and its argmax.
ConcentrationReport bilinear_conditional_concentration(const BilinearForm& form, const TargetFunction& target,
                                                       const EngineConfig& cfg = default_config());

// sup_c P(x^T A x - L(x) = c) by full enumeration; at_target evaluates the
// event at the form's own constant.
ConcentrationReport quadratic_concentration(const QuadraticForm& form, const EngineConfig& cfg = default_config());

// Full exact laws of the form values (for reports and plotting).
ValueDistribution bilinear_value_distribution(const BilinearForm& form, const EngineConfig& cfg = default_config());
ValueDistribution quadratic_value_distribution(const QuadraticForm& form,
                                               const EngineConfig& cfg = default_config());

// P(A(y_1,...,y_k) = f(y_2,...,y_k)); y_1 is handled by the linear engine.
ConcentrationReport multilinear_concentration(const MultilinearForm& form, const TargetFunction& target,
                                              const EngineConfig& cfg = default_config());

// Joint law of (f_1(y),...,f_k(y)); the forms must share length and atom.
JointDistribution joint_distribution(std::span<const LinearForm> forms, const EngineConfig& cfg = default_config());

struct MonteCarloResult {
    double estimate = 0.0;
    double ci_halfwidth = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t successes = 0;
};

// Unbiased frequency estimate with a Wilson score 95% half-width. Sampling is
// blocked (kMonteCarloBlock samples per derived substream), so results are
// reproducible for a fixed block size regardless of thread count.
inline constexpr std::uint64_t kMonteCarloBlock = 65536;

MonteCarloResult monte_carlo_probability(const std::function<bool(std::span<const GaussianRational>)>& event,
                                         std::span<const AtomDistribution> atoms, std::uint64_t samples,
                                         std::uint64_t seed, const EngineConfig& cfg = default_config());

// Odometer over all assignments of independent atoms, exact integer weights.
// fn(support_indices, weight); the assignment's probability is
// weight / total_weight(). Budget-checked against cfg.enum_cap.
class AssignmentEnumerator {
public:
    AssignmentEnumerator(std::span<const AtomDistribution> atoms, const EngineConfig& cfg = default_config());

    const Int& total_weight() const { return total_weight_; }
    std::size_t count() const { return count_; }

    void for_each(const std::function<void(std::span<const std::uint8_t>, const Int&)>& fn) const;

private:
    std::vector<const AtomDistribution*> atoms_;
    Int total_weight_;
    std::size_t count_;
};

} // namespace aclab
