#include "aclab/atoms.hpp"

#include <algorithm>

namespace aclab {

AtomDistribution::AtomDistribution(Kind kind, std::vector<GaussianRational> values, std::vector<Rational> probs,
                                   Rational rho)
    : kind_(kind), rho_(std::move(rho)), values_(std::move(values)), probs_(std::move(probs)) {
    if (values_.empty() || values_.size() != probs_.size())
        raise(Errc::InvalidArgument, "atom distribution: empty or mismatched support");
    Rational total(0);
    Int lcm_den(1);
    for (const Rational& p : probs_) {
        if (!p.is_positive()) raise(Errc::InvalidArgument, "atom distribution: probabilities must be positive");
        total += p;
        Int l;
        mpz_lcm(l.get_mpz_t(), lcm_den.get_mpz_t(), p.den().get_mpz_t());
        lcm_den = l;
    }
    if (total != Rational(1)) raise(Errc::InvalidArgument, "atom distribution: probabilities must sum to 1");
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
        for (std::size_t j = i + 1; j < values_.size(); ++j) {
            if (values_[i] == values_[j]) raise(Errc::InvalidArgument, "atom distribution: duplicate value");
        }
    }
    weight_total_ = lcm_den;
    weights_.reserve(probs_.size());
    for (const Rational& p : probs_) weights_.push_back(p.num() * (lcm_den / p.den()));
}

AtomDistribution AtomDistribution::rademacher() {
    return AtomDistribution(Kind::Rademacher, {GaussianRational(1), GaussianRational(-1)},
                            {Rational(1, 2), Rational(1, 2)}, Rational(0));
}

AtomDistribution AtomDistribution::lazy_walker(const Rational& rho) {
    if (!(Rational(0) < rho && rho < Rational(1, 2)))
        raise(Errc::InvalidArgument, "lazy walker: rho must satisfy 0 < rho < 1/2");
    Rational p0 = Rational(2) * rho;
    Rational p1 = (Rational(1) - Rational(2) * rho) / Rational(2);
    return AtomDistribution(Kind::LazyWalker, {GaussianRational(0), GaussianRational(1), GaussianRational(-1)},
                            {p0, p1, p1}, rho);
}

AtomDistribution AtomDistribution::finite_support(std::vector<std::pair<GaussianRational, Rational>> entries) {
    std::vector<GaussianRational> values;
    std::vector<Rational> probs;
    values.reserve(entries.size());
    probs.reserve(entries.size());
    for (auto& [v, p] : entries) {
        values.push_back(std::move(v));
        probs.push_back(std::move(p));
    }
    return AtomDistribution(Kind::FiniteSupport, std::move(values), std::move(probs), Rational(0));
}

} // namespace aclab
