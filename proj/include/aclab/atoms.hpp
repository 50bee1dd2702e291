#pragma once

#include <utility>
#include <vector>

#include "aclab/rational.hpp"

namespace aclab {

// Finite exact law of a single variable. Rademacher is the uniform sign;
// LazyWalker(rho) is {0 w.p. 2*rho, +1 and -1 w.p. (1-2*rho)/2 each}.
class AtomDistribution {
public:
    enum class Kind { Rademacher, LazyWalker, FiniteSupport };

    static AtomDistribution rademacher();
    static AtomDistribution lazy_walker(const Rational& rho);
    static AtomDistribution finite_support(std::vector<std::pair<GaussianRational, Rational>> entries);

    Kind kind() const { return kind_; }
    const Rational& rho() const { return rho_; }

    std::size_t size() const { return values_.size(); }
    const std::vector<GaussianRational>& values() const { return values_; }
    const std::vector<Rational>& probs() const { return probs_; }

    // Integer-weight view: probs()[j] == weights()[j] / weight_total().
    const std::vector<Int>& weights() const { return weights_; }
    const Int& weight_total() const { return weight_total_; }

    bool operator==(const AtomDistribution& o) const { return values_ == o.values_ && probs_ == o.probs_; }

private:
    AtomDistribution(Kind kind, std::vector<GaussianRational> values, std::vector<Rational> probs, Rational rho);

    Kind kind_;
    Rational rho_;
    std::vector<GaussianRational> values_;
    std::vector<Rational> probs_;
    std::vector<Int> weights_;
    Int weight_total_;
};

} // namespace aclab
