// Brute-force oracles used to pin expected values. These deliberately avoid
// the library's DP/enumeration engines: every assignment is visited and its
// value computed directly.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "aclab/atoms.hpp"
#include "aclab/dist.hpp"
#include "aclab/forms.hpp"
#include "aclab/rational.hpp"

namespace oracle {

using aclab::AtomDistribution;
using aclab::GaussianRational;
using aclab::Int;
using aclab::Rational;

// Walk all s^n assignments of one shared atom; fn(values, weight).
inline void for_each_assignment(const AtomDistribution& atom, std::size_t n,
                                const std::function<void(const std::vector<GaussianRational>&, const Int&)>& fn) {
    const std::size_t s = atom.size();
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
        std::vector<GaussianRational> values(n);
        Int weight(1);
        for (std::size_t i = 0; i < n; ++i) {
            values[i] = atom.values()[idx[i]];
            weight *= atom.weights()[idx[i]];
        }
        fn(values, weight);
        std::size_t v = 0;
        while (v < n && idx[v] + 1 == s) {
            idx[v] = 0;
            ++v;
        }
        if (v == n) break;
        ++idx[v];
    }
}

inline Int total_weight(const AtomDistribution& atom, std::size_t n) {
    Int t(1);
    for (std::size_t i = 0; i < n; ++i) t *= atom.weight_total();
    return t;
}

// Exact law of sum a_i x_i by direct per-assignment evaluation.
inline std::map<GaussianRational, Rational> linear_law(const std::vector<GaussianRational>& coeffs,
                                                       const AtomDistribution& atom) {
    std::map<GaussianRational, Int> acc;
    for_each_assignment(atom, coeffs.size(), [&](const std::vector<GaussianRational>& x, const Int& w) {
        GaussianRational value;
        for (std::size_t i = 0; i < coeffs.size(); ++i) value += coeffs[i] * x[i];
        acc[value] += w;
    });
    const Int total = total_weight(atom, coeffs.size());
    std::map<GaussianRational, Rational> law;
    for (const auto& [v, w] : acc) law.emplace(v, Rational(w, total));
    return law;
}

// Rademacher-only variant: walks the 2^n sign masks, deriving each subset
// sum from a smaller one (still per-assignment, no convolution).
inline std::map<GaussianRational, Rational> linear_law_rademacher(const std::vector<GaussianRational>& coeffs) {
    const std::size_t n = coeffs.size();
    const std::size_t count = std::size_t(1) << n;
    // sums[mask] = sum of coeffs at set bits; value = 2*sums[mask] - total
    std::vector<GaussianRational> sums(count);
    for (std::size_t mask = 1; mask < count; ++mask) {
        const std::size_t low = mask & (~mask + 1);
        std::size_t bit = 0;
        while ((std::size_t(1) << bit) != low) ++bit;
        sums[mask] = sums[mask & (mask - 1)] + coeffs[bit];
    }
    GaussianRational total;
    for (const auto& c : coeffs) total += c;
    std::map<GaussianRational, Int> acc;
    const GaussianRational two{Rational(2)};
    for (std::size_t mask = 0; mask < count; ++mask) acc[two * sums[mask] - total] += 1;
    std::map<GaussianRational, Rational> law;
    for (const auto& [v, w] : acc) law.emplace(v, Rational(w, Int(static_cast<long>(count))));
    return law;
}

// P(x^T A y = f(y_values)) over the full (m+n)-variable space.
inline Rational bilinear_event_prob(const aclab::BilinearForm& form,
                                    const std::function<GaussianRational(const std::vector<GaussianRational>&)>& f) {
    Int hits(0);
    const std::size_t m = form.rows(), n = form.cols();
    for_each_assignment(form.y_atom(), n, [&](const std::vector<GaussianRational>& y, const Int& wy) {
        const GaussianRational target = f(y);
        for_each_assignment(form.x_atom(), m, [&](const std::vector<GaussianRational>& x, const Int& wx) {
            GaussianRational value;
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < n; ++j) value += form.at(i, j) * x[i] * y[j];
            }
            if (value == target) hits += wy * wx;
        });
    });
    return Rational(hits, total_weight(form.y_atom(), n) * total_weight(form.x_atom(), m));
}

// Full law of x^T A x - L(x).
inline std::map<GaussianRational, Rational> quadratic_law(const aclab::QuadraticForm& form) {
    std::map<GaussianRational, Int> acc;
    const std::size_t n = form.size();
    for_each_assignment(form.atom(), n, [&](const std::vector<GaussianRational>& x, const Int& w) {
        GaussianRational value;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) value += form.at(i, j) * x[i] * x[j];
            value -= form.linear()[i] * x[i];
        }
        acc[value] += w;
    });
    const Int total = total_weight(form.atom(), n);
    std::map<GaussianRational, Rational> law;
    for (const auto& [v, w] : acc) law.emplace(v, Rational(w, total));
    return law;
}

inline Rational max_mass(const std::map<GaussianRational, Rational>& law) {
    Rational best(0);
    for (const auto& [v, p] : law) {
        if (p > best) best = p;
    }
    return best;
}

// Shortest-progression length by exhaustive search over integer differences
// (for integer inputs, a rational difference never beats the gcd).
inline long shortest_ap_length_integer(const std::vector<long>& values, long max_abs) {
    long best = -1;
    for (long d = 1; d <= max_abs; ++d) {
        bool ok = true;
        long lo = 0, hi = 0;
        for (long v : values) {
            if (v % d != 0) {
                ok = false;
                break;
            }
            lo = std::min(lo, v / d);
            hi = std::max(hi, v / d);
        }
        if (!ok) continue;
        if (best < 0 || hi - lo < best) best = hi - lo;
    }
    return best;
}

// C(n, k) as an exact integer.
inline Int binomial(unsigned long n, unsigned long k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

} // namespace oracle
