#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aclab/errors.hpp"

namespace aclab {

using Int = mpz_class;

std::size_t hash_int(const Int& v);

// Exact rational, always in lowest terms with positive denominator.
class Rational {
public:
    Rational() : q_(0) {}
    Rational(int v) : q_(v) {}
    Rational(long v) : q_(static_cast<signed long>(v)) {}
    Rational(long long v) : q_(static_cast<signed long>(v)) {} // LP64: long long == long width
    Rational(const Int& v) : q_(v) {}
    Rational(const Int& num, const Int& den) {
        if (den == 0) raise(Errc::InvalidArgument, "rational with zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    Rational(long num, long den) : Rational(Int(num), Int(den)) {}

    // Accepts "p", "p/q", optional sign, arbitrary precision.
    static Rational parse(std::string_view text);

    Int num() const { return q_.get_num(); }
    Int den() const { return q_.get_den(); }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    bool is_positive() const { return sgn(q_) > 0; }
    bool is_negative() const { return sgn(q_) < 0; }
    int sign() const { return sgn(q_); }

    Rational abs() const {
        Rational r = *this;
        r.q_ = ::abs(r.q_);
        return r;
    }

    double to_double() const { return q_.get_d(); }
    std::string str() const;

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) raise(Errc::InvalidArgument, "rational division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) {
        Rational r;
        r.q_ = -a.q_;
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.q_.get_mpq_t(), b.q_.get_mpq_t()) != 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) > 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) >= 0; }

    std::size_t hash() const;

    Rational pow(unsigned long e) const;

private:
    mpq_class q_;
};

// A fraction is a lowest-terms rational viewed through its height.
using Fraction = Rational;

// height(p/q) = max(|p|, |q|) in lowest terms.
Int height(const Fraction& f);

struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(long v) : re(v) {}
    GaussianRational(int v) : re(v) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static GaussianRational parse(std::string_view text);

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }

    std::string str() const;
    std::size_t hash() const;

    GaussianRational& operator+=(const GaussianRational& o) { re += o.re; im += o.im; return *this; }
    GaussianRational& operator-=(const GaussianRational& o) { re -= o.re; im -= o.im; return *this; }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        if (b.is_zero()) raise(Errc::InvalidArgument, "gaussian rational division by zero");
        Rational n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
    // Lexicographic (re, im); this is the canonical serialization order.
    friend bool operator<(const GaussianRational& a, const GaussianRational& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    }
};

// max of the component heights; used for tie-breaking structure ratios.
Int height(const GaussianRational& v);

// Positive generator of the additive group spanned by the values: every
// value is an integer multiple of the result and it is the largest such.
// All-zero input signals EmptyGenerator.
Rational gcd_all(std::span<const Rational> values);

// tau(n): number of positive divisors.
std::uint64_t divisor_count(std::uint64_t n);

// ---------------------------------------------------------------------------
// Exact comparisons against irrational bounds. Probabilities computed by the
// engine are rationals; the classical bounds involve square roots and rational
// powers. These compare by integer cross-powering, never through doubles.

// x vs base^(p/q), x > 0 rational, base >= 1 integer, q > 0. Returns -1/0/+1.
int cmp_power(const Rational& x, const Int& base, long p, long q);
int cmp_power(const Rational& x, const Int& base, const Rational& exponent);

// Smallest integer >= base^(p/q), for base >= 1, p >= 0, q > 0.
Int ceil_power(const Int& base, long p, long q);
Int ceil_power(const Int& base, const Rational& exponent);

// floor and ceil of 2^bits * base^(p/q) (p may be negative); exact dyadic
// brackets used for comparisons that mix incommensurable radicals.
void power_dyadic_bounds(const Int& base, long p, long q, unsigned bits, Int& lo, Int& hi);

// sign of (A + B*base^alpha) - C*base^beta, all rationals, A,B,C >= 0,
// base >= 2. Exact shortcuts when a side has a single term; otherwise dyadic
// refinement (resolves unless the two sides are equal as algebraic numbers,
// which the shortcut cases already cover for the inputs arising here).
int cmp_affine_power(const Rational& a, const Rational& b, const Rational& alpha,
                     const Rational& c, const Rational& beta, const Int& base);

// coef * sqrt(radicand) with coef >= 0 and radicand squarefree; exact order
// against rationals and other square roots.
class SqrtRational {
public:
    SqrtRational(Rational coef, Int radicand);

    static SqrtRational inv_sqrt(const Int& m); // 1/sqrt(m), m >= 1

    const Rational& coef() const { return coef_; }
    const Int& radicand() const { return rad_; }

    bool is_rational() const { return rad_ == 1; }
    Rational as_rational() const;

    double value() const;
    std::string str() const;

    int cmp(const Rational& r) const;
    int cmp(const SqrtRational& o) const;

private:
    Rational coef_; // >= 0
    Int rad_;       // squarefree, >= 1
};

} // namespace aclab

template <>
struct std::hash<aclab::Rational> {
    std::size_t operator()(const aclab::Rational& r) const { return r.hash(); }
};

template <>
struct std::hash<aclab::GaussianRational> {
    std::size_t operator()(const aclab::GaussianRational& v) const { return v.hash(); }
};
