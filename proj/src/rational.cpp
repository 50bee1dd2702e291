#include "aclab/rational.hpp"

#include <cmath>
#include <cstdlib>

namespace aclab {

std::size_t hash_int(const Int& v) {
    const mpz_srcptr z = v.get_mpz_t();
    std::size_t h = 0xcbf29ce484222325ULL;
    const int size = z->_mp_size; // signed limb count
    h = (h ^ static_cast<std::size_t>(size)) * 0x100000001b3ULL;
    const mp_limb_t* limbs = mpz_limbs_read(z);
    const int n = size < 0 ? -size : size;
    for (int i = 0; i < n; ++i) {
        h = (h ^ static_cast<std::size_t>(limbs[i])) * 0x100000001b3ULL;
    }
    return h;
}

Rational Rational::parse(std::string_view text) {
    auto fail = [&] { raise(Errc::ParseError, "invalid rational: '" + std::string(text) + "'"); };
    if (text.empty()) fail();
    const auto slash = text.find('/');
    auto parse_int = [&](std::string_view s) -> Int {
        if (s.empty()) fail();
        std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
        if (i == s.size()) fail();
        for (std::size_t k = i; k < s.size(); ++k) {
            if (s[k] < '0' || s[k] > '9') fail();
        }
        Int v;
        std::string digits(s.substr(i));
        if (mpz_set_str(v.get_mpz_t(), digits.c_str(), 10) != 0) fail();
        if (s[0] == '-') v = -v;
        return v;
    };
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    Int num = parse_int(text.substr(0, slash));
    Int den = parse_int(text.substr(slash + 1));
    if (den == 0) fail();
    return Rational(num, den);
}

std::string Rational::str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::size_t Rational::hash() const {
    std::size_t h = hash_int(num());
    h = (h ^ (hash_int(den()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
    return h;
}

Rational Rational::pow(unsigned long e) const {
    Int n, d;
    mpz_pow_ui(n.get_mpz_t(), num().get_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), den().get_mpz_t(), e);
    return Rational(n, d);
}

Int height(const Fraction& f) {
    Int n = ::abs(f.num());
    Int d = f.den();
    return n >= d ? n : d;
}

Int height(const GaussianRational& v) {
    Int a = height(v.re);
    Int b = height(v.im);
    return a >= b ? a : b;
}

GaussianRational GaussianRational::parse(std::string_view text) {
    auto fail = [&] { raise(Errc::ParseError, "invalid gaussian rational: '" + std::string(text) + "'"); };
    if (text.empty()) fail();
    // Forms: "a", "bi", "a+bi", "a-bi"; a,b rationals, "i"/"-i" allowed.
    if (text.back() != 'i') return GaussianRational(Rational::parse(text));
    std::string_view body = text.substr(0, text.size() - 1);
    // Find the split sign: a '+'/'-' that is not leading and not right
    // after '/': rationals contain no interior signs, so the last sign
    // that is not at position 0 splits real and imaginary parts.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if (body[k] == '+' || body[k] == '-') {
            split = k;
            break;
        }
    }
    auto parse_im = [&](std::string_view s) -> Rational {
        if (s.empty() || s == "+") return Rational(1);
        if (s == "-") return Rational(-1);
        return Rational::parse(s);
    };
    if (split == std::string_view::npos) return {Rational(0), parse_im(body)};
    std::string_view re_part = body.substr(0, split);
    std::string_view im_part = body.substr(split); // includes the sign
    return {Rational::parse(re_part), parse_im(im_part)};
}

std::string GaussianRational::str() const {
    if (im.is_zero()) return re.str();
    std::string i_part = (im == Rational(1)) ? "i" : (im == Rational(-1)) ? "-i" : im.str() + "i";
    if (re.is_zero()) return i_part;
    if (im.is_positive()) return re.str() + "+" + i_part;
    return re.str() + i_part; // im negative carries its own sign
}

std::size_t GaussianRational::hash() const {
    std::size_t h = re.hash();
    return h ^ (im.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Rational gcd_all(std::span<const Rational> values) {
    Int lcm_den(1);
    bool any_nonzero = false;
    for (const Rational& v : values) {
        if (v.is_zero()) continue;
        any_nonzero = true;
        Int l;
        mpz_lcm(l.get_mpz_t(), lcm_den.get_mpz_t(), v.den().get_mpz_t());
        lcm_den = l;
    }
    if (!any_nonzero) raise(Errc::EmptyGenerator, "gcd_all of all-zero values");
    Int g(0);
    for (const Rational& v : values) {
        if (v.is_zero()) continue;
        Int scaled = v.num() * (lcm_den / v.den());
        Int ng;
        mpz_gcd(ng.get_mpz_t(), g.get_mpz_t(), scaled.get_mpz_t());
        g = ng;
    }
    return Rational(g, lcm_den);
}

std::uint64_t divisor_count(std::uint64_t n) {
    if (n == 0) raise(Errc::InvalidArgument, "divisor_count of 0");
    std::uint64_t count = 1;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        std::uint64_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        count *= e + 1;
    }
    if (n > 1) count *= 2;
    return count;
}

namespace {

Int ipow(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

} // namespace

int cmp_power(const Rational& x, const Int& base, long p, long q) {
    if (q <= 0) raise(Errc::InvalidArgument, "cmp_power: exponent denominator must be positive");
    if (x.sign() <= 0) raise(Errc::InvalidArgument, "cmp_power: x must be positive");
    if (base < 1) raise(Errc::InvalidArgument, "cmp_power: base must be >= 1");
    const auto uq = static_cast<unsigned long>(q);
    if (p >= 0) {
        // x^q vs base^p
        Int lhs = ipow(x.num(), uq);
        Int rhs = ipow(base, static_cast<unsigned long>(p)) * ipow(x.den(), uq);
        return ::cmp(lhs, rhs);
    }
    // x * base^(|p|/q) vs 1  <=>  x^q * base^|p| vs 1
    Int lhs = ipow(x.num(), uq) * ipow(base, static_cast<unsigned long>(-p));
    Int rhs = ipow(x.den(), uq);
    return ::cmp(lhs, rhs);
}

namespace {

// exponent = p/q with machine-size parts (desk-scale exponents are tiny).
void exponent_parts(const Rational& exponent, long& p, long& q) {
    if (!exponent.num().fits_slong_p() || !exponent.den().fits_slong_p())
        raise(Errc::InvalidArgument, "power exponent too large");
    p = exponent.num().get_si();
    q = exponent.den().get_si();
}

} // namespace

int cmp_power(const Rational& x, const Int& base, const Rational& exponent) {
    long p, q;
    exponent_parts(exponent, p, q);
    return cmp_power(x, base, p, q);
}

Int ceil_power(const Int& base, long p, long q) {
    if (p < 0 || q <= 0) raise(Errc::InvalidArgument, "ceil_power: exponent must be nonnegative");
    if (base < 1) raise(Errc::InvalidArgument, "ceil_power: base must be >= 1");
    Int bp = ipow(base, static_cast<unsigned long>(p));
    Int root;
    const int exact = mpz_root(root.get_mpz_t(), bp.get_mpz_t(), static_cast<unsigned long>(q));
    if (!exact) root += 1;
    return root;
}

Int ceil_power(const Int& base, const Rational& exponent) {
    long p, q;
    exponent_parts(exponent, p, q);
    return ceil_power(base, p, q);
}

void power_dyadic_bounds(const Int& base, long p, long q, unsigned bits, Int& lo, Int& hi) {
    if (q <= 0) raise(Errc::InvalidArgument, "power_dyadic_bounds: bad exponent");
    const auto uq = static_cast<unsigned long>(q);
    if (p >= 0) {
        // floor(2^bits * base^(p/q)) = floor( (base^p * 2^(bits*q))^(1/q) )
        Int scaled = ipow(base, static_cast<unsigned long>(p));
        mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(bits) * uq);
        const int exact = mpz_root(lo.get_mpz_t(), scaled.get_mpz_t(), uq);
        hi = exact ? lo : lo + 1;
        return;
    }
    // base^(p/q) = 1 / base^(|p|/q): bracket the reciprocal.
    // lo = floor(2^bits / u_hi), hi = ceil(2^bits / u_lo) with [u_lo,u_hi]
    // brackets of base^(|p|/q) at matching precision.
    // 2^bits * base^(p/q) = 2^(2*bits) / (2^bits * base^(|p|/q))
    Int ulo, uhi;
    power_dyadic_bounds(base, -p, q, bits, ulo, uhi);
    Int two_2k;
    mpz_ui_pow_ui(two_2k.get_mpz_t(), 2, 2UL * bits);
    mpz_fdiv_q(lo.get_mpz_t(), two_2k.get_mpz_t(), uhi.get_mpz_t());
    mpz_cdiv_q(hi.get_mpz_t(), two_2k.get_mpz_t(), ulo.get_mpz_t());
}

int cmp_affine_power(const Rational& a, const Rational& b, const Rational& alpha,
                     const Rational& c, const Rational& beta, const Int& base) {
    if (c.is_zero()) {
        if (a.is_zero() && b.is_zero()) return 0;
        return 1;
    }
    if (b.is_zero()) {
        if (a.is_zero()) return -1;
        return cmp_power(a / c, base, beta); // a vs c*base^beta
    }
    if (a.is_zero()) {
        // b*base^alpha vs c*base^beta  <=>  b/c vs base^(beta-alpha)
        return cmp_power(b / c, base, beta - alpha);
    }
    if (alpha == beta) {
        // a vs (c - b) * base^beta, a single-radical comparison
        const Rational diff = c - b;
        if (diff.sign() <= 0) return 1; // a > 0 >= (c-b) base^beta
        return cmp_power(a / diff, base, beta);
    }
    long pa, qa, pb, qb;
    exponent_parts(alpha, pa, qa);
    exponent_parts(beta, pb, qb);
    for (unsigned bits = 64; bits <= 1u << 14; bits *= 2) {
        Int alo, ahi, blo, bhi;
        power_dyadic_bounds(base, pa, qa, bits, alo, ahi);
        power_dyadic_bounds(base, pb, qb, bits, blo, bhi);
        Int two_k;
        mpz_ui_pow_ui(two_k.get_mpz_t(), 2, bits);
        Rational scale = Rational(1, two_k);
        Rational lhs_lo = a + b * Rational(alo) * scale;
        Rational lhs_hi = a + b * Rational(ahi) * scale;
        Rational rhs_lo = c * Rational(blo) * scale;
        Rational rhs_hi = c * Rational(bhi) * scale;
        if (lhs_hi < rhs_lo) return -1;
        if (lhs_lo > rhs_hi) return 1;
    }
    raise(Errc::Internal, "cmp_affine_power: unresolved comparison (algebraic tie)");
}

namespace {

// Pull square factors out of n (trial division).
void squarefree_split(Int n, Int& square_part, Int& free_part) {
    square_part = 1;
    free_part = 1;
    for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        unsigned long e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (unsigned long k = 0; k + 1 < e; k += 2) square_part *= p;
        if (e % 2) free_part *= p;
    }
    if (n > 1) free_part *= n;
}

} // namespace

SqrtRational::SqrtRational(Rational coef, Int radicand) : coef_(std::move(coef)), rad_(std::move(radicand)) {
    if (rad_ < 1) raise(Errc::InvalidArgument, "SqrtRational: radicand must be >= 1");
    if (coef_.is_negative()) raise(Errc::InvalidArgument, "SqrtRational: coefficient must be >= 0");
    if (coef_.is_zero()) {
        rad_ = 1;
        return;
    }
    Int sq, fr;
    squarefree_split(rad_, sq, fr);
    coef_ *= Rational(sq);
    rad_ = fr;
}

SqrtRational SqrtRational::inv_sqrt(const Int& m) {
    if (m < 1) raise(Errc::InvalidArgument, "inv_sqrt: m must be >= 1");
    return SqrtRational(Rational(Int(1), m), m); // 1/sqrt(m) = sqrt(m)/m
}

Rational SqrtRational::as_rational() const {
    if (!is_rational()) raise(Errc::InvalidArgument, "SqrtRational: value is irrational");
    return coef_;
}

double SqrtRational::value() const { return coef_.to_double() * std::sqrt(Rational(rad_).to_double()); }

std::string SqrtRational::str() const {
    if (is_rational()) return coef_.str();
    return coef_.str() + "*sqrt(" + rad_.get_str() + ")";
}

int SqrtRational::cmp(const Rational& r) const {
    if (r.is_negative()) return coef_.is_zero() ? (r.is_zero() ? 0 : 1) : 1;
    // both sides >= 0: compare squares
    Rational lhs = coef_ * coef_ * Rational(rad_);
    Rational rhs = r * r;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

int SqrtRational::cmp(const SqrtRational& o) const {
    Rational lhs = coef_ * coef_ * Rational(rad_);
    Rational rhs = o.coef_ * o.coef_ * Rational(o.rad_);
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

} // namespace aclab
