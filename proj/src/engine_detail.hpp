// Shared internals of the exact enumeration engines. Private to src/.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <thread>
#include <unordered_map>
#include <vector>

#include "aclab/atoms.hpp"
#include "aclab/rational.hpp"

namespace aclab::detail {

// Scaled Gaussian integer. Selected only after arbitrary-precision bound
// checks guarantee every component and weight stays in int64 range.
struct GInt {
    std::int64_t re = 0;
    std::int64_t im = 0;
};

inline GInt operator+(GInt a, GInt b) { return {a.re + b.re, a.im + b.im}; }
inline GInt operator-(GInt a, GInt b) { return {a.re - b.re, a.im - b.im}; }
inline GInt mul(GInt a, GInt b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

inline constexpr std::int64_t kComponentCap = std::int64_t(1) << 30;

inline std::uint64_t pack(GInt v) {
    const std::uint64_t hi = static_cast<std::uint32_t>(v.re + (std::int64_t(1) << 31));
    const std::uint64_t lo = static_cast<std::uint32_t>(v.im + (std::int64_t(1) << 31));
    return (hi << 32) | lo;
}

inline GInt unpack(std::uint64_t key) {
    GInt v;
    v.re = static_cast<std::int64_t>(key >> 32) - (std::int64_t(1) << 31);
    v.im = static_cast<std::int64_t>(key & 0xffffffffULL) - (std::int64_t(1) << 31);
    return v;
}

inline Int lcm_denominators(std::span<const GaussianRational> values) {
    Int l(1);
    Int tmp;
    for (const auto& v : values) {
        mpz_lcm(tmp.get_mpz_t(), l.get_mpz_t(), v.re.den().get_mpz_t());
        l = tmp;
        mpz_lcm(tmp.get_mpz_t(), l.get_mpz_t(), v.im.den().get_mpz_t());
        l = tmp;
    }
    return l;
}

// max(|re|,|im|) of v * L, exact.
inline Int scaled_component_norm(const GaussianRational& v, const Int& L) {
    Int a = ::abs(v.re.num() * (L / v.re.den()));
    Int b = ::abs(v.im.num() * (L / v.im.den()));
    return a >= b ? a : b;
}

inline GInt scale_to_gint(const GaussianRational& v, const Int& L) {
    Int re = v.re.num() * (L / v.re.den());
    Int im = v.im.num() * (L / v.im.den());
    return {re.get_si(), im.get_si()};
}

inline bool fits_component(const Int& v) { return v < kComponentCap; }

inline bool weight_product_fits(std::span<const AtomDistribution* const> atoms) {
    Int prod(1);
    const Int cap = Int(1) << 62;
    for (const auto* a : atoms) {
        prod *= a->weight_total();
        if (prod > cap) return false;
    }
    return true;
}

struct I64Hash {
    std::size_t operator()(std::uint64_t v) const {
        v ^= v >> 33;
        v *= 0xff51afd7ed558ccdULL;
        v ^= v >> 33;
        return static_cast<std::size_t>(v);
    }
};

using I64Map = std::unordered_map<std::uint64_t, std::int64_t, I64Hash>;
using ExactMap = std::map<GaussianRational, Int>;

// Sparse-convolution DP. prod[i*s + j] is the value added when variable i
// takes atom index j; w[j] are the per-atom integer weights.
void dp_i64(std::size_t m, std::size_t s, const GInt* prod, const std::int64_t* w, std::size_t support_cap,
            I64Map& out);
void dp_exact(std::size_t m, std::size_t s, const GaussianRational* prod, const Int* w, std::size_t support_cap,
              ExactMap& out);

std::size_t checked_assignment_count(std::size_t support, std::size_t vars, std::size_t cap);

void parallel_blocks(std::size_t total, int threads, const std::function<void(int, std::size_t, std::size_t)>& fn);

inline void decode_assignment(std::size_t linear, std::size_t support, std::span<std::uint8_t> digits) {
    for (std::size_t v = 0; v < digits.size(); ++v) {
        digits[v] = static_cast<std::uint8_t>(linear % support);
        linear /= support;
    }
}

// Uniform-support odometer step (variable 0 fastest); reports every digit
// change through changed(var, old_index, new_index).
template <typename F>
void advance_assignment(std::span<std::uint8_t> digits, std::size_t support, F&& changed) {
    for (std::size_t v = 0; v < digits.size(); ++v) {
        const std::uint8_t old = digits[v];
        if (old + 1u < support) {
            digits[v] = static_cast<std::uint8_t>(old + 1u);
            changed(v, old, digits[v]);
            return;
        }
        digits[v] = 0;
        changed(v, old, std::uint8_t(0));
    }
}

// Target value as a scaled packed key; nullopt when unreachable (does not
// scale to a Gaussian integer, or out of component range).
std::optional<std::uint64_t> scaled_target_key(const GaussianRational& t, const Int& L);

} // namespace aclab::detail
