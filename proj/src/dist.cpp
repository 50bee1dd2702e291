#include "aclab/dist.hpp"

#include <algorithm>
#include <cmath>

#include "aclab/rng.hpp"
#include "engine_detail.hpp"

namespace aclab {

namespace detail {

void dp_i64(std::size_t m, std::size_t s, const GInt* prod, const std::int64_t* w, std::size_t support_cap,
            I64Map& out) {
    I64Map cur, next;
    cur.reserve(64);
    cur.emplace(pack(GInt{}), std::int64_t(1));
    for (std::size_t i = 0; i < m; ++i) {
        next.clear();
        next.reserve(cur.size() * s);
        for (const auto& [key, weight] : cur) {
            const GInt base = unpack(key);
            for (std::size_t j = 0; j < s; ++j) {
                next[pack(base + prod[i * s + j])] += weight * w[j];
            }
        }
        if (next.size() > support_cap)
            raise(Errc::BudgetExceeded, "dp support cap exceeded: " + std::to_string(next.size()) + " values");
        cur.swap(next);
    }
    out = std::move(cur);
}

void dp_exact(std::size_t m, std::size_t s, const GaussianRational* prod, const Int* w, std::size_t support_cap,
              ExactMap& out) {
    ExactMap cur, next;
    cur.emplace(GaussianRational(0), Int(1));
    for (std::size_t i = 0; i < m; ++i) {
        next.clear();
        for (const auto& [value, weight] : cur) {
            for (std::size_t j = 0; j < s; ++j) {
                next[value + prod[i * s + j]] += weight * w[j];
            }
        }
        if (next.size() > support_cap)
            raise(Errc::BudgetExceeded, "dp support cap exceeded: " + std::to_string(next.size()) + " values");
        cur.swap(next);
    }
    out = std::move(cur);
}

std::size_t checked_assignment_count(std::size_t support, std::size_t vars, std::size_t cap) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < vars; ++i) {
        if (count > cap / support)
            raise(Errc::BudgetExceeded, "assignment space exceeds enumeration cap of " + std::to_string(cap));
        count *= support;
    }
    return count;
}

void parallel_blocks(std::size_t total, int threads, const std::function<void(int, std::size_t, std::size_t)>& fn) {
    if (threads <= 1 || total < 1024) {
        fn(0, 0, total);
        return;
    }
    const std::size_t nblocks = static_cast<std::size_t>(threads);
    std::vector<std::thread> pool;
    pool.reserve(nblocks);
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t begin = total * b / nblocks;
        const std::size_t end = total * (b + 1) / nblocks;
        pool.emplace_back([&fn, b, begin, end] { fn(static_cast<int>(b), begin, end); });
    }
    for (auto& t : pool) t.join();
}

std::optional<std::uint64_t> scaled_target_key(const GaussianRational& t, const Int& L) {
    Int re_num = t.re.num() * L;
    if (!mpz_divisible_p(re_num.get_mpz_t(), t.re.den().get_mpz_t())) return std::nullopt;
    Int im_num = t.im.num() * L;
    if (!mpz_divisible_p(im_num.get_mpz_t(), t.im.den().get_mpz_t())) return std::nullopt;
    Int re = re_num / t.re.den();
    Int im = im_num / t.im.den();
    if (::abs(re) >= kComponentCap || ::abs(im) >= kComponentCap) return std::nullopt;
    return pack(GInt{re.get_si(), im.get_si()});
}

} // namespace detail

using namespace detail;

// ---------------------------------------------------------------------------
// ValueDistribution / JointDistribution

ValueDistribution::ValueDistribution(Support support) : support_(std::move(support)) {
    Rational total(0);
    for (const auto& [v, p] : support_) {
        if (!p.is_positive()) raise(Errc::Internal, "distribution with nonpositive mass");
        total += p;
    }
    if (total != Rational(1)) raise(Errc::Internal, "distribution mass does not sum to 1");
}

ValueDistribution ValueDistribution::point_mass(const GaussianRational& v) {
    Support s;
    s.emplace(v, Rational(1));
    return ValueDistribution(std::move(s));
}

Rational ValueDistribution::prob_at(const GaussianRational& v) const {
    auto it = support_.find(v);
    return it == support_.end() ? Rational(0) : it->second;
}

Rational ValueDistribution::max_prob() const {
    Rational best(0);
    for (const auto& [v, p] : support_) {
        if (p > best) best = p;
    }
    return best;
}

Rational ValueDistribution::expectation() const {
    Rational acc(0);
    for (const auto& [v, p] : support_) {
        if (!v.is_real()) raise(Errc::InvalidArgument, "expectation of a complex-valued distribution");
        acc += v.re * p;
    }
    return acc;
}

JointDistribution::JointDistribution(Support support) : support_(std::move(support)) {
    Rational total(0);
    for (const auto& [v, p] : support_) {
        if (!p.is_positive()) raise(Errc::Internal, "joint distribution with nonpositive mass");
        total += p;
    }
    if (total != Rational(1)) raise(Errc::Internal, "joint distribution mass does not sum to 1");
}

Rational JointDistribution::prob_at(const std::vector<GaussianRational>& v) const {
    auto it = support_.find(v);
    return it == support_.end() ? Rational(0) : it->second;
}

ConcentrationReport concentration(const ValueDistribution& d) {
    ConcentrationReport rep;
    rep.sup_prob = Rational(0);
    for (const auto& [v, p] : d.support()) {
        if (p > rep.sup_prob) {
            rep.sup_prob = p;
            rep.argmax_values.clear();
            rep.argmax_values.push_back(v);
        } else if (p == rep.sup_prob) {
            rep.argmax_values.push_back(v);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Finalizers shared by the engines.

namespace {

ValueDistribution finalize_i64(const I64Map& weights, const Int& scale, const Int& total) {
    ValueDistribution::Support support;
    for (const auto& [key, w] : weights) {
        if (w == 0) continue;
        const GInt v = unpack(key);
        support.emplace(GaussianRational(Rational(Int(v.re), scale), Rational(Int(v.im), scale)),
                        Rational(Int(w), total));
    }
    return ValueDistribution(std::move(support));
}

ValueDistribution finalize_exact(const ExactMap& weights, const Int& total) {
    ValueDistribution::Support support;
    for (const auto& [v, w] : weights) {
        if (w == 0) continue;
        support.emplace(v, Rational(w, total));
    }
    return ValueDistribution(std::move(support));
}

} // namespace

// ---------------------------------------------------------------------------
// linear_distribution

namespace {

struct LinearScaled {
    Int scale;
    std::vector<GInt> prod;
    std::vector<std::int64_t> w;
    Int total;
};

std::optional<LinearScaled> try_scale_linear(std::span<const GaussianRational> coeffs,
                                             const AtomDistribution& atom) {
    const std::size_t n = coeffs.size();
    const std::size_t s = atom.size();
    std::vector<GaussianRational> products(n * s);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < s; ++j) products[i * s + j] = coeffs[i] * atom.values()[j];
    }
    Int L = lcm_denominators(products);
    Int bound(0);
    for (std::size_t i = 0; i < n; ++i) {
        Int row_max(0);
        for (std::size_t j = 0; j < s; ++j) {
            Int m = scaled_component_norm(products[i * s + j], L);
            if (m > row_max) row_max = m;
        }
        bound += row_max;
    }
    if (!fits_component(bound)) return std::nullopt;
    std::vector<const AtomDistribution*> vars(n, &atom);
    if (!weight_product_fits(vars)) return std::nullopt;

    LinearScaled out;
    out.scale = L;
    out.prod.resize(n * s);
    for (std::size_t i = 0; i < n * s; ++i) out.prod[i] = scale_to_gint(products[i], L);
    for (const Int& wj : atom.weights()) out.w.push_back(wj.get_si());
    out.total = 1;
    for (std::size_t i = 0; i < n; ++i) out.total *= atom.weight_total();
    return out;
}

ValueDistribution linear_distribution_impl(std::span<const GaussianRational> coeffs, const AtomDistribution& atom,
                                           const EngineConfig& cfg) {
    const std::size_t n = coeffs.size();
    const std::size_t s = atom.size();
    if (!cfg.force_generic) {
        if (auto scaled = try_scale_linear(coeffs, atom)) {
            I64Map out;
            dp_i64(n, s, scaled->prod.data(), scaled->w.data(), cfg.dp_support_cap, out);
            return finalize_i64(out, scaled->scale, scaled->total);
        }
    }
    std::vector<GaussianRational> products(n * s);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < s; ++j) products[i * s + j] = coeffs[i] * atom.values()[j];
    }
    const std::vector<Int>& w = atom.weights();
    ExactMap out;
    dp_exact(n, s, products.data(), w.data(), cfg.dp_support_cap, out);
    Int total(1);
    for (std::size_t i = 0; i < n; ++i) total *= atom.weight_total();
    return finalize_exact(out, total);
}

} // namespace

ValueDistribution linear_distribution(const LinearForm& f, const EngineConfig& cfg) {
    return linear_distribution_impl(f.coeffs(), f.atom(), cfg);
}

// ---------------------------------------------------------------------------
// bilinear

namespace {

struct BilinearScaled {
    std::vector<GInt> a;
    std::vector<GInt> xv, yv;
    std::vector<std::int64_t> wx, wy;
    Int L; // value denominator (La * Lx * Ly)
};

std::optional<BilinearScaled> try_scale_bilinear(const BilinearForm& form) {
    BilinearScaled out;
    const Int La = lcm_denominators(form.entries());
    const Int Lx = lcm_denominators(form.x_atom().values());
    const Int Ly = lcm_denominators(form.y_atom().values());
    out.L = La * Lx * Ly;

    Int mu_x(0), mu_y(0), mu_a(0);
    for (const auto& v : form.x_atom().values()) mu_x = std::max(mu_x, scaled_component_norm(v, Lx));
    for (const auto& v : form.y_atom().values()) mu_y = std::max(mu_y, scaled_component_norm(v, Ly));
    for (const auto& v : form.entries()) mu_a = std::max(mu_a, scaled_component_norm(v, La));
    if (!fits_component(mu_x) || !fits_component(mu_y) || !fits_component(mu_a)) return std::nullopt;

    Int value_bound(0);
    for (std::size_t i = 0; i < form.rows(); ++i) {
        Int row(0); // bound on |W_i| components
        for (std::size_t j = 0; j < form.cols(); ++j)
            row += Int(2) * scaled_component_norm(form.at(i, j), La) * mu_y;
        if (!fits_component(row)) return std::nullopt;
        value_bound += Int(2) * row * mu_x;
    }
    if (!fits_component(value_bound)) return std::nullopt;

    std::vector<const AtomDistribution*> vars;
    for (std::size_t j = 0; j < form.cols(); ++j) vars.push_back(&form.y_atom());
    for (std::size_t i = 0; i < form.rows(); ++i) vars.push_back(&form.x_atom());
    if (!weight_product_fits(vars)) return std::nullopt;

    out.a.resize(form.entries().size());
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] = scale_to_gint(form.entries()[i], La);
    for (const auto& v : form.x_atom().values()) out.xv.push_back(scale_to_gint(v, Lx));
    for (const auto& v : form.y_atom().values()) out.yv.push_back(scale_to_gint(v, Ly));
    for (const Int& w : form.x_atom().weights()) out.wx.push_back(w.get_si());
    for (const Int& w : form.y_atom().weights()) out.wy.push_back(w.get_si());
    return out;
}

struct BilinearOutcome {
    bool fast = false;
    I64Map fast_mix;
    ExactMap exact_mix;
    Int scale;
    Int total;
    Int event_weight = 0;
};

BilinearOutcome bilinear_enumerate(const BilinearForm& form, const TargetFunction& target,
                                   const EngineConfig& cfg, bool need_mixture) {
    const std::size_t m = form.rows();
    const std::size_t n = form.cols();
    const AtomDistribution& ax = form.x_atom();
    const AtomDistribution& ay = form.y_atom();
    const std::size_t sy = ay.size();
    const std::size_t sx = ax.size();
    const std::size_t y_count = checked_assignment_count(sy, n, cfg.enum_cap);
    const bool constant_target = target.kind() == TargetFunction::Kind::Constant;

    BilinearOutcome out;
    out.total = 1;
    for (std::size_t j = 0; j < n; ++j) out.total *= ay.weight_total();
    for (std::size_t i = 0; i < m; ++i) out.total *= ax.weight_total();

    std::optional<BilinearScaled> scaled;
    if (!cfg.force_generic) scaled = try_scale_bilinear(form);

    if (scaled) {
        out.fast = true;
        out.scale = scaled->L;
        const int threads = cfg.resolved_threads();
        const std::size_t nblocks = static_cast<std::size_t>(std::max(threads, 1));
        std::vector<I64Map> mixes(nblocks);
        std::vector<std::int64_t> events(nblocks, 0);
        parallel_blocks(y_count, threads, [&](int block, std::size_t begin, std::size_t end) {
            I64Map& mix = mixes[static_cast<std::size_t>(block)];
            std::int64_t event_acc = 0;
            std::vector<std::uint8_t> yidx(n);
            decode_assignment(begin, sy, yidx);
            std::vector<GInt> w(m);
            std::vector<GaussianRational> yvals(n);
            std::int64_t wy = 1;
            for (std::size_t j = 0; j < n; ++j) {
                yvals[j] = ay.values()[yidx[j]];
                wy *= scaled->wy[yidx[j]];
                for (std::size_t i = 0; i < m; ++i) w[i] = w[i] + mul(scaled->a[i * n + j], scaled->yv[yidx[j]]);
            }
            std::vector<GInt> prod(m * sx);
            I64Map dp;
            for (std::size_t lin = begin; lin < end; ++lin) {
                for (std::size_t i = 0; i < m; ++i) {
                    for (std::size_t jx = 0; jx < sx; ++jx) prod[i * sx + jx] = mul(w[i], scaled->xv[jx]);
                }
                dp_i64(m, sx, prod.data(), scaled->wx.data(), cfg.dp_support_cap, dp);
                if (constant_target || need_mixture) {
                    for (const auto& [key, wt] : dp) mix[key] += wy * wt;
                }
                if (!constant_target) {
                    const GaussianRational t = target.evaluate(yidx, yvals);
                    if (auto key = scaled_target_key(t, scaled->L)) {
                        auto it = dp.find(*key);
                        if (it != dp.end()) event_acc += wy * it->second;
                    }
                }
                if (lin + 1 < end) {
                    advance_assignment(std::span<std::uint8_t>(yidx), sy,
                                       [&](std::size_t var, std::uint8_t oldj, std::uint8_t newj) {
                                           const GInt delta = scaled->yv[newj] - scaled->yv[oldj];
                                           for (std::size_t i = 0; i < m; ++i)
                                               w[i] = w[i] + mul(scaled->a[i * n + var], delta);
                                           wy = wy / scaled->wy[oldj] * scaled->wy[newj];
                                           yvals[var] = ay.values()[newj];
                                       });
                }
            }
            events[static_cast<std::size_t>(block)] = event_acc;
        });
        for (std::size_t b = 0; b < nblocks; ++b) {
            for (const auto& [key, wt] : mixes[b]) out.fast_mix[key] += wt;
            out.event_weight += events[b];
        }
        if (constant_target) {
            out.event_weight = 0;
            if (auto key = scaled_target_key(target.constant_value(), scaled->L)) {
                auto it = out.fast_mix.find(*key);
                if (it != out.fast_mix.end()) out.event_weight = it->second;
            }
        }
        return out;
    }

    // arbitrary-precision path
    std::vector<std::uint8_t> yidx(n, 0);
    std::vector<GaussianRational> yvals(n);
    std::vector<GaussianRational> w(m, GaussianRational(0));
    Int wy(1);
    for (std::size_t j = 0; j < n; ++j) {
        yvals[j] = ay.values()[0];
        wy *= ay.weights()[0];
        for (std::size_t i = 0; i < m; ++i) w[i] += form.at(i, j) * yvals[j];
    }
    std::vector<GaussianRational> prod(m * sx);
    const std::vector<Int>& wx = ax.weights();
    ExactMap dp;
    for (std::size_t lin = 0; lin < y_count; ++lin) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t jx = 0; jx < sx; ++jx) prod[i * sx + jx] = w[i] * ax.values()[jx];
        }
        dp_exact(m, sx, prod.data(), wx.data(), cfg.dp_support_cap, dp);
        if (constant_target || need_mixture) {
            for (const auto& [value, wt] : dp) out.exact_mix[value] += wy * wt;
        }
        if (!constant_target) {
            const GaussianRational t = target.evaluate(yidx, yvals);
            auto it = dp.find(t);
            if (it != dp.end()) out.event_weight += wy * it->second;
        }
        if (lin + 1 < y_count) {
            advance_assignment(std::span<std::uint8_t>(yidx), sy,
                               [&](std::size_t var, std::uint8_t oldj, std::uint8_t newj) {
                                   const GaussianRational delta = ay.values()[newj] - ay.values()[oldj];
                                   for (std::size_t i = 0; i < m; ++i) w[i] += form.at(i, var) * delta;
                                   wy /= ay.weights()[oldj];
                                   wy *= ay.weights()[newj];
                                   yvals[var] = ay.values()[newj];
                               });
        }
    }
    if (constant_target) {
        auto it = out.exact_mix.find(target.constant_value());
        out.event_weight = (it == out.exact_mix.end()) ? Int(0) : it->second;
    }
    return out;
}

} // namespace

ConcentrationReport bilinear_conditional_concentration(const BilinearForm& form, const TargetFunction& target,
                                                       const EngineConfig& cfg) {
    const bool constant_target = target.kind() == TargetFunction::Kind::Constant;
    BilinearOutcome outcome = bilinear_enumerate(form, target, cfg, /*need_mixture=*/constant_target);
    ConcentrationReport rep;
    rep.at_target = Rational(outcome.event_weight, outcome.total);
    if (constant_target) {
        if (outcome.fast) {
            std::int64_t best = 0;
            for (const auto& [key, wt] : outcome.fast_mix) best = std::max(best, wt);
            rep.sup_prob = Rational(Int(best), outcome.total);
            for (const auto& [key, wt] : outcome.fast_mix) {
                if (wt == best) {
                    const GInt v = unpack(key);
                    rep.argmax_values.emplace_back(Rational(Int(v.re), outcome.scale),
                                                   Rational(Int(v.im), outcome.scale));
                }
            }
        } else {
            Int best(0);
            for (const auto& [v, wt] : outcome.exact_mix) best = std::max(best, wt);
            rep.sup_prob = Rational(best, outcome.total);
            for (const auto& [v, wt] : outcome.exact_mix) {
                if (wt == best) rep.argmax_values.push_back(v);
            }
        }
        std::sort(rep.argmax_values.begin(), rep.argmax_values.end());
    } else {
        rep.sup_prob = *rep.at_target;
    }
    return rep;
}

ValueDistribution bilinear_value_distribution(const BilinearForm& form, const EngineConfig& cfg) {
    BilinearOutcome outcome =
        bilinear_enumerate(form, TargetFunction::constant(GaussianRational(0)), cfg, /*need_mixture=*/true);
    if (outcome.fast) return finalize_i64(outcome.fast_mix, outcome.scale, outcome.total);
    return finalize_exact(outcome.exact_mix, outcome.total);
}

// ---------------------------------------------------------------------------
// quadratic

namespace {

struct QuadraticScaled {
    std::vector<GInt> a;
    std::vector<GInt> l;
    std::vector<GInt> xv;
    std::vector<std::int64_t> w;
    std::int64_t lx = 1;
    Int scale; // Ld * Lx^2
};

std::optional<QuadraticScaled> try_scale_quadratic(const QuadraticForm& form) {
    QuadraticScaled out;
    std::vector<GaussianRational> all = form.entries();
    all.insert(all.end(), form.linear().begin(), form.linear().end());
    const Int Ld = lcm_denominators(all);
    const Int Lx = lcm_denominators(form.atom().values());
    if (!Lx.fits_slong_p()) return std::nullopt;
    out.scale = Ld * Lx * Lx;

    const std::size_t n = form.size();
    Int mu_x(0), mu_a(0), mu_l(0);
    for (const auto& v : form.atom().values()) mu_x = std::max(mu_x, scaled_component_norm(v, Lx));
    for (const auto& v : form.entries()) mu_a = std::max(mu_a, scaled_component_norm(v, Ld));
    for (const auto& v : form.linear()) mu_l = std::max(mu_l, scaled_component_norm(v, Ld));
    if (!fits_component(mu_x) || !fits_component(mu_a) || !fits_component(mu_l)) return std::nullopt;

    Int value_bound(0);
    for (std::size_t i = 0; i < n; ++i) {
        Int row(0); // bound on |t_i| components
        for (std::size_t j = 0; j < n; ++j) row += Int(2) * scaled_component_norm(form.at(i, j), Ld) * mu_x;
        if (!fits_component(row)) return std::nullopt;
        value_bound += Int(2) * row * mu_x;
        value_bound += Int(2) * Lx * scaled_component_norm(form.linear()[i], Ld) * mu_x;
    }
    if (!fits_component(value_bound)) return std::nullopt;
    std::vector<const AtomDistribution*> vars(n, &form.atom());
    if (!weight_product_fits(vars)) return std::nullopt;

    out.a.resize(n * n);
    for (std::size_t i = 0; i < n * n; ++i) out.a[i] = scale_to_gint(form.entries()[i], Ld);
    out.l.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.l[i] = scale_to_gint(form.linear()[i], Ld);
    for (const auto& v : form.atom().values()) out.xv.push_back(scale_to_gint(v, Lx));
    for (const Int& w : form.atom().weights()) out.w.push_back(w.get_si());
    out.lx = Lx.get_si();
    return out;
}

struct QuadraticOutcome {
    bool fast = false;
    I64Map fast_map;
    ExactMap exact_map;
    Int scale;
    Int total;
};

// Law of x^T A x - L(x).
QuadraticOutcome quadratic_enumerate(const QuadraticForm& form, const EngineConfig& cfg) {
    const std::size_t n = form.size();
    const AtomDistribution& atom = form.atom();
    const std::size_t s = atom.size();
    const std::size_t count = checked_assignment_count(s, n, cfg.enum_cap);

    QuadraticOutcome out;
    out.total = 1;
    for (std::size_t i = 0; i < n; ++i) out.total *= atom.weight_total();

    std::optional<QuadraticScaled> scaled;
    if (!cfg.force_generic) scaled = try_scale_quadratic(form);

    if (scaled) {
        out.fast = true;
        out.scale = scaled->scale;
        const int threads = cfg.resolved_threads();
        const std::size_t nblocks = static_cast<std::size_t>(std::max(threads, 1));
        std::vector<I64Map> maps(nblocks);
        parallel_blocks(count, threads, [&](int block, std::size_t begin, std::size_t end) {
            I64Map& local = maps[static_cast<std::size_t>(block)];
            std::vector<std::uint8_t> idx(n);
            decode_assignment(begin, s, idx);
            std::vector<GInt> t(n); // t_i = sum_j a'_ij xv'_j
            std::int64_t weight = 1;
            for (std::size_t i = 0; i < n; ++i) {
                weight *= scaled->w[idx[i]];
                for (std::size_t j = 0; j < n; ++j) t[i] = t[i] + mul(scaled->a[i * n + j], scaled->xv[idx[j]]);
            }
            for (std::size_t lin = begin; lin < end; ++lin) {
                GInt value{};
                GInt lin_part{};
                for (std::size_t i = 0; i < n; ++i) {
                    const GInt xi = scaled->xv[idx[i]];
                    value = value + mul(xi, t[i]);
                    lin_part = lin_part + mul(scaled->l[i], xi);
                }
                value.re -= scaled->lx * lin_part.re;
                value.im -= scaled->lx * lin_part.im;
                local[pack(value)] += weight;
                if (lin + 1 < end) {
                    advance_assignment(std::span<std::uint8_t>(idx), s,
                                       [&](std::size_t var, std::uint8_t oldj, std::uint8_t newj) {
                                           const GInt delta = scaled->xv[newj] - scaled->xv[oldj];
                                           for (std::size_t i = 0; i < n; ++i)
                                               t[i] = t[i] + mul(scaled->a[i * n + var], delta);
                                           weight = weight / scaled->w[oldj] * scaled->w[newj];
                                       });
                }
            }
        });
        for (const auto& m : maps) {
            for (const auto& [key, wt] : m) out.fast_map[key] += wt;
        }
        return out;
    }

    std::vector<std::uint8_t> idx(n, 0);
    std::vector<GaussianRational> t(n, GaussianRational(0));
    Int weight(1);
    for (std::size_t i = 0; i < n; ++i) {
        weight *= atom.weights()[0];
        for (std::size_t j = 0; j < n; ++j) t[i] += form.at(i, j) * atom.values()[0];
    }
    for (std::size_t lin = 0; lin < count; ++lin) {
        GaussianRational value;
        for (std::size_t i = 0; i < n; ++i) {
            const GaussianRational& xi = atom.values()[idx[i]];
            value += xi * t[i];
            value -= form.linear()[i] * xi;
        }
        out.exact_map[value] += weight;
        if (lin + 1 < count) {
            advance_assignment(std::span<std::uint8_t>(idx), s,
                               [&](std::size_t var, std::uint8_t oldj, std::uint8_t newj) {
                                   const GaussianRational delta = atom.values()[newj] - atom.values()[oldj];
                                   for (std::size_t i = 0; i < n; ++i) t[i] += form.at(i, var) * delta;
                                   weight /= atom.weights()[oldj];
                                   weight *= atom.weights()[newj];
                               });
        }
    }
    return out;
}

} // namespace

ConcentrationReport quadratic_concentration(const QuadraticForm& form, const EngineConfig& cfg) {
    QuadraticOutcome outcome = quadratic_enumerate(form, cfg);
    ConcentrationReport rep;
    if (outcome.fast) {
        std::int64_t best = 0;
        for (const auto& [key, wt] : outcome.fast_map) best = std::max(best, wt);
        rep.sup_prob = Rational(Int(best), outcome.total);
        for (const auto& [key, wt] : outcome.fast_map) {
            if (wt == best) {
                const GInt v = unpack(key);
                rep.argmax_values.emplace_back(Rational(Int(v.re), outcome.scale),
                                               Rational(Int(v.im), outcome.scale));
            }
        }
        std::sort(rep.argmax_values.begin(), rep.argmax_values.end());
        rep.at_target = Rational(0);
        if (auto key = scaled_target_key(form.constant(), outcome.scale)) {
            auto it = outcome.fast_map.find(*key);
            if (it != outcome.fast_map.end()) rep.at_target = Rational(Int(it->second), outcome.total);
        }
    } else {
        Int best(0);
        for (const auto& [v, wt] : outcome.exact_map) best = std::max(best, wt);
        rep.sup_prob = Rational(best, outcome.total);
        for (const auto& [v, wt] : outcome.exact_map) {
            if (wt == best) rep.argmax_values.push_back(v);
        }
        auto it = outcome.exact_map.find(form.constant());
        rep.at_target = Rational(it == outcome.exact_map.end() ? Int(0) : it->second, outcome.total);
    }
    return rep;
}

ValueDistribution quadratic_value_distribution(const QuadraticForm& form, const EngineConfig& cfg) {
    QuadraticOutcome outcome = quadratic_enumerate(form, cfg);
    if (outcome.fast) return finalize_i64(outcome.fast_map, outcome.scale, outcome.total);
    return finalize_exact(outcome.exact_map, outcome.total);
}

// ---------------------------------------------------------------------------
// multilinear

ConcentrationReport multilinear_concentration(const MultilinearForm& form, const TargetFunction& target,
                                              const EngineConfig& cfg) {
    const std::size_t k = form.order();
    const std::size_t n = form.dimension();
    const std::size_t outer_vars = (k - 1) * n;
    std::size_t max_support = 1;
    for (const auto& a : form.atoms()) max_support = std::max(max_support, a.size());
    checked_assignment_count(max_support, k * n, cfg.enum_cap);

    std::vector<const AtomDistribution*> outer_atoms;
    for (std::size_t slot = 1; slot < k; ++slot) {
        for (std::size_t i = 0; i < n; ++i) outer_atoms.push_back(&form.atoms()[slot]);
    }
    Int total(1);
    for (const auto* a : outer_atoms) total *= a->weight_total();
    for (std::size_t i = 0; i < n; ++i) total *= form.atoms()[0].weight_total();

    std::size_t outer_count = 1;
    for (const auto* a : outer_atoms) outer_count *= a->size();

    const bool constant_target = target.kind() == TargetFunction::Kind::Constant;
    ExactMap mixture;
    Int event_weight(0);

    const AtomDistribution& inner = form.atoms()[0];
    const std::size_t si = inner.size();
    std::vector<std::uint8_t> idx(outer_vars, 0);
    std::vector<GaussianRational> values(outer_vars);
    Int weight(1);
    for (std::size_t v = 0; v < outer_vars; ++v) {
        values[v] = outer_atoms[v]->values()[0];
        weight *= outer_atoms[v]->weights()[0];
    }
    std::vector<GaussianRational> w(n);
    std::vector<GaussianRational> prod(n * si);
    const std::vector<Int>& inner_w = inner.weights();
    ExactMap dp;
    for (std::size_t lin = 0; lin < outer_count; ++lin) {
        std::fill(w.begin(), w.end(), GaussianRational(0));
        for (const auto& [index, coeff] : form.coeffs()) {
            GaussianRational term = coeff;
            for (std::size_t slot = 1; slot < k; ++slot) term = term * values[(slot - 1) * n + index[slot]];
            w[index[0]] += term;
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < si; ++j) prod[i * si + j] = w[i] * inner.values()[j];
        }
        dp_exact(n, si, prod.data(), inner_w.data(), cfg.dp_support_cap, dp);
        if (constant_target) {
            for (const auto& [value, wt] : dp) mixture[value] += weight * wt;
        } else {
            const GaussianRational t = target.evaluate(idx, values);
            auto it = dp.find(t);
            if (it != dp.end()) event_weight += weight * it->second;
        }
        // per-variable-support odometer (slots may carry different atoms)
        if (lin + 1 < outer_count) {
            for (std::size_t v = 0; v < outer_vars; ++v) {
                const std::uint8_t old = idx[v];
                weight /= outer_atoms[v]->weights()[old];
                if (old + 1u < outer_atoms[v]->size()) {
                    idx[v] = static_cast<std::uint8_t>(old + 1u);
                    weight *= outer_atoms[v]->weights()[idx[v]];
                    values[v] = outer_atoms[v]->values()[idx[v]];
                    break;
                }
                idx[v] = 0;
                weight *= outer_atoms[v]->weights()[0];
                values[v] = outer_atoms[v]->values()[0];
            }
        }
    }

    ConcentrationReport rep;
    if (constant_target) {
        Int best(0);
        for (const auto& [v, wt] : mixture) best = std::max(best, wt);
        rep.sup_prob = Rational(best, total);
        for (const auto& [v, wt] : mixture) {
            if (wt == best) rep.argmax_values.push_back(v);
        }
        auto it = mixture.find(target.constant_value());
        rep.at_target = Rational(it == mixture.end() ? Int(0) : it->second, total);
    } else {
        rep.sup_prob = Rational(event_weight, total);
        rep.at_target = rep.sup_prob;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// joint distribution

JointDistribution joint_distribution(std::span<const LinearForm> forms, const EngineConfig& cfg) {
    if (forms.empty()) raise(Errc::InvalidArgument, "joint_distribution: at least one form required");
    const std::size_t n = forms[0].size();
    const AtomDistribution& atom = forms[0].atom();
    for (const auto& f : forms) {
        if (f.size() != n || !(f.atom() == atom))
            raise(Errc::InvalidArgument, "joint_distribution: forms must share length and atom model");
    }
    const std::size_t k = forms.size();
    std::map<std::vector<GaussianRational>, Int> acc, next;
    acc.emplace(std::vector<GaussianRational>(k, GaussianRational(0)), Int(1));
    for (std::size_t i = 0; i < n; ++i) {
        next.clear();
        for (const auto& [vec, weight] : acc) {
            for (std::size_t j = 0; j < atom.size(); ++j) {
                std::vector<GaussianRational> stepped = vec;
                for (std::size_t f = 0; f < k; ++f) stepped[f] += forms[f].coeffs()[i] * atom.values()[j];
                next[std::move(stepped)] += weight * atom.weights()[j];
            }
        }
        if (next.size() > cfg.dp_support_cap) raise(Errc::BudgetExceeded, "joint distribution support cap exceeded");
        acc.swap(next);
    }
    Int total(1);
    for (std::size_t i = 0; i < n; ++i) total *= atom.weight_total();
    JointDistribution::Support support;
    for (const auto& [vec, weight] : acc) support.emplace(vec, Rational(weight, total));
    return JointDistribution(std::move(support));
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

// Exact inverse-CDF sampling: refine the dyadic uniform draw until the atom
// index is determined (one 64-bit chunk decides except with probability
// ~2^-64 per boundary).
std::size_t sample_atom_index(Rng& rng, const AtomDistribution& atom, const std::vector<Int>& cumulative) {
    Int x(0);
    unsigned bits = 0;
    const Int& total = atom.weight_total();
    for (;;) {
        mpz_mul_2exp(x.get_mpz_t(), x.get_mpz_t(), 64);
        x += Int(static_cast<unsigned long>(rng.next()));
        bits += 64;
        Int lo = x * total;
        Int hi = (x + 1) * total;
        Int scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 2, bits);
        Int prev(0);
        for (std::size_t j = 0; j < cumulative.size(); ++j) {
            if (prev * scale <= lo && hi <= cumulative[j] * scale) return j;
            prev = cumulative[j];
        }
    }
}

} // namespace

MonteCarloResult monte_carlo_probability(const std::function<bool(std::span<const GaussianRational>)>& event,
                                         std::span<const AtomDistribution> atoms, std::uint64_t samples,
                                         std::uint64_t seed, const EngineConfig& cfg) {
    if (samples < 100) raise(Errc::InvalidArgument, "monte_carlo_probability: need at least 100 samples");
    const std::uint64_t nblocks = (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
    std::vector<std::uint64_t> block_hits(nblocks, 0);
    std::vector<std::vector<Int>> cumulative(atoms.size());
    for (std::size_t v = 0; v < atoms.size(); ++v) {
        Int c(0);
        for (const Int& w : atoms[v].weights()) {
            c += w;
            cumulative[v].push_back(c);
        }
    }
    parallel_blocks(static_cast<std::size_t>(nblocks), cfg.resolved_threads(),
                    [&](int, std::size_t begin, std::size_t end) {
                        for (std::size_t b = begin; b < end; ++b) {
                            Rng rng(derive_seed(seed, "monte-carlo-block", b));
                            const std::uint64_t lo = static_cast<std::uint64_t>(b) * kMonteCarloBlock;
                            const std::uint64_t hi = std::min(samples, lo + kMonteCarloBlock);
                            std::vector<GaussianRational> assignment(atoms.size());
                            std::uint64_t hits = 0;
                            for (std::uint64_t t = lo; t < hi; ++t) {
                                for (std::size_t v = 0; v < atoms.size(); ++v)
                                    assignment[v] = atoms[v].values()[sample_atom_index(rng, atoms[v], cumulative[v])];
                                if (event(assignment)) ++hits;
                            }
                            block_hits[b] = hits;
                        }
                    });
    std::uint64_t hits = 0;
    for (auto h : block_hits) hits += h;

    MonteCarloResult result;
    result.samples = samples;
    result.successes = hits;
    const double nd = static_cast<double>(samples);
    const double p_hat = static_cast<double>(hits) / nd;
    result.estimate = p_hat;
    // Wilson score interval, 95%.
    const double z = 1.959963984540054;
    const double denom = 1.0 + z * z / nd;
    result.ci_halfwidth = (z * std::sqrt(p_hat * (1.0 - p_hat) / nd + z * z / (4.0 * nd * nd))) / denom;
    return result;
}

// ---------------------------------------------------------------------------
// AssignmentEnumerator

AssignmentEnumerator::AssignmentEnumerator(std::span<const AtomDistribution> atoms, const EngineConfig& cfg) {
    if (atoms.empty()) raise(Errc::InvalidArgument, "assignment enumerator: no variables");
    total_weight_ = 1;
    count_ = 1;
    for (const auto& a : atoms) {
        atoms_.push_back(&a);
        total_weight_ *= a.weight_total();
        if (count_ > cfg.enum_cap / a.size())
            raise(Errc::BudgetExceeded, "assignment space exceeds enumeration cap");
        count_ *= a.size();
    }
}

void AssignmentEnumerator::for_each(const std::function<void(std::span<const std::uint8_t>, const Int&)>& fn) const {
    const std::size_t n = atoms_.size();
    std::vector<std::uint8_t> idx(n, 0);
    Int weight(1);
    for (const auto* a : atoms_) weight *= a->weights()[0];
    for (std::size_t lin = 0; lin < count_; ++lin) {
        fn(idx, weight);
        if (lin + 1 == count_) break;
        for (std::size_t v = 0; v < n; ++v) {
            const std::uint8_t old = idx[v];
            weight /= atoms_[v]->weights()[old];
            if (old + 1u < atoms_[v]->size()) {
                idx[v] = static_cast<std::uint8_t>(old + 1u);
                weight *= atoms_[v]->weights()[idx[v]];
                break;
            }
            idx[v] = 0;
            weight *= atoms_[v]->weights()[0];
        }
    }
}

} // namespace aclab
