#include "aclab/suites.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "aclab/decouple.hpp"
#include "aclab/dist.hpp"
#include "aclab/incidence.hpp"
#include "aclab/rng.hpp"
#include "aclab/structure.hpp"

namespace aclab {

namespace {

// Frozen at bring-up on the fixed heights corpus (seed 20240601): the
// largest observed count / (q * n^(1/4)). Regressions above this value fail
// the heights suite.
const Rational kHeightsFrozenMax(79, 370);

Int binomial(unsigned long n, unsigned long k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

struct Recorder {
    SuiteResult result;
    std::size_t cap;

    explicit Recorder(std::string name, std::size_t cap_) : cap(cap_) { result.name = std::move(name); }

    void record(bool ok, const std::string& label, double observed, const std::string& detail = "") {
        ++result.cases_run;
        if (!ok) ++result.failures;
        const std::size_t hard_cap = cap > std::size_t(-1) - 32 ? std::size_t(-1) : cap + 32;
        // failures are always kept (up to the hard cap) so they surface even
        // when the per-suite listing is truncated
        if ((result.cases.size() < cap || !ok) && result.cases.size() < hard_cap) {
            result.cases.push_back({label, ok, observed, detail});
        }
    }

    SuiteResult finish(std::string summary = "") {
        result.passed = result.failures == 0;
        result.summary = std::move(summary);
        return std::move(result);
    }
};

std::vector<GaussianRational> random_nonzero_rationals(Rng& rng, std::size_t n, long max_num, long max_den) {
    std::vector<GaussianRational> out;
    for (std::size_t i = 0; i < n; ++i) {
        long num = rng.range(1, max_num);
        if (rng.coin()) num = -num;
        out.emplace_back(Rational(num, rng.range(1, max_den)));
    }
    return out;
}

// All subsets of {0..n-1} of size k, lexicographic.
void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    for (;;) {
        fn(pick);
        std::size_t i = k;
        bool advanced = false;
        while (i > 0) {
            --i;
            if (pick[i] + (k - i) < n) {
                ++pick[i];
                for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
}

// --- criterion 1: linear exactness and the min(1/2, 1/sqrt(m)) bound ---------

SuiteResult suite_lo(const SuiteOptions& opt) {
    Recorder rec("lo", opt.max_recorded_cases);
    const auto rad = AtomDistribution::rademacher();
    for (std::size_t n = 2; n <= 16; n += 2) {
        const LinearForm f(std::vector<GaussianRational>(n, GaussianRational(1)), rad);
        const Rational p = concentration(linear_distribution(f, opt.engine)).sup_prob;
        const Rational expected(binomial(n, n / 2), Int(1) << n);
        rec.record(p == expected, "all-equal n=" + std::to_string(n), p.to_double(),
                   "expected " + expected.str());
    }
    for (std::size_t n : {4u, 8u, 12u}) {
        for (int t = 0; t < 500; ++t) {
            Rng rng(derive_seed(opt.seed, "lo-random", n * 10000 + static_cast<std::uint64_t>(t)));
            std::vector<GaussianRational> coeffs;
            std::size_t m = 0;
            for (std::size_t i = 0; i < n; ++i) {
                long num = rng.range(0, 9);
                if (num != 0 && rng.coin()) num = -num;
                coeffs.emplace_back(Rational(num, rng.range(1, 4)));
                if (num != 0) ++m;
            }
            if (m == 0) continue;
            const Rational p = concentration(linear_distribution(LinearForm(coeffs, rad), opt.engine)).sup_prob;
            rec.record(lo_check(p, static_cast<long>(m)),
                       "random n=" + std::to_string(n) + " t=" + std::to_string(t), p.to_double(),
                       "m=" + std::to_string(m));
        }
    }
    return rec.finish();
}

// --- criterion 2: bilinear tightness and the explicit-constant bound ---------

SuiteResult suite_bilo(const SuiteOptions& opt) {
    Recorder rec("bilo", opt.max_recorded_cases);
    const auto zero = TargetFunction::constant(GaussianRational(0));
    for (std::size_t n = 2; n <= 12; n += 2) {
        const auto rep = bilinear_conditional_concentration(gen_extremal_bilinear(n, n), zero, opt.engine);
        const Rational p = *rep.at_target;
        const Rational p0(binomial(n, n / 2), Int(1) << n);
        const Rational expected = Rational(1) - (Rational(1) - p0) * (Rational(1) - p0);
        const bool exact = p == expected;
        // tightness: P >= (1/2) n^(-1/2)  <=>  2P >= n^(-1/2)
        const bool tight = cmp_power(Rational(2) * p, Int(static_cast<long>(n)), -1, 2) >= 0;
        rec.record(exact && tight, "all-ones n=" + std::to_string(n), p.to_double(),
                   "expected " + expected.str());
    }
    for (int t = 0; t < 200; ++t) {
        Rng rng(derive_seed(opt.seed, "bilo-random", static_cast<std::uint64_t>(t)));
        const std::size_t m = static_cast<std::size_t>(rng.range(4, 10));
        const std::size_t n = static_cast<std::size_t>(rng.range(4, 10));
        const std::size_t r = static_cast<std::size_t>(rng.range(1, std::min<long>(8, static_cast<long>(n))));
        const BilinearForm b = random_bilinear_min_row_support(m, n, r, rng.next());
        const auto rep = bilinear_conditional_concentration(b, zero, opt.engine);
        rec.record(bilo_check(rep.sup_prob, static_cast<long>(r)), "random t=" + std::to_string(t),
                   rep.sup_prob.to_double(), "r=" + std::to_string(r));
    }
    return rec.finish();
}

// --- criterion 3: the decoupling inequality ------------------------------------

SuiteResult suite_decouple(const SuiteOptions& opt) {
    Recorder rec("decouple", opt.max_recorded_cases);
    const auto rad = AtomDistribution::rademacher();
    for (int t = 0; t < 10000; ++t) {
        Rng rng(derive_seed(opt.seed, "decouple-table", static_cast<std::uint64_t>(t)));
        const std::size_t ny = static_cast<std::size_t>(rng.range(1, 6));
        const std::size_t nz = static_cast<std::size_t>(rng.range(1, 6));
        std::vector<std::vector<bool>> table(std::size_t(1) << ny, std::vector<bool>(std::size_t(1) << nz));
        for (auto& row : table) {
            for (std::size_t z = 0; z < row.size(); ++z) row[z] = rng.coin();
        }
        const auto res = decoupling_check(table, std::vector<AtomDistribution>(ny, rad),
                                          std::vector<AtomDistribution>(nz, rad), opt.engine);
        rec.record(res.holds, "table t=" + std::to_string(t), res.lhs.to_double(),
                   "rhs=" + res.rhs.str());
    }
    return rec.finish();
}

// --- criterion 4: the quadratic-to-bilinear reduction inequality ---------------

SuiteResult suite_quad(const SuiteOptions& opt) {
    Recorder rec("quad", opt.max_recorded_cases);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 4 + static_cast<std::size_t>(t % 7); // 4..10
        const QuadraticForm q =
            random_symmetric_quadratic(n, derive_seed(opt.seed, "quad-matrix", static_cast<std::uint64_t>(t)));
        const Rational pa = quadratic_concentration(q, opt.engine).sup_prob;
        const Rational pa2 = pa * pa;
        std::size_t splits = 0, bad = 0;
        for_each_subset(n, (n + 1) / 2, [&](const std::vector<std::size_t>& y) {
            const Partition p = Partition::from_y(n, y);
            if (!is_balanced(q, p, 1)) return;
            ++splits;
            if (pa2 > decoupled_event_probability(q, p, opt.engine)) ++bad;
        });
        rec.record(bad == 0, "matrix t=" + std::to_string(t) + " n=" + std::to_string(n), pa.to_double(),
                   std::to_string(splits) + " balanced splits");
    }
    return rec.finish();
}

// --- criterion 5: rank-one extraction on planted instances ---------------------

SuiteResult suite_rank1(const SuiteOptions& opt) {
    Recorder rec("rank1", opt.max_recorded_cases);
    for (int t = 0; t < 200; ++t) {
        Rng rng(derive_seed(opt.seed, "rank1-instance", static_cast<std::uint64_t>(t)));
        const std::size_t m = static_cast<std::size_t>(rng.range(6, 12));
        const std::size_t n = static_cast<std::size_t>(rng.range(6, 12));
        const std::size_t corrupt = static_cast<std::size_t>(rng.range(0, 2));
        auto [form, truth] = gen_planted_rank_one(m, n, corrupt, 0, rng.next());
        const auto cert = rank_one_extract(form);
        const bool valid = verify_rank_one(form, cert);
        const bool rows_ok = cert.rows.size() >= m - corrupt;
        const bool cols_ok = cert.cols.size() >= n - 2 * corrupt;
        rec.record(valid && rows_ok && cols_ok, "planted t=" + std::to_string(t),
                   static_cast<double>(cert.rows.size()),
                   "m=" + std::to_string(m) + " n=" + std::to_string(n) + " corrupt=" + std::to_string(corrupt) +
                       " cert=" + std::to_string(cert.rows.size()) + "x" + std::to_string(cert.cols.size()));
    }
    return rec.finish();
}

// --- criterion 6: fraction heights against a direct second route ---------------

SuiteResult suite_heights(const SuiteOptions& opt) {
    Recorder rec("heights", opt.max_recorded_cases);
    const long n = 10000; // n^(1/4) = 10 exactly
    Rational max_ratio(0);
    for (int t = 0; t < 100; ++t) {
        Rng rng(derive_seed(opt.seed, "heights-map", static_cast<std::uint64_t>(t)));
        long a, b, c, d;
        do {
            a = rng.range(-99, 99);
            b = rng.range(-99, 99);
            c = rng.range(-99, 99);
            d = rng.range(-99, 99);
        } while (static_cast<long long>(a) * d == static_cast<long long>(b) * c);
        const long q = static_cast<long>(rng.range(1, 100));
        const auto res = count_low_height(a, b, c, d, n, q);
        // independent route: machine gcd, no Rational machinery
        long direct = 0;
        for (long z = 1; z <= n; ++z) {
            const long long den = static_cast<long long>(c) * z + d;
            if (den == 0) continue;
            const long long num = static_cast<long long>(a) * z + b;
            long long an = num < 0 ? -num : num;
            long long ad = den < 0 ? -den : den;
            long long g = std::gcd(an, ad);
            if (g == 0) g = 1;
            if (std::max(an / g, ad / g) <= q) ++direct;
        }
        const bool ok = res.count == direct;
        const Rational ratio(Int(res.count), Int(q) * 10);
        max_ratio = std::max(max_ratio, ratio);
        rec.record(ok, "map t=" + std::to_string(t), ratio.to_double(),
                   "count=" + std::to_string(res.count) + " q=" + std::to_string(q));
    }
    const bool frozen_ok = max_ratio <= kHeightsFrozenMax;
    rec.record(frozen_ok, "frozen-max-regression", max_ratio.to_double(),
               "measured " + max_ratio.str() + " frozen " + kHeightsFrozenMax.str());
    return rec.finish("max count/(q n^(1/4)) = " + max_ratio.str());
}

// --- criterion 7: shattering families ------------------------------------------

SuiteResult suite_shatter(const SuiteOptions& opt) {
    Recorder rec("shatter", opt.max_recorded_cases);
    for (std::size_t n : {8u, 12u, 16u}) {
        const QuadraticForm q =
            quadratic_from_square(std::vector<Rational>(n, Rational(1)), {}, Rational(0));
        std::size_t successes = 0;
        for (int b = 0; b < 20; ++b) {
            const std::uint64_t seed = derive_seed(opt.seed, "shatter-build", n * 100 + static_cast<std::uint64_t>(b));
            try {
                const PartitionFamily family = shatter_build(q, 2, seed, 50);
                const bool size_ok = family.partitions.size() == shatter_family_size(n);
                const bool covers = !shatter_verify(n, family).has_value();
                if (size_ok && covers) ++successes;
                rec.record(size_ok && covers, "build n=" + std::to_string(n) + " b=" + std::to_string(b),
                           static_cast<double>(family.partitions.size()), "");
            } catch (const Error& e) {
                if (e.code() != Errc::ShatterFailure) throw;
                // a missed build counts against the success frequency below,
                // not as a hard per-case failure
                rec.record(true, "build n=" + std::to_string(n) + " b=" + std::to_string(b), 0.0,
                           "no family within 50 attempts");
            }
        }
        rec.record(successes >= 19, "frequency n=" + std::to_string(n),
                   static_cast<double>(successes) / 20.0, std::to_string(successes) + "/20 builds");
    }
    return rec.finish();
}

// --- criterion 8: the incidence mapping and the weighted point/line bound ------

SuiteResult suite_incidence(const SuiteOptions& opt) {
    Recorder rec("incidence", opt.max_recorded_cases);
    for (int t = 0; t < 100; ++t) {
        Rng rng(derive_seed(opt.seed, "incidence-instance", static_cast<std::uint64_t>(t)));
        const std::size_t m = static_cast<std::size_t>(rng.range(4, 14));
        std::vector<Rational> b, c;
        for (std::size_t i = 0; i < m; ++i) {
            long num = rng.range(1, 4);
            if (rng.coin()) num = -num;
            b.emplace_back(num, rng.range(1, 2));
            c.emplace_back(rng.range(-3, 3));
        }
        const Rational d(rng.range(-5, 5), rng.range(1, 2));
        const auto model = build_point_line(b, c, d, AtomDistribution::rademacher(), opt.engine);
        const Rational inc = incidence_probability(model);
        const QuadraticForm q = quadratic_from_square(b, c, d);
        const Rational direct = *quadratic_concentration(q, opt.engine).at_target;
        const auto rep = st_incidence_report(model.points, model.lines, opt.constants);
        rec.record(inc == direct && rep.passes, "instance t=" + std::to_string(t), inc.to_double(),
                   "ratio=" + std::to_string(rep.ratio));
    }
    return rec.finish();
}

// --- criterion 9: the Halasz ratio under the frozen constant --------------------

SuiteResult suite_halasz(const SuiteOptions& opt) {
    Recorder rec("halasz", opt.max_recorded_cases);
    double max_ratio = 0.0;
    for (int t = 0; t < 200; ++t) {
        Rng rng(derive_seed(opt.seed, "halasz-instance", static_cast<std::uint64_t>(t)));
        const std::size_t n = static_cast<std::size_t>(rng.range(4, 14));
        const auto coeffs = random_nonzero_rationals(rng, n, 9, 3);
        const LinearForm form(coeffs, AtomDistribution::rademacher());
        for (unsigned k : {1u, 2u}) {
            const auto rep = halasz_bound_report(form, k, opt.constants, opt.engine);
            max_ratio = std::max(max_ratio, rep.ratio);
            rec.record(rep.passes, "t=" + std::to_string(t) + " k=" + std::to_string(k), rep.ratio, "");
        }
    }
    std::ostringstream summary;
    summary << "max ratio " << max_ratio;
    return rec.finish(summary.str());
}

// --- criterion 10: tuple machinery ----------------------------------------------

SuiteResult suite_tuple(const SuiteOptions& opt) {
    Recorder rec("tuple", opt.max_recorded_cases);
    const auto rad = AtomDistribution::rademacher();
    // planted near-multiple families: recover ratios, sets, and scores
    for (int t = 0; t < 60; ++t) {
        Rng rng(derive_seed(opt.seed, "tuple-planted", static_cast<std::uint64_t>(t)));
        const std::size_t n = static_cast<std::size_t>(rng.range(6, 10));
        const std::size_t k = static_cast<std::size_t>(rng.range(2, 3));
        const auto v1 = random_nonzero_rationals(rng, n, 5, 2);
        std::vector<std::vector<GaussianRational>> rows{v1};
        std::vector<std::vector<std::size_t>> planted_sets;
        std::vector<GaussianRational> planted_ratios;
        for (std::size_t j = 1; j < k; ++j) {
            const long cj = rng.range(1, 4);
            std::vector<GaussianRational> vj(n);
            for (std::size_t i = 0; i < n; ++i) vj[i] = GaussianRational(Rational(cj)) * v1[i];
            std::vector<std::size_t> sj;
            if (rng.coin()) {
                const std::size_t where = static_cast<std::size_t>(rng.below(n));
                vj[where] += GaussianRational(1); // break the multiple at one spot
                sj.push_back(where);
            }
            planted_sets.push_back(std::move(sj));
            planted_ratios.emplace_back(Rational(1, cj));
            rows.push_back(std::move(vj));
        }
        const auto ts = tuple_structure(rows, 100);
        bool ok = true;
        std::set<std::size_t> seen;
        std::size_t expected_score = 0;
        for (std::size_t j = 0; j + 1 < k; ++j) {
            if (ts.ratios[j] != planted_ratios[j]) ok = false;
            if (ts.diff_sets[j] != planted_sets[j]) ok = false;
            bool contained = true;
            for (std::size_t i : planted_sets[j]) {
                if (!seen.count(i)) contained = false;
            }
            if (!contained) ++expected_score;
            seen.insert(planted_sets[j].begin(), planted_sets[j].end());
        }
        if (ts.score != expected_score) ok = false;
        rec.record(ok, "planted t=" + std::to_string(t), static_cast<double>(ts.score),
                   "expected score " + std::to_string(expected_score));
    }
    // exact expected commensurability against a direct per-assignment oracle
    const Rational eps(1, 4);
    for (int t = 0; t < 40; ++t) {
        Rng rng(derive_seed(opt.seed, "tuple-comm", static_cast<std::uint64_t>(t)));
        const std::size_t k = static_cast<std::size_t>(rng.range(2, 3));
        const std::size_t n = static_cast<std::size_t>(rng.range(4, 10));
        std::vector<std::vector<GaussianRational>> rows(k);
        for (auto& row : rows) {
            for (std::size_t i = 0; i < n; ++i) row.emplace_back(Rational(rng.range(-3, 3)));
        }
        const long r = 50;
        const auto e = expected_commensurability(rows, rad, r, eps, CommMode::Comm, opt.engine);
        // direct oracle: enumerate sign assignments, evaluate each form, fold
        Rational a_part(0), floor_mass(0);
        const std::size_t count = std::size_t(1) << n;
        for (std::size_t mask = 0; mask < count; ++mask) {
            std::vector<GaussianRational> vals(k);
            for (std::size_t f = 0; f < k; ++f) {
                for (std::size_t i = 0; i < n; ++i) {
                    const long sign = (mask >> i) & 1 ? 1 : -1;
                    vals[f] += rows[f][i] * GaussianRational(Rational(sign));
                }
            }
            const auto cv = commensurability_value(vals, r, eps, CommMode::Comm);
            const Rational p(Int(1), Int(count));
            if (cv.is_floor) {
                floor_mass += p;
            } else {
                a_part += p * cv.rational;
            }
        }
        rec.record(e.a_part == a_part && e.floor_mass == floor_mass, "comm t=" + std::to_string(t),
                   e.value(), "");
    }
    return rec.finish();
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"lo",      "bilo",    "decouple", "quad",   "rank1",
                                                "heights", "shatter", "incidence", "halasz", "tuple"};
    return names;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opt) {
    if (name == "lo") return suite_lo(opt);
    if (name == "bilo") return suite_bilo(opt);
    if (name == "decouple") return suite_decouple(opt);
    if (name == "quad") return suite_quad(opt);
    if (name == "rank1") return suite_rank1(opt);
    if (name == "heights") return suite_heights(opt);
    if (name == "shatter") return suite_shatter(opt);
    if (name == "incidence") return suite_incidence(opt);
    if (name == "halasz") return suite_halasz(opt);
    if (name == "tuple") return suite_tuple(opt);
    raise(Errc::InvalidArgument, "unknown suite: " + name);
}

} // namespace aclab
