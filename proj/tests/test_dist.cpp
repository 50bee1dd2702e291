#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "aclab/dist.hpp"
#include "aclab/rng.hpp"
#include "oracles.hpp"

using namespace aclab;

namespace {

EngineConfig generic_config() {
    EngineConfig cfg;
    cfg.force_generic = true;
    return cfg;
}

std::vector<GaussianRational> random_coeffs(Rng& rng, std::size_t n, bool rational_dens = true) {
    std::vector<GaussianRational> out;
    for (std::size_t i = 0; i < n; ++i) {
        const long num = rng.range(-9, 9);
        const long den = rational_dens ? rng.range(1, 4) : 1;
        out.emplace_back(Rational(num, den));
    }
    return out;
}

} // namespace

TEST_CASE("linear distribution examples") {
    const auto rad = AtomDistribution::rademacher();
    SUBCASE("two equal coefficients") {
        auto d = linear_distribution(LinearForm({GaussianRational(1), GaussianRational(1)}, rad));
        CHECK(d.size() == 3);
        CHECK(d.prob_at(GaussianRational(Rational(-2))) == Rational(1, 4));
        CHECK(d.prob_at(GaussianRational(0)) == Rational(1, 2));
        CHECK(d.prob_at(GaussianRational(Rational(2))) == Rational(1, 4));
    }
    SUBCASE("four equal coefficients") {
        auto d = linear_distribution(
            LinearForm({GaussianRational(1), GaussianRational(1), GaussianRational(1), GaussianRational(1)}, rad));
        CHECK(d.prob_at(GaussianRational(0)) == Rational(6, 16));
    }
    SUBCASE("lazy walker singleton") {
        auto d = linear_distribution(LinearForm({GaussianRational(1)}, AtomDistribution::lazy_walker(Rational(1, 4))));
        CHECK(d.prob_at(GaussianRational(0)) == Rational(1, 2));
        CHECK(d.prob_at(GaussianRational(1)) == Rational(1, 4));
        CHECK(d.prob_at(GaussianRational(Rational(-1))) == Rational(1, 4));
    }
}

TEST_CASE("linear distribution agrees with direct enumeration") {
    Rng rng(2024);
    for (std::size_t n : {4u, 8u, 12u}) {
        for (int t = 0; t < 200; ++t) {
            const auto coeffs = random_coeffs(rng, n);
            const LinearForm form(coeffs, AtomDistribution::rademacher());
            const auto law = oracle::linear_law(coeffs, form.atom());
            const auto d = linear_distribution(form);
            REQUIRE(d.size() == law.size());
            for (const auto& [v, p] : law) CHECK(d.prob_at(v) == p);
        }
    }
    // n = 16 via the mask-walking oracle (2^16 assignments per vector)
    for (int t = 0; t < 200; ++t) {
        const auto coeffs = random_coeffs(rng, 16);
        const LinearForm form(coeffs, AtomDistribution::rademacher());
        const auto law = oracle::linear_law_rademacher(coeffs);
        const auto d = linear_distribution(form);
        REQUIRE(d.size() == law.size());
        for (const auto& [v, p] : law) CHECK(d.prob_at(v) == p);
    }
}

TEST_CASE("fast and generic engines agree") {
    Rng rng(5150);
    for (int t = 0; t < 50; ++t) {
        auto coeffs = random_coeffs(rng, 8);
        coeffs[0].im = Rational(rng.range(-3, 3), 2); // exercise complex values
        const auto atom = (t % 2 == 0) ? AtomDistribution::rademacher()
                                       : AtomDistribution::lazy_walker(Rational(1, 4));
        const LinearForm form(coeffs, atom);
        const auto fast = linear_distribution(form);
        const auto generic = linear_distribution(form, generic_config());
        REQUIRE(fast.size() == generic.size());
        auto it = generic.support().begin();
        for (const auto& [v, p] : fast.support()) {
            CHECK(v == it->first);
            CHECK(p == it->second);
            ++it;
        }
    }
}

TEST_CASE("distribution mass sums to one with lazy atoms") {
    const auto d = linear_distribution(LinearForm(
        {GaussianRational(Rational(1, 3)), GaussianRational(Rational(2, 5)), GaussianRational(Rational(-1))},
        AtomDistribution::lazy_walker(Rational(1, 3))));
    Rational total(0);
    for (const auto& [v, p] : d.support()) total += p;
    CHECK(total == Rational(1));
}

TEST_CASE("concentration reports") {
    const auto rad = AtomDistribution::rademacher();
    SUBCASE("max and argmax") {
        auto rep = concentration(linear_distribution(LinearForm({GaussianRational(1), GaussianRational(1)}, rad)));
        CHECK(rep.sup_prob == Rational(1, 2));
        REQUIRE(rep.argmax_values.size() == 1);
        CHECK(rep.argmax_values[0] == GaussianRational(0));
    }
    SUBCASE("binomial center") {
        auto rep = concentration(linear_distribution(
            LinearForm({GaussianRational(1), GaussianRational(1), GaussianRational(1), GaussianRational(1)}, rad)));
        CHECK(rep.sup_prob == Rational(3, 8));
        CHECK(rep.argmax_values == std::vector<GaussianRational>{GaussianRational(0)});
    }
    SUBCASE("point mass") {
        auto rep = concentration(ValueDistribution::point_mass(GaussianRational(Rational(5))));
        CHECK(rep.sup_prob == Rational(1));
        CHECK(rep.argmax_values == std::vector<GaussianRational>{GaussianRational(Rational(5))});
    }
}

TEST_CASE("bilinear conditional concentration examples") {
    const auto zero_target = TargetFunction::constant(GaussianRational(0));
    SUBCASE("all-ones 2x2") {
        auto rep = bilinear_conditional_concentration(gen_extremal_bilinear(2, 2), zero_target);
        CHECK(*rep.at_target == Rational(3, 4));
    }
    SUBCASE("1x1") {
        auto rep = bilinear_conditional_concentration(gen_extremal_bilinear(1, 1), zero_target);
        CHECK(*rep.at_target == Rational(0));
    }
    SUBCASE("product structure for even n") {
        for (std::size_t n : {2u, 4u, 6u, 8u}) {
            auto rep = bilinear_conditional_concentration(gen_extremal_bilinear(n, n), zero_target);
            const Rational p0(oracle::binomial(n, n / 2), Int(1) << n);
            const Rational expected = Rational(1) - (Rational(1) - p0) * (Rational(1) - p0);
            CHECK(*rep.at_target == expected);
        }
    }
}

TEST_CASE("bilinear engine matches the full joint enumeration") {
    Rng rng(31337);
    for (int t = 0; t < 30; ++t) {
        const std::size_t m = static_cast<std::size_t>(rng.range(1, 5));
        const std::size_t n = static_cast<std::size_t>(rng.range(1, 5));
        std::vector<GaussianRational> entries;
        for (std::size_t i = 0; i < m * n; ++i) entries.emplace_back(Rational(rng.range(-4, 4)));
        const BilinearForm form(m, n, entries, AtomDistribution::rademacher(), AtomDistribution::rademacher());
        const GaussianRational c{Rational(rng.range(-2, 2))};
        const auto rep = bilinear_conditional_concentration(form, TargetFunction::constant(c));
        const Rational direct = oracle::bilinear_event_prob(form, [&](const auto&) { return c; });
        CHECK(*rep.at_target == direct);
        // generic engine agrees
        const auto rep_g = bilinear_conditional_concentration(form, TargetFunction::constant(c), generic_config());
        CHECK(rep_g.sup_prob == rep.sup_prob);
        CHECK(*rep_g.at_target == *rep.at_target);
    }
}

TEST_CASE("bilinear with lazy-walker y variables") {
    Rng rng(606060);
    const auto lazy = AtomDistribution::lazy_walker(Rational(1, 4));
    for (int t = 0; t < 15; ++t) {
        const std::size_t m = 3, n = 3;
        std::vector<GaussianRational> entries;
        for (std::size_t i = 0; i < m * n; ++i) entries.emplace_back(Rational(rng.range(-3, 3)));
        const BilinearForm form(m, n, entries, AtomDistribution::rademacher(), lazy);
        const GaussianRational c{Rational(rng.range(-1, 1))};
        const auto rep = bilinear_conditional_concentration(form, TargetFunction::constant(c));
        CHECK(*rep.at_target == oracle::bilinear_event_prob(form, [&](const auto&) { return c; }));
        const auto rep_g = bilinear_conditional_concentration(form, TargetFunction::constant(c), generic_config());
        CHECK(rep_g.sup_prob == rep.sup_prob);
        CHECK(*rep_g.at_target == *rep.at_target);
    }
}

TEST_CASE("bilinear affine targets condition on y exactly") {
    Rng rng(999);
    for (int t = 0; t < 20; ++t) {
        const std::size_t m = 3, n = 3;
        std::vector<GaussianRational> entries;
        for (std::size_t i = 0; i < m * n; ++i) entries.emplace_back(Rational(rng.range(-3, 3)));
        const BilinearForm form(m, n, entries, AtomDistribution::rademacher(), AtomDistribution::rademacher());
        std::vector<GaussianRational> tc;
        for (std::size_t j = 0; j < n; ++j) tc.emplace_back(Rational(rng.range(-2, 2)));
        const GaussianRational c{Rational(rng.range(-1, 1))};
        const auto target = TargetFunction::affine(tc, c);
        const auto rep = bilinear_conditional_concentration(form, target);
        const Rational direct = oracle::bilinear_event_prob(form, [&](const std::vector<GaussianRational>& y) {
            GaussianRational acc = c;
            for (std::size_t j = 0; j < n; ++j) acc += tc[j] * y[j];
            return acc;
        });
        CHECK(*rep.at_target == direct);
        const auto rep_g = bilinear_conditional_concentration(form, target, generic_config());
        CHECK(*rep_g.at_target == direct);
    }
}

TEST_CASE("bilinear table targets") {
    // f(y) = y over a single +-1 variable: x*y = y exactly when x = 1
    std::map<std::vector<std::uint8_t>, GaussianRational> table;
    table[{0}] = GaussianRational(1);             // y index 0 holds value +1
    table[{1}] = GaussianRational(Rational(-1));  // y index 1 holds value -1
    const auto target = TargetFunction::table(std::move(table));
    std::vector<GaussianRational> one{GaussianRational(1)};
    const BilinearForm b(1, 1, one, AtomDistribution::rademacher(), AtomDistribution::rademacher());
    const auto rep = bilinear_conditional_concentration(b, target);
    CHECK(*rep.at_target == Rational(1, 2));
    const auto rep_g = bilinear_conditional_concentration(b, target, generic_config());
    CHECK(*rep_g.at_target == Rational(1, 2));
}

TEST_CASE("quadratic concentration examples") {
    SUBCASE("square of a two-term sum") {
        const std::vector<Rational> b{Rational(1), Rational(1)};
        auto rep = quadratic_concentration(quadratic_from_square(b, {}, Rational(0)));
        CHECK(rep.sup_prob == Rational(1, 2));
        // values {0, 4}, both with mass 1/2: argmax holds both
        CHECK(rep.argmax_values.size() == 2);
        CHECK(*rep.at_target == Rational(1, 2)); // P(value = d = 0)
    }
    SUBCASE("zero matrix reduces to the linear case") {
        std::vector<GaussianRational> zeros(16, GaussianRational(0));
        std::vector<GaussianRational> linear(4, GaussianRational(1));
        QuadraticForm q(4, zeros, linear, GaussianRational(0), AtomDistribution::rademacher());
        auto rep = quadratic_concentration(q);
        CHECK(rep.sup_prob == Rational(3, 8));
    }
    SUBCASE("1x1 with constant diagonal") {
        std::vector<GaussianRational> a{GaussianRational(Rational(2))};
        QuadraticForm q(1, a, {}, GaussianRational(0), AtomDistribution::rademacher());
        auto rep = quadratic_concentration(q);
        CHECK(rep.sup_prob == Rational(1));
        CHECK(rep.argmax_values == std::vector<GaussianRational>{GaussianRational(Rational(2))});
    }
}

TEST_CASE("quadratic engine matches the oracle and permutation invariance") {
    Rng rng(777);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = static_cast<std::size_t>(rng.range(2, 6));
        QuadraticForm q = random_symmetric_quadratic(n, rng.next());
        const auto law = oracle::quadratic_law(q);
        const auto rep = quadratic_concentration(q);
        CHECK(rep.sup_prob == oracle::max_mass(law));
        const auto d = quadratic_value_distribution(q);
        REQUIRE(d.size() == law.size());
        for (const auto& [v, p] : law) CHECK(d.prob_at(v) == p);
        // generic path agrees
        const auto rep_g = quadratic_concentration(q, generic_config());
        CHECK(rep_g.sup_prob == rep.sup_prob);

        // simultaneous symmetric permutation leaves the law invariant
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        std::vector<GaussianRational> pe(n * n);
        std::vector<GaussianRational> pl(n);
        for (std::size_t i = 0; i < n; ++i) {
            pl[i] = q.linear()[perm[i]];
            for (std::size_t j = 0; j < n; ++j) pe[i * n + j] = q.at(perm[i], perm[j]);
        }
        QuadraticForm qp(n, pe, pl, q.constant(), q.atom());
        CHECK(quadratic_concentration(qp).sup_prob == rep.sup_prob);
    }
}

TEST_CASE("multilinear concentration") {
    SUBCASE("k=2 is consistent with the bilinear engine") {
        std::map<MultilinearForm::Index, GaussianRational> coeffs;
        coeffs[{0, 0}] = GaussianRational(1);
        coeffs[{0, 1}] = GaussianRational(Rational(2));
        coeffs[{1, 0}] = GaussianRational(Rational(-1));
        coeffs[{1, 1}] = GaussianRational(1);
        MultilinearForm m(2, 2, coeffs, {AtomDistribution::rademacher(), AtomDistribution::rademacher()});
        const auto rep = multilinear_concentration(m, TargetFunction::constant(GaussianRational(0)));
        std::vector<GaussianRational> entries{GaussianRational(1), GaussianRational(Rational(2)),
                                              GaussianRational(Rational(-1)), GaussianRational(1)};
        const BilinearForm b(2, 2, entries, AtomDistribution::rademacher(), AtomDistribution::rademacher());
        const auto brep =
            bilinear_conditional_concentration(b, TargetFunction::constant(GaussianRational(0)));
        CHECK(*rep.at_target == *brep.at_target);
        CHECK(rep.sup_prob == brep.sup_prob);
    }
    SUBCASE("k=3, n=1, product of signs") {
        std::map<MultilinearForm::Index, GaussianRational> coeffs;
        coeffs[{0, 0, 0}] = GaussianRational(1);
        MultilinearForm m(3, 1, coeffs,
                          {AtomDistribution::rademacher(), AtomDistribution::rademacher(),
                           AtomDistribution::rademacher()});
        const auto rep = multilinear_concentration(m, TargetFunction::constant(GaussianRational(0)));
        CHECK(*rep.at_target == Rational(0));
    }
    SUBCASE("k=3, n=2, all-ones product structure") {
        std::map<MultilinearForm::Index, GaussianRational> coeffs;
        for (std::uint32_t i = 0; i < 2; ++i) {
            for (std::uint32_t j = 0; j < 2; ++j) {
                for (std::uint32_t k = 0; k < 2; ++k) coeffs[{i, j, k}] = GaussianRational(1);
            }
        }
        MultilinearForm m(3, 2, coeffs,
                          {AtomDistribution::rademacher(), AtomDistribution::rademacher(),
                           AtomDistribution::rademacher()});
        const auto rep = multilinear_concentration(m, TargetFunction::constant(GaussianRational(0)));
        CHECK(*rep.at_target == Rational(7, 8));
    }
}

TEST_CASE("joint distributions") {
    const auto rad = AtomDistribution::rademacher();
    SUBCASE("independent coordinates") {
        std::vector<LinearForm> forms{LinearForm({GaussianRational(1), GaussianRational(0)}, rad),
                                      LinearForm({GaussianRational(0), GaussianRational(1)}, rad)};
        const auto j = joint_distribution(forms);
        CHECK(j.size() == 4);
        for (const auto& [v, p] : j.support()) CHECK(p == Rational(1, 4));
    }
    SUBCASE("identical forms concentrate on the diagonal") {
        std::vector<LinearForm> forms{LinearForm({GaussianRational(1), GaussianRational(1)}, rad),
                                      LinearForm({GaussianRational(1), GaussianRational(1)}, rad)};
        const auto j = joint_distribution(forms);
        for (const auto& [v, p] : j.support()) CHECK(v[0] == v[1]);
    }
    SUBCASE("sum and difference") {
        std::vector<LinearForm> forms{LinearForm({GaussianRational(1), GaussianRational(1)}, rad),
                                      LinearForm({GaussianRational(1), GaussianRational(Rational(-1))}, rad)};
        const auto j = joint_distribution(forms);
        CHECK(j.size() == 4);
        const Rational quarter(1, 4);
        CHECK(j.prob_at({GaussianRational(0), GaussianRational(Rational(2))}) == quarter);
        CHECK(j.prob_at({GaussianRational(0), GaussianRational(Rational(-2))}) == quarter);
        CHECK(j.prob_at({GaussianRational(Rational(2)), GaussianRational(0)}) == quarter);
        CHECK(j.prob_at({GaussianRational(Rational(-2)), GaussianRational(0)}) == quarter);
    }
}

TEST_CASE("monte carlo probabilities") {
    const std::vector<AtomDistribution> atoms(10, AtomDistribution::rademacher());
    SUBCASE("constant events") {
        auto always = monte_carlo_probability([](auto) { return true; }, atoms, 1000, 1);
        CHECK(always.estimate == 1.0);
        CHECK(always.ci_halfwidth > 0.0);
        auto never = monte_carlo_probability([](auto) { return false; }, atoms, 1000, 1);
        CHECK(never.estimate == 0.0);
    }
    SUBCASE("sum of ten signs hits zero") {
        auto res = monte_carlo_probability(
            [](std::span<const GaussianRational> x) {
                GaussianRational s;
                for (const auto& v : x) s += v;
                return s.is_zero();
            },
            atoms, 1'000'000, 42);
        const double exact = 63.0 / 256.0;
        CHECK(std::abs(res.estimate - exact) <= res.ci_halfwidth);
    }
    SUBCASE("reproducible for a fixed seed, regardless of threads") {
        auto f = [](std::span<const GaussianRational> x) { return x[0] == GaussianRational(1); };
        auto a = monte_carlo_probability(f, atoms, 10000, 7);
        auto b = monte_carlo_probability(f, atoms, 10000, 7);
        CHECK(a.successes == b.successes);
        EngineConfig one, four;
        one.threads = 1;
        four.threads = 4;
        auto c = monte_carlo_probability(f, atoms, 200000, 7, one);
        auto d = monte_carlo_probability(f, atoms, 200000, 7, four);
        CHECK(c.successes == d.successes);
    }
    CHECK_THROWS_AS(monte_carlo_probability([](auto) { return true; }, atoms, 99, 1), Error);
}

TEST_CASE("budget limits raise structured errors") {
    EngineConfig tiny;
    tiny.enum_cap = 8;
    std::vector<GaussianRational> entries(16, GaussianRational(1));
    const BilinearForm b(4, 4, entries, AtomDistribution::rademacher(), AtomDistribution::rademacher());
    CHECK_THROWS_AS(bilinear_conditional_concentration(b, TargetFunction::constant(GaussianRational(0)), tiny),
                    Error);
    EngineConfig small_dp;
    small_dp.dp_support_cap = 2;
    CHECK_THROWS_AS(
        linear_distribution(LinearForm({GaussianRational(1), GaussianRational(Rational(2)),
                                        GaussianRational(Rational(4))},
                                       AtomDistribution::rademacher()),
                            small_dp),
        Error);
}

TEST_CASE("thread count does not change results") {
    std::vector<GaussianRational> entries;
    Rng rng(4242);
    for (int i = 0; i < 36; ++i) entries.emplace_back(Rational(rng.range(-5, 5)));
    const BilinearForm b(6, 6, entries, AtomDistribution::rademacher(), AtomDistribution::rademacher());
    EngineConfig one;
    one.threads = 1;
    EngineConfig four;
    four.threads = 4;
    const auto r1 = bilinear_conditional_concentration(b, TargetFunction::constant(GaussianRational(0)), one);
    const auto r4 = bilinear_conditional_concentration(b, TargetFunction::constant(GaussianRational(0)), four);
    CHECK(r1.sup_prob == r4.sup_prob);
    CHECK(*r1.at_target == *r4.at_target);
    CHECK(r1.argmax_values == r4.argmax_values);
}

TEST_CASE("assignment enumerator weights") {
    std::vector<AtomDistribution> atoms{AtomDistribution::lazy_walker(Rational(1, 4)),
                                        AtomDistribution::rademacher()};
    AssignmentEnumerator space(atoms);
    CHECK(space.count() == 6);
    Int sum(0);
    space.for_each([&](std::span<const std::uint8_t>, const Int& w) { sum += w; });
    CHECK(sum == space.total_weight());
}
