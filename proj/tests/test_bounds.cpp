#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aclab/bounds.hpp"
#include "aclab/rng.hpp"
#include "oracles.hpp"

using namespace aclab;

TEST_CASE("littlewood-offord bound values") {
    CHECK(lo_bound(1).as_rational() == Rational(1, 2));
    CHECK(lo_bound(4).as_rational() == Rational(1, 2));
    CHECK(lo_bound(100).as_rational() == Rational(1, 10));
    CHECK(lo_bound(2).value() == doctest::Approx(0.5));
    CHECK(lo_bound(9).as_rational() == Rational(1, 3));
    CHECK_FALSE(lo_bound(10).is_rational());
    CHECK(lo_bound(10).value() == doctest::Approx(0.316227766));
    CHECK_THROWS_AS(lo_bound(0), Error);
}

TEST_CASE("littlewood-offord exact check on random instances") {
    Rng rng(404);
    for (std::size_t n : {4u, 8u, 12u}) {
        for (int t = 0; t < 100; ++t) {
            std::vector<GaussianRational> coeffs;
            std::size_t nonzeros = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const long num = rng.range(0, 9);
                coeffs.emplace_back(Rational(num, rng.range(1, 3)));
                if (num != 0) ++nonzeros;
            }
            if (nonzeros == 0) continue;
            const LinearForm f(coeffs, AtomDistribution::rademacher());
            const Rational p = concentration(linear_distribution(f)).sup_prob;
            CHECK(lo_check(p, static_cast<long>(nonzeros)));
        }
    }
    CHECK_FALSE(lo_check(Rational(1, 2), 5)); // 1/4 * 5 > 1
    CHECK(lo_check(Rational(1, 2), 4));
}

TEST_CASE("bilinear bound values and exact check") {
    CHECK(bilo_bound(4) == 1.0); // 2 + 0.577... caps at 1
    CHECK(bilo_bound(100) == doctest::Approx(0.5154700538));
    // bound * sqrt(r) tends to 4 + 2/sqrt(3)
    CHECK(bilo_bound(100000000) * 10000.0 == doctest::Approx(4.0 + 2.0 / std::sqrt(3.0)).epsilon(1e-9));
    CHECK(bilo_check(Rational(1), 4));       // capped region
    CHECK(bilo_check(Rational(1), 26));      // boundary of the cap
    CHECK_FALSE(bilo_check(Rational(1), 27)); // bound drops below 1
    CHECK(bilo_check(Rational(1, 2), 100));   // 0.5 <= 0.5154...
    CHECK_FALSE(bilo_check(Rational(13, 25), 100)); // 0.52 > bound
    // agreement with the double evaluation on a grid
    for (long r : {27L, 30L, 50L, 64L, 100L, 1000L}) {
        for (long num = 1; num <= 40; ++num) {
            const Rational p(num, 40);
            const bool exact = bilo_check(p, r);
            const double approx = p.to_double() <= bilo_bound(r) + 1e-12;
            CHECK(exact == approx);
        }
    }
}

TEST_CASE("row zero count distribution") {
    const std::vector<std::size_t> both{0, 1};
    SUBCASE("nonzero single column") {
        std::vector<GaussianRational> e{GaussianRational(1), GaussianRational(1)};
        BilinearForm b(2, 1, e, AtomDistribution::rademacher(), AtomDistribution::rademacher());
        const auto d = row_zero_count_distribution(b, both);
        CHECK(d.prob_at(GaussianRational(0)) == Rational(1));
    }
    SUBCASE("all-ones 2x2") {
        const auto d = row_zero_count_distribution(gen_extremal_bilinear(2, 2), both);
        CHECK(d.prob_at(GaussianRational(Rational(2))) == Rational(1, 2));
        CHECK(d.prob_at(GaussianRational(0)) == Rational(1, 2));
    }
    SUBCASE("identity") {
        std::vector<GaussianRational> e{GaussianRational(1), GaussianRational(0), GaussianRational(0),
                                        GaussianRational(1)};
        BilinearForm b(2, 2, e, AtomDistribution::rademacher(), AtomDistribution::rademacher());
        const auto d = row_zero_count_distribution(b, both);
        CHECK(d.prob_at(GaussianRational(0)) == Rational(1));
    }
    SUBCASE("expectation equals the sum of per-row zero probabilities") {
        Rng rng(8);
        for (int t = 0; t < 10; ++t) {
            const std::size_t m = 3, n = 4;
            std::vector<GaussianRational> e;
            for (std::size_t i = 0; i < m * n; ++i) e.emplace_back(Rational(rng.range(-2, 2)));
            BilinearForm b(m, n, e, AtomDistribution::rademacher(), AtomDistribution::rademacher());
            std::vector<std::size_t> rows{0, 1, 2};
            const auto d = row_zero_count_distribution(b, rows);
            Rational sum_marginals(0);
            for (std::size_t i : rows) {
                std::vector<GaussianRational> row;
                for (std::size_t j = 0; j < n; ++j) row.push_back(b.at(i, j));
                sum_marginals += linear_distribution(LinearForm(row, b.y_atom())).prob_at(GaussianRational(0));
            }
            CHECK(d.expectation() == sum_marginals);
        }
    }
}

TEST_CASE("halasz tuple counts") {
    std::vector<GaussianRational> two_equal{GaussianRational(1), GaussianRational(1)};
    CHECK(halasz_rk(two_equal, 1) == 4);
    std::vector<GaussianRational> distinct{GaussianRational(1), GaussianRational(Rational(2))};
    CHECK(halasz_rk(distinct, 1) == 2);
    std::vector<GaussianRational> three{GaussianRational(1), GaussianRational(1), GaussianRational(Rational(2))};
    CHECK(halasz_rk(three, 1) == 5);

    // R_k >= k! C(n,k): rearrangements of distinct-index tuples coincide
    Rng rng(55);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = static_cast<std::size_t>(rng.range(2, 8));
        std::vector<GaussianRational> coeffs;
        for (std::size_t i = 0; i < n; ++i) coeffs.emplace_back(Rational(rng.range(-5, 5), rng.range(1, 2)));
        for (unsigned k : {1u, 2u}) {
            Int fact(1);
            for (unsigned i = 2; i <= k; ++i) fact *= i;
            CHECK(halasz_rk(coeffs, k) >= fact * oracle::binomial(n, k));
        }
    }
}

TEST_CASE("halasz ratio report") {
    SUBCASE("all-ones n=10, k=1") {
        std::vector<GaussianRational> ones(10, GaussianRational(1));
        const LinearForm f(ones, AtomDistribution::rademacher());
        const auto rep = halasz_bound_report(f, 1);
        // sup = C(10,5)/2^10, R_1 = 100
        CHECK(rep.exact_prob == Rational(oracle::binomial(10, 5), Int(1024)));
        CHECK(rep.ratio == doctest::Approx(0.2460937 * std::pow(10.0, 2.5) / 100.0));
        CHECK(rep.passes);
    }
    SUBCASE("powers of two") {
        std::vector<GaussianRational> coeffs;
        for (int i = 0; i < 10; ++i) coeffs.emplace_back(Rational(1L << i));
        const auto rep = halasz_bound_report(LinearForm(coeffs, AtomDistribution::rademacher()), 1);
        CHECK(rep.exact_prob == Rational(1, 1024));
        CHECK(rep.ratio < 0.5);
        CHECK(rep.passes);
    }
    SUBCASE("degenerate n=1") {
        const auto rep =
            halasz_bound_report(LinearForm({GaussianRational(1)}, AtomDistribution::rademacher()), 1);
        CHECK(rep.exact_prob == Rational(1, 2));
        CHECK(rep.passes);
    }
    std::vector<GaussianRational> with_zero{GaussianRational(1), GaussianRational(0)};
    CHECK_THROWS_AS(halasz_bound_report(LinearForm(with_zero, AtomDistribution::rademacher()), 1), Error);
}

TEST_CASE("joint multiplicities") {
    std::vector<GaussianRational> a1{GaussianRational(1), GaussianRational(1)};
    CHECK(joint_multiplicity(a1, a1, 1) == 2);
    std::vector<GaussianRational> a2{GaussianRational(1), GaussianRational(Rational(2))};
    std::vector<GaussianRational> b2{GaussianRational(Rational(2)), GaussianRational(1)};
    CHECK(joint_multiplicity(a2, b2, 1) == 1);
    std::vector<GaussianRational> a3{GaussianRational(1), GaussianRational(1), GaussianRational(1)};
    std::vector<GaussianRational> b3{GaussianRational(1), GaussianRational(1), GaussianRational(Rational(2))};
    CHECK(joint_multiplicity(a3, b3, 2) == 4);
}

TEST_CASE("two-dimensional subspace deficiency") {
    using P = std::pair<GaussianRational, GaussianRational>;
    std::vector<P> v1{{GaussianRational(1), GaussianRational(0)},
                      {GaussianRational(Rational(2)), GaussianRational(0)},
                      {GaussianRational(0), GaussianRational(1)}};
    CHECK(subspace_deficiency_2d(v1) == 1);
    std::vector<P> collinear{{GaussianRational(1), GaussianRational(1)},
                             {GaussianRational(Rational(2)), GaussianRational(Rational(2))},
                             {GaussianRational(Rational(3)), GaussianRational(Rational(3))}};
    CHECK(subspace_deficiency_2d(collinear) == 0);
    std::vector<P> spread{{GaussianRational(1), GaussianRational(0)},
                          {GaussianRational(0), GaussianRational(1)},
                          {GaussianRational(1), GaussianRational(1)}};
    CHECK(subspace_deficiency_2d(spread) == 2);
    std::vector<P> with_zero{{GaussianRational(0), GaussianRational(0)},
                             {GaussianRational(1), GaussianRational(0)}};
    CHECK(subspace_deficiency_2d(with_zero) == 0); // zero vector joins the x-axis line
}

TEST_CASE("two-dimensional concentration follows the subspace deficiency") {
    // empirical form of the d=2 dispersion bound: sup_c P(sum a_i x_i = c)
    // times the deficiency m stays below a fixed constant at desk scale
    Rng rng(777000);
    double worst = 0.0;
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = static_cast<std::size_t>(rng.range(6, 12));
        std::vector<std::pair<GaussianRational, GaussianRational>> vectors;
        std::vector<GaussianRational> ax, ay;
        for (std::size_t i = 0; i < n; ++i) {
            const GaussianRational x{Rational(rng.range(-2, 2))};
            const GaussianRational y{Rational(rng.range(-2, 2))};
            vectors.emplace_back(x, y);
            ax.push_back(x);
            ay.push_back(y);
        }
        const std::size_t m = subspace_deficiency_2d(vectors);
        if (m == 0) continue;
        std::vector<LinearForm> forms{LinearForm(ax, AtomDistribution::rademacher()),
                                      LinearForm(ay, AtomDistribution::rademacher())};
        const auto joint = joint_distribution(forms);
        Rational sup(0);
        for (const auto& [v, p] : joint.support()) sup = std::max(sup, p);
        const Rational scaled = sup * Rational(static_cast<long>(m));
        worst = std::max(worst, scaled.to_double());
        CHECK(scaled <= Rational(2)); // fitted constant, desk scale
    }
    CHECK(worst > 0.0);
}

TEST_CASE("szemeredi-trotter incidence report") {
    SUBCASE("single point on its line") {
        JointDistribution::Support pt;
        pt[{GaussianRational(1), GaussianRational(Rational(3))}] = Rational(1);
        JointDistribution::Support ln;
        ln[{GaussianRational(Rational(2)), GaussianRational(1)}] = Rational(1); // y = 2x + 1
        const auto rep = st_incidence_report(JointDistribution(pt), JointDistribution(ln));
        CHECK(rep.exact_prob == Rational(1));
        CHECK(rep.passes);
    }
    SUBCASE("disjoint supports") {
        JointDistribution::Support pt;
        pt[{GaussianRational(0), GaussianRational(0)}] = Rational(1, 2);
        pt[{GaussianRational(1), GaussianRational(0)}] = Rational(1, 2);
        JointDistribution::Support ln;
        ln[{GaussianRational(0), GaussianRational(Rational(5))}] = Rational(1, 2); // y = 5
        ln[{GaussianRational(0), GaussianRational(Rational(7))}] = Rational(1, 2);
        const auto rep = st_incidence_report(JointDistribution(pt), JointDistribution(ln));
        CHECK(rep.exact_prob == Rational(0));
        CHECK(rep.passes);
    }
    SUBCASE("incidence mass dominance") {
        // P <= sum_p P(p) * (#lines through p) * q_l, and symmetrically
        Rng rng(4141);
        for (int t = 0; t < 20; ++t) {
            JointDistribution::Support pt, ln;
            Rational left(1);
            const int np = static_cast<int>(rng.range(2, 5));
            for (int i = 0; i < np; ++i) {
                const Rational mass = (i + 1 == np) ? left : left / Rational(2);
                left -= mass;
                pt[{GaussianRational(Rational(rng.range(-3, 3))), GaussianRational(Rational(rng.range(-3, 3)))}] +=
                    mass;
            }
            left = Rational(1);
            const int nl = static_cast<int>(rng.range(2, 5));
            for (int i = 0; i < nl; ++i) {
                const Rational mass = (i + 1 == nl) ? left : left / Rational(3);
                left -= mass;
                ln[{GaussianRational(Rational(rng.range(-2, 2))), GaussianRational(Rational(rng.range(-3, 3)))}] +=
                    mass;
            }
            const JointDistribution points(std::move(pt)), lines(std::move(ln));
            const auto rep = st_incidence_report(points, lines);
            Rational q_p(0), q_l(0);
            for (const auto& [v, p] : points.support()) q_p = std::max(q_p, p);
            for (const auto& [v, p] : lines.support()) q_l = std::max(q_l, p);
            Rational bound_p(0);
            for (const auto& [p, mass] : points.support()) {
                long incident = 0;
                for (const auto& [l, lm] : lines.support()) {
                    if (p[1] == l[0] * p[0] + l[1]) ++incident;
                }
                bound_p += mass * Rational(incident) * q_l;
            }
            Rational bound_l(0);
            for (const auto& [l, mass] : lines.support()) {
                long incident = 0;
                for (const auto& [p, pm] : points.support()) {
                    if (p[1] == l[0] * p[0] + l[1]) ++incident;
                }
                bound_l += mass * Rational(incident) * q_p;
            }
            CHECK(rep.exact_prob <= std::min(bound_p, bound_l));
        }
    }
}
