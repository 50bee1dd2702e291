#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aclab/forms.hpp"
#include "aclab/structure.hpp"

using namespace aclab;

namespace {

bool block_minors_vanish(const BilinearForm& b, const std::vector<std::size_t>& rows,
                         const std::vector<std::size_t>& cols) {
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t c = a + 1; c < rows.size(); ++c) {
            for (std::size_t d = 0; d < cols.size(); ++d) {
                for (std::size_t e = d + 1; e < cols.size(); ++e) {
                    const auto& i = rows[a];
                    const auto& j = rows[c];
                    const auto& k = cols[d];
                    const auto& l = cols[e];
                    if (b.at(i, k) * b.at(j, l) != b.at(i, l) * b.at(j, k)) return false;
                }
            }
        }
    }
    return true;
}

} // namespace

TEST_CASE("atom models") {
    const auto rad = AtomDistribution::rademacher();
    CHECK(rad.size() == 2);
    CHECK(rad.weight_total() == 2);

    // the (1/2, 1/4, 1/4) walker
    const auto lazy = AtomDistribution::lazy_walker(Rational(1, 4));
    CHECK(lazy.values()[0] == GaussianRational(0));
    CHECK(lazy.probs()[0] == Rational(1, 2));
    CHECK(lazy.probs()[1] == Rational(1, 4));
    CHECK(lazy.probs()[2] == Rational(1, 4));
    const auto explicit_walker = AtomDistribution::finite_support({{GaussianRational(0), Rational(1, 2)},
                                                                  {GaussianRational(1), Rational(1, 4)},
                                                                  {GaussianRational(-1), Rational(1, 4)}});
    CHECK(lazy.values() == explicit_walker.values());
    CHECK(lazy.probs() == explicit_walker.probs());

    CHECK_THROWS_AS(AtomDistribution::lazy_walker(Rational(1, 2)), Error);
    CHECK_THROWS_AS(AtomDistribution::lazy_walker(Rational(0)), Error);
    CHECK_THROWS_AS(AtomDistribution::finite_support({{GaussianRational(1), Rational(1, 2)}}), Error);
    CHECK_THROWS_AS(AtomDistribution::finite_support(
                        {{GaussianRational(1), Rational(1, 2)}, {GaussianRational(1), Rational(1, 2)}}),
                    Error);
}

TEST_CASE("linear and bilinear caching") {
    LinearForm f({GaussianRational(1), GaussianRational(0), GaussianRational(2)}, AtomDistribution::rademacher());
    CHECK(f.nonzero_count() == 2);

    BilinearForm b = gen_extremal_bilinear(3, 2);
    CHECK(b.rows() == 3);
    CHECK(b.cols() == 2);
    CHECK(b.min_row_nonzeros() == 2);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 2; ++j) CHECK(b.at(i, j) == GaussianRational(1));
    }
    CHECK(gen_extremal_bilinear(1, 1).at(0, 0) == GaussianRational(1));
    CHECK(gen_extremal_bilinear(2, 2).row_nonzero_counts() == std::vector<std::size_t>{2, 2});
}

TEST_CASE("low-rank sum generator") {
    const std::vector<Rational> f{Rational(1), Rational(2)};
    const std::vector<Rational> g{Rational(0), Rational(1)};
    BilinearForm b = gen_lowrank_sum(f, g);
    CHECK(b.at(0, 0) == GaussianRational(1));
    CHECK(b.at(0, 1) == GaussianRational(2));
    CHECK(b.at(1, 0) == GaussianRational(2));
    CHECK(b.at(1, 1) == GaussianRational(3));

    const std::vector<Rational> zeros{Rational(0), Rational(0)};
    BilinearForm z = gen_lowrank_sum(zeros, zeros);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) CHECK(z.at(i, j).is_zero());
    }
    const std::vector<Rational> one{Rational(1)};
    const std::vector<Rational> five{Rational(5)};
    CHECK(gen_lowrank_sum(one, five).at(0, 0) == GaussianRational(Rational(6)));
}

TEST_CASE("planted rank-one instances") {
    SUBCASE("uncorrupted") {
        auto [b, cert] = gen_planted_rank_one(3, 3, 0, 0, 17);
        CHECK(cert.rows.size() == 3);
        CHECK(cert.cols.size() == 3);
        CHECK(verify_rank_one(b, cert));
    }
    SUBCASE("one corrupted row") {
        auto [b, cert] = gen_planted_rank_one(4, 4, 1, 0, 99);
        CHECK(cert.rows.size() == 3);
        CHECK(cert.cols.size() == 4);
        CHECK(verify_rank_one(b, cert));
        CHECK(block_minors_vanish(b, cert.rows, cert.cols));
        // the corrupted row must break proportionality against the block
        std::size_t corrupted = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            if (std::find(cert.rows.begin(), cert.rows.end(), i) == cert.rows.end()) corrupted = i;
        }
        auto rows_plus = cert.rows;
        rows_plus.push_back(corrupted);
        CHECK_FALSE(block_minors_vanish(b, rows_plus, cert.cols));
    }
    SUBCASE("corrupted row and column") {
        auto [b, cert] = gen_planted_rank_one(4, 4, 1, 1, 7);
        CHECK(cert.rows.size() == 3);
        CHECK(cert.cols.size() == 3);
        CHECK(verify_rank_one(b, cert));
    }
    SUBCASE("duplicate seeds reproduce") {
        auto [b1, c1] = gen_planted_rank_one(5, 6, 1, 1, 1234);
        auto [b2, c2] = gen_planted_rank_one(5, 6, 1, 1, 1234);
        CHECK(b1.entries() == b2.entries());
        CHECK(c1.rows == c2.rows);
    }
    CHECK_THROWS_AS(gen_planted_rank_one(3, 3, 3, 0, 1), Error);
}

TEST_CASE("quadratic from a squared linear form") {
    const std::vector<Rational> b1{Rational(1), Rational(1)};
    const std::vector<Rational> c0{Rational(0), Rational(0)};
    QuadraticForm q1 = quadratic_from_square(b1, c0, Rational(0));
    CHECK(q1.at(0, 0) == GaussianRational(1));
    CHECK(q1.at(0, 1) == GaussianRational(1));
    CHECK(q1.linear()[0].is_zero());

    const std::vector<Rational> b2{Rational(1), Rational(2)};
    const std::vector<Rational> c2{Rational(1), Rational(0)};
    QuadraticForm q2 = quadratic_from_square(b2, c2, Rational(3));
    CHECK(q2.at(0, 0) == GaussianRational(1));
    CHECK(q2.at(0, 1) == GaussianRational(2));
    CHECK(q2.at(1, 0) == GaussianRational(2));
    CHECK(q2.at(1, 1) == GaussianRational(Rational(4)));
    CHECK(q2.linear()[0] == GaussianRational(1));
    CHECK(q2.constant() == GaussianRational(Rational(3)));

    const std::vector<Rational> b3{Rational(1), Rational(1), Rational(1)};
    QuadraticForm q3 = quadratic_from_square(b3, {}, Rational(1));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(q3.at(i, j) == GaussianRational(1));
    }

    const std::vector<Rational> bad{Rational(1), Rational(0)};
    CHECK_THROWS_AS(quadratic_from_square(bad, c0, Rational(0)), Error);
}

TEST_CASE("quadratic symmetry is enforced") {
    std::vector<GaussianRational> asym{GaussianRational(0), GaussianRational(1), GaussianRational(2),
                                       GaussianRational(0)};
    CHECK_THROWS_AS(QuadraticForm(2, asym, {}, GaussianRational(0), AtomDistribution::rademacher()), Error);
}

TEST_CASE("target functions") {
    const auto constant = TargetFunction::constant(GaussianRational(Rational(5)));
    CHECK(constant.evaluate({}, {}) == GaussianRational(Rational(5)));

    const auto affine = TargetFunction::affine({GaussianRational(2), GaussianRational(-1)}, GaussianRational(1));
    const std::vector<GaussianRational> y{GaussianRational(1), GaussianRational(-1)};
    const std::vector<std::uint8_t> idx{0, 1};
    CHECK(affine.evaluate(idx, y) == GaussianRational(Rational(4)));

    std::map<std::vector<std::uint8_t>, GaussianRational> table;
    table[{0, 1}] = GaussianRational(Rational(9));
    const auto tf = TargetFunction::table(std::move(table));
    CHECK(tf.evaluate(idx, y) == GaussianRational(Rational(9)));
    const std::vector<std::uint8_t> missing{1, 1};
    CHECK_THROWS_AS(tf.evaluate(missing, y), Error);
}

TEST_CASE("multilinear forms drop stored zeros") {
    std::map<MultilinearForm::Index, GaussianRational> coeffs;
    coeffs[{0, 0}] = GaussianRational(1);
    coeffs[{1, 1}] = GaussianRational(0);
    MultilinearForm m(2, 2, std::move(coeffs),
                      {AtomDistribution::rademacher(), AtomDistribution::rademacher()});
    CHECK(m.coeffs().size() == 1);
    std::map<MultilinearForm::Index, GaussianRational> bad;
    bad[{0, 5}] = GaussianRational(1);
    CHECK_THROWS_AS(MultilinearForm(2, 2, std::move(bad),
                                    {AtomDistribution::rademacher(), AtomDistribution::rademacher()}),
                    Error);
}
