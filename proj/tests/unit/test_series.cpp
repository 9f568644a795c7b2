#include <doctest.h>

#include <cmath>
#include <random>

#include "fractus/error.hpp"
#include "fractus/gamma.hpp"
#include "fractus/series.hpp"

using fractus::cplx;
using fractus::PowerTerm;
using fractus::Series;

TEST_CASE("normalization sorts, merges and drops zero terms") {
    const Series s(0.0, {{2.0, {1.5, 0.0}}, {1.0, {0.5, 0.0}}, {3.0, {1.5, 0.0}}, {0.0, {2.0, 0.0}}});
    REQUIRE(s.size() == 2);
    CHECK(s.terms()[0].exponent == cplx(0.5, 0.0));
    CHECK(s.terms()[1].coeff == cplx(5.0, 0.0));
    CHECK(s.min_re_exponent() == doctest::Approx(0.5));
    CHECK(Series(0.0).min_re_exponent() == INFINITY);
}

TEST_CASE("exact cancellation removes the term") {
    const Series a(0.0, {{0.1 + 0.2, {1.0, 0.0}}});
    const Series b(0.0, {{0.3, {1.0, 0.0}}});
    CHECK((a - b).empty());
    CHECK((a - a).empty());
}

TEST_CASE("imaginary parts of exponents are kept distinct") {
    const Series s(0.0, {{1.0, {1.0, 0.0}}, {1.0, {1.0, 2.6}}});
    CHECK(s.size() == 2);
    CHECK(s.coefficient_of({1.0, 2.6}) == cplx(1.0, 0.0));
    CHECK(s.coefficient_of({1.0, 2.5}) == cplx(0.0, 0.0));
}

TEST_CASE("evaluation at and above the base point") {
    const Series s(1.0, {{2.0, {0.0, 0.0}}, {3.0, {0.5, 0.0}}});
    CHECK(s.evaluate(1.0) == cplx(2.0, 0.0));
    CHECK(s.evaluate(5.0).real() == doctest::Approx(8.0));
    CHECK_THROWS_AS((void)s.evaluate(0.5), fractus::Error);
    const Series singular(0.0, {{1.0, {-0.5, 0.0}}});
    CHECK(std::isinf(std::abs(singular.evaluate(0.0))));
}

TEST_CASE("alternating sums keep precision") {
    // exp(-x) at x = 10 by its Taylor series
    std::vector<PowerTerm> terms;
    double fact = 1.0;
    for (int k = 0; k < 80; ++k) {
        terms.push_back({std::pow(-1.0, k) / fact, {double(k), 0.0}});
        fact *= (k + 1);
    }
    const Series s(0.0, terms);
    CHECK(std::abs(s.evaluate(10.0).real() - std::exp(-10.0)) < 1e-9);
}

TEST_CASE("truncated evaluation reports a tail estimate") {
    fractus::Truncation t;
    t.exponent_cap = 5.0;
    std::vector<PowerTerm> terms;
    for (int k = 0; k < 10; ++k) terms.push_back({1.0, {double(k), 0.0}});
    const Series s(0.0, terms, t);
    CHECK(s.truncated());
    CHECK(s.size() == 6);
    const auto e = s.evaluate_checked(0.9);
    CHECK(e.tail_estimate > 0.0);
    CHECK(e.tail_warning);
    const auto small = s.evaluate_checked(0.001);
    CHECK_FALSE(small.tail_warning);
}

TEST_CASE("term budget overflow throws") {
    fractus::Truncation t;
    t.max_terms = 3;
    std::vector<PowerTerm> terms;
    for (int k = 0; k < 5; ++k) terms.push_back({1.0, {double(k), 0.0}});
    CHECK_THROWS_AS(Series(0.0, terms, t), fractus::Error);
}

TEST_CASE("products follow exponent addition") {
    const Series a(0.0, {{1.0, {0.0, 0.0}}, {1.0, {1.0, 0.0}}});
    const Series sq = a * a;
    REQUIRE(sq.size() == 3);
    CHECK(sq.coefficient_of({1.0, 0.0}) == cplx(2.0, 0.0));
    const Series other(1.0, {{1.0, {0.0, 0.0}}});
    CHECK_THROWS_AS((void)(a + other), fractus::Error);
}

TEST_CASE("series algebra properties on random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> e(0.0, 3.0);
    auto random_series = [&] {
        std::vector<PowerTerm> t;
        for (int k = 0; k < 5; ++k) t.push_back({{u(rng), u(rng)}, {std::round(e(rng) * 4) / 4, 0.0}});
        return Series(0.0, t);
    };
    for (int trial = 0; trial < 50; ++trial) {
        const Series p = random_series();
        const Series q = random_series();
        const Series r = random_series();
        for (double x : {0.1, 0.5, 0.9}) {
            CHECK(std::abs((p * q).evaluate(x) - p.evaluate(x) * q.evaluate(x)) < 1e-12);
            CHECK(std::abs(((p + q) * r).evaluate(x) - (p * r + q * r).evaluate(x)) < 1e-12);
        }
    }
}

TEST_CASE("split, scale, and norms") {
    const Series s(0.0, {{1.0, {-0.5, 0.0}}, {2.0, {0.0, 0.0}}, {4.0, {1.0, 0.0}}});
    const auto [low, high] = s.split_at(0.0);
    CHECK(low.size() == 2);
    CHECK(high.size() == 1);
    CHECK(s.scaled(2.0).coefficient_of({1.0, 0.0}) == cplx(8.0, 0.0));
    CHECK(high.magnitude(2.0) == doctest::Approx(8.0));
    CHECK(s.l1_bound(1.0) == doctest::Approx(2.0 + 2.0 + 2.0));
    CHECK(s.with_base_point(3.0).base_point() == 3.0);
}
