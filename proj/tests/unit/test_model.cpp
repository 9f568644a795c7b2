#include <doctest.h>

#include <cmath>

#include "fractus/error.hpp"
#include "fractus/model.hpp"

using namespace fractus;

namespace {

CauchyProblem constant_problem(double alpha, std::vector<std::pair<double, double>> terms) {
    CauchyProblem p;
    p.alpha = alpha;
    for (auto [order, c] : terms) p.terms.push_back({order, CoefficientFunction::constant(0.0, c)});
    p.initial.assign(p.alpha.natural_part(), 0.0);
    return p;
}

}  // namespace

TEST_CASE("natural part of orders") {
    CHECK(ComplexOrder(3.5).natural_part() == 4);
    CHECK(ComplexOrder(1.5).natural_part() == 2);
    CHECK(ComplexOrder(2.0).natural_part() == 2);
    CHECK(ComplexOrder(3.5, 2.6).natural_part() == 4);
    CHECK(ComplexOrder(0.3).natural_part() == 1);
    CHECK(ComplexOrder(2.0, 1.0).natural_part() == 3);
    CHECK(ComplexOrder(2.0).is_natural());
    CHECK_FALSE(ComplexOrder(2.0, 1.0).is_natural());
    CHECK_THROWS_AS(ComplexOrder(-0.1), Error);
    CHECK_THROWS_AS(ComplexOrder(NAN), Error);
}

TEST_CASE("graded meshes") {
    const auto x = graded_nodes(0.0, 2.0, 4, 2.0);
    REQUIRE(x.size() == 5);
    CHECK(x[1] == doctest::Approx(2.0 / 16.0));
    CHECK(x[4] == 2.0);
    const GridFunction f(x, std::vector<cplx>(5, 1.0), 2.0);
    CHECK(f.l1_norm() == doctest::Approx(2.0));
    CHECK(f.interpolate(1.0) == cplx(1.0, 0.0));
    CHECK_THROWS_AS(GridFunction(x, std::vector<cplx>(5), 1.0), Error);
    CHECK_THROWS_AS(GridFunction(0.0, 1.0, 1.0, std::vector<cplx>(2)), Error);
    CHECK_THROWS_AS((void)f.interpolate(2.5), Error);
    const GridFunction lin(0.0, 1.0, 1.0, {0.0, 0.5, 1.0});
    CHECK(lin.interpolate(0.25).real() == doctest::Approx(0.25));
}

TEST_CASE("a valid two-term problem") {
    auto p = validate_problem(constant_problem(1.5, {{1.0, 3.0}}));
    CHECK(p.n() == 2);
    CHECK(p.terms.size() == 1);
    CHECK(p.term_label(0) == 1);
    CHECK(p.has_constant_coefficients());
    CHECK(p.forcing.is_zero());
}

TEST_CASE("seven-term problem keeps its order and labels") {
    auto p = validate_problem(
        constant_problem(3.5, {{2.5, 2}, {0.0, 7}, {0.4, 9}, {0.5, 6}, {1.2, 4}, {1.3, 5}, {1.5, 3}}));
    CHECK(p.n() == 4);
    REQUIRE(p.terms.size() == 7);
    CHECK(p.terms.front().order.re() == 0.0);
    CHECK(p.terms.back().order.re() == 2.5);
    CHECK(p.term_label(0) == 0);
    CHECK(p.term_label(6) == 6);
}

TEST_CASE("order chain violations") {
    CHECK_THROWS_AS((void)validate_problem(constant_problem(1.5, {{1.5, 1.0}})), Error);
    CHECK_THROWS_AS((void)validate_problem(constant_problem(1.5, {{0.5, 1.0}, {0.5, 2.0}})), Error);
    auto p = constant_problem(1.5, {{0.0, 1.0}});
    p.terms[0].order = ComplexOrder(0.0, 1.0);
    try {
        (void)validate_problem(p);
        FAIL("expected InvalidOrders");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidOrders);
    }
}

TEST_CASE("zero coefficients are dropped before the order check") {
    auto p = validate_problem(constant_problem(1.5, {{1.0, 0.0}, {0.5, 2.0}}));
    CHECK(p.terms.size() == 1);
}

TEST_CASE("coefficient continuity and initial data length") {
    auto p = constant_problem(1.5, {});
    p.terms.push_back({1.0, CoefficientFunction(Series::monomial(0.0, 1.0, {-0.5, 0.0}))});
    try {
        (void)validate_problem(p);
        FAIL("expected NotContinuousCoefficient");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotContinuousCoefficient);
    }
    auto q = constant_problem(1.5, {{1.0, 1.0}});
    q.initial.push_back(1.0);
    try {
        (void)validate_problem(q);
        FAIL("expected InvalidInitialData");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidInitialData);
    }
}

TEST_CASE("forcing must be integrable") {
    auto p = constant_problem(1.5, {});
    p.forcing = Series::monomial(0.0, 1.0, {-1.0, 0.0});
    CHECK_THROWS_AS((void)validate_problem(p), Error);
    p.forcing = Series::monomial(0.0, 1.0, {-0.5, 0.0});
    CHECK_NOTHROW((void)validate_problem(p));
}

TEST_CASE("sampled coefficients") {
    auto p = constant_problem(1.5, {});
    SampledCoefficient sc{GridFunction(0.0, 1.0, 1.0, std::vector<cplx>(9, 2.0)), 0.0, 2.0};
    p.terms.push_back({1.0, sc});
    auto v = validate_problem(p);
    CHECK(v.terms[0].coeff(0.5) == cplx(2.0, 0.0));
    CHECK(v.terms[0].coeff.sup_bound(0.0, 1.0) == 2.0);
    CHECK_FALSE(v.has_series_coefficients());
    p.terms[0].coeff = SampledCoefficient{sc.samples, 0.0, 1.0};
    CHECK_THROWS_AS((void)validate_problem(p), Error);
    p.terms[0].coeff = SampledCoefficient{GridFunction(0.0, 0.5, 1.0, std::vector<cplx>(9, 2.0)), 0.0, 2.0};
    CHECK_THROWS_AS((void)validate_problem(p), Error);
}
