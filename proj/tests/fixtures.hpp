// Problems shared by the unit tests and the acceptance binary.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fractus/model.hpp"
#include "fractus/series.hpp"

namespace fractus::fixture {

inline std::string data_path(const std::string& name) { return std::string(FRACTUS_DATA_DIR) + "/" + name; }

inline CauchyProblem constant_problem(cplx alpha, std::vector<std::pair<cplx, double>> terms, double b = 1.0) {
    CauchyProblem p;
    p.b = b;
    p.alpha = ComplexOrder(alpha);
    for (auto [order, c] : terms) p.terms.push_back({ComplexOrder(order), CoefficientFunction::constant(0.0, c)});
    p.forcing = Forcing(Series(0.0));
    p.initial.assign(static_cast<std::size_t>(p.alpha.natural_part()), 0.0);
    p.initial[0] = 1.0;
    return p;
}

// D^3.5 y - 3 D^3.4 y = 0. Solutions grow like exp(3^10 x), hence the short interval.
inline CauchyProblem example1(std::vector<cplx> b = {1.0, 0.0, 0.0, 0.0}) {
    CauchyProblem p = constant_problem(3.5, {{3.4, -3.0}}, 1e-4);
    p.initial = std::move(b);
    return validate_problem(p);
}

// D^1.5 y + 3 D^1 y = 0
inline CauchyProblem example2() { return validate_problem(constant_problem(1.5, {{1.0, 3.0}})); }

// D^1.5 y + x D^1 y = 0
inline CauchyProblem example3(std::vector<cplx> b = {1.0, 0.0}) {
    CauchyProblem p;
    p.alpha = 1.5;
    p.terms.push_back({1.0, CoefficientFunction(Series::monomial(0.0, 1.0, 1.0))});
    p.forcing = Forcing(Series(0.0));
    p.initial = std::move(b);
    return validate_problem(p);
}

inline CauchyProblem example4(std::vector<cplx> b = {1.0, 0.0, 0.0, 0.0}) {
    CauchyProblem p =
        constant_problem(3.5, {{2.5, 2}, {1.5, 3}, {1.3, 5}, {1.2, 4}, {0.5, 6}, {0.4, 9}, {0.0, 7}});
    p.initial = std::move(b);
    return validate_problem(p);
}

// D^(3.5+2.6i) y - 3 D^(3.4+2.6i) y = 0
inline CauchyProblem example5(double b = 1e-4) {
    return validate_problem(constant_problem({3.5, 2.6}, {{{3.4, 2.6}, -3.0}}, b));
}

// D^alpha y + lambda y = 0, y_1 = x^(alpha-1) E_{alpha,alpha}(-lambda x^alpha)
inline CauchyProblem mittag_leffler(double alpha, double lambda) {
    return validate_problem(constant_problem(alpha, {{0.0, lambda}}));
}

// D^0.5 y + y = 1 with zero data
inline CauchyProblem relaxation() {
    CauchyProblem p = constant_problem(0.5, {{0.0, 1.0}});
    p.initial = {0.0};
    p.forcing = Forcing(Series::constant(0.0, 1.0));
    return validate_problem(p);
}

// Example 4's exponent lattice is dense (steps 1, 2, 2.2, ..., 3.5), so the
// default cap of 40 Re alpha would exceed any term budget.
inline Truncation example4_truncation() {
    Truncation t;
    t.exponent_cap = 30.0;
    t.max_terms = 1024;
    return t;
}

// the problems with series coefficients used for system-wide properties
inline std::vector<std::pair<std::string, CauchyProblem>> series_corpus() {
    return {{"example1", example1()},
            {"example2", example2()},
            {"example3", example3()},
            {"example4", example4()},
            {"example5", example5()},
            {"mittag_leffler_05", mittag_leffler(0.5, 1.0)},
            {"mittag_leffler_15", mittag_leffler(1.5, 3.0)}};
}

}  // namespace fractus::fixture
