#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "fractus/series.hpp"

namespace fractus {

using cplx = std::complex<double>;

/// A fractional order alpha with Re alpha >= 0.
class ComplexOrder {
public:
    ComplexOrder() = default;
    ComplexOrder(double re, double im = 0.0);  // NOLINT(google-explicit-constructor)
    explicit ComplexOrder(cplx value) : ComplexOrder(value.real(), value.imag()) {}

    [[nodiscard]] double re() const noexcept { return value_.real(); }
    [[nodiscard]] double im() const noexcept { return value_.imag(); }
    [[nodiscard]] cplx value() const noexcept { return value_; }
    operator cplx() const noexcept { return value_; }  // NOLINT(google-explicit-constructor)

    [[nodiscard]] bool is_real() const noexcept;
    /// alpha in {1, 2, 3, ...} (to within the pole-snapping tolerance).
    [[nodiscard]] bool is_natural() const noexcept;
    /// n = [Re alpha] + 1 for alpha not natural, n = alpha otherwise.
    [[nodiscard]] int natural_part() const noexcept;

private:
    cplx value_{0.0, 0.0};
};

/// Complex samples on a graded mesh x_i = a + (b - a) (i / N)^r.
class GridFunction {
public:
    GridFunction() = default;
    /// Builds the mesh from (a, b, r); N = values.size() - 1.
    GridFunction(double a, double b, double grading, std::vector<cplx> values);
    /// Validates that explicit nodes match the declared grading.
    GridFunction(std::vector<double> nodes, std::vector<cplx> values, double grading);

    [[nodiscard]] static GridFunction zeros(double a, double b, std::size_t intervals, double grading);

    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::span<const cplx> values() const noexcept { return values_; }
    [[nodiscard]] double grading() const noexcept { return grading_; }
    [[nodiscard]] std::size_t intervals() const noexcept { return nodes_.empty() ? 0 : nodes_.size() - 1; }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] double a() const noexcept { return nodes_.front(); }
    [[nodiscard]] double b() const noexcept { return nodes_.back(); }

    /// Piecewise-linear interpolant; x must lie in [a, b].
    [[nodiscard]] cplx interpolate(double x) const;
    [[nodiscard]] GridFunction with_values(std::vector<cplx> values) const;
    /// Same function, linearly interpolated onto `nodes`.
    [[nodiscard]] std::vector<cplx> sample_at(std::span<const double> nodes) const;
    /// Trapezoidal L1 norm.
    [[nodiscard]] double l1_norm() const;
    [[nodiscard]] bool is_zero() const noexcept;

private:
    std::vector<double> nodes_;
    std::vector<cplx> values_;
    double grading_ = 1.0;
};

[[nodiscard]] std::vector<double> graded_nodes(double a, double b, std::size_t intervals, double grading);

struct SampledCoefficient {
    GridFunction samples;
    /// nu: a_j(x) / (x - a)^nu is bounded and nonzero near a. Declared, not fitted.
    double vanishing_order = 0.0;
    /// A bound on max |a_j| over [a, b].
    double sup_bound = 0.0;
};

/// a_j(x): either a closed-form generalized power series or samples.
class CoefficientFunction {
public:
    CoefficientFunction() = default;
    CoefficientFunction(Series series);  // NOLINT(google-explicit-constructor)
    CoefficientFunction(SampledCoefficient sampled);  // NOLINT(google-explicit-constructor)
    [[nodiscard]] static CoefficientFunction constant(double a, cplx value);

    [[nodiscard]] bool is_series() const noexcept { return std::holds_alternative<Series>(data_); }
    [[nodiscard]] const Series& series() const;
    [[nodiscard]] const SampledCoefficient& sampled() const;

    [[nodiscard]] cplx operator()(double x) const;
    /// Value at the base point (limit x -> a+).
    [[nodiscard]] cplx at_base() const;
    [[nodiscard]] double sup_bound(double a, double b) const;
    /// Smallest power of (x - a) present near a.
    [[nodiscard]] double vanishing_order() const;
    [[nodiscard]] bool is_zero() const;
    /// The value when a_j is a constant series.
    [[nodiscard]] std::optional<cplx> constant_value() const;

private:
    std::variant<Series, SampledCoefficient> data_;
};

/// g(x): a series (possibly empty, meaning g = 0) or samples.
class Forcing {
public:
    Forcing() = default;
    Forcing(Series series);  // NOLINT(google-explicit-constructor)
    Forcing(GridFunction sampled);  // NOLINT(google-explicit-constructor)

    [[nodiscard]] bool is_series() const noexcept { return std::holds_alternative<Series>(data_); }
    [[nodiscard]] const Series& series() const;
    [[nodiscard]] const GridFunction& sampled() const;
    [[nodiscard]] bool is_zero() const;
    [[nodiscard]] cplx operator()(double x) const;

private:
    std::variant<Series, GridFunction> data_;
};

struct LowerTerm {
    ComplexOrder order;
    CoefficientFunction coeff;
};

/// D^alpha y + sum_j a_j(x) D^{alpha_j} y = g,  (D^{alpha-k} y)(a+) = b_k.
struct CauchyProblem {
    double a = 0.0;
    double b = 1.0;
    ComplexOrder alpha;
    std::vector<LowerTerm> terms;
    Forcing forcing;
    /// b_1 .. b_n
    std::vector<cplx> initial;

    [[nodiscard]] int n() const noexcept { return alpha.natural_part(); }
    [[nodiscard]] bool has_series_coefficients() const noexcept;
    [[nodiscard]] bool has_constant_coefficients() const noexcept;
    [[nodiscard]] bool has_real_orders() const noexcept;
    /// Conventional index j of term `position`: j = 0 is reserved for the order-zero term.
    [[nodiscard]] int term_label(std::size_t position) const noexcept;
};

/// Returns the normalized problem (orders sorted, zero coefficients dropped)
/// or throws InvalidOrders / NotContinuousCoefficient / InvalidInitialData.
[[nodiscard]] CauchyProblem validate_problem(CauchyProblem p);

}  // namespace fractus
