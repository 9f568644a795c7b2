#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "fractus/gamma.hpp"
#include "fractus/model.hpp"
#include "fractus/series.hpp"

namespace fractus {

// ---------------------------------------------------------------------------
// Exact operators on generalized power series.
//
//   I^alpha (x-a)^mu = Gamma(mu+1) / Gamma(mu+1+alpha) (x-a)^(mu+alpha)
//   D^alpha (x-a)^mu = Gamma(mu+1) / Gamma(mu+1-alpha) (x-a)^(mu-alpha)
//
// Coefficients go through recip_gamma, so kernel terms vanish exactly.

/// Requires Re(order) > 0 and Re mu > -1 for every term (else NotIntegrable).
[[nodiscard]] Series rl_integral_series(const Series& s, cplx order);

/// Requires Re(order) >= 0 and Re mu > -1 for every term. Result terms with
/// Re <= -1 are kept; query PowerTerm::integrable().
[[nodiscard]] Series rl_derivative_series(const Series& s, cplx order);

/// D^order for any complex order: a derivative when Re(order) >= 0 and the
/// integral I^(-order) otherwise.
[[nodiscard]] Series rl_operator_series(const Series& s, cplx order);

/// lim_{x->a+} (D^order s)(x): the coefficient of the (x-a)^0 term, or
/// nullopt when a surviving term has Re <= 0 and no finite limit.
[[nodiscard]] std::optional<cplx> derivative_limit_at_base(const Series& s, cplx order);

/// (x-a)^(alpha-j), j = 1..n: the null space of D^alpha. Integer orders
/// throw IntegerOrderKernel (the kernel is then the polynomials).
[[nodiscard]] std::vector<PowerTerm> kernel_basis(ComplexOrder order);

// ---------------------------------------------------------------------------
// Product-trapezoidal quadrature for I^beta on a mesh, real beta > 0.
//
// f is replaced by its piecewise-linear interpolant and every panel is
// integrated against (x_i - t)^(beta-1) exactly.

class ProductWeights {
public:
    ProductWeights(std::span<const double> nodes, double order);

    [[nodiscard]] double order() const noexcept { return order_; }
    [[nodiscard]] std::size_t size() const noexcept { return offsets_.size(); }
    /// Weights w_{i,0..i}; (I^beta f)(x_i) = sum_k w_{i,k} f_k.
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {weights_.data() + offsets_[i], i + 1};
    }
    [[nodiscard]] cplx apply(std::size_t i, std::span<const cplx> values) const noexcept;
    /// Partial sum over k in [first, last).
    [[nodiscard]] cplx apply_range(std::size_t i, std::span<const cplx> values, std::size_t first,
                                   std::size_t last) const noexcept;
    [[nodiscard]] std::vector<cplx> apply_all(std::span<const cplx> values) const;

private:
    double order_;
    std::vector<std::size_t> offsets_;
    std::vector<double> weights_;
};

/// Weights of a single node; row i of ProductWeights without the matrix.
[[nodiscard]] std::vector<double> product_weights_row(std::span<const double> nodes, std::size_t at, double order);

/// (I^order f)(x_at) for at >= 1. Complex orders throw UnsupportedOrder.
[[nodiscard]] cplx rl_integral_grid(const GridFunction& f, ComplexOrder order, std::size_t at);
/// I^order f at every node (value 0 at x_0 = a).
[[nodiscard]] GridFunction rl_integral_grid(const GridFunction& f, ComplexOrder order);

/// Mesh exponent max(1, 2 / (1 + sigma)) for content behaving like (x-a)^sigma.
[[nodiscard]] double suggested_grading(double sigma_min) noexcept;

/// Data for the AC^n representation of D^alpha y.
struct SmoothnessData {
    /// y^(k)(a), k = 0..n-1
    std::vector<cplx> endpoint_derivatives;
    /// samples of y^(n)
    GridFunction top_derivative;
};

/// D^alpha y = sum_k y^(k)(a) (x-a)^(k-alpha) / Gamma(1+k-alpha) + I^(n-alpha) y^(n),
/// n = [alpha] + 1. Node 0 holds the x -> a+ limit (infinite when singular).
[[nodiscard]] GridFunction rl_derivative_smooth(const SmoothnessData& data, ComplexOrder order);

}  // namespace fractus
