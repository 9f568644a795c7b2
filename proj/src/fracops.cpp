#include "fractus/fracops.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fractus/error.hpp"
#include "fractus/parallel.hpp"

namespace fractus {

Series rl_integral_series(const Series& s, cplx order) {
    if (!(order.real() > 0.0)) throw Error(Errc::InvalidOperand, "fractional integral needs Re(order) > 0");
    std::vector<PowerTerm> out;
    out.reserve(s.size());
    for (const auto& t : s.terms()) {
        if (!t.integrable())
            throw Error(Errc::NotIntegrable, "term (x-a)^mu with Re mu = " + std::to_string(t.exponent.real()) +
                                                 " is not in L(a, b)");
        out.push_back({t.coeff * gamma_ratio(t.exponent + 1.0, t.exponent + 1.0 + order), t.exponent + order});
    }
    Series result(s.base_point(), std::move(out), s.truncation());
    if (s.truncated()) result.mark_truncated();
    return result;
}

Series rl_derivative_series(const Series& s, cplx order) {
    if (order.real() < 0.0) throw Error(Errc::InvalidOperand, "fractional derivative needs Re(order) >= 0");
    std::vector<PowerTerm> out;
    out.reserve(s.size());
    for (const auto& t : s.terms()) {
        if (!t.integrable())
            throw Error(Errc::NotIntegrable, "term (x-a)^mu with Re mu = " + std::to_string(t.exponent.real()) +
                                                 " is not in L(a, b)");
        out.push_back({t.coeff * gamma_ratio(t.exponent + 1.0, t.exponent + 1.0 - order), t.exponent - order});
    }
    Series result(s.base_point(), std::move(out), s.truncation());
    if (s.truncated()) result.mark_truncated();
    return result;
}

Series rl_operator_series(const Series& s, cplx order) {
    if (order.real() >= 0.0) return rl_derivative_series(s, order);
    return rl_integral_series(s, -order);
}

std::optional<cplx> derivative_limit_at_base(const Series& s, cplx order) {
    cplx limit{0.0, 0.0};
    for (const auto& t : s.terms()) {
        const cplx image = t.exponent - order;
        if (is_gamma_pole(image + 1.0)) continue;  // annihilated
        if (same_exponent(image, {0.0, 0.0})) {
            // c Gamma(mu + 1) / Gamma(1), written as a quotient so that the
            // normalized power c = 1 / Gamma(mu + 1) maps to exactly 1
            limit += t.coeff / recip_gamma(t.exponent + 1.0);
        } else if (image.real() <= 0.0) {
            return std::nullopt;
        }
    }
    return limit;
}

std::vector<PowerTerm> kernel_basis(ComplexOrder order) {
    if (!(order.re() > 0.0)) throw Error(Errc::InvalidOperand, "kernel basis needs Re(order) > 0");
    if (order.is_natural())
        throw Error(Errc::IntegerOrderKernel, "integer order: the kernel of D^n is the polynomials of degree < n");
    std::vector<PowerTerm> basis;
    for (int j = 1; j <= order.natural_part(); ++j) basis.push_back({1.0, order.value() - static_cast<double>(j)});
    return basis;
}

// ---------------------------------------------------------------------------

namespace {

// Moments of one panel [x_i - d0, x_i - d0 + h] against (x_i - t)^(beta-1):
//   m0 = int (x_i - t)^(beta-1) dt,   m1 = int (x_i - t)^(beta-1) (t - t_left) dt.
struct PanelMoments {
    double m0;
    double m1;
};

PanelMoments panel_moments(double d0, double h, double beta) {
    const double d1 = std::max(d0 - h, 0.0);
    const double q = h / d0;
    if (q < 0.25) {
        // (d0 - s)^(beta-1) = d0^(beta-1) sum_m binom(beta-1, m) (-s/d0)^m, integrated over s in [0, h].
        double binom = 1.0;
        double qm = 1.0;
        double s0 = 0.0;
        double s1 = 0.0;
        for (int m = 0; m < 60; ++m) {
            const double t0 = binom * qm / (m + 1);
            const double t1 = binom * qm / (m + 2);
            s0 += t0;
            s1 += t1;
            if (std::abs(t0) < 1e-18 * std::abs(s0) && m > 1) break;
            binom *= (beta - 1.0 - m) / (m + 1.0);
            qm *= -q;
        }
        const double scale = std::pow(d0, beta - 1.0) * h;
        return {scale * s0, scale * h * s1};
    }
    const double p0 = std::pow(d0, beta);
    const double p1 = d1 > 0.0 ? std::pow(d1, beta) : 0.0;
    const double m0 = (p0 - p1) / beta;
    const double m1 = d0 * m0 - (p0 * d0 - p1 * d1) / (beta + 1.0);
    return {m0, m1};
}

void fill_row(std::span<const double> nodes, std::size_t at, double beta, double inv_gamma, double* w) {
    for (std::size_t k = 0; k <= at; ++k) w[k] = 0.0;
    const double x = nodes[at];
    for (std::size_t p = 0; p < at; ++p) {
        const double h = nodes[p + 1] - nodes[p];
        const auto [m0, m1] = panel_moments(x - nodes[p], h, beta);
        w[p] += (m0 - m1 / h) * inv_gamma;
        w[p + 1] += (m1 / h) * inv_gamma;
    }
}

double require_real_order(ComplexOrder order) {
    if (!order.is_real()) throw Error(Errc::UnsupportedOrder, "grid quadrature supports real orders only");
    if (!(order.re() > 0.0)) throw Error(Errc::InvalidOperand, "fractional integral needs order > 0");
    return order.re();
}

}  // namespace

ProductWeights::ProductWeights(std::span<const double> nodes, double order) : order_(order) {
    if (!(order > 0.0)) throw Error(Errc::InvalidOperand, "fractional integral needs order > 0");
    const std::size_t n = nodes.size();
    offsets_.resize(n);
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        offsets_[i] = total;
        total += i + 1;
    }
    weights_.assign(total, 0.0);
    const double inv_gamma = recip_gamma(order).real();
    parallel_for(n, [&](std::size_t i) { fill_row(nodes, i, order, inv_gamma, weights_.data() + offsets_[i]); });
}

cplx ProductWeights::apply(std::size_t i, std::span<const cplx> values) const noexcept {
    return apply_range(i, values, 0, i + 1);
}

cplx ProductWeights::apply_range(std::size_t i, std::span<const cplx> values, std::size_t first,
                                 std::size_t last) const noexcept {
    const auto w = row(i);
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = first; k < last; ++k) {
        re += w[k] * values[k].real();
        im += w[k] * values[k].imag();
    }
    return {re, im};
}

std::vector<cplx> ProductWeights::apply_all(std::span<const cplx> values) const {
    std::vector<cplx> out(size());
    parallel_for(size(), [&](std::size_t i) { out[i] = apply(i, values); });
    return out;
}

std::vector<double> product_weights_row(std::span<const double> nodes, std::size_t at, double order) {
    std::vector<double> w(at + 1);
    fill_row(nodes, at, order, recip_gamma(order).real(), w.data());
    return w;
}

cplx rl_integral_grid(const GridFunction& f, ComplexOrder order, std::size_t at) {
    const double beta = require_real_order(order);
    if (at < 1 || at >= f.size()) throw Error(Errc::InvalidOperand, "node index out of range");
    const auto w = product_weights_row(f.nodes(), at, beta);
    cplx total{0.0, 0.0};
    for (std::size_t k = 0; k <= at; ++k) total += w[k] * f.values()[k];
    return total;
}

GridFunction rl_integral_grid(const GridFunction& f, ComplexOrder order) {
    const double beta = require_real_order(order);
    const ProductWeights weights(f.nodes(), beta);
    return f.with_values(weights.apply_all(f.values()));
}

double suggested_grading(double sigma_min) noexcept {
    if (!(sigma_min > -1.0)) return 2.0;
    return std::max(1.0, 2.0 / (1.0 + sigma_min));
}

GridFunction rl_derivative_smooth(const SmoothnessData& data, ComplexOrder order) {
    if (!order.is_real()) throw Error(Errc::UnsupportedOrder, "grid derivatives support real orders only");
    const double alpha = order.re();
    const int n = static_cast<int>(std::floor(alpha)) + 1;
    if (static_cast<int>(data.endpoint_derivatives.size()) < n)
        throw Error(Errc::InsufficientSmoothnessData,
                    "need y^(k)(a) for k = 0.." + std::to_string(n - 1) + " and samples of y^(" + std::to_string(n) + ")");

    const GridFunction& top = data.top_derivative;
    const double a = top.a();
    const double rest = static_cast<double>(n) - alpha;
    const ProductWeights weights(top.nodes(), rest);

    std::vector<cplx> out(top.size());
    for (std::size_t i = 1; i < top.size(); ++i) {
        const double t = top.nodes()[i] - a;
        cplx value = weights.apply(i, top.values());
        for (int k = 0; k < n; ++k) {
            const cplx c = data.endpoint_derivatives[k] * recip_gamma(1.0 + k - alpha);
            if (c != cplx{0.0, 0.0}) value += c * std::pow(t, k - alpha);
        }
        out[i] = value;
    }
    cplx limit{0.0, 0.0};
    for (int k = 0; k < n; ++k) {
        const cplx c = data.endpoint_derivatives[k] * recip_gamma(1.0 + k - alpha);
        if (c == cplx{0.0, 0.0}) continue;
        const double e = k - alpha;
        if (std::abs(e) < kExponentMergeTol)
            limit += c;
        else if (e < 0.0)
            limit = {std::numeric_limits<double>::infinity(), 0.0};
    }
    out[0] = limit;
    return top.with_values(std::move(out));
}

}  // namespace fractus
