#include "fractus/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fractus/error.hpp"
#include "fractus/gamma.hpp"

namespace fractus {

// ---------------------------------------------------------------------------
// ComplexOrder

ComplexOrder::ComplexOrder(double re, double im) : value_(re, im) {
    if (!std::isfinite(re) || !std::isfinite(im) || re < 0.0)
        throw Error(Errc::InvalidOrders, "order must be finite with Re >= 0, got " + std::to_string(re));
}

bool ComplexOrder::is_real() const noexcept { return std::abs(im()) < kPoleSnap; }

bool ComplexOrder::is_natural() const noexcept {
    const double nearest = std::round(re());
    return is_real() && nearest >= 1.0 && std::abs(re() - nearest) < kPoleSnap;
}

int ComplexOrder::natural_part() const noexcept {
    if (is_natural()) return static_cast<int>(std::round(re()));
    return static_cast<int>(std::floor(re())) + 1;
}

// ---------------------------------------------------------------------------
// GridFunction

std::vector<double> graded_nodes(double a, double b, std::size_t intervals, double grading) {
    std::vector<double> nodes(intervals + 1);
    const double n = static_cast<double>(intervals);
    for (std::size_t i = 0; i <= intervals; ++i)
        nodes[i] = a + (b - a) * std::pow(static_cast<double>(i) / n, grading);
    nodes.back() = b;
    return nodes;
}

GridFunction::GridFunction(double a, double b, double grading, std::vector<cplx> values)
    : values_(std::move(values)), grading_(grading) {
    if (values_.size() < 3) throw Error(Errc::InvalidGrid, "a grid function needs N >= 2 intervals");
    if (!(b > a)) throw Error(Errc::InvalidGrid, "grid requires b > a");
    if (!(grading >= 1.0)) throw Error(Errc::InvalidGrid, "mesh grading must be >= 1");
    nodes_ = graded_nodes(a, b, values_.size() - 1, grading);
}

GridFunction::GridFunction(std::vector<double> nodes, std::vector<cplx> values, double grading)
    : nodes_(std::move(nodes)), values_(std::move(values)), grading_(grading) {
    if (nodes_.size() != values_.size()) throw Error(Errc::InvalidGrid, "node/value count mismatch");
    if (nodes_.size() < 3) throw Error(Errc::InvalidGrid, "a grid function needs N >= 2 intervals");
    if (!(grading >= 1.0)) throw Error(Errc::InvalidGrid, "mesh grading must be >= 1");
    const auto expected = graded_nodes(nodes_.front(), nodes_.back(), nodes_.size() - 1, grading);
    const double scale = std::max({std::abs(nodes_.front()), std::abs(nodes_.back()), 1.0});
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (std::abs(nodes_[i] - expected[i]) > 1e-12 * scale)
            throw Error(Errc::InvalidGrid, "node " + std::to_string(i) + " does not match the declared grading");
        if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
            throw Error(Errc::InvalidGrid, "nodes must be strictly increasing");
    }
}

GridFunction GridFunction::zeros(double a, double b, std::size_t intervals, double grading) {
    return GridFunction(a, b, grading, std::vector<cplx>(intervals + 1));
}

cplx GridFunction::interpolate(double x) const {
    const double slack = 1e-12 * std::max(1.0, std::abs(b()));
    if (x < a() - slack || x > b() + slack) throw Error(Errc::InvalidOperand, "interpolation outside the grid");
    if (x <= a()) return values_.front();
    if (x >= b()) return values_.back();
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - nodes_.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - nodes_[lo]) / (nodes_[hi] - nodes_[lo]);
    return (1.0 - w) * values_[lo] + w * values_[hi];
}

GridFunction GridFunction::with_values(std::vector<cplx> values) const {
    if (values.size() != nodes_.size()) throw Error(Errc::InvalidGrid, "value count does not match the mesh");
    GridFunction out = *this;
    out.values_ = std::move(values);
    return out;
}

std::vector<cplx> GridFunction::sample_at(std::span<const double> nodes) const {
    std::vector<cplx> out;
    out.reserve(nodes.size());
    for (double x : nodes) out.push_back(interpolate(x));
    return out;
}

double GridFunction::l1_norm() const {
    double total = 0.0;
    for (std::size_t i = 1; i < nodes_.size(); ++i)
        total += 0.5 * (nodes_[i] - nodes_[i - 1]) * (std::abs(values_[i]) + std::abs(values_[i - 1]));
    return total;
}

bool GridFunction::is_zero() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](cplx v) { return v == cplx{0.0, 0.0}; });
}

// ---------------------------------------------------------------------------
// CoefficientFunction / Forcing

CoefficientFunction::CoefficientFunction(Series series) : data_(std::move(series)) {}
CoefficientFunction::CoefficientFunction(SampledCoefficient sampled) : data_(std::move(sampled)) {}

CoefficientFunction CoefficientFunction::constant(double a, cplx value) {
    return CoefficientFunction(Series::constant(a, value, Truncation::unbounded()));
}

const Series& CoefficientFunction::series() const {
    if (!is_series()) throw Error(Errc::UnsupportedCoefficients, "coefficient is sampled, not a series");
    return std::get<Series>(data_);
}

const SampledCoefficient& CoefficientFunction::sampled() const {
    if (is_series()) throw Error(Errc::InvalidOperand, "coefficient is a series, not sampled");
    return std::get<SampledCoefficient>(data_);
}

cplx CoefficientFunction::operator()(double x) const {
    if (is_series()) return series().evaluate(x);
    return sampled().samples.interpolate(x);
}

cplx CoefficientFunction::at_base() const {
    if (is_series()) return series().coefficient_of({0.0, 0.0});
    return sampled().samples.values().front();
}

double CoefficientFunction::sup_bound(double a, double b) const {
    if (is_series()) return series().magnitude(b - a);
    return sampled().sup_bound;
}

double CoefficientFunction::vanishing_order() const {
    if (is_series()) return series().min_re_exponent();
    return sampled().vanishing_order;
}

bool CoefficientFunction::is_zero() const {
    if (is_series()) return series().empty();
    return sampled().samples.is_zero();
}

std::optional<cplx> CoefficientFunction::constant_value() const {
    if (!is_series()) return std::nullopt;
    const auto& s = series();
    if (s.empty()) return cplx{0.0, 0.0};
    if (s.size() == 1 && s.terms().front().exponent == cplx{0.0, 0.0}) return s.terms().front().coeff;
    return std::nullopt;
}

Forcing::Forcing(Series series) : data_(std::move(series)) {}
Forcing::Forcing(GridFunction sampled) : data_(std::move(sampled)) {}

const Series& Forcing::series() const {
    if (!is_series()) throw Error(Errc::InvalidOperand, "forcing is sampled, not a series");
    return std::get<Series>(data_);
}

const GridFunction& Forcing::sampled() const {
    if (is_series()) throw Error(Errc::InvalidOperand, "forcing is a series, not sampled");
    return std::get<GridFunction>(data_);
}

bool Forcing::is_zero() const { return is_series() ? series().empty() : sampled().is_zero(); }

cplx Forcing::operator()(double x) const { return is_series() ? series().evaluate(x) : sampled().interpolate(x); }

// ---------------------------------------------------------------------------
// CauchyProblem

bool CauchyProblem::has_series_coefficients() const noexcept {
    return std::all_of(terms.begin(), terms.end(), [](const LowerTerm& t) { return t.coeff.is_series(); });
}

bool CauchyProblem::has_constant_coefficients() const noexcept {
    return std::all_of(terms.begin(), terms.end(),
                       [](const LowerTerm& t) { return t.coeff.constant_value().has_value(); });
}

bool CauchyProblem::has_real_orders() const noexcept {
    return alpha.is_real() &&
           std::all_of(terms.begin(), terms.end(), [](const LowerTerm& t) { return t.order.is_real(); });
}

int CauchyProblem::term_label(std::size_t position) const noexcept {
    const bool has_zero = !terms.empty() && terms.front().order.value() == cplx{0.0, 0.0};
    return static_cast<int>(position) + (has_zero ? 0 : 1);
}

namespace {

bool spans(const GridFunction& g, double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(g.a() - a) <= 1e-12 * scale && std::abs(g.b() - b) <= 1e-12 * scale;
}

void validate_coefficient(const CoefficientFunction& c, double a, double b, int label) {
    const std::string name = "a_" + std::to_string(label);
    if (c.is_series()) {
        const Series& s = c.series();
        if (s.base_point() != a) throw Error(Errc::InvalidOperand, name + " is expanded about the wrong point");
        for (const auto& t : s.terms()) {
            // x^{i theta} oscillates without limit at a, so Re = 0 is only continuous for the constant.
            const bool continuous = t.exponent.real() > 0.0 || t.exponent == cplx{0.0, 0.0};
            if (!continuous)
                throw Error(Errc::NotContinuousCoefficient, name + " has a term (x-a)^mu with Re mu <= 0, mu != 0",
                            {label});
        }
        return;
    }
    const auto& sc = c.sampled();
    if (!spans(sc.samples, a, b)) throw Error(Errc::InvalidGrid, name + " samples do not span [a, b]");
    if (!(sc.vanishing_order >= 0.0))
        throw Error(Errc::NotContinuousCoefficient, name + " declares a negative vanishing order", {label});
    double peak = 0.0;
    for (cplx v : sc.samples.values()) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(Errc::NotContinuousCoefficient, name + " has non-finite samples", {label});
        peak = std::max(peak, std::abs(v));
    }
    if (sc.sup_bound < peak)
        throw Error(Errc::InvalidOperand, name + " sup_bound is below the sampled maximum");
}

}  // namespace

CauchyProblem validate_problem(CauchyProblem p) {
    if (!std::isfinite(p.a) || !std::isfinite(p.b) || !(p.b > p.a))
        throw Error(Errc::InvalidOperand, "interval must satisfy a < b");
    if (!(p.alpha.re() > 0.0)) throw Error(Errc::InvalidOrders, "alpha must have Re alpha > 0");

    std::erase_if(p.terms, [](const LowerTerm& t) { return t.coeff.is_zero(); });
    std::stable_sort(p.terms.begin(), p.terms.end(),
                     [](const LowerTerm& l, const LowerTerm& r) { return l.order.re() < r.order.re(); });

    for (std::size_t i = 0; i < p.terms.size(); ++i) {
        const ComplexOrder& order = p.terms[i].order;
        if (order.re() < kPoleSnap && order.value() != cplx{0.0, 0.0})
            throw Error(Errc::InvalidOrders, "lower orders with Re = 0 must be exactly 0");
        if (i > 0 && order.re() - p.terms[i - 1].order.re() < kPoleSnap)
            throw Error(Errc::InvalidOrders, "lower orders must have strictly increasing real parts");
    }
    if (!p.terms.empty() && !(p.terms.back().order.re() < p.alpha.re() - kPoleSnap))
        throw Error(Errc::InvalidOrders, "every lower order needs Re alpha_j < Re alpha");

    for (std::size_t i = 0; i < p.terms.size(); ++i) validate_coefficient(p.terms[i].coeff, p.a, p.b, p.term_label(i));

    if (p.forcing.is_series()) {
        const Series& g = p.forcing.series();
        if (!g.empty() && g.base_point() != p.a)
            throw Error(Errc::InvalidOperand, "forcing is expanded about the wrong point");
        if (!g.all_integrable()) throw Error(Errc::NotIntegrable, "forcing must lie in L(a, b)");
        if (g.empty()) p.forcing = Forcing(Series(p.a));
    } else if (!spans(p.forcing.sampled(), p.a, p.b)) {
        throw Error(Errc::InvalidGrid, "forcing samples do not span [a, b]");
    }

    if (static_cast<int>(p.initial.size()) != p.n())
        throw Error(Errc::InvalidInitialData, "expected " + std::to_string(p.n()) + " initial values, got " +
                                                  std::to_string(p.initial.size()));
    return p;
}

}  // namespace fractus
