#include "fractus/fundamental.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "fractus/error.hpp"
#include "fractus/fracops.hpp"
#include "fractus/gamma.hpp"
#include "fractus/parallel.hpp"
#include "fractus/solvability.hpp"

namespace fractus {

// ---------------------------------------------------------------------------
// GreenFunction

const ShiftedGreen& GreenFunction::shifted() const {
    if (!is_shifted()) throw Error(Errc::InvalidOperand, "Green function is sampled");
    return std::get<ShiftedGreen>(data_);
}

const SampledGreen& GreenFunction::sampled() const {
    if (is_shifted()) throw Error(Errc::InvalidOperand, "Green function is a series");
    return std::get<SampledGreen>(data_);
}

cplx GreenFunction::operator()(double x, double xi) const {
    if (x < xi) throw Error(Errc::InvalidOperand, "G(x; xi) needs x >= xi");
    if (is_shifted()) {
        const ShiftedGreen& g = shifted();
        if (xi == g.xi) return g.kernel.evaluate(x);
        if (!g.translation_invariant)
            throw Error(Errc::InvalidOperand, "this Green function was built for xi = " + std::to_string(g.xi));
        return g.kernel.evaluate(g.xi + (x - xi));
    }
    const SampledGreen& g = sampled();
    auto locate = [&](double v) {
        const auto it = std::lower_bound(g.nodes.begin(), g.nodes.end(), v - 1e-14 * std::max(1.0, std::abs(v)));
        if (it == g.nodes.end() || std::abs(*it - v) > 1e-12 * std::max(1.0, std::abs(v)))
            throw Error(Errc::InvalidOperand, "sampled Green function evaluated off its mesh");
        return static_cast<std::size_t>(it - g.nodes.begin());
    };
    const std::size_t i = locate(x);
    const std::size_t m = locate(xi);
    if (i == m) return std::isfinite(std::real(g.alpha)) && std::real(g.alpha) > 1.0 ? cplx{} : cplx{INFINITY, 0.0};
    return std::exp((g.alpha - 1.0) * std::log(x - xi)) * g.smooth[i][m] * recip_gamma(g.alpha);
}

namespace {

void require_series_coefficients(const CauchyProblem& p) {
    if (!p.has_series_coefficients())
        throw Error(Errc::UnsupportedCoefficients,
                    "closed-form series need series coefficients; solve sampled coefficients with --method picard");
}

void require_constant_coefficients(const CauchyProblem& p) {
    if (!p.has_constant_coefficients())
        throw Error(Errc::UnsupportedCoefficients, "the multinomial forms need constant coefficients");
}

cplx beta_of(const CauchyProblem& p, std::size_t j) { return p.alpha.value() - p.terms[j].order.value(); }

// sum_j a_j I^(alpha - alpha_j) s
Series apply_kernel(const CauchyProblem& p, const Series& s) {
    Series out(s.base_point(), s.truncation());
    for (std::size_t j = 0; j < p.terms.size(); ++j)
        out += series_mul(p.terms[j].coeff.series(), rl_integral_series(s, beta_of(p, j)));
    return out;
}

struct Neumann {
    Series sum;
    std::size_t layers = 0;
};

// seed - K seed + K^2 seed - ... until a layer is empty (cap) or negligible
// for three layers running.
Neumann neumann(const CauchyProblem& p, const Series& seed, Truncation trunc) {
    const double length = p.b - p.a;
    Neumann out{seed.with_truncation(trunc), 0};
    Series layer = out.sum;
    int quiet = 0;
    while (!layer.empty()) {
        layer = -apply_kernel(p, layer);
        if (layer.empty()) break;
        out.sum += layer;
        if (++out.layers > 100000) throw Error(Errc::TruncationOverflow, "series recursion does not terminate");
        if (trunc.layer_tol > 0.0 && layer.magnitude(length) <= trunc.layer_tol * out.sum.magnitude(length)) {
            if (++quiet >= 3) {
                out.sum.mark_truncated();
                break;
            }
        } else {
            quiet = 0;
        }
    }
    return out;
}

// the truncation for Phi so that I^alpha Phi respects the caller's cap
Truncation phi_truncation(const CauchyProblem& p, Truncation trunc) {
    trunc.exponent_cap -= p.alpha.re();
    return trunc;
}

struct Entry {
    Series y;
    std::size_t layers = 0;
};

Entry canonical_entry(const CauchyProblem& p, int i, Truncation trunc) {
    const cplx alpha = p.alpha.value();
    const cplx lead_exp = alpha - static_cast<double>(i);
    std::vector<PowerTerm> seed_terms;
    Series seed(p.a, phi_truncation(p, trunc));
    for (std::size_t j = 0; j < p.terms.size(); ++j) {
        const cplx e = beta_of(p, j) - static_cast<double>(i);
        const Series power = Series::monomial(p.a, recip_gamma(e + 1.0), e, phi_truncation(p, trunc));
        seed -= series_mul(p.terms[j].coeff.series(), power);
    }
    const Neumann phi = neumann(p, seed, phi_truncation(p, trunc));
    Entry out{Series::monomial(p.a, recip_gamma(lead_exp + 1.0), lead_exp, trunc), phi.layers};
    if (!phi.sum.empty()) {
        Series integral = rl_integral_series(phi.sum.with_truncation(trunc), alpha);
        out.y += integral;
    }
    return out;
}

Series reexpand(const Series& c, double xi, double b, Truncation trunc) {
    const double d = xi - c.base_point();
    if (d == 0.0) return c;
    const double length = b - xi;
    std::vector<PowerTerm> terms;
    for (const auto& t : c.terms()) {
        const cplx mu = t.exponent;
        const double m = std::round(mu.real());
        const bool polynomial = std::abs(mu.imag()) < kPoleSnap && std::abs(mu.real() - m) < kPoleSnap && m >= 0.0;
        const std::size_t limit = polynomial ? static_cast<std::size_t>(m)
                                             : std::min<std::size_t>(trunc.max_terms, static_cast<std::size_t>(std::max(
                                                                                          0.0, trunc.exponent_cap)));
        const cplx head = t.coeff * std::exp(mu * std::log(d));
        cplx binom = 1.0;
        for (std::size_t n = 0; n <= limit; ++n) {
            const cplx coeff = head * binom * std::pow(d, -static_cast<double>(n));
            if (coeff != cplx{0.0, 0.0}) terms.push_back({coeff, {static_cast<double>(n), 0.0}});
            if (!polynomial && std::abs(coeff) * std::pow(length, static_cast<double>(n)) < 1e-17 * std::abs(head))
                break;
            binom *= (mu - static_cast<double>(n)) / static_cast<double>(n + 1);
        }
    }
    return Series(xi, std::move(terms), Truncation::unbounded());
}

CauchyProblem rebased(const CauchyProblem& p, double xi, Truncation trunc) {
    CauchyProblem q = p;
    q.a = xi;
    for (auto& t : q.terms) t.coeff = CoefficientFunction(reexpand(t.coeff.series(), xi, p.b, trunc));
    q.forcing = Forcing(Series(xi));
    q.initial.assign(static_cast<std::size_t>(p.n()), cplx{0.0, 0.0});
    q.initial[0] = 1.0;
    return q;
}

// multi-indices beta over the present terms with |beta| = degree and
// Re sum beta_j w_j <= budget, in lexicographic order
void enumerate(const std::vector<cplx>& w, std::size_t degree, double budget,
               const std::function<void(const std::vector<std::size_t>&)>& visit) {
    std::vector<std::size_t> beta(w.size(), 0);
    std::function<void(std::size_t, std::size_t, double)> rec = [&](std::size_t j, std::size_t left, double used) {
        if (j + 1 == w.size()) {
            if (used + static_cast<double>(left) * w[j].real() > budget + kExponentMergeTol) return;
            beta[j] = left;
            visit(beta);
            beta[j] = 0;
            return;
        }
        for (std::size_t b = left + 1; b-- > 0;) {
            const double next = used + static_cast<double>(b) * w[j].real();
            if (next > budget + kExponentMergeTol) continue;
            beta[j] = b;
            rec(j + 1, left - b, next);
        }
        beta[j] = 0;
    };
    if (w.empty()) {
        if (degree == 0) visit(beta);
        return;
    }
    rec(0, degree, 0.0);
}

// k! / prod beta_j! * prod a_j^beta_j
cplx multinomial_weight(const std::vector<std::size_t>& beta, const std::vector<cplx>& a) {
    cplx weight = 1.0;
    std::size_t total = 0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        for (std::size_t m = 1; m <= beta[j]; ++m) weight *= static_cast<double>(total + m) / static_cast<double>(m);
        total += beta[j];
        if (beta[j] > 0) weight *= std::pow(a[j], static_cast<double>(beta[j]));
    }
    return weight;
}

struct ConstantData {
    std::vector<cplx> a;
    std::vector<cplx> w;  // alpha - alpha_j
    double min_w = INFINITY;
};

ConstantData constant_data(const CauchyProblem& p) {
    ConstantData d;
    for (std::size_t j = 0; j < p.terms.size(); ++j) {
        d.a.push_back(*p.terms[j].coeff.constant_value());
        d.w.push_back(beta_of(p, j));
        d.min_w = std::min(d.min_w, d.w.back().real());
    }
    return d;
}

// Sums degree layers produced by `layer_terms` until no multi-index fits
// under the cap or the layers stay negligible.
Series by_degree(const CauchyProblem& p, const ConstantData& d, Truncation trunc, double budget, Series total,
                 const std::function<void(std::size_t, const std::vector<std::size_t>&, std::vector<PowerTerm>&)>& emit) {
    const double length = p.b - p.a;
    int quiet = 0;
    for (std::size_t degree = 0;; ++degree) {
        if (d.w.empty() && degree > 0) break;
        if (!d.w.empty() && static_cast<double>(degree) * d.min_w > budget + kExponentMergeTol) {
            total.mark_truncated();
            break;
        }
        std::vector<PowerTerm> terms;
        enumerate(d.w, degree, budget, [&](const std::vector<std::size_t>& beta) { emit(degree, beta, terms); });
        const Series layer(p.a, std::move(terms), Truncation::unbounded());
        total += layer.with_truncation(trunc);
        if (degree > 0 && trunc.layer_tol > 0.0 && layer.magnitude(length) <= trunc.layer_tol * total.magnitude(length)) {
            if (++quiet >= 3) {
                total.mark_truncated();
                break;
            }
        } else {
            quiet = 0;
        }
    }
    return total;
}

}  // namespace

// ---------------------------------------------------------------------------

FundamentalSystem canonical_system(const CauchyProblem& p) { return canonical_system(p, Truncation::for_order(p.alpha)); }

FundamentalSystem canonical_system(const CauchyProblem& p, Truncation truncation) {
    require_series_coefficients(p);
    FundamentalSystem sys;
    sys.base_point = p.a;
    sys.alpha = p.alpha.value();
    sys.n = p.n();
    sys.k0 = compute_k0(p);
    sys.truncation = truncation;
    sys.entries.resize(static_cast<std::size_t>(sys.k0));
    sys.tail_bounds.resize(sys.entries.size());
    sys.layers.resize(sys.entries.size());
    parallel_for(sys.entries.size(), [&](std::size_t idx) {
        Entry e = canonical_entry(p, static_cast<int>(idx) + 1, truncation);
        sys.tail_bounds[idx] = homogeneous_tail(p, e.y);
        sys.layers[idx] = e.layers;
        sys.entries[idx] = std::move(e.y);
    });
    return sys;
}

cplx check_canonical(const FundamentalSystem& sys, int i, int k) {
    if (i < 1 || i > sys.k0 || k < 1 || k > sys.n) throw Error(Errc::InvalidOperand, "check_canonical index out of range");
    const auto limit = derivative_limit_at_base(sys.entries[static_cast<std::size_t>(i - 1)], sys.alpha - double(k));
    if (!limit)
        throw Error(Errc::ConditionViolated,
                    "(D^(alpha-" + std::to_string(k) + ") y_" + std::to_string(i) + ")(a+) does not exist", {k});
    return *limit;
}

Series homogeneous_solution(const FundamentalSystem& sys, const std::vector<cplx>& b) {
    if (static_cast<int>(b.size()) != sys.n)
        throw Error(Errc::InvalidInitialData, "expected " + std::to_string(sys.n) + " initial values");
    std::vector<int> offending;
    for (int k = sys.k0 + 1; k <= sys.n; ++k)
        if (b[static_cast<std::size_t>(k - 1)] != cplx{0.0, 0.0}) offending.push_back(k);
    if (!offending.empty())
        throw Error(Errc::UnsolvableInitialData, "b_k must vanish for k > k0 = " + std::to_string(sys.k0), offending);
    Series out(sys.base_point, sys.truncation);
    for (int i = 1; i <= sys.k0; ++i) {
        const cplx bi = b[static_cast<std::size_t>(i - 1)];
        if (bi != cplx{0.0, 0.0}) out += sys.entries[static_cast<std::size_t>(i - 1)].scaled(bi);
    }
    return out;
}

Series inhomogeneous_series(const CauchyProblem& p, const Series& g, Truncation truncation) {
    require_series_coefficients(p);
    if (g.empty()) return Series(p.a, truncation);
    if (g.base_point() != p.a) throw Error(Errc::InvalidOperand, "forcing is expanded about the wrong point");
    const Neumann phi = neumann(p, g, phi_truncation(p, truncation));
    return rl_integral_series(phi.sum.with_truncation(truncation), p.alpha.value());
}

Series apply_operator(const CauchyProblem& p, const Series& y) {
    require_series_coefficients(p);
    const Series yy = y.with_truncation(Truncation::unbounded());
    Series h = rl_derivative_series(yy, p.alpha.value());
    for (const auto& t : p.terms) h += series_mul(t.coeff.series(), rl_derivative_series(yy, t.order.value()));
    return h;
}

double homogeneous_tail(const CauchyProblem& p, const Series& y) { return apply_operator(p, y).magnitude(p.b - p.a); }

CauchyProblem rebased_problem(const CauchyProblem& p, double xi, Truncation truncation) {
    require_series_coefficients(p);
    if (!(xi >= p.a && xi < p.b)) throw Error(Errc::InvalidOperand, "xi must lie in [a, b)");
    return rebased(p, xi, truncation);
}

GreenFunction green_series(const CauchyProblem& p, double xi, Truncation truncation) {
    const CauchyProblem q = rebased_problem(p, xi, truncation);
    return ShiftedGreen{xi, canonical_entry(q, 1, truncation).y, p.has_constant_coefficients()};
}

GreenFunction sampled_green(const CauchyProblem& p, std::size_t intervals, double grading, Truncation truncation) {
    require_series_coefficients(p);
    SampledGreen g;
    g.nodes = graded_nodes(p.a, p.b, intervals, grading);
    g.grading = grading;
    g.alpha = p.alpha.value();
    g.smooth.assign(g.nodes.size(), std::vector<cplx>(g.nodes.size(), cplx{0.0, 0.0}));
    const cplx gamma_alpha = gamma(g.alpha);
    parallel_for(intervals, [&](std::size_t m) {
        const Series kernel = green_series(p, g.nodes[m], truncation).shifted().kernel;
        // G / (x - xi)^(alpha - 1) * Gamma(alpha), smooth up to xi
        std::vector<PowerTerm> terms;
        for (const auto& t : kernel.terms()) terms.push_back({t.coeff * gamma_alpha, t.exponent - (g.alpha - 1.0)});
        const Series h(g.nodes[m], std::move(terms), Truncation::unbounded());
        for (std::size_t i = m; i < g.nodes.size(); ++i) g.smooth[i][m] = h.evaluate(g.nodes[i]);
    });
    g.smooth[intervals][intervals] = 1.0;
    return g;
}

Series constant_fundamental(const CauchyProblem& p, int i, Truncation truncation) {
    require_constant_coefficients(p);
    const int k0 = compute_k0(p);
    if (i < 1 || i > k0) throw Error(Errc::InvalidOperand, "entry index must lie in 1..k0");
    const ConstantData d = constant_data(p);
    const cplx alpha = p.alpha.value();

    // seed: sum_j a_j (x-a)^(w_j - i) / Gamma(w_j - i + 1)
    std::vector<PowerTerm> seed;
    double seed_min = INFINITY;
    for (std::size_t j = 0; j < d.a.size(); ++j) {
        const cplx e = d.w[j] - static_cast<double>(i);
        const cplx c = d.a[j] * recip_gamma(e + 1.0);
        if (c == cplx{0.0, 0.0}) continue;
        seed.push_back({c, e});
        seed_min = std::min(seed_min, e.real());
    }
    const cplx lead = alpha - static_cast<double>(i);
    Series total = Series::monomial(p.a, recip_gamma(lead + 1.0), lead, truncation);
    if (seed.empty()) return total;
    const double budget = truncation.exponent_cap - alpha.real() - seed_min;
    return by_degree(p, d, truncation, budget, total,
                     [&](std::size_t degree, const std::vector<std::size_t>& beta, std::vector<PowerTerm>& out) {
                         const cplx weight = (degree % 2 == 0 ? -1.0 : 1.0) * multinomial_weight(beta, d.a);
                         cplx s = alpha;
                         for (std::size_t j = 0; j < beta.size(); ++j) s += static_cast<double>(beta[j]) * d.w[j];
                         for (const auto& t : seed)
                             out.push_back({weight * t.coeff * gamma_ratio(t.exponent + 1.0, t.exponent + 1.0 + s),
                                            t.exponent + s});
                     });
}

GreenFunction constant_green(const CauchyProblem& p, Truncation truncation) {
    require_constant_coefficients(p);
    const ConstantData d = constant_data(p);
    const cplx alpha = p.alpha.value();
    const double budget = truncation.exponent_cap - (alpha.real() - 1.0);
    Series total(p.a, truncation);
    total = by_degree(p, d, truncation, budget, total,
                      [&](std::size_t degree, const std::vector<std::size_t>& beta, std::vector<PowerTerm>& out) {
                          const cplx weight = (degree % 2 == 0 ? 1.0 : -1.0) * multinomial_weight(beta, d.a);
                          cplx s = alpha;
                          for (std::size_t j = 0; j < beta.size(); ++j) s += static_cast<double>(beta[j]) * d.w[j];
                          out.push_back({weight * recip_gamma(s), s - 1.0});
                      });
    return ShiftedGreen{p.a, std::move(total), true};
}

SplitFunction superpose(const CauchyProblem& p, const FundamentalSystem& sys, const GreenFunction& G,
                        const Forcing& g) {
    SplitFunction out;
    out.singular = homogeneous_solution(sys, p.initial);
    if (g.is_series()) {
        if (!g.series().empty()) out.singular += inhomogeneous_series(p, g.series(), sys.truncation);
        return out;
    }
    const GridFunction& f = g.sampled();
    std::vector<cplx> acc(f.size(), cplx{0.0, 0.0});
    if (G.is_shifted()) {
        const ShiftedGreen& sh = G.shifted();
        if (!sh.translation_invariant)
            throw Error(Errc::InvalidOperand, "variable coefficients need a sampled Green function");
        // int_a^x c (x - xi)^mu g(xi) dxi = c Gamma(mu + 1) (I^(mu+1) g)(x)
        for (const auto& t : sh.kernel.terms()) {
            const ComplexOrder order(t.exponent + 1.0);
            if (!order.is_real()) throw Error(Errc::UnsupportedOrder, "grid convolution needs real exponents");
            const ProductWeights w(f.nodes(), order.re());
            const auto values = w.apply_all(f.values());
            const cplx scale = t.coeff * gamma(order.value());
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += scale * values[i];
        }
    } else {
        const SampledGreen& sg = G.sampled();
        if (sg.nodes.size() != f.size() || sg.grading != f.grading())
            throw Error(Errc::InvalidGrid, "forcing samples must share the Green function mesh");
        const ComplexOrder order(sg.alpha);
        if (!order.is_real()) throw Error(Errc::UnsupportedOrder, "grid convolution needs a real order");
        const ProductWeights w(f.nodes(), order.re());
        for (std::size_t i = 1; i < acc.size(); ++i) {
            const auto row = w.row(i);
            cplx sum = 0.0;
            for (std::size_t m = 0; m <= i; ++m) sum += row[m] * sg.smooth[i][m] * f.values()[m];
            acc[i] = sum;
        }
    }
    out.regular = f.with_values(std::move(acc));
    return out;
}

}  // namespace fractus
