#include "fractus/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "fractus/error.hpp"
#include "fractus/fracops.hpp"
#include "fractus/gamma.hpp"
#include "fractus/solvability.hpp"

namespace fractus {

cplx SplitFunction::operator()(double x) const {
    cplx v = singular.evaluate(x);
    if (has_grid()) v += regular.interpolate(x);
    return v;
}

namespace {

// Exponents up to this real part stay in closed form; rounding in sums like
// -0.9 + 9 * 0.1 must not push a constant onto the grid side.
constexpr double kSplit = kExponentMergeTol;

// (a_j(x) - a_j(a)) * factor(x) for a sampled coefficient a_j.
struct Deferred {
    std::size_t position;
    Series factor;
};

// A function assembled from closed-form and grid-only pieces.
struct Mixed {
    Series series;
    std::vector<Deferred> deferred;
    const GridFunction* sampled = nullptr;
};

cplx beta_of(const CauchyProblem& p, std::size_t j) { return p.alpha.value() - p.terms[j].order.value(); }

// a_j * s
Mixed times_coefficient(const CauchyProblem& p, std::size_t j, const Series& s) {
    const CoefficientFunction& c = p.terms[j].coeff;
    if (c.is_series()) return {series_mul(c.series(), s), {}, nullptr};
    Mixed m{s.scaled(c.at_base()), {}, nullptr};
    if (!s.empty()) m.deferred.push_back({j, s});
    return m;
}

// sum_j a_j I^(alpha - alpha_j) s
Mixed apply_kernel(const CauchyProblem& p, const Series& s) {
    Mixed out{Series(p.a, s.truncation()), {}, nullptr};
    if (s.empty()) return out;
    for (std::size_t j = 0; j < p.terms.size(); ++j) {
        Mixed part = times_coefficient(p, j, rl_integral_series(s, beta_of(p, j)));
        out.series += part.series;
        for (auto& d : part.deferred) out.deferred.push_back(std::move(d));
    }
    return out;
}

void negate(std::vector<Deferred>& ds) {
    for (auto& d : ds) d.factor = -d.factor;
}

Mixed phi0_mixed(const CauchyProblem& p, Truncation trunc) {
    const SolvabilityReport report = classify_initial_data(p);
    if (report.verdict == Verdict::NoSolution) {
        std::ostringstream os;
        os << "b_k must vanish for k > k0 = " << report.k0 << "; nonzero at k =";
        for (int k : report.indices) os << ' ' << k;
        throw Error(Errc::UnsolvableInitialData, os.str(), report.indices);
    }
    Mixed out{Series(p.a, trunc), {}, nullptr};
    if (p.forcing.is_series())
        out.series = p.forcing.series().with_truncation(trunc);
    else
        out.sampled = &p.forcing.sampled();

    for (std::size_t j = 0; j < p.terms.size(); ++j) {
        std::vector<PowerTerm> terms;
        for (int k = 1; k <= report.k0; ++k) {
            const cplx b = p.initial[static_cast<std::size_t>(k - 1)];
            if (b == cplx{0.0, 0.0}) continue;
            const cplx e = beta_of(p, j) - static_cast<double>(k);
            terms.push_back({b * recip_gamma(e + 1.0), e});
        }
        Mixed part = times_coefficient(p, j, Series(p.a, std::move(terms), trunc));
        out.series -= part.series;
        negate(part.deferred);
        for (auto& d : part.deferred) out.deferred.push_back(std::move(d));
    }
    return out;
}

// Phi = S + R: S collects the Re <= 0 content in closed form, R solves
// R = F - K R on the grid.
struct Decomposition {
    Mixed phi0;
    Series singular;
    Mixed forcing;
    std::size_t layers = 0;
};

Decomposition decompose(const CauchyProblem& p, Truncation trunc) {
    Decomposition d;
    d.phi0 = phi0_mixed(p, trunc);
    auto [low, high] = d.phi0.series.split_at(kSplit);
    d.singular = low;
    d.forcing = Mixed{high, d.phi0.deferred, d.phi0.sampled};
    Series layer = low;
    while (!layer.empty()) {
        Mixed k = apply_kernel(p, layer);
        auto [k_low, k_high] = k.series.split_at(kSplit);
        d.forcing.series -= k_high;
        negate(k.deferred);
        for (auto& def : k.deferred) d.forcing.deferred.push_back(std::move(def));
        layer = -k_low;
        d.singular += layer;
        ++d.layers;
    }
    return d;
}

// Grid-only pieces of m (and its series part when include_series) at `nodes`.
std::vector<cplx> grid_values(const CauchyProblem& p, const Mixed& m, std::span<const double> nodes,
                              bool include_series) {
    std::vector<cplx> out(nodes.size(), cplx{0.0, 0.0});
    if (include_series && !m.series.empty())
        for (std::size_t i = 0; i < nodes.size(); ++i) out[i] += m.series.evaluate(nodes[i]);
    for (const auto& d : m.deferred) {
        const CoefficientFunction& c = p.terms[d.position].coeff;
        const cplx c0 = c.at_base();
        for (std::size_t i = 1; i < nodes.size(); ++i) out[i] += (c(nodes[i]) - c0) * d.factor.evaluate(nodes[i]);
    }
    if (m.sampled != nullptr)
        for (std::size_t i = 0; i < nodes.size(); ++i) out[i] += m.sampled->interpolate(nodes[i]);
    return out;
}

double auto_grading(const Mixed& f) {
    double sigma = 1.0;
    if (!f.series.empty()) sigma = std::min(sigma, f.series.min_re_exponent());
    for (const auto& d : f.deferred) sigma = std::min(sigma, std::max(0.0, d.factor.min_re_exponent()));
    return suggested_grading(sigma);
}

void check_options(const SolveOptions& opts) {
    if (opts.nodes < 16) throw Error(Errc::InvalidOperand, "SolveOptions.nodes must be >= 16");
    if (!(opts.picard_tol > 0.0)) throw Error(Errc::InvalidOperand, "SolveOptions.picard_tol must be > 0");
    if (opts.grading != 0.0 && !(opts.grading >= 1.0))
        throw Error(Errc::InvalidOperand, "SolveOptions.grading must be 0 (auto) or >= 1");
}

// Everything the grid solvers share.
struct GridSystem {
    std::vector<double> nodes;
    double grading = 1.0;
    std::vector<cplx> forcing;
    std::vector<std::vector<cplx>> coeff;  // coeff[j][i] = a_j(x_i)
    std::vector<ProductWeights> weights;
    bool zero_forcing = false;
};

// the grid only ever sees I^(alpha - alpha_j)
bool kernel_orders_real(const CauchyProblem& p) {
    return std::all_of(p.terms.begin(), p.terms.end(),
                       [&](const LowerTerm& t) { return std::abs((p.alpha.value() - t.order.value()).imag()) < kPoleSnap; });
}

GridSystem grid_system(const CauchyProblem& p, const Decomposition& d, const SolveOptions& opts) {
    GridSystem g;
    g.grading = opts.grading > 0.0 ? opts.grading : auto_grading(d.forcing);
    g.nodes = graded_nodes(p.a, p.b, opts.nodes, g.grading);
    g.forcing = grid_values(p, d.forcing, g.nodes, true);
    const bool zero = std::all_of(g.forcing.begin(), g.forcing.end(), [](cplx v) { return v == cplx{0.0, 0.0}; });
    g.zero_forcing = zero;
    if (zero) return g;
    if (!kernel_orders_real(p))
        throw Error(Errc::UnsupportedOrder, "the grid solvers need real alpha - alpha_j; use the series method");
    for (std::size_t j = 0; j < p.terms.size(); ++j) {
        std::vector<cplx> values(g.nodes.size());
        values[0] = p.terms[j].coeff.at_base();
        for (std::size_t i = 1; i < g.nodes.size(); ++i) values[i] = p.terms[j].coeff(g.nodes[i]);
        g.coeff.push_back(std::move(values));
        g.weights.emplace_back(g.nodes, beta_of(p, j).real());
    }
    return g;
}

double window_l1(std::span<const double> x, const std::vector<cplx>& lhs, const std::vector<cplx>& rhs,
                 std::size_t first, std::size_t last) {
    double total = 0.0;
    for (std::size_t i = first + 1; i <= last; ++i)
        total += 0.5 * (x[i] - x[i - 1]) * (std::abs(lhs[i] - rhs[i]) + std::abs(lhs[i - 1] - rhs[i - 1]));
    return total;
}

SplitFunction assemble(const CauchyProblem& p, const Decomposition& d, const GridSystem& g, std::vector<cplx> r) {
    SplitFunction out;
    out.singular = d.singular;
    if (out.singular.empty()) out.singular = Series(p.a, d.singular.truncation());
    out.regular = GridFunction(g.nodes, std::move(r), g.grading);
    return out;
}

Truncation solve_truncation(const CauchyProblem& p, const SolveOptions& opts) {
    Truncation t = opts.truncation;
    if (!std::isfinite(t.exponent_cap)) t.exponent_cap = Truncation::for_order(p.alpha).exponent_cap;
    return t;
}

}  // namespace

SplitFunction build_phi0(const CauchyProblem& p, const SolveOptions& opts) {
    check_options(opts);
    const Mixed m = phi0_mixed(p, solve_truncation(p, opts));
    auto [low, high] = m.series.split_at(kSplit);
    Mixed grid_part{high, m.deferred, m.sampled};
    const double r = opts.grading > 0.0 ? opts.grading : auto_grading(grid_part);
    const auto nodes = graded_nodes(p.a, p.b, opts.nodes, r);
    SplitFunction out;
    out.singular = low;
    out.regular = GridFunction(nodes, grid_values(p, grid_part, nodes, true), r);
    return out;
}

// ---------------------------------------------------------------------------
// contraction

std::pair<double, double> ContractionParams::window(std::size_t i) const {
    const double lo = a + static_cast<double>(i) * delta;
    return {lo, std::min(b, lo + delta)};
}

double contraction_omega(const CauchyProblem& p, double A, double delta) {
    double sum = std::pow(delta, p.alpha.re()) * std::abs(recip_gamma(p.alpha.value() + 1.0));
    for (std::size_t j = 0; j < p.terms.size(); ++j) {
        if (p.terms[j].order.value() == cplx{0.0, 0.0}) continue;  // already counted as j = 0
        const cplx beta = beta_of(p, j);
        sum += std::pow(delta, beta.real()) * std::abs(recip_gamma(beta + 1.0));
    }
    return A * sum;
}

ContractionParams contraction_params(const CauchyProblem& p) {
    ContractionParams c;
    c.a = p.a;
    c.b = p.b;
    for (const auto& t : p.terms) c.A = std::max(c.A, t.coeff.sup_bound(p.a, p.b));
    const double length = p.b - p.a;
    if (contraction_omega(p, c.A, length) <= 0.5) {
        c.delta = length;
    } else {
        // omega is increasing in delta; bisect on log(delta)
        double lo = std::log(length) - 800.0;
        double hi = std::log(length);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (contraction_omega(p, c.A, std::exp(mid)) <= 0.5 ? lo : hi) = mid;
        }
        c.delta = std::exp(lo);
    }
    c.omega = contraction_omega(p, c.A, c.delta);
    const double count = std::ceil(length / c.delta - 1e-9);
    c.window_count = count >= 1.0 ? static_cast<std::size_t>(std::min(count, 1e18)) : 1;
    return c;
}

// ---------------------------------------------------------------------------
// solvers

SplitFunction picard_solve(const CauchyProblem& p, const SolveOptions& opts, PicardDiagnostics* diagnostics) {
    check_options(opts);
    const Decomposition d = decompose(p, solve_truncation(p, opts));
    const GridSystem g = grid_system(p, d, opts);
    const std::size_t n = g.nodes.size() - 1;
    PicardDiagnostics local;
    PicardDiagnostics& diag = diagnostics != nullptr ? *diagnostics : local;
    diag = PicardDiagnostics{};
    diag.contraction = contraction_params(p);
    diag.series_layers = d.layers;

    std::vector<cplx> r(g.nodes.size(), cplx{0.0, 0.0});
    if (g.zero_forcing) return assemble(p, d, g, std::move(r));
    r[0] = g.forcing[0];

    const double delta = diag.contraction.delta;
    const double length = p.b - p.a;
    const std::size_t terms = p.terms.size();
    std::size_t s = 0;
    while (s < n) {
        // next multiple of delta, snapped up to a mesh node
        const double steps = std::floor((g.nodes[s] - p.a) / delta * (1.0 + 1e-12)) + 1.0;
        const double target = p.a + steps * delta;
        std::size_t e = static_cast<std::size_t>(
            std::lower_bound(g.nodes.begin(), g.nodes.end(), target - 1e-14 * length) - g.nodes.begin());
        e = std::clamp<std::size_t>(e, s + 1, n);

        // history from nodes left of the window, fixed during the iteration
        std::vector<std::vector<cplx>> history(terms, std::vector<cplx>(e - s + 1));
        double bound = 0.0;
        for (std::size_t i = s + 1; i <= e; ++i) {
            double row_bound = 0.0;
            for (std::size_t j = 0; j < terms; ++j) {
                history[j][i - s] = g.weights[j].apply_range(i, r, 0, s);
                const auto w = g.weights[j].row(i);
                double inside = 0.0;
                for (std::size_t k = s + 1; k <= i; ++k) inside += std::abs(w[k]);
                row_bound += std::abs(g.coeff[j][i]) * inside;
            }
            bound = std::max(bound, row_bound);
        }
        if (bound >= 1.0) {
            std::ostringstream os;
            os << "window [" << g.nodes[s] << ", " << g.nodes[e] << "] does not contract on this mesh (bound " << bound
               << " >= 1; contraction step delta = " << delta << " is below the mesh spacing); use marching";
            throw Error(Errc::NoConvergence, os.str(), {static_cast<int>(s)});
        }

        for (std::size_t i = s + 1; i <= e; ++i) r[i] = opts.start == StartIterate::Phi0 ? g.forcing[i] : cplx{};
        const double tol = 0.25 * opts.picard_tol * (g.nodes[e] - g.nodes[s]) / length;
        WindowStats stats{s, e, 0, {}};
        double previous = 0.0;
        std::vector<cplx> next = r;
        while (true) {
            if (stats.iterations >= opts.max_iterations)
                throw Error(Errc::NoConvergence,
                            "no convergence within " + std::to_string(opts.max_iterations) + " iterations on window [" +
                                std::to_string(g.nodes[s]) + ", " + std::to_string(g.nodes[e]) + "]",
                            {static_cast<int>(s)});
            for (std::size_t i = s + 1; i <= e; ++i) {
                cplx v = g.forcing[i];
                for (std::size_t j = 0; j < terms; ++j)
                    v -= g.coeff[j][i] * (history[j][i - s] + g.weights[j].apply_range(i, r, s, i + 1));
                next[i] = v;
            }
            const double inc = window_l1(g.nodes, next, r, s, e);
            for (std::size_t i = s + 1; i <= e; ++i) r[i] = next[i];
            if (stats.iterations > 0 && previous > 0.0) stats.ratios.push_back(inc / previous);
            previous = inc;
            ++stats.iterations;
            if (!std::isfinite(inc))
                throw Error(Errc::NoConvergence, "iteration diverged", {static_cast<int>(s)});
            if (inc < tol) break;
        }
        diag.windows.push_back(std::move(stats));
        s = e;
    }
    return assemble(p, d, g, std::move(r));
}

SplitFunction marching_solve(const CauchyProblem& p, const SolveOptions& opts) {
    check_options(opts);
    const Decomposition d = decompose(p, solve_truncation(p, opts));
    const GridSystem g = grid_system(p, d, opts);
    std::vector<cplx> r(g.nodes.size(), cplx{0.0, 0.0});
    if (g.zero_forcing) return assemble(p, d, g, std::move(r));
    r[0] = g.forcing[0];
    for (std::size_t i = 1; i < g.nodes.size(); ++i) {
        cplx diag = 1.0;
        cplx rhs = g.forcing[i];
        for (std::size_t j = 0; j < p.terms.size(); ++j) {
            diag += g.coeff[j][i] * g.weights[j].row(i)[i];
            rhs -= g.coeff[j][i] * g.weights[j].apply_range(i, r, 0, i);
        }
        if (std::abs(diag) < 1e-12)
            throw Error(Errc::SingularStep, "vanishing diagonal at node " + std::to_string(i), {static_cast<int>(i)});
        r[i] = rhs / diag;
    }
    return assemble(p, d, g, std::move(r));
}

SplitFunction solve(const CauchyProblem& p, const SolveOptions& opts) {
    return opts.method == SolveMethod::Marching ? marching_solve(p, opts) : picard_solve(p, opts);
}

// ---------------------------------------------------------------------------
// reconstruction and checks

SplitFunction reconstruct_y(const CauchyProblem& p, const SplitFunction& phi) {
    const int k0 = compute_k0(p);
    std::vector<PowerTerm> lead;
    for (int k = 1; k <= p.n(); ++k) {
        const cplx b = p.initial[static_cast<std::size_t>(k - 1)] * static_cast<double>(step_H(k0 - k));
        const cplx e = p.alpha.value() - static_cast<double>(k);
        if (b != cplx{0.0, 0.0}) lead.push_back({b * recip_gamma(e + 1.0), e});
    }
    const Truncation trunc = phi.singular.truncation();
    SplitFunction y;
    y.singular = Series(p.a, std::move(lead), trunc);
    if (!phi.singular.empty()) y.singular += rl_integral_series(phi.singular.with_base_point(p.a), p.alpha);
    if (phi.has_grid()) {
        if (phi.regular.is_zero())
            y.regular = phi.regular;
        else
            y.regular = rl_integral_grid(phi.regular, p.alpha);
    }
    return y;
}

double residual(const CauchyProblem& p, const SplitFunction& phi, std::size_t fallback_nodes) {
    const Truncation trunc = Truncation::unbounded();
    const Mixed phi0 = phi0_mixed(p, trunc);
    const Series s = phi.singular.empty() ? Series(p.a, trunc) : phi.singular.with_truncation(trunc);
    Mixed ks = apply_kernel(p, s);

    // closed-form part of the residual
    Series q = s - phi0.series + ks.series;
    auto [q_low, q_high] = q.split_at(kSplit);
    if (!q_low.all_integrable()) return std::numeric_limits<double>::infinity();
    double total = q_low.l1_bound(p.b - p.a);

    const std::size_t coarse = phi.has_grid() ? phi.regular.intervals() : fallback_nodes;
    const double r = phi.has_grid() ? phi.regular.grading() : 1.0;
    const auto nodes = graded_nodes(p.a, p.b, 2 * coarse, r);

    std::vector<cplx> res(nodes.size(), cplx{0.0, 0.0});
    if (phi.has_grid() && !phi.regular.is_zero()) {
        const std::vector<cplx> rf = phi.regular.sample_at(nodes);
        if (!kernel_orders_real(p)) throw Error(Errc::UnsupportedOrder, "grid residual needs real alpha - alpha_j");
        for (std::size_t i = 0; i < nodes.size(); ++i) res[i] += rf[i];
        for (std::size_t j = 0; j < p.terms.size(); ++j) {
            const ProductWeights w(nodes, beta_of(p, j).real());
            const auto integral = w.apply_all(rf);
            for (std::size_t i = 1; i < nodes.size(); ++i) res[i] += p.terms[j].coeff(nodes[i]) * integral[i];
        }
    }
    Mixed plus{q_high, std::move(ks.deferred), nullptr};
    const auto pv = grid_values(p, plus, nodes, true);
    Mixed minus{Series(p.a, trunc), phi0.deferred, phi0.sampled};
    const auto mv = grid_values(p, minus, nodes, false);
    for (std::size_t i = 0; i < nodes.size(); ++i) res[i] += pv[i] - mv[i];

    for (std::size_t i = 1; i < nodes.size(); ++i)
        total += 0.5 * (nodes[i] - nodes[i - 1]) * (std::abs(res[i]) + std::abs(res[i - 1]));
    return total;
}

std::vector<std::pair<int, cplx>> check_initial_conditions(const CauchyProblem& p, const SplitFunction& y) {
    std::vector<std::pair<int, cplx>> out;
    const Series s = y.singular.empty() ? Series(p.a) : y.singular;
    for (int k = 1; k <= p.n(); ++k) {
        const auto limit = derivative_limit_at_base(s, p.alpha.value() - static_cast<double>(k));
        if (!limit)
            throw Error(Errc::ConditionViolated,
                        "(D^(alpha-" + std::to_string(k) + ") y)(a+) does not exist: a surviving term blows up", {k});
        out.emplace_back(k, *limit);
    }
    return out;
}

}  // namespace fractus
