#pragma once

#include <variant>
#include <vector>

#include "fractus/model.hpp"
#include "fractus/series.hpp"
#include "fractus/volterra.hpp"

namespace fractus {

/// y_1 .. y_k0 with (D^(alpha-k) y_i)(a+) = delta_ik.
struct FundamentalSystem {
    double base_point = 0.0;
    cplx alpha;
    int n = 0;
    int k0 = 0;
    std::vector<Series> entries;
    /// sum |c| (b-a)^Re mu over what the truncated entry leaves when
    /// substituted into the homogeneous equation
    std::vector<double> tail_bounds;
    Truncation truncation;
    /// Recursion depth used per entry.
    std::vector<std::size_t> layers;
};

/// G(x; xi) as a series in (x - xi). When translation_invariant the same
/// series serves every xi; otherwise it belongs to `xi` only.
struct ShiftedGreen {
    double xi = 0.0;
    Series kernel;  // base point xi
    bool translation_invariant = false;
};

/// G(x_i; xi_m) = (x_i - xi_m)^(alpha-1) smooth[i][m] / Gamma(alpha) for m <= i.
struct SampledGreen {
    std::vector<double> nodes;
    double grading = 1.0;
    cplx alpha;
    std::vector<std::vector<cplx>> smooth;
};

class GreenFunction {
public:
    GreenFunction(ShiftedGreen g) : data_(std::move(g)) {}  // NOLINT(google-explicit-constructor)
    GreenFunction(SampledGreen g) : data_(std::move(g)) {}  // NOLINT(google-explicit-constructor)

    [[nodiscard]] bool is_shifted() const noexcept { return std::holds_alternative<ShiftedGreen>(data_); }
    [[nodiscard]] const ShiftedGreen& shifted() const;
    [[nodiscard]] const SampledGreen& sampled() const;

    /// G(x; xi) for x > xi. Sampled functions need xi and x on the mesh.
    [[nodiscard]] cplx operator()(double x, double xi) const;

private:
    std::variant<ShiftedGreen, SampledGreen> data_;
};

/// Canonical fundamental system by the closed-form Neumann recursion.
/// Sampled coefficients throw UnsupportedCoefficients.
[[nodiscard]] FundamentalSystem canonical_system(const CauchyProblem& p, Truncation truncation);
[[nodiscard]] FundamentalSystem canonical_system(const CauchyProblem& p);

/// lim_{x->a+} (D^(alpha-k) y_i)(x); ConditionViolated if it does not exist.
[[nodiscard]] cplx check_canonical(const FundamentalSystem& sys, int i, int k);

/// sum_i b_i y_i. UnsolvableInitialData when b_k != 0 for some k > k0.
[[nodiscard]] Series homogeneous_solution(const FundamentalSystem& sys, const std::vector<cplx>& b);

/// y = sum_k (-1)^k I^alpha (sum_j a_j I^(alpha-alpha_j))^k g: zero initial data.
[[nodiscard]] Series inhomogeneous_series(const CauchyProblem& p, const Series& g, Truncation truncation);

/// D^alpha y + sum_j a_j D^alpha_j y in exact series arithmetic.
[[nodiscard]] Series apply_operator(const CauchyProblem& p, const Series& y);

/// sum |c| (b-a)^Re mu over apply_operator(p, y).
[[nodiscard]] double homogeneous_tail(const CauchyProblem& p, const Series& y);

/// The problem with base point xi, coefficients re-expanded about xi, zero
/// forcing and initial data e_1.
[[nodiscard]] CauchyProblem rebased_problem(const CauchyProblem& p, double xi, Truncation truncation);

/// First canonical solution of the problem re-based at xi, coefficients
/// re-expanded about xi.
[[nodiscard]] GreenFunction green_series(const CauchyProblem& p, double xi, Truncation truncation);

/// green_series at every node xi_m of a graded mesh, stored as samples.
[[nodiscard]] GreenFunction sampled_green(const CauchyProblem& p, std::size_t intervals, double grading,
                                          Truncation truncation);

/// Constant coefficients: y_i from the multinomial expansion, enumerated by
/// total degree. Independent of canonical_system.
[[nodiscard]] Series constant_fundamental(const CauchyProblem& p, int i, Truncation truncation);

/// Constant coefficients: G(x; xi) = sum_k (-1)^k sum_{|beta|=k} k!/prod beta_j! prod a_j^beta_j
/// (x-xi)^(s-1) / Gamma(s),  s = sum_j beta_j (alpha - alpha_j) + alpha.
[[nodiscard]] GreenFunction constant_green(const CauchyProblem& p, Truncation truncation);

/// sum_i b_i y_i + int_a^x G(x; xi) g(xi) dxi. Series forcing goes through
/// inhomogeneous_series; sampled forcing through product quadrature on its mesh.
[[nodiscard]] SplitFunction superpose(const CauchyProblem& p, const FundamentalSystem& sys, const GreenFunction& G,
                                      const Forcing& g);

}  // namespace fractus
