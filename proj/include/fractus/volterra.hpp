#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fractus/model.hpp"
#include "fractus/series.hpp"

namespace fractus {

/// singular(x) + regular(x). The series part holds everything carried in
/// closed form; the grid part is bounded. An empty grid means zero.
struct SplitFunction {
    Series singular;
    GridFunction regular;

    [[nodiscard]] bool has_grid() const noexcept { return regular.size() > 0; }
    [[nodiscard]] cplx operator()(double x) const;
};

enum class SolveMethod { Picard, Marching };
enum class StartIterate { Phi0, Zero };

struct SolveOptions {
    std::size_t nodes = 512;
    /// Mesh exponent r; 0 picks max(1, 2 / (1 + sigma)) from the least
    /// regular power left on the grid.
    double grading = 0.0;
    /// Stop when the L1 increment of an iteration falls below this.
    double picard_tol = 1e-10;
    std::size_t max_iterations = 500;
    SolveMethod method = SolveMethod::Picard;
    StartIterate start = StartIterate::Phi0;
    Truncation truncation;
};

/// Phi_0 = g - sum_j sum_k b_k H(k0 - k) a_j (x-a)^(alpha-alpha_j-k) / Gamma(alpha-alpha_j-k+1),
/// with terms of Re exponent <= 0 in the series part. Throws
/// UnsolvableInitialData (indices = offending k) unless b_k = 0 for k > k0.
[[nodiscard]] SplitFunction build_phi0(const CauchyProblem& p, const SolveOptions& opts = {});

struct ContractionParams {
    double A = 0.0;
    double delta = 0.0;
    double omega = 0.0;
    std::size_t window_count = 1;
    double a = 0.0;
    double b = 0.0;

    /// [a + i delta, min(a + (i+1) delta, b)]
    [[nodiscard]] std::pair<double, double> window(std::size_t i) const;
};

/// omega(delta) = A sum_{j=0..l} delta^Re(alpha-alpha_j) / |Gamma(alpha-alpha_j+1)|.
/// The j = 0 summand (alpha_0 = 0) is always included.
[[nodiscard]] double contraction_omega(const CauchyProblem& p, double A, double delta);

/// A = max_j sup|a_j|; delta is the largest step (up to b - a) with omega <= 0.5.
[[nodiscard]] ContractionParams contraction_params(const CauchyProblem& p);

struct WindowStats {
    std::size_t first_node = 0;
    std::size_t last_node = 0;
    std::size_t iterations = 0;
    /// ||Phi_{m+1} - Phi_m|| / ||Phi_m - Phi_{m-1}|| for m >= 1
    std::vector<double> ratios;
};

struct PicardDiagnostics {
    ContractionParams contraction;
    std::vector<WindowStats> windows;
    /// Layers of the closed-form recursion for the series part.
    std::size_t series_layers = 0;
};

/// Fixed point of Phi = Phi_0 - sum_j a_j I^(alpha-alpha_j) Phi by successive
/// approximation, window by window. Throws NoConvergence when a window does
/// not contract on the chosen mesh or max_iterations is hit.
[[nodiscard]] SplitFunction picard_solve(const CauchyProblem& p, const SolveOptions& opts = {},
                                         PicardDiagnostics* diagnostics = nullptr);

/// Direct product-integration solve, one scalar equation per node. Throws
/// SingularStep (indices = {node}) if 1 + sum_j a_j(x_i) w_ii vanishes.
[[nodiscard]] SplitFunction marching_solve(const CauchyProblem& p, const SolveOptions& opts = {});

/// Dispatches on opts.method.
[[nodiscard]] SplitFunction solve(const CauchyProblem& p, const SolveOptions& opts = {});

/// y = sum_k b_k H(k0 - k) (x-a)^(alpha-k) / Gamma(alpha-k+1) + I^alpha Phi.
[[nodiscard]] SplitFunction reconstruct_y(const CauchyProblem& p, const SplitFunction& phi);

/// L1 norm of Phi - Phi_0 + sum_j a_j I^(alpha-alpha_j) Phi on a mesh with
/// twice the intervals of phi's grid (or `fallback_nodes` when phi has none).
/// Series terms of Re exponent <= 0 enter through their exact L1 bound.
[[nodiscard]] double residual(const CauchyProblem& p, const SplitFunction& phi, std::size_t fallback_nodes = 512);

/// (k, lim_{x->a+} D^(alpha-k) y) for k = 1..n, from the series part.
/// Throws ConditionViolated (indices = {k}) when the limit does not exist.
[[nodiscard]] std::vector<std::pair<int, cplx>> check_initial_conditions(const CauchyProblem& p,
                                                                         const SplitFunction& y);

}  // namespace fractus
