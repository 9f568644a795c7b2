#pragma once

#include <string>
#include <vector>

#include "fractus/model.hpp"

namespace fractus {

/// H(k): 1 for k >= 0, else 0.
[[nodiscard]] constexpr int step_H(int k) noexcept { return k >= 0 ? 1 : 0; }

enum class Integrability { Integrable, ZeroByGammaPole, NonIntegrable };

[[nodiscard]] const char* to_string(Integrability c) noexcept;

/// Class of a_j(x) (x-a)^(alpha-alpha_j-k) / Gamma(alpha-alpha_j-k+1) for the
/// term at `position` (0-based, in validated order) and k in 1..n.
[[nodiscard]] Integrability term_integrability(const CauchyProblem& p, std::size_t position, int k);

/// Largest k such that columns 1..k hold no NonIntegrable cell.
[[nodiscard]] int compute_k0(const CauchyProblem& p);

enum class Verdict { SolvableAsGiven, SolvableIfTailZeroed, NoSolution };

struct SolvabilityReport {
    int n = 0;
    int k0 = 0;
    /// cells[position][k - 1]
    std::vector<std::vector<Integrability>> cells;
    /// alpha - alpha_j - k + 1, same layout as cells
    std::vector<std::vector<cplx>> gamma_arguments;
    Verdict verdict = Verdict::SolvableAsGiven;
    /// Offending k (NoSolution) or the zeroed k (SolvableIfTailZeroed).
    std::vector<int> indices;
    /// Declared, unverified inputs the verdict depends on.
    std::vector<std::string> assumptions;
};

/// With project = true a nonzero tail b_k, k > k0, gives SolvableIfTailZeroed
/// instead of NoSolution.
[[nodiscard]] SolvabilityReport classify_initial_data(const CauchyProblem& p, bool project = false);

/// The same problem with b_k replaced by b_k H(k0 - k).
[[nodiscard]] CauchyProblem project_initial_data(const CauchyProblem& p, int k0);

/// Text table: one row per k, one column per a_j (highest order first),
/// entries alpha - alpha_j - k + 1, last column the L(a, b) membership.
[[nodiscard]] std::string render_report(const CauchyProblem& p, const SolvabilityReport& report);

}  // namespace fractus
