#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <utility>

namespace fractus {

using cplx = std::complex<double>;

/// Distance below which an argument is snapped onto a pole of Γ.
inline constexpr double kPoleSnap = 1e-12;

/// True when z lies within kPoleSnap of 0, -1, -2, ...
[[nodiscard]] bool is_gamma_pole(cplx z) noexcept;

/// A logarithm of Γ(z) for Re z >= 0.5. The imaginary part may differ from
/// the principal lgamma branch by a multiple of 2π; exp() of it is exact.
[[nodiscard]] cplx log_gamma(cplx z);

/// Γ(z) via Lanczos (g = 7, 9 terms) with reflection for Re z < 0.5;
/// a shifted Stirling series replaces Lanczos when |Im z| > 5.
/// Throws Error{GammaPole} near non-positive integers.
[[nodiscard]] cplx gamma(cplx z);

/// 1/Γ(z); total, and exactly zero at snapped poles.
[[nodiscard]] cplx recip_gamma(cplx z) noexcept;

/// Γ(num) / Γ(den) without forming either factor when both are large.
/// Zero when den is a pole; throws GammaPole when num is.
[[nodiscard]] cplx gamma_ratio(cplx num, cplx den);

/// Memoizing front end for repeated evaluations of the same arguments.
/// Thread-safe; values are bitwise identical to the free functions.
class GammaEval {
public:
    [[nodiscard]] cplx gamma(cplx z);
    [[nodiscard]] cplx recip(cplx z);
    [[nodiscard]] std::size_t cache_size() const;

private:
    using Key = std::pair<double, double>;
    mutable std::mutex mutex_;
    std::map<Key, cplx> gamma_cache_;
    std::map<Key, cplx> recip_cache_;
};

}  // namespace fractus
