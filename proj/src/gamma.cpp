#include "fractus/gamma.hpp"

#include <array>
#include <cmath>

#include "fractus/error.hpp"

namespace fractus {
namespace {

// The sums run in long double: for large |Im z| the phase of Gamma is a
// large angle and loses digits in double arithmetic.
using lcplx = std::complex<long double>;

constexpr long double kLanczosG = 7.0L;
constexpr std::array<long double, 9> kLanczos{
    0.99999999999980993L,     676.5203681218851L,     -1259.1392167224028L,
    771.32342877765313L,      -176.61502916214059L,   12.507343278686905L,
    -0.13857109526572012L,    9.9843695780195716e-6L, 1.5056327351493116e-7L,
};
constexpr long double kPi = 3.141592653589793238462643383279502884L;

lcplx widen(cplx z) { return {z.real(), z.imag()}; }
cplx narrow(lcplx z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

lcplx log_gamma_lanczos(lcplx z) {
    const lcplx w = z - 1.0L;
    lcplx sum = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (w + static_cast<long double>(i));
    const lcplx t = w + kLanczosG + 0.5L;
    return 0.5L * std::log(2.0L * kPi) + (w + 0.5L) * std::log(t) - t + std::log(sum);
}

// B_2k / (2k (2k - 1)), k = 1..10
constexpr std::array<long double, 10> kStirling{
    1.0L / 12.0L,         -1.0L / 360.0L,        1.0L / 1260.0L,    -1.0L / 1680.0L,
    1.0L / 1188.0L,       -691.0L / 360360.0L,   1.0L / 156.0L,     -3617.0L / 122400.0L,
    43867.0L / 244188.0L, -174611.0L / 125400.0L,
};

// Stirling series after shifting z to |z| >= 20, where ten terms reach
// long double precision.
lcplx log_gamma_stirling(lcplx z) {
    lcplx shift_log = 0.0L;
    while (std::abs(z) < 20.0L) {
        shift_log += std::log(z);
        z += 1.0L;
    }
    const lcplx inv = 1.0L / z;
    const lcplx inv2 = inv * inv;
    lcplx corr = 0.0L;
    lcplx power = inv;
    for (long double c : kStirling) {
        corr += c * power;
        power *= inv2;
    }
    return (z - 0.5L) * std::log(z) - z + 0.5L * std::log(2.0L * kPi) + corr - shift_log;
}

// Lanczos (g = 7, 9 terms) near the real axis; its relative error grows with
// |Im z|, so far from the axis the Stirling form takes over. Requires Re z >= 0.5.
lcplx log_gamma_wide(lcplx z) {
    if (std::abs(z.imag()) > 5.0L) return log_gamma_stirling(z);
    return log_gamma_lanczos(z);
}

// sin(pi z) with the integer part of Re z removed first, so that arguments
// next to a pole keep their relative accuracy.
lcplx sin_pi(lcplx z) {
    const long double shift = std::round(z.real());
    const lcplx reduced{z.real() - shift, z.imag()};
    const lcplx s = std::sin(kPi * reduced);
    return (static_cast<long long>(shift) % 2 == 0) ? s : -s;
}

lcplx gamma_wide(lcplx z) {
    if (z.real() < 0.5L) return kPi / (sin_pi(z) * std::exp(log_gamma_wide(1.0L - z)));
    return std::exp(log_gamma_wide(z));
}

lcplx recip_gamma_wide(lcplx z) {
    if (z.real() < 0.5L) return sin_pi(z) * std::exp(log_gamma_wide(1.0L - z)) / kPi;
    return std::exp(-log_gamma_wide(z));
}

}  // namespace

bool is_gamma_pole(cplx z) noexcept {
    if (std::abs(z.imag()) >= kPoleSnap) return false;
    const double nearest = std::round(z.real());
    return nearest <= 0.0 && std::abs(z.real() - nearest) < kPoleSnap;
}

cplx log_gamma(cplx z) { return narrow(log_gamma_wide(widen(z))); }

cplx gamma(cplx z) {
    if (is_gamma_pole(z)) throw Error(Errc::GammaPole, "Gamma evaluated at a non-positive integer");
    return narrow(gamma_wide(widen(z)));
}

cplx recip_gamma(cplx z) noexcept {
    if (is_gamma_pole(z)) return {0.0, 0.0};
    return narrow(recip_gamma_wide(widen(z)));
}

cplx gamma_ratio(cplx num, cplx den) {
    if (is_gamma_pole(den)) return {0.0, 0.0};
    if (is_gamma_pole(num)) throw Error(Errc::GammaPole, "Gamma ratio with a pole in the numerator");
    const lcplx n = widen(num);
    const lcplx d = widen(den);
    if (n.real() >= 0.5L && d.real() >= 0.5L) return narrow(std::exp(log_gamma_wide(n) - log_gamma_wide(d)));
    return narrow(gamma_wide(n) * recip_gamma_wide(d));
}

cplx GammaEval::gamma(cplx z) {
    const Key key{z.real(), z.imag()};
    {
        std::lock_guard lock(mutex_);
        if (auto it = gamma_cache_.find(key); it != gamma_cache_.end()) return it->second;
    }
    const cplx value = fractus::gamma(z);
    std::lock_guard lock(mutex_);
    gamma_cache_.emplace(key, value);
    return value;
}

cplx GammaEval::recip(cplx z) {
    const Key key{z.real(), z.imag()};
    {
        std::lock_guard lock(mutex_);
        if (auto it = recip_cache_.find(key); it != recip_cache_.end()) return it->second;
    }
    const cplx value = recip_gamma(z);
    std::lock_guard lock(mutex_);
    recip_cache_.emplace(key, value);
    return value;
}

std::size_t GammaEval::cache_size() const {
    std::lock_guard lock(mutex_);
    return gamma_cache_.size() + recip_cache_.size();
}

}  // namespace fractus
