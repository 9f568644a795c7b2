#include <doctest.h>

#include <cmath>
#include <random>

#include "fractus/error.hpp"
#include "fractus/gamma.hpp"
#include "oracle_values.hpp"

using fractus::cplx;

namespace {

double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("gamma matches high-precision reference values") {
    for (const auto& p : fractus::oracle::kGammaPoints) {
        CAPTURE(p.z);
        CHECK(rel_err(fractus::gamma(p.z), p.value) < 1e-13);
        CHECK(rel_err(fractus::recip_gamma(p.z), 1.0 / p.value) < 1e-13);
    }
}

TEST_CASE("gamma at positive integers is a factorial") {
    double fact = 1.0;
    for (int k = 1; k < 20; ++k) {
        CHECK(rel_err(fractus::gamma(cplx(k, 0.0)), fact) < 1e-14);
        fact *= k;
    }
}

TEST_CASE("poles: gamma throws and recip_gamma is exactly zero") {
    for (int k = 0; k > -12; --k) {
        const cplx z(k, 0.0);
        CHECK(fractus::is_gamma_pole(z));
        CHECK(fractus::recip_gamma(z) == cplx(0.0, 0.0));
        CHECK_THROWS_AS((void)fractus::gamma(z), fractus::Error);
        CHECK(fractus::recip_gamma(z + cplx(5e-13, 0.0)) == cplx(0.0, 0.0));
    }
    CHECK_FALSE(fractus::is_gamma_pole({-1.0, 1e-3}));
    CHECK_FALSE(fractus::is_gamma_pole({1.0, 0.0}));
    CHECK(fractus::recip_gamma({-2.0 + 1e-9, 0.0}) != cplx(0.0, 0.0));
}

TEST_CASE("recurrence and reflection hold on random arguments") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(-6.0, 8.0);
    std::uniform_real_distribution<double> im(-4.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
        const cplx z(re(rng), im(rng));
        if (fractus::is_gamma_pole(z) || fractus::is_gamma_pole(z + 1.0) || fractus::is_gamma_pole(1.0 - z)) continue;
        CAPTURE(z);
        CHECK(rel_err(fractus::gamma(z + 1.0), z * fractus::gamma(z)) < 1e-12);
        const cplx reflect = fractus::gamma(z) * fractus::gamma(1.0 - z) * std::sin(M_PI * z);
        CHECK(rel_err(reflect, M_PI) < 1e-11);
    }
}

TEST_CASE("gamma_ratio avoids overflow and handles poles") {
    const cplx r = fractus::gamma_ratio({200.5, 0.0}, {200.0, 0.0});
    CHECK(std::abs(r.real() - std::sqrt(200.0) * (1.0 - 1.0 / 1600.0)) < 1e-3);
    CHECK(fractus::gamma_ratio({1.5, 0.0}, {-1.0, 0.0}) == cplx(0.0, 0.0));
    CHECK_THROWS_AS((void)fractus::gamma_ratio({-1.0, 0.0}, {1.5, 0.0}), fractus::Error);
    CHECK(rel_err(fractus::gamma_ratio({1.5, 0.0}, {0.5, 0.0}), 0.5) < 1e-14);
    CHECK(rel_err(fractus::gamma_ratio({-0.5, 0.0}, {2.0, 0.0}), fractus::gamma({-0.5, 0.0})) < 1e-14);
}

TEST_CASE("GammaEval caches without changing values") {
    fractus::GammaEval eval;
    const cplx z(3.3, -0.7);
    CHECK(eval.gamma(z) == fractus::gamma(z));
    CHECK(eval.recip(z) == fractus::recip_gamma(z));
    CHECK(eval.recip({-3.0, 0.0}) == cplx(0.0, 0.0));
    CHECK(eval.gamma(z) == fractus::gamma(z));
    CHECK(eval.cache_size() == 3);
}
