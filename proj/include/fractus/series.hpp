#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace fractus {

using cplx = std::complex<double>;

/// Exponents closer than this (in both components) are merged.
inline constexpr double kExponentMergeTol = 1e-12;

/// A merged coefficient smaller than this fraction of the magnitudes that
/// produced it is an exact cancellation and is removed.
inline constexpr double kCancellationRel = 1e-12;

/// c * (x - a)^mu
struct PowerTerm {
    cplx coeff;
    cplx exponent;

    /// (x - a)^mu is in L(a, b) iff Re mu > -1.
    [[nodiscard]] bool integrable() const noexcept { return exponent.real() > -1.0; }
};

struct Truncation {
    std::size_t max_terms = 512;
    double exponent_cap = std::numeric_limits<double>::infinity();
    double drop_tol = 1e-300;
    /// Relative size below which a new layer of a series recursion counts as
    /// negligible. Zero disables the test (cap-driven truncation only).
    double layer_tol = 1e-17;

    /// max_terms = 512, exponent_cap = 40 * Re(alpha).
    [[nodiscard]] static Truncation for_order(cplx alpha);
    [[nodiscard]] static Truncation unbounded();
};

struct SeriesEval {
    cplx value;
    double tail_estimate = 0.0;
    bool tail_warning = false;
};

/// Finite sum of c * (x - a)^mu with complex c and mu, kept sorted by
/// (Re mu, Im mu) with unique exponents and no zero coefficients.
class Series {
public:
    Series() = default;
    explicit Series(double base_point, Truncation truncation = {});
    Series(double base_point, std::vector<PowerTerm> terms, Truncation truncation = {});

    [[nodiscard]] static Series constant(double base_point, cplx value, Truncation truncation = {});
    [[nodiscard]] static Series monomial(double base_point, cplx coeff, cplx exponent,
                                         Truncation truncation = {});

    [[nodiscard]] double base_point() const noexcept { return base_; }
    [[nodiscard]] const std::vector<PowerTerm>& terms() const noexcept { return terms_; }
    [[nodiscard]] const Truncation& truncation() const noexcept { return truncation_; }
    [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
    /// True when normalization ever discarded a term (cap or drop tolerance).
    [[nodiscard]] bool truncated() const noexcept { return truncated_; }
    void mark_truncated() noexcept { truncated_ = true; }

    /// +inf for the empty series.
    [[nodiscard]] double min_re_exponent() const noexcept;
    [[nodiscard]] bool all_integrable() const noexcept;
    /// Coefficient of the term whose exponent matches `exponent`, or 0.
    [[nodiscard]] cplx coefficient_of(cplx exponent) const noexcept;

    /// Value at x >= a; compensated sum in order of decreasing |term|.
    [[nodiscard]] cplx evaluate(double x) const;
    [[nodiscard]] SeriesEval evaluate_checked(double x) const;

    /// sum |c| * length^(Re mu): a sup bound on [a, a + length] when all
    /// Re mu >= 0.
    [[nodiscard]] double magnitude(double length) const noexcept;
    /// sum |c| * length^(Re mu + 1) / (Re mu + 1): bounds the L1 norm on
    /// [a, a + length] for integrable terms.
    [[nodiscard]] double l1_bound(double length) const noexcept;

    /// (terms with Re mu <= threshold, terms with Re mu > threshold)
    [[nodiscard]] std::pair<Series, Series> split_at(double threshold) const;

    [[nodiscard]] Series scaled(cplx factor) const;
    [[nodiscard]] Series with_truncation(Truncation truncation) const;
    [[nodiscard]] Series with_base_point(double base_point) const;

    Series& operator+=(const Series& other);
    Series& operator-=(const Series& other);
    [[nodiscard]] Series operator-() const { return scaled(-1.0); }

private:
    void normalize();

    double base_ = 0.0;
    std::vector<PowerTerm> terms_;
    Truncation truncation_;
    bool truncated_ = false;
};

/// Exponent-merged sum. Throws InvalidOperand on base-point mismatch.
[[nodiscard]] Series series_add(const Series& lhs, const Series& rhs);
[[nodiscard]] Series series_sub(const Series& lhs, const Series& rhs);
/// Cauchy product, truncated per `s.truncation()`.
[[nodiscard]] Series series_mul(const Series& coeff, const Series& s);

[[nodiscard]] inline Series operator+(const Series& lhs, const Series& rhs) { return series_add(lhs, rhs); }
[[nodiscard]] inline Series operator-(const Series& lhs, const Series& rhs) { return series_sub(lhs, rhs); }
[[nodiscard]] inline Series operator*(const Series& lhs, const Series& rhs) { return series_mul(lhs, rhs); }

[[nodiscard]] bool same_exponent(cplx lhs, cplx rhs) noexcept;

}  // namespace fractus
