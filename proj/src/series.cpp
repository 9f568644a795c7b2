#include "fractus/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fractus/error.hpp"

namespace fractus {
namespace {

bool exponent_less(const PowerTerm& lhs, const PowerTerm& rhs) {
    if (lhs.exponent.real() != rhs.exponent.real()) return lhs.exponent.real() < rhs.exponent.real();
    return lhs.exponent.imag() < rhs.exponent.imag();
}

// Neumaier summation of one component.
struct Compensated {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + carry; }
};

void require_same_base(const Series& lhs, const Series& rhs) {
    if (lhs.base_point() != rhs.base_point())
        throw Error(Errc::InvalidOperand, "series base points differ (" + std::to_string(lhs.base_point()) +
                                              " vs " + std::to_string(rhs.base_point()) + ")");
}

}  // namespace

bool same_exponent(cplx lhs, cplx rhs) noexcept {
    return std::abs(lhs.real() - rhs.real()) <= kExponentMergeTol &&
           std::abs(lhs.imag() - rhs.imag()) <= kExponentMergeTol;
}

Truncation Truncation::for_order(cplx alpha) {
    Truncation t;
    t.exponent_cap = 40.0 * alpha.real();
    return t;
}

Truncation Truncation::unbounded() {
    Truncation t;
    t.max_terms = std::numeric_limits<std::size_t>::max();
    t.drop_tol = 0.0;
    return t;
}

Series::Series(double base_point, Truncation truncation) : base_(base_point), truncation_(truncation) {}

Series::Series(double base_point, std::vector<PowerTerm> terms, Truncation truncation)
    : base_(base_point), terms_(std::move(terms)), truncation_(truncation) {
    normalize();
}

Series Series::constant(double base_point, cplx value, Truncation truncation) {
    return Series(base_point, {PowerTerm{value, {0.0, 0.0}}}, truncation);
}

Series Series::monomial(double base_point, cplx coeff, cplx exponent, Truncation truncation) {
    return Series(base_point, {PowerTerm{coeff, exponent}}, truncation);
}

void Series::normalize() {
    std::stable_sort(terms_.begin(), terms_.end(), exponent_less);

    std::vector<PowerTerm> merged;
    merged.reserve(terms_.size());
    std::size_t i = 0;
    while (i < terms_.size()) {
        PowerTerm acc = terms_[i];
        double scale = std::abs(acc.coeff);
        std::size_t j = i + 1;
        for (; j < terms_.size() && same_exponent(terms_[j].exponent, acc.exponent); ++j) {
            acc.coeff += terms_[j].coeff;
            scale += std::abs(terms_[j].coeff);
        }
        const bool cancelled = (j - i > 1) && std::abs(acc.coeff) <= kCancellationRel * scale;
        i = j;
        if (acc.coeff == cplx{0.0, 0.0} || cancelled) continue;
        if (truncation_.drop_tol > 0.0 && std::abs(acc.coeff) < truncation_.drop_tol) {
            truncated_ = true;
            continue;
        }
        if (acc.exponent.real() > truncation_.exponent_cap) {
            truncated_ = true;
            continue;
        }
        merged.push_back(acc);
    }
    terms_ = std::move(merged);

    if (terms_.size() > truncation_.max_terms)
        throw Error(Errc::TruncationOverflow, std::to_string(terms_.size()) + " terms exceed max_terms = " +
                                                  std::to_string(truncation_.max_terms));
}

double Series::min_re_exponent() const noexcept {
    return terms_.empty() ? std::numeric_limits<double>::infinity() : terms_.front().exponent.real();
}

bool Series::all_integrable() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(), [](const PowerTerm& t) { return t.integrable(); });
}

cplx Series::coefficient_of(cplx exponent) const noexcept {
    for (const auto& t : terms_)
        if (same_exponent(t.exponent, exponent)) return t.coeff;
    return {0.0, 0.0};
}

cplx Series::evaluate(double x) const { return evaluate_checked(x).value; }

SeriesEval Series::evaluate_checked(double x) const {
    const double t = x - base_;
    if (t < 0.0) throw Error(Errc::InvalidOperand, "series evaluated left of its base point");

    SeriesEval out;
    if (t == 0.0) {
        // only the limit x -> a+ is meaningful here
        for (const auto& term : terms_) {
            if (term.exponent == cplx{0.0, 0.0}) {
                out.value += term.coeff;
            } else if (term.exponent.real() <= 0.0) {
                out.value = {std::numeric_limits<double>::infinity(), 0.0};
                return out;
            }
        }
        return out;
    }

    std::vector<cplx> values;
    values.reserve(terms_.size());
    for (const auto& term : terms_) values.push_back(term.coeff * std::exp(term.exponent * std::log(t)));

    if (truncated_ && !values.empty()) {
        const std::size_t tail = std::min<std::size_t>(3, values.size());
        for (std::size_t i = values.size() - tail; i < values.size(); ++i)
            out.tail_estimate = std::max(out.tail_estimate, std::abs(values[i]));
    }

    std::sort(values.begin(), values.end(), [](cplx l, cplx r) { return std::abs(l) > std::abs(r); });
    Compensated re, im;
    for (cplx v : values) {
        re.add(v.real());
        im.add(v.imag());
    }
    out.value = {re.value(), im.value()};
    out.tail_warning = out.tail_estimate > 1e-6 * std::abs(out.value);
    return out;
}

double Series::magnitude(double length) const noexcept {
    double total = 0.0;
    for (const auto& t : terms_) total += std::abs(t.coeff) * std::pow(length, t.exponent.real());
    return total;
}

double Series::l1_bound(double length) const noexcept {
    double total = 0.0;
    for (const auto& t : terms_) {
        const double p = t.exponent.real() + 1.0;
        total += std::abs(t.coeff) * std::pow(length, p) / p;
    }
    return total;
}

std::pair<Series, Series> Series::split_at(double threshold) const {
    Series low(base_, truncation_);
    Series high(base_, truncation_);
    for (const auto& t : terms_) (t.exponent.real() <= threshold ? low : high).terms_.push_back(t);
    low.truncated_ = high.truncated_ = truncated_;
    return {std::move(low), std::move(high)};
}

Series Series::scaled(cplx factor) const {
    Series out(base_, truncation_);
    if (factor == cplx{0.0, 0.0}) return out;
    out.terms_ = terms_;
    for (auto& t : out.terms_) t.coeff *= factor;
    out.truncated_ = truncated_;
    out.normalize();
    return out;
}

Series Series::with_truncation(Truncation truncation) const {
    Series out(base_, terms_, truncation);
    out.truncated_ = out.truncated_ || truncated_;
    return out;
}

Series Series::with_base_point(double base_point) const {
    Series out = *this;
    out.base_ = base_point;
    return out;
}

Series& Series::operator+=(const Series& other) {
    require_same_base(*this, other);
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    truncated_ = truncated_ || other.truncated_;
    normalize();
    return *this;
}

Series& Series::operator-=(const Series& other) { return *this += other.scaled(-1.0); }

Series series_add(const Series& lhs, const Series& rhs) {
    Series out = lhs;
    out += rhs;
    return out;
}

Series series_sub(const Series& lhs, const Series& rhs) {
    Series out = lhs;
    out -= rhs;
    return out;
}

Series series_mul(const Series& coeff, const Series& s) {
    require_same_base(coeff, s);
    std::vector<PowerTerm> product;
    product.reserve(coeff.size() * s.size());
    for (const auto& l : coeff.terms())
        for (const auto& r : s.terms()) product.push_back({l.coeff * r.coeff, l.exponent + r.exponent});
    Series out(s.base_point(), std::move(product), s.truncation());
    if (coeff.truncated() || s.truncated()) out.mark_truncated();
    return out;
}

}  // namespace fractus
