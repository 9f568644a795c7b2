#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fractus {

enum class Errc {
    InvalidOperand,
    TruncationOverflow,
    InvalidOrders,
    NotContinuousCoefficient,
    InvalidInitialData,
    InvalidGrid,
    GammaPole,
    NotIntegrable,
    IntegerOrderKernel,
    UnsupportedOrder,
    InsufficientSmoothnessData,
    UnsolvableInitialData,
    NoConvergence,
    SingularStep,
    ConditionViolated,
    UnsupportedCoefficients,
    ParseError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library. `indices` carries the offending
/// initial-data indices k, node index, or (j, k) cell, depending on the code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, std::vector<int> indices = {})
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code),
          indices_(std::move(indices)) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }
    [[nodiscard]] const std::vector<int>& indices() const noexcept { return indices_; }

private:
    Errc code_;
    std::vector<int> indices_;
};

}  // namespace fractus
