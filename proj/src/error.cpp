#include "fractus/error.hpp"

namespace fractus {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidOperand: return "InvalidOperand";
        case Errc::TruncationOverflow: return "TruncationOverflow";
        case Errc::InvalidOrders: return "InvalidOrders";
        case Errc::NotContinuousCoefficient: return "NotContinuousCoefficient";
        case Errc::InvalidInitialData: return "InvalidInitialData";
        case Errc::InvalidGrid: return "InvalidGrid";
        case Errc::GammaPole: return "GammaPole";
        case Errc::NotIntegrable: return "NotIntegrable";
        case Errc::IntegerOrderKernel: return "IntegerOrderKernel";
        case Errc::UnsupportedOrder: return "UnsupportedOrder";
        case Errc::InsufficientSmoothnessData: return "InsufficientSmoothnessData";
        case Errc::UnsolvableInitialData: return "UnsolvableInitialData";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::SingularStep: return "SingularStep";
        case Errc::ConditionViolated: return "ConditionViolated";
        case Errc::UnsupportedCoefficients: return "UnsupportedCoefficients";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace fractus
