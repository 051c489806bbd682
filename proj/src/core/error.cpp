#include "ecograde/core/error.hpp"

namespace ecograde {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Io: return "io_error";
        case ErrorCode::Parse: return "parse_error";
        case ErrorCode::Config: return "config_error";
        case ErrorCode::ContractViolation: return "contract_violation";
        case ErrorCode::UnknownCity: return "unknown_city";
        case ErrorCode::OutOfRange: return "out_of_range";
        case ErrorCode::NoOption: return "no_option";
        case ErrorCode::NoTransportData: return "no_transport_data";
        case ErrorCode::NoComparableData: return "no_comparable_data";
        case ErrorCode::FactorUnavailable: return "factor_unavailable";
        case ErrorCode::NoScore: return "no_score";
        case ErrorCode::DegenerateVariance: return "degenerate_variance";
        case ErrorCode::InsufficientSamples: return "insufficient_samples";
        case ErrorCode::InsufficientData: return "insufficient_data";
        case ErrorCode::NotFound: return "not_found";
    }
    return "unknown";
}

}  // namespace ecograde
