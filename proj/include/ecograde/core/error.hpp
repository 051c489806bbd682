#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ecograde {

enum class ErrorCode {
    Io,
    Parse,
    Config,
    ContractViolation,
    UnknownCity,
    OutOfRange,
    NoOption,
    NoTransportData,
    NoComparableData,
    FactorUnavailable,
    NoScore,
    DegenerateVariance,
    InsufficientSamples,
    InsufficientData,
    NotFound,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool condition, const char* what) {
    if (!condition) {
        throw Error(ErrorCode::ContractViolation, what);
    }
}

}  // namespace ecograde
