#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace insidernet {

enum class ErrorCode {
    UnreadableStream,
    StrictModeViolation,
    CompanyMismatch,
    EmptySequence,
    UnknownNode,
    DegenerateInput,
    MissingPrice,
    MissingQuote,
    EmptySeries,
    InfeasibleConfig,
    UnknownClique,
    EmptyStructure,
    IoFailure,
    InvalidConfig,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnreadableStream: return "UnreadableStream";
    case ErrorCode::StrictModeViolation: return "StrictModeViolation";
    case ErrorCode::CompanyMismatch: return "CompanyMismatch";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::MissingPrice: return "MissingPrice";
    case ErrorCode::MissingQuote: return "MissingQuote";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::InfeasibleConfig: return "InfeasibleConfig";
    case ErrorCode::UnknownClique: return "UnknownClique";
    case ErrorCode::EmptyStructure: return "EmptyStructure";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace insidernet
