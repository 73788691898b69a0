#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kleinian {

enum class ErrorCode {
    NearSingular,
    AmbiguousClass,
    UndefinedLength,
    IdentityInput,
    DegeneratePoints,
    IdenticalLines,
    SharedEndpoint,
    InvalidChoice,
    SharedFixedPoint,
    NoValidSharedAxis,
    ScrewInput,
    BudgetExceeded,
    PlaneVerificationFailed,
    NotLoxodromic,
    OutOfRange,
    PreconditionViolation,
    ParseError,
    SingularGenerator,
    DuplicateLabel,
    IdentityGenerator,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NearSingular: return "NearSingular";
    case ErrorCode::AmbiguousClass: return "AmbiguousClass";
    case ErrorCode::UndefinedLength: return "UndefinedLength";
    case ErrorCode::IdentityInput: return "IdentityInput";
    case ErrorCode::DegeneratePoints: return "DegeneratePoints";
    case ErrorCode::IdenticalLines: return "IdenticalLines";
    case ErrorCode::SharedEndpoint: return "SharedEndpoint";
    case ErrorCode::InvalidChoice: return "InvalidChoice";
    case ErrorCode::SharedFixedPoint: return "SharedFixedPoint";
    case ErrorCode::NoValidSharedAxis: return "NoValidSharedAxis";
    case ErrorCode::ScrewInput: return "ScrewInput";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::PlaneVerificationFailed: return "PlaneVerificationFailed";
    case ErrorCode::NotLoxodromic: return "NotLoxodromic";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SingularGenerator: return "SingularGenerator";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::IdentityGenerator: return "IdentityGenerator";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace kleinian
