#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace census {

enum class ErrorCode {
    DegenerateCircle,
    DegenerateInput,
    DisksNotDisjoint,
    NotTangent,
    SeedMeetsLimitSet,
    NotSchottky,
    InvalidOptions,
    GridExceedsOrbit,
    NonExhaustiveOrbit,
    InsufficientPoints,
    GridMismatch,
    OrbitMismatch,
    MalformedInput,
};

// Stable kebab-case identifier, used for CLI error reports.
constexpr std::string_view code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::DegenerateCircle: return "degenerate-circle";
    case ErrorCode::DegenerateInput: return "degenerate-input";
    case ErrorCode::DisksNotDisjoint: return "disks-not-disjoint";
    case ErrorCode::NotTangent: return "not-tangent";
    case ErrorCode::SeedMeetsLimitSet: return "seed-meets-limit-set";
    case ErrorCode::NotSchottky: return "not-schottky";
    case ErrorCode::InvalidOptions: return "invalid-options";
    case ErrorCode::GridExceedsOrbit: return "grid-exceeds-orbit";
    case ErrorCode::NonExhaustiveOrbit: return "non-exhaustive-orbit";
    case ErrorCode::InsufficientPoints: return "insufficient-points";
    case ErrorCode::GridMismatch: return "grid-mismatch";
    case ErrorCode::OrbitMismatch: return "orbit-mismatch";
    case ErrorCode::MalformedInput: return "malformed-input";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace census
