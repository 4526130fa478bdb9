#ifndef TOPOREG_ERRORS_HPP
#define TOPOREG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace toporeg {

enum class ErrorCode {
    DuplicatePoints,
    AllCollinear,
    NoCycle,
    NotALoop,
    TooFewPoints,
    DegenerateCloud,
    ShapeMismatch,
    RankDeficient,
    EmptyGraph,
    LengthMismatch,
    SingleLabel,
    FixtureMissing,
    BadDimensions,
    BadConfig,
    NonFiniteLoss,
    IoError,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DuplicatePoints: return "DuplicatePoints";
        case ErrorCode::AllCollinear:    return "AllCollinear";
        case ErrorCode::NoCycle:         return "NoCycle";
        case ErrorCode::NotALoop:        return "NotALoop";
        case ErrorCode::TooFewPoints:    return "TooFewPoints";
        case ErrorCode::DegenerateCloud: return "DegenerateCloud";
        case ErrorCode::ShapeMismatch:   return "ShapeMismatch";
        case ErrorCode::RankDeficient:   return "RankDeficient";
        case ErrorCode::EmptyGraph:      return "EmptyGraph";
        case ErrorCode::LengthMismatch:  return "LengthMismatch";
        case ErrorCode::SingleLabel:     return "SingleLabel";
        case ErrorCode::FixtureMissing:  return "FixtureMissing";
        case ErrorCode::BadDimensions:   return "BadDimensions";
        case ErrorCode::BadConfig:       return "BadConfig";
        case ErrorCode::NonFiniteLoss:   return "NonFiniteLoss";
        case ErrorCode::IoError:         return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace toporeg

#endif
