#pragma once

#include <stdexcept>
#include <string>

namespace aclab {

enum class Errc {
    InvalidArgument,
    InvalidCoefficient,
    EmptyGenerator,
    AllZero,
    BudgetExceeded,
    DegenerateMap,
    ShatterFailure,
    ParseError,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

inline const char* errc_name(Errc c) {
    switch (c) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidCoefficient: return "InvalidCoefficient";
    case Errc::EmptyGenerator: return "EmptyGenerator";
    case Errc::AllZero: return "AllZero";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::DegenerateMap: return "DegenerateMap";
    case Errc::ShatterFailure: return "ShatterFailure";
    case Errc::ParseError: return "ParseError";
    case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

} // namespace aclab
