#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixlaw {

/// Kinds of failure raised by the library. Every thrown mixlaw::Error carries one.
enum class Errc {
    DomainError,
    LengthMismatch,
    NonInvertible,
    NegativeValue,
    NonPositiveValue,
    BranchDomainError,
    ZeroWithNonpositiveP,
    Infeasible,
    ZeroFraction,
    OutOfRange,
    DegenerateEqualPhases,
    SaturationOutOfRange,
    Unsolvable,
    Degenerate,
    AllDegenerate,
    EmptyDataset,
    DegenerateGrid,
    InvalidComposition,
    InvalidGenerator,
    InvalidArgument,
    MalformedData,
};

constexpr std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::DomainError: return "DomainError";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NonInvertible: return "NonInvertible";
    case Errc::NegativeValue: return "NegativeValue";
    case Errc::NonPositiveValue: return "NonPositiveValue";
    case Errc::BranchDomainError: return "BranchDomainError";
    case Errc::ZeroWithNonpositiveP: return "ZeroWithNonpositiveP";
    case Errc::Infeasible: return "Infeasible";
    case Errc::ZeroFraction: return "ZeroFraction";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::DegenerateEqualPhases: return "DegenerateEqualPhases";
    case Errc::SaturationOutOfRange: return "SaturationOutOfRange";
    case Errc::Unsolvable: return "Unsolvable";
    case Errc::Degenerate: return "Degenerate";
    case Errc::AllDegenerate: return "AllDegenerate";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::DegenerateGrid: return "DegenerateGrid";
    case Errc::InvalidComposition: return "InvalidComposition";
    case Errc::InvalidGenerator: return "InvalidGenerator";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::MalformedData: return "MalformedData";
    }
    return "Unknown";
}

class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what)
        , code_(code)
    {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

namespace detail {

[[noreturn]] inline void raise(Errc code, const std::string& what)
{
    throw Error(code, what);
}

} // namespace detail
} // namespace mixlaw
