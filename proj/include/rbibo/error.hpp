#pragma once

#include <stdexcept>
#include <string>

namespace rbibo {

enum class Errc {
    OverlappingSegments,
    InvalidSegment,
    NonIntegrableAction,
    HasAtomicPart,
    DivergentMeasure,
    ZeroMeasure,
    IllPosedConvolution,
    InvalidSignal,
    InvalidArgument,
    NotExpressible,
    BadDocument,
    SyntaxError,
    RangeError,
};

inline const char* errc_name(Errc c)
{
    switch (c) {
    case Errc::OverlappingSegments: return "OverlappingSegments";
    case Errc::InvalidSegment: return "InvalidSegment";
    case Errc::NonIntegrableAction: return "NonIntegrableAction";
    case Errc::HasAtomicPart: return "HasAtomicPart";
    case Errc::DivergentMeasure: return "DivergentMeasure";
    case Errc::ZeroMeasure: return "ZeroMeasure";
    case Errc::IllPosedConvolution: return "IllPosedConvolution";
    case Errc::InvalidSignal: return "InvalidSignal";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotExpressible: return "NotExpressible";
    case Errc::BadDocument: return "BadDocument";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::RangeError: return "RangeError";
    }
    return "Unknown";
}

/// Error raised by every operation of the library. The code identifies the
/// violated precondition; the message is meant for humans.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace rbibo
