#pragma once

#include <stdexcept>
#include <string>

namespace digame {

enum class Errc {
    InvalidConfig,
    AlreadyClaimed,
    OutOfTurn,
    LoopEdge,
    OutOfRange,
    NoUnclaimedIncidentEdge,
    SizeTooLargeForExhaustive,
    DegreePhaseIncomplete,
    InsufficientPoints,
    Io,
    Precondition,
};

const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
    throw Error(code, what);
}

inline const char* errc_name(Errc c) noexcept {
    switch (c) {
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::AlreadyClaimed: return "AlreadyClaimed";
        case Errc::OutOfTurn: return "OutOfTurn";
        case Errc::LoopEdge: return "LoopEdge";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::NoUnclaimedIncidentEdge: return "NoUnclaimedIncidentEdge";
        case Errc::SizeTooLargeForExhaustive: return "SizeTooLargeForExhaustive";
        case Errc::DegreePhaseIncomplete: return "DegreePhaseIncomplete";
        case Errc::InsufficientPoints: return "InsufficientPoints";
        case Errc::Io: return "Io";
        case Errc::Precondition: return "Precondition";
    }
    return "Unknown";
}

}  // namespace digame
