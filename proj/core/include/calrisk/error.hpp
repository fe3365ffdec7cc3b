#pragma once

#include <stdexcept>
#include <string>

namespace calrisk {

/// Machine-readable failure categories surfaced by library operations.
enum class ErrorCode {
    EmptySet,
    LabelOutOfRange,
    InvalidConfidence,
    InvalidEpsilon,
    InvalidBins,
    DivisionByZeroRisk,
    DegenerateSigma,
    InconsistentCounts,
    DegenerateClass,
    NoValidClasses,
    MissingClassConfs,
    UnknownDistribution,
    UnknownMode,
    ClippingConflict,
    DegenerateTargets,
    UnsupportedMulticlass,
    DegenerateSplit,
    ParseError,
    SchemaError,
    ConsistencyError,
    IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying an ErrorCode alongside the human-readable message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace calrisk
