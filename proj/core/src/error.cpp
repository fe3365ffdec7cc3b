#include "calrisk/error.hpp"

namespace calrisk {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
        case ErrorCode::InvalidConfidence: return "InvalidConfidence";
        case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
        case ErrorCode::InvalidBins: return "InvalidBins";
        case ErrorCode::DivisionByZeroRisk: return "DivisionByZeroRisk";
        case ErrorCode::DegenerateSigma: return "DegenerateSigma";
        case ErrorCode::InconsistentCounts: return "InconsistentCounts";
        case ErrorCode::DegenerateClass: return "DegenerateClass";
        case ErrorCode::NoValidClasses: return "NoValidClasses";
        case ErrorCode::MissingClassConfs: return "MissingClassConfs";
        case ErrorCode::UnknownDistribution: return "UnknownDistribution";
        case ErrorCode::UnknownMode: return "UnknownMode";
        case ErrorCode::ClippingConflict: return "ClippingConflict";
        case ErrorCode::DegenerateTargets: return "DegenerateTargets";
        case ErrorCode::UnsupportedMulticlass: return "UnsupportedMulticlass";
        case ErrorCode::DegenerateSplit: return "DegenerateSplit";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::ConsistencyError: return "ConsistencyError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace calrisk
