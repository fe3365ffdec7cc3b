#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "calrisk/cw_confusion.hpp"
#include "calrisk/metrics.hpp"
#include "calrisk/ranking.hpp"
#include "calrisk/record.hpp"

namespace calrisk {

/// Prediction CSV contract:
///   header `true_label,pred_label,conf[,conf_0,...,conf_{K-1}]`
///   UTF-8, comma-separated, `.` decimal separator, LF or CRLF.
/// K comes from the conf_* column count when present, otherwise from
/// max label + 1. Parse failures carry 1-based line numbers.
struct ParsedPredictions {
    EvaluationSet set;
    std::vector<std::string> warnings; ///< e.g. confidences moved by clipping
};

ParsedPredictions parse_predictions(const std::string& path, double epsilon = 1e-8);

/// Writes a prediction CSV (atomic: temp file + rename). Emits conf_*
/// columns when the records carry class vectors. Values print with enough
/// digits to round-trip exactly.
void write_predictions(const std::string& path,
                       const std::vector<PredictionRecord>& records,
                       int num_classes);

/// Writes `x,y` curve points in sweep order (atomic).
void write_curve_csv(const std::string& path, const CurveSeries& curve);

struct ReportProvenance {
    std::string input;
    double epsilon = 1e-8;
    int bins = 15;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const ReportProvenance&, const ReportProvenance&) = default;
};

struct ClassCwEntry {
    CwCounts counts;
    CwMetricRow metrics;

    friend bool operator==(const ClassCwEntry&, const ClassCwEntry&) = default;
};

/// Everything cmd_eval emits; round-trips losslessly through JSON.
struct ReportDocument {
    int schema_version = 1;
    RiskReport risk;
    std::vector<ClassCwEntry> cw_per_class;
    std::vector<std::optional<AucGap>> auc_per_class;
    ReportProvenance provenance;

    friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

/// Assembles the document from a parsed set (no arithmetic beyond the
/// library operations it calls).
ReportDocument build_report(const EvaluationSet& set, int m_bins,
                            ReportProvenance provenance);

std::string report_to_json(const ReportDocument& doc);
ReportDocument report_from_json(const std::string& text);

} // namespace calrisk
