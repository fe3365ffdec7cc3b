#include "calrisk/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace calrisk {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

void strip_eol(std::string& line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
}

int parse_int_field(const std::string& field, std::size_t line_no, const char* what) {
    int value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                               ": bad " + what + " '" + field + "'");
    }
    return value;
}

double parse_double_field(const std::string& field, std::size_t line_no, const char* what) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                               ": bad " + what + " '" + field + "'");
    }
    return value;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::IoError, "cannot open '" + tmp + "' for writing");
        }
        out << content;
        if (!out.flush()) {
            throw Error(ErrorCode::IoError, "write to '" + tmp + "' failed");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw Error(ErrorCode::IoError, "cannot rename '" + tmp + "' to '" + path + "'");
    }
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json opt_to_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::optional<double> opt_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

json risk_to_json(const RiskReport& r) {
    return json{{"n", r.n},
                {"acc", r.acc},
                {"cwa", r.cwa},
                {"gain", opt_to_json(r.gain)},
                {"csr", r.csr},
                {"sigma_csr", r.sigma_csr},
                {"z", r.z},
                {"p_risk", r.p_risk},
                {"ece", r.ece},
                {"brier", r.brier},
                {"mean_conf", r.mean_conf},
                {"mean_conf_wrong", opt_to_json(r.mean_conf_wrong)},
                {"jensen_lower_bound", opt_to_json(r.jensen_lower_bound)}};
}

RiskReport risk_from_json(const json& j) {
    RiskReport r;
    r.n = j.at("n").get<std::size_t>();
    r.acc = j.at("acc").get<double>();
    r.cwa = j.at("cwa").get<double>();
    r.gain = opt_from_json(j.at("gain"));
    r.csr = j.at("csr").get<double>();
    r.sigma_csr = j.at("sigma_csr").get<double>();
    r.z = j.at("z").get<double>();
    r.p_risk = j.at("p_risk").get<double>();
    r.ece = j.at("ece").get<double>();
    r.brier = j.at("brier").get<double>();
    r.mean_conf = j.at("mean_conf").get<double>();
    r.mean_conf_wrong = opt_from_json(j.at("mean_conf_wrong"));
    r.jensen_lower_bound = opt_from_json(j.at("jensen_lower_bound"));
    return r;
}

} // namespace

ParsedPredictions parse_predictions(const std::string& path, double epsilon) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::ParseError, "line 1: empty file, expected header");
    }
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB &&
        static_cast<unsigned char>(line[2]) == 0xBF) {
        line.erase(0, 3); // UTF-8 BOM
    }
    strip_eol(line);

    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "true_label" || header[1] != "pred_label" ||
        header[2] != "conf") {
        throw Error(ErrorCode::SchemaError,
                    "line 1: header must start with true_label,pred_label,conf");
    }
    const int conf_cols = static_cast<int>(header.size()) - 3;
    for (int k = 0; k < conf_cols; ++k) {
        if (header[3 + static_cast<std::size_t>(k)] != "conf_" + std::to_string(k)) {
            throw Error(ErrorCode::SchemaError,
                        "line 1: per-class columns must be conf_0..conf_" +
                        std::to_string(conf_cols - 1) + " in order");
        }
    }

    std::vector<std::string> warnings;
    std::vector<PredictionRecord> records;
    int max_label = -1;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        strip_eol(line);
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size()));
        }
        PredictionRecord rec;
        rec.true_label = parse_int_field(fields[0], line_no, "true_label");
        rec.pred_label = parse_int_field(fields[1], line_no, "pred_label");
        rec.conf = parse_double_field(fields[2], line_no, "conf");
        if (rec.true_label < 0 || rec.pred_label < 0) {
            throw Error(ErrorCode::LabelOutOfRange,
                        "line " + std::to_string(line_no) + ": negative label");
        }
        if (!(rec.conf >= 0.0 && rec.conf <= 1.0)) {
            throw Error(ErrorCode::InvalidConfidence,
                        "line " + std::to_string(line_no) + ": conf outside [0, 1]");
        }
        if (conf_cols > 0) {
            if (rec.true_label >= conf_cols || rec.pred_label >= conf_cols) {
                throw Error(ErrorCode::SchemaError,
                            "line " + std::to_string(line_no) + ": label >= " +
                            std::to_string(conf_cols) + " implied by conf_* columns");
            }
            std::vector<double> confs(static_cast<std::size_t>(conf_cols));
            for (int k = 0; k < conf_cols; ++k) {
                confs[static_cast<std::size_t>(k)] = parse_double_field(
                    fields[3 + static_cast<std::size_t>(k)], line_no, "conf_*");
            }
            if (std::abs(confs[static_cast<std::size_t>(rec.pred_label)] - rec.conf) > 1e-6) {
                throw Error(ErrorCode::ConsistencyError,
                            "line " + std::to_string(line_no) +
                            ": conf_" + std::to_string(rec.pred_label) +
                            " does not match conf");
            }
            confs[static_cast<std::size_t>(rec.pred_label)] = rec.conf;
            rec.class_confs = std::move(confs);
        }
        if (rec.conf < epsilon || rec.conf > 1.0 - epsilon) {
            warnings.push_back("line " + std::to_string(line_no) +
                                   ": conf " + fmt_double(rec.conf) +
                                   " will be clipped to [" + fmt_double(epsilon) + ", " +
                                   fmt_double(1.0 - epsilon) + "]");
        }
        max_label = std::max({max_label, rec.true_label, rec.pred_label});
        records.push_back(std::move(rec));
    }
    if (records.empty()) {
        throw Error(ErrorCode::EmptySet, "no data rows in '" + path + "'");
    }
    const int k = conf_cols > 0 ? conf_cols : std::max(max_label + 1, 2);
    return ParsedPredictions{clip_confidences(std::move(records), k, epsilon),
                             std::move(warnings)};
}

void write_predictions(const std::string& path,
                       const std::vector<PredictionRecord>& records,
                       int num_classes) {
    const bool with_vectors =
        !records.empty() && records.front().class_confs.has_value();
    std::ostringstream body;
    body << "true_label,pred_label,conf";
    if (with_vectors) {
        for (int k = 0; k < num_classes; ++k) body << ",conf_" << k;
    }
    body << "\n";
    for (const auto& rec : records) {
        body << rec.true_label << ',' << rec.pred_label << ',' << fmt_double(rec.conf);
        if (with_vectors) {
            if (!rec.class_confs ||
                static_cast<int>(rec.class_confs->size()) != num_classes) {
                throw Error(ErrorCode::SchemaError,
                            "records disagree on class_confs presence/width");
            }
            for (double c : *rec.class_confs) body << ',' << fmt_double(c);
        }
        body << "\n";
    }
    atomic_write(path, body.str());
}

void write_curve_csv(const std::string& path, const CurveSeries& curve) {
    std::ostringstream body;
    body << "x,y\n";
    for (const auto& p : curve.points) {
        body << fmt_double(p.x) << ',' << fmt_double(p.y) << "\n";
    }
    atomic_write(path, body.str());
}

ReportDocument build_report(const EvaluationSet& set, int m_bins,
                            ReportProvenance provenance) {
    ReportDocument doc;
    doc.risk = risk_report(set, m_bins);
    for (const CwCounts& counts : all_cw_counts(set)) {
        doc.cw_per_class.push_back({counts, cw_metrics(counts)});
    }
    doc.auc_per_class = all_auc_gaps(set);
    doc.provenance = std::move(provenance);
    return doc;
}

std::string report_to_json(const ReportDocument& doc) {
    json j;
    j["schema_version"] = doc.schema_version;
    j["risk"] = risk_to_json(doc.risk);
    j["cw_per_class"] = json::array();
    for (const auto& entry : doc.cw_per_class) {
        const auto& c = entry.counts;
        const auto& m = entry.metrics;
        j["cw_per_class"].push_back(
            json{{"class_id", c.class_id},
                 {"counts",
                  {{"cw_tp", c.cw_tp},
                   {"cw_fp", c.cw_fp},
                   {"cw_fn", c.cw_fn},
                   {"cw_tn", c.cw_tn},
                   {"cw_p", c.cw_p},
                   {"cw_n", c.cw_n},
                   {"total_mass", c.total_mass}}},
                 {"cw_precision", opt_to_json(m.cw_precision)},
                 {"cw_recall", opt_to_json(m.cw_recall)},
                 {"cw_specificity", opt_to_json(m.cw_specificity)},
                 {"cw_f1", opt_to_json(m.cw_f1)},
                 {"cw_mcc", opt_to_json(m.cw_mcc)},
                 {"cw_acc", m.cw_acc}});
    }
    j["auc_per_class"] = json::array();
    for (std::size_t k = 0; k < doc.auc_per_class.size(); ++k) {
        if (doc.auc_per_class[k]) {
            const AucGap& g = *doc.auc_per_class[k];
            j["auc_per_class"].push_back(json{{"class_id", g.class_id},
                                              {"degenerate", false},
                                              {"auc", g.auc},
                                              {"cw_auc", g.cw_auc},
                                              {"delta", g.delta},
                                              {"cov_form", g.cov_form}});
        } else {
            j["auc_per_class"].push_back(
                json{{"class_id", static_cast<int>(k)}, {"degenerate", true}});
        }
    }
    json prov{{"input", doc.provenance.input},
              {"epsilon", doc.provenance.epsilon},
              {"bins", doc.provenance.bins}};
    prov["seed"] = doc.provenance.seed ? json(*doc.provenance.seed) : json(nullptr);
    j["provenance"] = std::move(prov);
    return j.dump(2);
}

ReportDocument report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("bad report JSON: ") + e.what());
    }
    ReportDocument doc;
    doc.schema_version = j.at("schema_version").get<int>();
    doc.risk = risk_from_json(j.at("risk"));
    for (const auto& e : j.at("cw_per_class")) {
        ClassCwEntry entry;
        entry.counts.class_id = e.at("class_id").get<int>();
        const auto& c = e.at("counts");
        entry.counts.cw_tp = c.at("cw_tp").get<double>();
        entry.counts.cw_fp = c.at("cw_fp").get<double>();
        entry.counts.cw_fn = c.at("cw_fn").get<double>();
        entry.counts.cw_tn = c.at("cw_tn").get<double>();
        entry.counts.cw_p = c.at("cw_p").get<double>();
        entry.counts.cw_n = c.at("cw_n").get<double>();
        entry.counts.total_mass = c.at("total_mass").get<double>();
        entry.metrics.class_id = entry.counts.class_id;
        entry.metrics.cw_precision = opt_from_json(e.at("cw_precision"));
        entry.metrics.cw_recall = opt_from_json(e.at("cw_recall"));
        entry.metrics.cw_specificity = opt_from_json(e.at("cw_specificity"));
        entry.metrics.cw_f1 = opt_from_json(e.at("cw_f1"));
        entry.metrics.cw_mcc = opt_from_json(e.at("cw_mcc"));
        entry.metrics.cw_acc = e.at("cw_acc").get<double>();
        doc.cw_per_class.push_back(std::move(entry));
    }
    for (const auto& e : j.at("auc_per_class")) {
        if (e.at("degenerate").get<bool>()) {
            doc.auc_per_class.push_back(std::nullopt);
        } else {
            AucGap g;
            g.class_id = e.at("class_id").get<int>();
            g.auc = e.at("auc").get<double>();
            g.cw_auc = e.at("cw_auc").get<double>();
            g.delta = e.at("delta").get<double>();
            g.cov_form = e.at("cov_form").get<double>();
            doc.auc_per_class.push_back(g);
        }
    }
    const auto& prov = j.at("provenance");
    doc.provenance.input = prov.at("input").get<std::string>();
    doc.provenance.epsilon = prov.at("epsilon").get<double>();
    doc.provenance.bins = prov.at("bins").get<int>();
    if (!prov.at("seed").is_null()) {
        doc.provenance.seed = prov.at("seed").get<std::uint64_t>();
    }
    return doc;
}

} // namespace calrisk
