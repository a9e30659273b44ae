#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "errors.hpp"
#include "experiments.hpp"

namespace zsurj {

namespace detail {

inline nlohmann::ordered_json shape_rule_to_json(const ShapeRule& rule) {
    nlohmann::ordered_json j;
    switch (rule.kind) {
        case ShapeRule::Kind::fixed_columns:
            j["kind"] = "fixed_columns";
            j["m"] = rule.value;
            break;
        case ShapeRule::Kind::column_offset:
            j["kind"] = "column_offset";
            j["u"] = rule.value;
            break;
        case ShapeRule::Kind::column_ratio:
            j["kind"] = "column_ratio";
            j["c"] = rule.ratio.str();
            break;
    }
    return j;
}

inline nlohmann::ordered_json interval_to_json(const ConfidenceInterval& ci) {
    return nlohmann::ordered_json{{"low", ci.low}, {"high", ci.high}};
}

inline nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["kind"] = experiment_kind_name(c.kind);
    j["distribution"] =
        c.distribution ? nlohmann::ordered_json(c.distribution->describe()) : nullptr;
    j["n"] = c.n_values;
    j["shape_rule"] = shape_rule_to_json(c.shape);
    j["trials"] = c.trials;
    j["master_seed"] = c.master_seed;
    if (c.kind == ExperimentKind::cokernel_census) {
        j["census_primes"] = c.census_primes;
        j["max_partition_size"] = c.max_partition_size;
    }
    if (c.kind == ExperimentKind::padic_rank) {
        j["p"] = c.padic_p;
        j["L"] = c.padic_precision;
    }
    if (c.rho_cap) j["rho_cap"] = *c.rho_cap;
    return j;
}

inline nlohmann::ordered_json census_row_to_json(const CensusRow& row) {
    nlohmann::ordered_json j;
    j["p"] = row.p;
    if (row.overflow) {
        j["partition"] = nullptr;
        j["overflow"] = true;
    } else {
        j["partition"] = row.partition;
        j["overflow"] = false;
    }
    j["count"] = row.count;
    j["frequency"] = row.frequency;
    j["interval"] = interval_to_json(row.interval);
    j["predicted_mass"] =
        row.predicted_mass ? nlohmann::ordered_json(*row.predicted_mass) : nullptr;
    return j;
}

inline nlohmann::ordered_json shape_to_json(const ShapeRecord& s, ExperimentKind kind) {
    nlohmann::ordered_json j;
    j["n"] = s.n;
    j["m"] = s.m;
    j["trials"] = s.trials;
    j["surjective"] = s.surjective;
    j["rate"] = s.rate;
    j["interval"] = interval_to_json(s.interval);
    j["failure_rate"] = s.failure_rate;
    j["failure_interval"] = interval_to_json(s.failure_interval);
    j["below_resolution"] = s.below_resolution;
    j["predicted"] = s.predicted ? nlohmann::ordered_json(*s.predicted) : nullptr;
    j["predicted_exact"] =
        s.predicted_exact ? nlohmann::ordered_json(*s.predicted_exact) : nullptr;
    j["prediction_label"] = s.prediction_label;
    j["limit_note"] = s.limit_note;
    if (kind == ExperimentKind::cokernel_census) {
        auto rows = nlohmann::ordered_json::array();
        for (const auto& row : s.census_rows) rows.push_back(census_row_to_json(row));
        j["census"] = rows;
    }
    return j;
}

inline std::string csv_quote(const std::string& field) {
    bool needs = field.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline std::string csv_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace detail

inline nlohmann::ordered_json result_to_json(const ExperimentResult& result) {
    nlohmann::ordered_json j;
    j["artifact_version"] = result.artifact_version;
    j["kind"] = experiment_kind_name(result.config.kind);
    j["config"] = detail::config_to_json(result.config);
    auto shapes = nlohmann::ordered_json::array();
    for (const auto& s : result.shapes) shapes.push_back(detail::shape_to_json(s, result.config.kind));
    j["shapes"] = shapes;
    if (result.config.kind == ExperimentKind::decay_curve) {
        if (result.decay) {
            j["decay"] = nlohmann::ordered_json{
                {"slope", result.decay->slope},
                {"intercept", result.decay->intercept},
                {"points_used", result.decay->points_used},
                {"monotone_nonincreasing", result.decay->monotone_nonincreasing},
            };
        } else {
            j["decay"] = nullptr;
        }
    }
    return j;
}

inline std::string result_to_json_text(const ExperimentResult& result) {
    return result_to_json(result).dump(2) + "\n";
}

// One row per shape and statistic; census partitions and the decay fit get
// their own rows. Plot-ready rather than lossless (the JSON is lossless).
inline std::string result_to_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "n,m,statistic,value,interval_low,interval_high,predicted,label\n";
    auto emit = [&](std::uint64_t n, std::uint64_t m, const std::string& stat, double value,
                    const ConfidenceInterval* ci, const std::optional<double>& predicted,
                    const std::string& label) {
        out << n << ',' << m << ',' << detail::csv_quote(stat) << ','
            << detail::csv_double(value) << ',';
        if (ci) out << detail::csv_double(ci->low);
        out << ',';
        if (ci) out << detail::csv_double(ci->high);
        out << ',';
        if (predicted) out << detail::csv_double(*predicted);
        out << ',' << detail::csv_quote(label) << '\n';
    };

    for (const auto& s : result.shapes) {
        std::string label = s.prediction_label;
        if (!s.limit_note.empty()) label += (label.empty() ? "" : "; ") + s.limit_note;
        emit(s.n, s.m, "rate", s.rate, &s.interval, s.predicted, label);
        std::string failure_label = s.below_resolution ? "rate below resolution" : "";
        emit(s.n, s.m, "failure_rate", s.failure_rate, &s.failure_interval, std::nullopt,
             failure_label);
        for (const auto& row : s.census_rows) {
            std::ostringstream stat;
            stat << "sylow_p" << row.p << "=";
            if (row.overflow) {
                stat << "overflow";
            } else {
                stat << "[";
                for (std::size_t i = 0; i < row.partition.size(); ++i) {
                    if (i) stat << " ";
                    stat << row.partition[i];
                }
                stat << "]";
            }
            emit(s.n, s.m, stat.str(), row.frequency, &row.interval, row.predicted_mass,
                 s.limit_note);
        }
    }
    if (result.decay) {
        out << ",,decay_slope," << detail::csv_double(result.decay->slope) << ",,,,"
            << (result.decay->monotone_nonincreasing ? "monotone nonincreasing"
                                                     : "not monotone")
            << '\n';
    }
    return out.str();
}

// Writes stem.json and stem.csv.
inline void write_result_files(const ExperimentResult& result, const std::string& stem) {
    {
        std::ofstream json_out(stem + ".json", std::ios::binary);
        if (!json_out) throw ResourceError("cannot write " + stem + ".json");
        json_out << result_to_json_text(result);
    }
    std::ofstream csv_out(stem + ".csv", std::ios::binary);
    if (!csv_out) throw ResourceError("cannot write " + stem + ".csv");
    csv_out << result_to_csv(result);
}

}  // namespace zsurj
