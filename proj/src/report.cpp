#include "lomef/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lomef {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string records_csv(const std::vector<EvaluationRecord>& records) {
    std::ostringstream out;
    out << "series_id,explainer,method,metric,e_global_explainer,e_actual_global,e_actual_local,"
           "e_global_local,e_actual_explainer,e_local_explainer";
    for (auto name : kMeasureNames) out << ',' << name;
    out << '\n';
    for (const auto& r : records) {
        const auto& p = r.primary;
        out << r.series_id << ',' << to_string(r.explainer) << ',' << to_string(r.method) << ','
            << to_string(r.metric);
        for (double v : {p.global_explainer, p.actual_global, p.actual_local, p.global_local,
                         p.actual_explainer, p.local_explainer}) {
            out << ',' << format_number(v);
        }
        for (double v : r.secondary.as_array()) out << ',' << format_number(v);
        out << '\n';
    }
    return out.str();
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
    std::ostringstream out;
    out << "explainer,method,metric,statistic,n";
    for (auto name : kMeasureNames) out << ',' << name;
    for (auto name : kMeasureNames) out << ',' << name << "_significant";
    out << '\n';
    for (const auto& r : rows) {
        out << to_string(r.explainer) << ',' << to_string(r.method) << ',' << to_string(r.metric)
            << ',' << r.statistic << ',' << r.n;
        for (double v : r.values) out << ',' << format_number(v);
        for (bool s : r.significant) out << ',' << (s ? "true" : "false");
        out << '\n';
    }
    return out.str();
}

std::string stability_csv(const std::vector<StabilityRow>& rows) {
    std::ostringstream out;
    out << "explainer,method,metric,runs,iqr,run_medians\n";
    for (const auto& r : rows) {
        out << to_string(r.explainer) << ',' << to_string(r.method) << ',' << to_string(r.metric)
            << ',' << r.run_medians.size() << ',' << format_number(r.iqr) << ',';
        for (std::size_t i = 0; i < r.run_medians.size(); ++i) {
            out << (i ? ";" : "") << format_number(r.run_medians[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string errors_log(const std::vector<std::string>& errors) {
    std::string out;
    for (const auto& e : errors) out += e + '\n';
    return out;
}

namespace {

nlohmann::json vec(const Vector& v) { return to_std(v); }

Vector vec_from(const nlohmann::json& j) { return from_std(j.get<std::vector<double>>()); }

// JSON has no NaN; store it as null.
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

double num_from(const nlohmann::json& j) {
    return j.is_null() ? std::nan("") : j.get<double>();
}

}  // namespace

nlohmann::json to_json(const ExplanationPayload& payload) {
    nlohmann::json j;
    j["tracks"] = nlohmann::json::array();
    for (const auto& t : payload.tracks) {
        j["tracks"].push_back({{"name", t.name}, {"mean", vec(t.mean)}, {"min", vec(t.min)},
                               {"max", vec(t.max)}});
    }
    j["coefficients"] = nlohmann::json::array();
    for (const auto& c : payload.coefficients) {
        j["coefficients"].push_back({{"name", c.name}, {"value", num(c.value)},
                                     {"std_error", num(c.std_error)},
                                     {"significant", c.significant}});
    }
    j["trend_forms"] = payload.trend_forms;
    j["seasonal_forms"] = payload.seasonal_forms;
    return j;
}

ExplanationPayload payload_from_json(const nlohmann::json& j) {
    ExplanationPayload p;
    for (const auto& t : j.at("tracks")) {
        p.tracks.push_back({t.at("name").get<std::string>(), vec_from(t.at("mean")),
                            vec_from(t.at("min")), vec_from(t.at("max"))});
    }
    for (const auto& c : j.at("coefficients")) {
        p.coefficients.push_back({c.at("name").get<std::string>(), num_from(c.at("value")),
                                  num_from(c.at("std_error")), c.at("significant").get<bool>()});
    }
    p.trend_forms = j.at("trend_forms").get<std::map<std::string, int>>();
    p.seasonal_forms = j.at("seasonal_forms").get<std::map<std::string, int>>();
    return p;
}

nlohmann::json series_artifact(const SeriesResult& s) {
    nlohmann::json j;
    j["id"] = s.id;
    j["periods"] = s.periods;
    j["input_length"] = s.input_length;
    j["train"] = vec(s.train);
    j["test"] = vec(s.test);
    j["global_forecast"] = vec(s.global_forecast);
    j["outcomes"] = nlohmann::json::array();
    for (const auto& o : s.outcomes) {
        j["outcomes"].push_back({{"explainer", std::string(to_string(o.kind))},
                                 {"method", std::string(to_string(o.method))},
                                 {"members", o.members},
                                 {"block_length", o.block_length},
                                 {"local_forecast", vec(o.local_forecast)},
                                 {"explainer_forecast", vec(o.explainer.forecast)},
                                 {"neighbourhood_mean", vec(o.neighbourhood_mean)},
                                 {"payload", to_json(o.explainer.payload)}});
    }
    j["errors"] = s.errors;
    return j;
}

SeriesResult series_from_artifact(const nlohmann::json& j) {
    SeriesResult s;
    s.id = j.at("id").get<std::string>();
    s.periods = j.at("periods").get<std::vector<int>>();
    s.input_length = j.at("input_length").get<int>();
    s.train = vec_from(j.at("train"));
    s.test = vec_from(j.at("test"));
    s.global_forecast = vec_from(j.at("global_forecast"));
    for (const auto& o : j.at("outcomes")) {
        ExplainerOutcome out;
        out.kind = parse_explainer(o.at("explainer").get<std::string>());
        out.method = parse_method(o.at("method").get<std::string>());
        out.members = o.at("members").get<int>();
        out.block_length = o.at("block_length").get<int>();
        out.local_forecast = vec_from(o.at("local_forecast"));
        out.explainer.kind = out.kind;
        out.explainer.forecast = vec_from(o.at("explainer_forecast"));
        out.neighbourhood_mean = vec_from(o.at("neighbourhood_mean"));
        out.explainer.payload = payload_from_json(o.at("payload"));
        s.outcomes.push_back(std::move(out));
    }
    s.errors = j.at("errors").get<std::vector<std::string>>();
    return s;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::IoError, "cannot write '" + path + "'");
    out << content;
    if (!out) fail(ErrorKind::IoError, "failed writing '" + path + "'");
}

namespace {

void make_dirs(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorKind::IoError, "cannot create directory '" + dir + "': " + ec.message());
}

}  // namespace

void write_bundle(const RunResult& result, const std::string& directory, bool series_artifacts) {
    make_dirs(directory);
    write_text_file(directory + "/records.csv", records_csv(result.records));
    write_text_file(directory + "/aggregate.csv", aggregate_csv(result.aggregate));
    write_text_file(directory + "/errors.log", errors_log(result.errors));
    if (series_artifacts) {
        make_dirs(directory + "/series");
        for (const auto& s : result.series) {
            write_text_file(directory + "/series/" + s.id + ".json", series_artifact(s).dump(1) + "\n");
        }
    }
}

void write_stability(const StabilityResult& result, const std::string& directory) {
    make_dirs(directory);
    write_text_file(directory + "/stability.csv", stability_csv(result.rows));
    write_text_file(directory + "/stability_errors.log", errors_log(result.errors));
}

}  // namespace lomef
