#include "lomef/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace lomef {

std::string_view to_string(GfmKind kind) {
    switch (kind) {
        case GfmKind::PooledAR: return "pooled_ar";
        case GfmKind::MLP: return "mlp";
        case GfmKind::External: return "external";
        case GfmKind::OracleStub: return "oracle_stub";
    }
    return "?";
}

GfmKind parse_gfm(std::string_view text) {
    for (GfmKind k : {GfmKind::PooledAR, GfmKind::MLP, GfmKind::External, GfmKind::OracleStub}) {
        if (text == to_string(k)) return k;
    }
    fail(ErrorKind::ParseError, "unknown gfm '" + std::string(text) + "'");
}

void RunConfig::check() const {
    auto invalid = [](const std::string& message) { fail(ErrorKind::ValidationError, message); };
    if (dataset.empty()) invalid("config: dataset is required");
    if (methods.empty()) invalid("config: at least one neighbourhood method is required");
    if (explainers.empty()) invalid("config: at least one explainer is required");
    if (bootstraps < 1) invalid("config: bootstraps must be >= 1");
    if (block_length < 0) invalid("config: block_length must be >= 0");
    if (runs < 1) invalid("config: runs must be >= 1");
    if (horizon < 0) invalid("config: horizon must be >= 0");
    if (!(alpha > 0.0 && alpha < 1.0)) invalid("config: alpha must lie in (0, 1)");
    if (bonferroni_tests < 0) invalid("config: bonferroni_tests must be >= 0");
    if (sieve_order_max < 0) invalid("config: sieve_order_max must be >= 0");
    if (threads < 0) invalid("config: threads must be >= 0");
    if (gfm_fourier_k < 1 || gfm_fourier_k > 25) invalid("config: gfm_fourier_k must lie in 1..25");
    if (mlp_hidden < 1) invalid("config: mlp_hidden must be >= 1");
    if (mlp_epochs < 1) invalid("config: mlp_epochs must be >= 1");
    if (gfm == GfmKind::External && external_command.empty()) {
        invalid("config: gfm = external needs external_command");
    }
    if (external_input_length < 0) invalid("config: external_input_length must be >= 0");
    if (external_timeout_ms < 1) invalid("config: external_timeout_ms must be >= 1");
}

int RunConfig::members_for(NeighbourhoodMethod method) const {
    return method == NeighbourhoodMethod::NF ? 1 : bootstraps;
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> list_items(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& text) {
    Int v{};
    const auto* end = text.data() + text.size();
    const auto r = std::from_chars(text.data(), end, v);
    if (text.empty() || r.ec != std::errc() || r.ptr != end) {
        fail(ErrorKind::ParseError, "config: '" + key + "' expects an integer, got '" + text + "'");
    }
    return v;
}

double to_double(const std::string& key, const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
        fail(ErrorKind::ParseError, "config: '" + key + "' expects a number, got '" + text + "'");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    fail(ErrorKind::ParseError, "config: '" + key + "' expects true/false, got '" + text + "'");
}

}  // namespace

RunConfig parse_config(std::istream& in) {
    RunConfig c;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"dataset", [&](auto&, auto& v) { c.dataset = v; }},
        {"gfm", [&](auto&, auto& v) { c.gfm = parse_gfm(v); }},
        {"methods", [&](auto&, auto& v) {
             c.methods.clear();
             for (const auto& item : list_items(v)) c.methods.push_back(parse_method(item));
         }},
        {"explainers", [&](auto&, auto& v) {
             c.explainers.clear();
             for (const auto& item : list_items(v)) c.explainers.push_back(parse_explainer(item));
         }},
        {"bootstraps", [&](auto& k, auto& v) { c.bootstraps = to_int<int>(k, v); }},
        {"block_length", [&](auto& k, auto& v) { c.block_length = to_int<int>(k, v); }},
        {"seed", [&](auto& k, auto& v) { c.seed = to_int<std::uint64_t>(k, v); }},
        {"runs", [&](auto& k, auto& v) { c.runs = to_int<int>(k, v); }},
        {"output_dir", [&](auto&, auto& v) { c.output_dir = v; }},
        {"horizon", [&](auto& k, auto& v) { c.horizon = to_int<int>(k, v); }},
        {"alpha", [&](auto& k, auto& v) { c.alpha = to_double(k, v); }},
        {"bonferroni_tests", [&](auto& k, auto& v) { c.bonferroni_tests = to_int<int>(k, v); }},
        {"sieve_order_max", [&](auto& k, auto& v) { c.sieve_order_max = to_int<int>(k, v); }},
        {"threads", [&](auto& k, auto& v) { c.threads = to_int<int>(k, v); }},
        {"mean_scale", [&](auto& k, auto& v) { c.mean_scale = to_bool(k, v); }},
        {"log_transform", [&](auto& k, auto& v) { c.log_transform = to_bool(k, v); }},
        {"gfm_fourier", [&](auto& k, auto& v) { c.gfm_fourier = to_bool(k, v); }},
        {"gfm_fourier_k", [&](auto& k, auto& v) { c.gfm_fourier_k = to_int<int>(k, v); }},
        {"mlp_hidden", [&](auto& k, auto& v) { c.mlp_hidden = to_int<int>(k, v); }},
        {"mlp_epochs", [&](auto& k, auto& v) { c.mlp_epochs = to_int<int>(k, v); }},
        {"external_command", [&](auto&, auto& v) { c.external_command = v; }},
        {"external_input_length",
         [&](auto& k, auto& v) { c.external_input_length = to_int<int>(k, v); }},
        {"external_timeout_ms", [&](auto& k, auto& v) { c.external_timeout_ms = to_int<int>(k, v); }},
        {"impute_missing", [&](auto& k, auto& v) { c.impute_missing = to_bool(k, v); }},
        {"write_series_artifacts",
         [&](auto& k, auto& v) { c.write_series_artifacts = to_bool(k, v); }},
        {"plots", [&](auto& k, auto& v) { c.plots = to_bool(k, v); }},
    };

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(ErrorKind::ParseError, "config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            fail(ErrorKind::ParseError, "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        it->second(key, value);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open config '" + path + "'");
    RunConfig c = parse_config(in);
    const std::filesystem::path dataset(c.dataset);
    if (!c.dataset.empty() && dataset.is_relative()) {
        c.dataset = (std::filesystem::path(path).parent_path() / dataset).lexically_normal().string();
    }
    return c;
}

std::string to_text(const RunConfig& c) {
    std::ostringstream out;
    auto join = [](const auto& items) {
        std::string s;
        for (const auto& i : items) s += (s.empty() ? "" : ",") + std::string(to_string(i));
        return s;
    };
    auto b = [](bool v) { return v ? "true" : "false"; };
    out << "dataset = " << c.dataset << '\n'
        << "gfm = " << to_string(c.gfm) << '\n'
        << "methods = " << join(c.methods) << '\n'
        << "explainers = " << join(c.explainers) << '\n'
        << "bootstraps = " << c.bootstraps << '\n'
        << "block_length = " << c.block_length << '\n'
        << "seed = " << c.seed << '\n'
        << "runs = " << c.runs << '\n'
        << "output_dir = " << c.output_dir << '\n'
        << "horizon = " << c.horizon << '\n'
        << "alpha = " << c.alpha << '\n'
        << "bonferroni_tests = " << c.bonferroni_tests << '\n'
        << "sieve_order_max = " << c.sieve_order_max << '\n'
        << "threads = " << c.threads << '\n'
        << "mean_scale = " << b(c.mean_scale) << '\n'
        << "log_transform = " << b(c.log_transform) << '\n'
        << "gfm_fourier = " << b(c.gfm_fourier) << '\n'
        << "gfm_fourier_k = " << c.gfm_fourier_k << '\n'
        << "mlp_hidden = " << c.mlp_hidden << '\n'
        << "mlp_epochs = " << c.mlp_epochs << '\n'
        << "external_command = " << c.external_command << '\n'
        << "external_input_length = " << c.external_input_length << '\n'
        << "external_timeout_ms = " << c.external_timeout_ms << '\n'
        << "impute_missing = " << b(c.impute_missing) << '\n'
        << "write_series_artifacts = " << b(c.write_series_artifacts) << '\n'
        << "plots = " << b(c.plots) << '\n';
    return out.str();
}

}  // namespace lomef
