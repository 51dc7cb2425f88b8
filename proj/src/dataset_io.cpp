#include "lomef/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

namespace lomef {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& message) {
    fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + message);
}

long parse_int(const std::string& text, std::size_t line, const char* what) {
    long v = 0;
    const auto* end = text.data() + text.size();
    const auto r = std::from_chars(text.data(), end, v);
    if (text.empty() || r.ec != std::errc() || r.ptr != end) {
        parse_fail(line, std::string("invalid ") + what + " '" + text + "'");
    }
    return v;
}

std::optional<double> parse_value(const std::string& text, std::size_t line) {
    if (text.empty() || text == "NA" || text == "na" || text == "NaN" || text == "nan") {
        return std::nullopt;
    }
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || !std::isfinite(v)) {
        parse_fail(line, "non-numeric value '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& text, std::size_t line) {
    std::string lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    if (lower == "true" || lower == "1" || lower == "yes") return true;
    if (lower == "false" || lower == "0" || lower == "no") return false;
    parse_fail(line, "invalid boolean '" + text + "'");
}

std::vector<int> parse_periods(const std::string& text, std::size_t line) {
    std::vector<int> out;
    if (text.empty()) return out;
    for (const auto& f : split_commas(text)) {
        if (f.empty()) continue;
        out.push_back(int(parse_int(f, line, "seasonal period")));
    }
    return out;
}

struct Cell {
    long index = 0;
    std::optional<double> value;
    std::size_t line = 0;
};

void impute(Vector& values, std::vector<bool>& missing, int season) {
    const Eigen::Index T = values.size();
    std::vector<double> all;
    for (Eigen::Index t = 0; t < T; ++t) {
        if (!missing[t]) all.push_back(values(t));
    }
    if (all.empty()) fail(ErrorKind::ValidationError, "series has no observed values to impute from");
    auto med = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    const double fallback = med(all);
    for (int pos = 0; pos < season; ++pos) {
        std::vector<double> same;
        for (Eigen::Index t = pos; t < T; t += season) {
            if (!missing[t]) same.push_back(values(t));
        }
        const double fill = same.empty() ? fallback : med(same);
        for (Eigen::Index t = pos; t < T; t += season) {
            if (missing[t]) values(t) = fill;
        }
    }
}

}  // namespace

SeriesSet parse_dataset(std::istream& in, const std::string& name, const LoadOptions& options) {
    std::map<std::string, std::pair<std::string, std::size_t>> header;
    std::vector<std::string> order;
    std::map<std::string, std::vector<Cell>> cells;

    std::string raw;
    std::size_t line_no = 0;
    bool column_header_allowed = true;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::string body = trim(std::string_view(line).substr(1));
            const auto eq = body.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = trim(std::string_view(body).substr(0, eq));
            const std::string value = trim(std::string_view(body).substr(eq + 1));
            auto it = header.find(key);
            if (it != header.end() && it->second.first != value) {
                fail(ErrorKind::ValidationError,
                     "line " + std::to_string(line_no) + ": header '" + key + "' conflicts with line " +
                         std::to_string(it->second.second));
            }
            header[key] = {value, line_no};
            continue;
        }
        const auto fields = split_commas(line);
        if (column_header_allowed && fields.size() == 3 && fields[0] == "series_id") {
            column_header_allowed = false;
            continue;
        }
        column_header_allowed = false;
        if (fields.size() != 3) parse_fail(line_no, "expected 3 fields, found " + std::to_string(fields.size()));
        if (fields[0].empty()) parse_fail(line_no, "empty series id");
        Cell c{parse_int(fields[1], line_no, "index"), parse_value(fields[2], line_no), line_no};
        if (!c.value && !options.impute_missing) parse_fail(line_no, "missing value");
        if (!cells.count(fields[0])) order.push_back(fields[0]);
        cells[fields[0]].push_back(c);
    }

    auto get = [&](const std::string& key) -> std::optional<std::pair<std::string, std::size_t>> {
        auto it = header.find(key);
        if (it == header.end()) return std::nullopt;
        return it->second;
    };

    SeriesSet set;
    set.name = name;
    if (auto n = get("name")) set.name = n->first;
    const auto horizon = get("horizon");
    if (!horizon) fail(ErrorKind::ParseError, "missing '# horizon=' header");
    const int h = int(parse_int(horizon->first, horizon->second, "horizon"));
    std::vector<int> periods;
    if (auto p = get("seasonal_periods")) periods = parse_periods(p->first, p->second);
    bool count_data = false;
    if (auto c = get("count_data")) count_data = parse_bool(c->first, c->second);
    std::optional<bool> non_negative;
    if (auto nn = get("non_negative")) non_negative = parse_bool(nn->first, nn->second);

    if (order.empty()) fail(ErrorKind::ValidationError, "dataset contains no series");
    for (const auto& id : order) {
        auto& list = cells[id];
        std::sort(list.begin(), list.end(),
                  [](const Cell& a, const Cell& b) { return a.index < b.index; });
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i].index != long(i + 1)) {
                if (i > 0 && list[i].index == list[i - 1].index) {
                    parse_fail(list[i].line, "duplicate index " + std::to_string(list[i].index) +
                                                 " for series " + id);
                }
                fail(ErrorKind::ValidationError,
                     "series " + id + ": indices must run 1..T without gaps");
            }
        }
        TimeSeries s;
        s.id = id;
        s.values.resize(Eigen::Index(list.size()));
        std::vector<bool> missing(list.size(), false);
        for (std::size_t i = 0; i < list.size(); ++i) {
            missing[i] = !list[i].value;
            s.values(Eigen::Index(i)) = list[i].value.value_or(0.0);
        }
        if (std::find(missing.begin(), missing.end(), true) != missing.end()) {
            impute(s.values, missing, periods.empty() ? 7 : periods.front());
        }
        s.seasonal_periods = periods;
        s.horizon = h;
        s.is_count_data = count_data;
        s.non_negative = non_negative.value_or(s.values.minCoeff() >= 0.0);
        set.series.push_back(std::move(s));
    }

    const auto violations = validate(set);
    if (!violations.empty()) {
        std::string message = "dataset failed validation:";
        for (const auto& v : violations) message += "\n  " + v.series_id + ": " + v.rule;
        fail(ErrorKind::ValidationError, message);
    }
    return set;
}

SeriesSet load_dataset(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open dataset '" + path + "'");
    std::string name = path;
    const auto slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    const auto dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return parse_dataset(in, name, options);
}

void write_dataset(std::ostream& out, const SeriesSet& set) {
    const TimeSeries* first = set.series.empty() ? nullptr : &set.series.front();
    if (!set.name.empty()) out << "# name=" << set.name << '\n';
    out << "# seasonal_periods=";
    if (first) {
        for (std::size_t i = 0; i < first->seasonal_periods.size(); ++i) {
            out << (i ? "," : "") << first->seasonal_periods[i];
        }
    }
    out << '\n';
    out << "# horizon=" << (first ? first->horizon : 1) << '\n';
    out << "# count_data=" << (first && first->is_count_data ? "true" : "false") << '\n';
    out << "series_id,index,value\n";
    out << std::setprecision(17);
    for (const auto& s : set.series) {
        for (Eigen::Index t = 0; t < s.values.size(); ++t) {
            out << s.id << ',' << (t + 1) << ',' << s.values(t) << '\n';
        }
    }
}

}  // namespace lomef
