#include "lomef/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>

#include "lomef/report.hpp"

namespace lomef {

namespace {

constexpr double kWidth = 760;
constexpr double kLeft = 60;
constexpr double kRight = 170;  // legend column
constexpr double kTop = 36;
constexpr double kPanel = 220;
constexpr double kBottom = 30;

const char* const kColours[] = {"#222222", "#1f77b4", "#2ca02c", "#d62728",
                                "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(const Vector& v) {
        for (double x : v) {
            if (!std::isfinite(x)) continue;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    void finish() {
        if (!std::isfinite(lo)) lo = hi = 0.0;
        if (hi - lo < 1e-12) {
            lo -= 1.0;
            hi += 1.0;
        }
    }
    double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

struct Panel {
    double top = 0;
    double height = 0;
    Range x;
    Range y;

    double px(double v) const { return x.map(v, kLeft, kWidth - kRight); }
    double py(double v) const { return y.map(v, top + height, top); }
};

std::string header(double height, const std::string& title) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << fmt(height) << "\" viewBox=\"0 0 " << kWidth << ' ' << fmt(height) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text class=\"title\" x=\"" << kLeft << "\" y=\"22\" font-family=\"sans-serif\" "
        << "font-size=\"14\">" << escape(title) << "</text>\n";
    return out.str();
}

std::string axes(const Panel& p) {
    std::ostringstream out;
    const double x0 = kLeft;
    const double x1 = kWidth - kRight;
    const double y0 = p.top + p.height;
    out << "<line x1=\"" << x0 << "\" y1=\"" << fmt(y0) << "\" x2=\"" << x1 << "\" y2=\"" << fmt(y0)
        << "\" stroke=\"#888\"/>\n"
        << "<line x1=\"" << x0 << "\" y1=\"" << fmt(p.top) << "\" x2=\"" << x0 << "\" y2=\""
        << fmt(y0) << "\" stroke=\"#888\"/>\n";
    for (double v : {p.y.lo, p.y.hi}) {
        out << "<text x=\"" << fmt(x0 - 4) << "\" y=\"" << fmt(p.py(v) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
            << escape(format_number(v)) << "</text>\n";
    }
    return out.str();
}

std::string polyline(const Panel& p, const Vector& x, const Vector& y, const char* colour,
                     const std::string& label) {
    std::ostringstream out;
    out << "<polyline class=\"series\" data-label=\"" << escape(label) << "\" fill=\"none\" stroke=\""
        << colour << "\" stroke-width=\"1.5\" points=\"";
    for (Eigen::Index i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (!std::isfinite(y(i))) continue;
        out << fmt(p.px(x(i))) << ',' << fmt(p.py(y(i))) << ' ';
    }
    out << "\"/>\n";
    return out.str();
}

std::string legend(const std::vector<std::string>& labels, double top) {
    std::ostringstream out;
    out << "<g class=\"legend\">\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double y = top + 16.0 * double(i);
        out << "<g class=\"legend-entry\"><rect x=\"" << fmt(kWidth - kRight + 12) << "\" y=\""
            << fmt(y - 8) << "\" width=\"12\" height=\"3\" fill=\"" << kColours[i % 8] << "\"/>"
            << "<text x=\"" << fmt(kWidth - kRight + 30) << "\" y=\"" << fmt(y - 3)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(labels[i])
            << "</text></g>\n";
    }
    out << "</g>\n";
    return out.str();
}

Vector index_range(double first, Eigen::Index n) {
    return Vector::LinSpaced(n, first, first + double(n) - 1.0);
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::vector<PlotLine>& lines) {
    Panel p;
    p.top = kTop;
    p.height = kPanel;
    for (const auto& l : lines) {
        p.x.add(l.x);
        p.y.add(l.y);
    }
    p.x.finish();
    p.y.finish();
    std::string out = header(kTop + kPanel + kBottom, title) + axes(p);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        out += polyline(p, lines[i].x, lines[i].y, kColours[i % 8], lines[i].label);
        labels.push_back(lines[i].label);
    }
    out += legend(labels, kTop + 10);
    return out + "</svg>\n";
}

std::string forecast_svg(const SeriesResult& series, const ExplainerOutcome& outcome) {
    const Eigen::Index T = series.train.size();
    const Eigen::Index h = series.test.size();
    const Eigen::Index shown = std::min<Eigen::Index>(T, std::max<Eigen::Index>(3 * h, 24));
    Vector actual(shown + h);
    actual << series.train.tail(shown), series.test;
    const Vector fx = index_range(double(T + 1), h);
    std::vector<PlotLine> lines = {
        {"actual", index_range(double(T - shown + 1), shown + h), actual},
        {"global", fx, series.global_forecast},
        {"local", fx, outcome.local_forecast},
        {"explainer", fx, outcome.explainer.forecast},
    };
    return line_chart_svg(series.id + ": " + std::string(to_string(outcome.kind)) + " (" +
                              std::string(to_string(outcome.method)) + ") forecasts",
                          lines);
}

std::string decomposition_svg(const std::string& title, const ExplanationPayload& payload) {
    const std::size_t panels = std::max<std::size_t>(1, payload.tracks.size());
    const double panel_h = 120;
    const double gap = 24;
    std::string out = header(kTop + double(panels) * (panel_h + gap) + kBottom, title);
    for (std::size_t i = 0; i < payload.tracks.size(); ++i) {
        const auto& t = payload.tracks[i];
        Panel p;
        p.top = kTop + double(i) * (panel_h + gap) + 12;
        p.height = panel_h;
        const Vector x = index_range(1.0, t.mean.size());
        p.x.add(x);
        p.y.add(t.mean);
        p.y.add(t.min);
        p.y.add(t.max);
        p.x.finish();
        p.y.finish();
        std::ostringstream g;
        g << "<g class=\"panel\" data-component=\"" << escape(t.name) << "\">\n"
          << "<text x=\"" << kLeft << "\" y=\"" << fmt(p.top - 3)
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(t.name) << "</text>\n"
          << axes(p);
        if (t.min != t.max) {
            g << "<polygon class=\"envelope\" fill=\"#1f77b4\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
            for (Eigen::Index k = 0; k < t.max.size(); ++k) g << fmt(p.px(x(k))) << ',' << fmt(p.py(t.max(k))) << ' ';
            for (Eigen::Index k = t.min.size() - 1; k >= 0; --k) g << fmt(p.px(x(k))) << ',' << fmt(p.py(t.min(k))) << ' ';
            g << "\"/>\n";
        }
        g << polyline(p, x, t.mean, kColours[1], t.name) << "</g>\n";
        out += g.str();
    }
    return out + "</svg>\n";
}

namespace {

std::string bar_chart(const std::string& title,
                      const std::vector<std::pair<std::string, double>>& bars) {
    Panel p;
    p.top = kTop + 10;
    p.height = kPanel;
    p.y.lo = 0.0;
    p.y.hi = 0.0;
    for (const auto& b : bars) {
        p.y.lo = std::min(p.y.lo, b.second);
        p.y.hi = std::max(p.y.hi, b.second);
    }
    p.y.finish();
    std::string out = header(kTop + kPanel + 70, title);
    const double span = kWidth - kRight - kLeft;
    const double slot = bars.empty() ? span : span / double(bars.size());
    const double zero = p.py(0.0);
    out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(zero) + "\" x2=\"" + fmt(kWidth - kRight) +
           "\" y2=\"" + fmt(zero) + "\" stroke=\"#888\"/>\n";
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const double x = kLeft + slot * double(i) + 0.15 * slot;
        const double y = p.py(bars[i].second);
        const double top = std::min(y, zero);
        const double height = std::max(std::abs(zero - y), 0.5);
        out += "<rect class=\"bar\" data-label=\"" + escape(bars[i].first) + "\" x=\"" + fmt(x) +
               "\" y=\"" + fmt(top) + "\" width=\"" + fmt(0.7 * slot) + "\" height=\"" + fmt(height) +
               "\" fill=\"" + (bars[i].second >= 0 ? "#2ca02c" : "#d62728") + "\"/>\n";
        out += "<text x=\"" + fmt(x + 0.35 * slot) + "\" y=\"" + fmt(p.top + p.height + 16) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
               escape(bars[i].first) + "</text>\n";
    }
    return out + "</svg>\n";
}

}  // namespace

std::string coefficient_svg(const std::string& title, const ExplanationPayload& payload) {
    std::vector<std::pair<std::string, double>> bars;
    for (const auto& c : payload.coefficients) {
        if (c.significant) bars.emplace_back(c.name, c.value);
    }
    return bar_chart(title, bars);
}

std::string form_histogram_svg(const std::string& title, const ExplanationPayload& payload) {
    std::vector<std::pair<std::string, double>> bars;
    for (const auto& [form, count] : payload.trend_forms) bars.emplace_back("trend " + form, count);
    for (const auto& [form, count] : payload.seasonal_forms) {
        bars.emplace_back("seasonal " + form, count);
    }
    return bar_chart(title, bars);
}

std::vector<std::string> emit_plots(const SeriesResult& series, const std::string& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) fail(ErrorKind::IoError, "cannot create directory '" + directory + "'");
    std::vector<std::string> written;
    auto put = [&](const std::string& name, const std::string& content) {
        const std::string path = directory + "/" + name;
        write_text_file(path, content);
        written.push_back(path);
    };

    for (const auto& o : series.outcomes) {
        const std::string stem = series.id + "_" + std::string(to_string(o.method)) + "_" +
                                 std::string(to_string(o.kind));
        put(stem + "_forecast.svg", forecast_svg(series, o));

        std::ostringstream csv;
        csv << "step,actual,global,local,explainer\n";
        for (Eigen::Index k = 0; k < series.test.size(); ++k) {
            csv << (k + 1) << ',' << format_number(series.test(k)) << ','
                << format_number(series.global_forecast(k)) << ','
                << format_number(o.local_forecast(k)) << ','
                << format_number(o.explainer.forecast(k)) << '\n';
        }
        put(stem + "_forecast.csv", csv.str());

        const auto& payload = o.explainer.payload;
        if (!payload.tracks.empty()) {
            put(stem + "_decomposition.svg",
                decomposition_svg(series.id + ": " + std::string(to_string(o.kind)) +
                                      " components (training set)",
                                  payload));
            std::ostringstream d;
            d << "component,t,mean,min,max\n";
            for (const auto& t : payload.tracks) {
                for (Eigen::Index i = 0; i < t.mean.size(); ++i) {
                    d << t.name << ',' << (i + 1) << ',' << format_number(t.mean(i)) << ','
                      << format_number(t.min(i)) << ',' << format_number(t.max(i)) << '\n';
                }
            }
            put(stem + "_decomposition.csv", d.str());
        }
        if (!payload.coefficients.empty()) {
            put(stem + "_coefficients.svg",
                coefficient_svg(series.id + ": significant coefficients", payload));
            std::ostringstream c;
            c << "name,value,std_error,significant\n";
            for (const auto& row : payload.coefficients) {
                c << row.name << ',' << format_number(row.value) << ','
                  << format_number(row.std_error) << ',' << (row.significant ? "true" : "false")
                  << '\n';
            }
            put(stem + "_coefficients.csv", c.str());
        }
        if (!payload.trend_forms.empty()) {
            put(stem + "_forms.svg", form_histogram_svg(series.id + ": chosen ETS forms", payload));
        }
    }
    return written;
}

}  // namespace lomef
