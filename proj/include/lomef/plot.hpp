#pragma once

#include <string>
#include <vector>

#include "lomef/explainers.hpp"
#include "lomef/pipeline.hpp"

namespace lomef {

struct PlotLine {
    std::string label;
    Vector x;
    Vector y;
};

/// Line chart with a legend entry per line.
std::string line_chart_svg(const std::string& title, const std::vector<PlotLine>& lines);

/// Actuals (training tail + horizon) against global, local and explainer forecasts.
std::string forecast_svg(const SeriesResult& series, const ExplainerOutcome& outcome);

/// Stacked panels, one per component track (mean line, min/max envelope).
std::string decomposition_svg(const std::string& title, const ExplanationPayload& payload);

/// One bar per significant coefficient.
std::string coefficient_svg(const std::string& title, const ExplanationPayload& payload);

/// Chosen-form histogram (trend and seasonal forms).
std::string form_histogram_svg(const std::string& title, const ExplanationPayload& payload);

/// Writes every figure for a series plus the CSV data behind it. Returns the
/// paths written.
std::vector<std::string> emit_plots(const SeriesResult& series, const std::string& directory);

}  // namespace lomef
