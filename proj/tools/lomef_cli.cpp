#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lomef/config.hpp"
#include "lomef/dataset_io.hpp"
#include "lomef/pipeline.hpp"
#include "lomef/plot.hpp"
#include "lomef/report.hpp"
#include "lomef/synthetic.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kPipelineFailure = 2;

bool is_input_error(lomef::ErrorKind kind) {
    return kind == lomef::ErrorKind::ValidationError || kind == lomef::ErrorKind::ParseError;
}

int report_error(const lomef::Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return is_input_error(e.kind()) ? kInvalid : kPipelineFailure;
}

lomef::SeriesSet load_for(const lomef::RunConfig& config) {
    lomef::LoadOptions options;
    options.impute_missing = config.impute_missing;
    return lomef::load_dataset(config.dataset, options);
}

int cmd_validate(const std::string& path, bool impute) {
    lomef::LoadOptions options;
    options.impute_missing = impute;
    const auto set = lomef::load_dataset(path, options);
    const auto& first = set.series.front();
    std::cout << "ok: " << set.series.size() << " series of length " << first.length()
              << ", horizon " << first.horizon << '\n';
    return kOk;
}

int cmd_run(const std::string& config_path, const std::string& output_override) {
    auto config = lomef::load_config(config_path);
    if (!output_override.empty()) config.output_dir = output_override;
    config.check();
    const auto data = load_for(config);
    const auto result = lomef::run_pipeline(config, data);
    lomef::write_bundle(result, config.output_dir, config.write_series_artifacts || config.plots);
    lomef::write_text_file(config.output_dir + "/config.txt", lomef::to_text(config));
    if (config.plots) {
        for (const auto& s : result.series) lomef::emit_plots(s, config.output_dir + "/plots");
    }
    std::cout << "records: " << result.records.size() << ", series errors: "
              << result.errors.size() << ", significance level: "
              << lomef::format_number(result.significance_level) << '\n'
              << "output: " << config.output_dir << '\n';
    return kOk;
}

int cmd_stability(const std::string& config_path, int runs, const std::string& output_override) {
    auto config = lomef::load_config(config_path);
    if (!output_override.empty()) config.output_dir = output_override;
    if (runs > 0) config.runs = runs;
    config.check();
    const auto data = load_for(config);
    const auto result = lomef::run_stability(config, data, config.runs);
    lomef::write_stability(result, config.output_dir);
    std::cout << lomef::stability_csv(result.rows);
    return kOk;
}

int cmd_plot(const std::string& run_dir, const std::string& id, const std::string& output) {
    const std::string path = run_dir + "/series/" + id + ".json";
    std::ifstream in(path);
    if (!in) throw lomef::Error(lomef::ErrorKind::IoError, "no series artifact at '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw lomef::Error(lomef::ErrorKind::ParseError, path + ": " + e.what());
    }
    const auto series = lomef::series_from_artifact(j);
    for (const auto& p : lomef::emit_plots(series, output.empty() ? run_dir + "/plots" : output)) {
        std::cout << p << '\n';
    }
    return kOk;
}

int cmd_generate(const std::string& path, const lomef::SyntheticOptions& options) {
    const auto set = lomef::make_synthetic_set(options);
    std::ofstream out(path);
    if (!out) throw lomef::Error(lomef::ErrorKind::IoError, "cannot write '" + path + "'");
    lomef::write_dataset(out, set);
    std::cout << "wrote " << set.series.size() << " series to " << path << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local explanations for global forecasting models"};
    app.require_subcommand(1);

    std::string data_path;
    bool impute = false;
    auto* validate = app.add_subcommand("validate", "Check a dataset file");
    validate->add_option("data", data_path, "Dataset CSV")->required();
    validate->add_flag("--impute", impute, "Fill missing values before validating");

    std::string config_path;
    std::string output;
    auto* run = app.add_subcommand("run", "Run the explanation pipeline");
    run->add_option("config", config_path, "Run configuration")->required();
    run->add_option("-o,--output", output, "Output directory (overrides the config)");

    int runs = 0;
    auto* stability = app.add_subcommand("stability", "Repeat runs and report the IQR of errors");
    stability->add_option("config", config_path, "Run configuration")->required();
    stability->add_option("--runs", runs, "Number of runs")->required()->check(CLI::PositiveNumber);
    stability->add_option("-o,--output", output, "Output directory (overrides the config)");

    std::string run_dir;
    std::string series_id;
    auto* plot = app.add_subcommand("plot", "Draw the figures of one series from a run directory");
    plot->add_option("run-dir", run_dir, "Directory written by 'run'")->required();
    plot->add_option("--series", series_id, "Series id")->required();
    plot->add_option("-o,--output", output, "Directory for the SVG files");

    lomef::SyntheticOptions synth;
    std::uint64_t synth_seed = synth.seed.value;
    auto* generate = app.add_subcommand("generate", "Write a synthetic dataset");
    generate->add_option("path", data_path, "Output CSV")->required();
    generate->add_option("--series", synth.n_series, "Number of series");
    generate->add_option("--length", synth.length, "Series length");
    generate->add_option("--period", synth.period, "Seasonal period (0 = none)");
    generate->add_option("--horizon", synth.horizon, "Forecast horizon");
    generate->add_option("--seed", synth_seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*validate) return cmd_validate(data_path, impute);
        if (*run) return cmd_run(config_path, output);
        if (*stability) return cmd_stability(config_path, runs, output);
        if (*plot) return cmd_plot(run_dir, series_id, output);
        if (*generate) {
            synth.seed = lomef::RngSeed{synth_seed};
            return cmd_generate(data_path, synth);
        }
    } catch (const lomef::Error& e) {
        return report_error(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kPipelineFailure;
    }
    return kOk;
}
