#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qot/eval.hpp"
#include "qot/forecaster.hpp"
#include "qot/plm.hpp"
#include "qot/stats.hpp"
#include "qot/telemetry.hpp"

namespace qot::cli {

struct ScenarioConfig {
    plm::WeibullParams weibull;
    plm::LightpathConfig lightpath;
    plm::NoiseModel noise;
    double duration_h = 1167.0;
    std::uint64_t seed = 123;
};

struct SplitConfig {
    std::size_t n_train = 560;
    std::size_t n_test = 100;
};

struct EvalConfig {
    std::size_t n_sims = 100;
    std::uint64_t base_seed = 1000;
    std::size_t n_anomalies = 12;
    std::vector<double> theta_grid_benchmark;
    std::vector<double> theta_grid_proposed;
    std::size_t jobs = 1;
};

struct PathsConfig {
    std::string out_dir = "out";
    std::string coarse_csv = "coarse.csv";
    std::string fine_csv = "fine.csv";
    std::string labels_csv = "labels.csv";
    std::string checkpoint = "model.ckpt";
    std::string events_csv = "events.csv";
    std::string report_csv = "report.csv";
    std::string report_long_csv = "report_long.csv";
    std::string train_report_csv = "train_report.csv";

    std::string resolve(const std::string& file) const;
};

/// Whole-experiment configuration; one JSON document, flag-overridable.
struct RunConfig {
    ScenarioConfig scenario;
    telemetry::WindowConfig window;
    SplitConfig split;
    forecaster::TrainConfig train;
    stats::TestConfig test;
    EvalConfig eval;
    PathsConfig paths;

    void validate() const;

    /// Fine-tick detection interval spanned by the test windows: the 18 ticks
    /// following each test-window present.
    plm::TickInterval detection_interval() const;
};

RunConfig default_config();

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string to_json(const RunConfig& cfg);

/// FNV-1a over the canonical JSON form; stamped into output CSVs.
std::string config_hash(const RunConfig& cfg);

} // namespace qot::cli
