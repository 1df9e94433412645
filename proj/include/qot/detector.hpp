#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qot/plm.hpp"
#include "qot/stats.hpp"
#include "qot/telemetry.hpp"

namespace qot::detector {

enum class DetectorMode {
    proposed,   // B = [x', x] -- past window plus forecast horizon
    benchmark,  // B = [x'] -- past window only
};

const char* mode_name(DetectorMode mode);

/// Maps a raw past window to an s-step raw forecast (wraps forecaster::predict;
/// tests substitute oracles).
using ForecastFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// Sliding monitoring window. `past` holds the latest k coarse samples;
/// `predictions` is refreshed once per coarse tick in proposed mode.
struct DetectorState {
    std::vector<double> past;
    std::vector<double> predictions;
    stats::SummaryStats stats_cache;
};

struct DetectionEvent {
    std::size_t fine_tick = 0;
    std::int64_t t_s = 0;
    stats::DetectionVerdict verdict;
    DetectorMode mode = DetectorMode::benchmark;
};

/// Concatenates [past || predictions] in proposed mode, passes past through in
/// benchmark mode.
std::vector<double> assemble_b(const std::vector<double>& past,
                               const std::optional<std::vector<double>>& predictions,
                               DetectorMode mode);

/// Builds the state from the k coarse samples ending at (and including) the
/// present sample.
DetectorState init_state(const std::vector<double>& past_k, const ForecastFn& forecast,
                         DetectorMode mode);

/// Slides the window one coarse step: drops the oldest sample, appends the new
/// one, refreshes predictions (proposed mode) and the cached stats.
DetectorState advance(const DetectorState& state, double new_coarse_sample,
                      const ForecastFn& forecast, DetectorMode mode);

/// Runs online detection over every fine tick of `interval`, advancing the
/// coarse window as samples arrive. Ticks between coarse arrivals share frozen
/// stats. One event per tick, in time order.
std::vector<DetectionEvent> run_stream(const plm::LabeledStream& stream,
                                       const ForecastFn& forecast, DetectorMode mode,
                                       const stats::TestConfig& cfg, std::size_t k,
                                       const plm::TickInterval& interval);

} // namespace qot::detector
