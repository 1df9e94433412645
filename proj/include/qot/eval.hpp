#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qot/detector.hpp"
#include "qot/plm.hpp"

namespace qot::eval {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
};

struct PrfResult {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    bool degenerate = false;  // set when any of the zero-denominator fallbacks fired
};

/// Per-theta evaluation record. acc_anom = tp/(tp+fn) (equals recall),
/// acc_norm = tn/(tn+fp).
struct MetricsRow {
    double theta = 0.0;
    double acc_anom = 0.0;
    double acc_norm = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

struct MonteCarloConfig {
    std::size_t n_sims = 100;
    std::uint64_t base_seed = 1000;
    std::vector<double> theta_grid;
    detector::DetectorMode mode = detector::DetectorMode::proposed;
    std::size_t n_anomalies = 12;
    double alpha_tail = 0.01;
    std::size_t jobs = 1;
};

enum class SelectionCriterion {
    max_acc_anom_subject_to_zero_fp,
    max_f_measure,
};

struct ThetaSelection {
    bool feasible = false;
    double theta = 0.0;
    MetricsRow row;
};

/// Per-tick comparison of detector verdicts with ground-truth labels over the
/// detection interval.
ConfusionCounts confusion(const std::vector<detector::DetectionEvent>& events,
                          const std::vector<std::uint8_t>& labels,
                          const plm::TickInterval& interval);

PrfResult prf(const ConfusionCounts& c);

MetricsRow metrics_row(double theta, const ConfusionCounts& c);

/// One detection pass per theta over the same stream; rows ordered by theta.
/// Forecasts are memoized across passes (they do not depend on theta).
std::vector<MetricsRow> sweep(const plm::LabeledStream& stream,
                              const detector::ForecastFn& forecast,
                              detector::DetectorMode mode, const std::vector<double>& theta_grid,
                              double alpha_tail, std::size_t k,
                              const plm::TickInterval& interval);

/// Re-draws the anomaly set with seed base_seed + i per simulation, sweeps the
/// grid, and averages every metric per theta. Simulations are independent and
/// run on `jobs` threads; the aggregate is order-independent.
std::vector<MetricsRow> monte_carlo(const MonteCarloConfig& cfg,
                                    const plm::LabeledStream& base_stream,
                                    const plm::TickInterval& interval,
                                    const detector::ForecastFn& forecast, std::size_t k);

/// Picks the best row under the criterion; ties break toward larger theta.
/// Zero-fp feasibility means acc_norm == 1 exactly on the evaluated stream.
ThetaSelection select_theta(const std::vector<MetricsRow>& rows, SelectionCriterion criterion);

} // namespace qot::eval
