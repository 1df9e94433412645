#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qot/detector.hpp"
#include "qot/eval.hpp"
#include "qot/forecaster.hpp"
#include "qot/plm.hpp"
#include "qot/telemetry.hpp"

namespace qot::csv {

/// First line of every emitted CSV: "# qot <version> config=<hash>".
std::string provenance_line(const std::string& config_hash);

void write_series(const std::string& path, const telemetry::BerSeries& series,
                  const std::string& config_hash);
telemetry::BerSeries read_series(const std::string& path);

void write_labels(const std::string& path, const std::vector<std::uint8_t>& labels,
                  const std::string& config_hash);
std::vector<std::uint8_t> read_labels(const std::string& path);

void write_events(const std::string& path, const std::vector<detector::DetectionEvent>& events,
                  const std::string& config_hash);

void write_train_report(const std::string& path, const forecaster::TrainReport& report,
                        const std::string& config_hash);

void write_metrics(const std::string& path, const std::vector<eval::MetricsRow>& rows,
                   std::size_t n_sims, detector::DetectorMode mode,
                   const std::string& config_hash);

/// Long-format companion (theta,mode,metric,value) for plotting.
void write_metrics_long(const std::string& path,
                        const std::vector<std::pair<detector::DetectorMode,
                                                    std::vector<eval::MetricsRow>>>& by_mode,
                        std::size_t n_sims, const std::string& config_hash);

std::string format_metrics(const std::vector<eval::MetricsRow>& rows, std::size_t n_sims,
                           detector::DetectorMode mode, const std::string& config_hash);

} // namespace qot::csv
