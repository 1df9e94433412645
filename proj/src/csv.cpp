#include "qot/csv.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qot/error.hpp"
#include "qot/version.hpp"

namespace qot::csv {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// thetas are human-chosen grid values; 6 significant digits identify them
std::string fmt_theta(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    require(os.good(), "cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    require(is.good(), "cannot open for reading: " + path);
    return is;
}

bool next_data_line(std::ifstream& is, std::string& line) {
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '#') return true;
    }
    return false;
}

} // namespace

std::string provenance_line(const std::string& config_hash) {
    return std::string("# qot ") + kVersion + " config=" + config_hash;
}

void write_series(const std::string& path, const telemetry::BerSeries& series,
                  const std::string& config_hash) {
    auto os = open_out(path);
    os << provenance_line(config_hash) << "\n";
    os << "t_s,ber\n";
    for (const auto& smp : series.samples) {
        os << smp.t_s << "," << fmt_double(smp.ber) << "\n";
    }
    require(os.good(), "write failed: " + path);
}

telemetry::BerSeries read_series(const std::string& path) {
    auto is = open_in(path);
    std::string line;
    require(next_data_line(is, line), "empty series file: " + path);
    require(line == "t_s,ber", "unexpected series header in " + path + ": " + line);
    telemetry::BerSeries series;
    while (next_data_line(is, line)) {
        std::int64_t t = 0;
        double ber = 0.0;
        require(std::sscanf(line.c_str(), "%" SCNd64 ",%lf", &t, &ber) == 2,
                "bad series row in " + path + ": " + line);
        series.samples.push_back({t, ber});
    }
    require(series.samples.size() >= 2, "series needs at least two samples: " + path);
    series.resolution_s = series.samples[1].t_s - series.samples[0].t_s;
    series.validate();
    return series;
}

void write_labels(const std::string& path, const std::vector<std::uint8_t>& labels,
                  const std::string& config_hash) {
    auto os = open_out(path);
    os << provenance_line(config_hash) << "\n";
    os << "tick,is_anomaly\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        os << i << "," << (labels[i] ? 1 : 0) << "\n";
    }
    require(os.good(), "write failed: " + path);
}

std::vector<std::uint8_t> read_labels(const std::string& path) {
    auto is = open_in(path);
    std::string line;
    require(next_data_line(is, line), "empty labels file: " + path);
    require(line == "tick,is_anomaly", "unexpected labels header in " + path);
    std::vector<std::uint8_t> labels;
    while (next_data_line(is, line)) {
        std::uint64_t tick = 0;
        int flag = 0;
        require(std::sscanf(line.c_str(), "%" SCNu64 ",%d", &tick, &flag) == 2,
                "bad labels row in " + path + ": " + line);
        require(tick == labels.size(), "labels must be dense and ordered: " + path);
        labels.push_back(flag ? 1 : 0);
    }
    return labels;
}

void write_events(const std::string& path, const std::vector<detector::DetectionEvent>& events,
                  const std::string& config_hash) {
    auto os = open_out(path);
    os << provenance_line(config_hash) << "\n";
    os << "fine_tick,t_s,b_tau,threshold,margin,is_anomaly,mode\n";
    for (const auto& ev : events) {
        os << ev.fine_tick << "," << ev.t_s << "," << fmt_double(ev.verdict.tested_value) << ","
           << fmt_double(ev.verdict.threshold) << "," << fmt_double(ev.verdict.margin) << ","
           << (ev.verdict.is_anomaly ? 1 : 0) << "," << detector::mode_name(ev.mode) << "\n";
    }
    require(os.good(), "write failed: " + path);
}

void write_train_report(const std::string& path, const forecaster::TrainReport& report,
                        const std::string& config_hash) {
    auto os = open_out(path);
    os << provenance_line(config_hash) << "\n";
    os << "epoch,train_loss,val_loss\n";
    for (std::size_t e = 0; e < report.train_loss.size(); ++e) {
        os << e << "," << fmt_double(report.train_loss[e]) << ","
           << fmt_double(report.val_loss[e]) << "\n";
    }
    require(os.good(), "write failed: " + path);
}

std::string format_metrics(const std::vector<eval::MetricsRow>& rows, std::size_t n_sims,
                           detector::DetectorMode mode, const std::string& config_hash) {
    std::ostringstream os;
    os << provenance_line(config_hash) << "\n";
    os << "theta,acc_anom,acc_norm,precision,recall,f_measure,n_sims,mode\n";
    for (const auto& r : rows) {
        os << fmt_theta(r.theta) << "," << fmt_double(r.acc_anom) << ","
           << fmt_double(r.acc_norm) << "," << fmt_double(r.precision) << ","
           << fmt_double(r.recall) << "," << fmt_double(r.f_measure) << "," << n_sims << ","
           << detector::mode_name(mode) << "\n";
    }
    return os.str();
}

void write_metrics(const std::string& path, const std::vector<eval::MetricsRow>& rows,
                   std::size_t n_sims, detector::DetectorMode mode,
                   const std::string& config_hash) {
    auto os = open_out(path);
    os << format_metrics(rows, n_sims, mode, config_hash);
    require(os.good(), "write failed: " + path);
}

void write_metrics_long(const std::string& path,
                        const std::vector<std::pair<detector::DetectorMode,
                                                    std::vector<eval::MetricsRow>>>& by_mode,
                        std::size_t n_sims, const std::string& config_hash) {
    auto os = open_out(path);
    os << provenance_line(config_hash) << "\n";
    os << "theta,mode,metric,value,n_sims\n";
    for (const auto& [mode, rows] : by_mode) {
        for (const auto& r : rows) {
            const std::pair<const char*, double> kv[] = {
                {"acc_anom", r.acc_anom},   {"acc_norm", r.acc_norm}, {"precision", r.precision},
                {"recall", r.recall},       {"f_measure", r.f_measure},
            };
            for (const auto& [name, value] : kv) {
                os << fmt_theta(r.theta) << "," << detector::mode_name(mode) << "," << name << ","
                   << fmt_double(value) << "," << n_sims << "\n";
            }
        }
    }
    require(os.good(), "write failed: " + path);
}

} // namespace qot::csv
