#include "qot/eval.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <thread>

#include "qot/error.hpp"

namespace qot::eval {

ConfusionCounts confusion(const std::vector<detector::DetectionEvent>& events,
                          const std::vector<std::uint8_t>& labels,
                          const plm::TickInterval& interval) {
    require(events.size() == interval.length(),
            "event count does not cover the detection interval");
    require(interval.end < labels.size(), "labels do not cover the detection interval");
    ConfusionCounts c;
    for (const auto& ev : events) {
        require(ev.fine_tick >= interval.begin && ev.fine_tick <= interval.end,
                "event outside the detection interval");
        const bool truth = labels[ev.fine_tick] != 0;
        const bool flagged = ev.verdict.is_anomaly;
        if (flagged && truth) ++c.tp;
        else if (flagged && !truth) ++c.fp;
        else if (!flagged && truth) ++c.fn;
        else ++c.tn;
    }
    return c;
}

PrfResult prf(const ConfusionCounts& c) {
    PrfResult r;
    const double tp = static_cast<double>(c.tp);
    if (c.tp + c.fp == 0) {
        r.precision = 0.0;
        r.degenerate = true;
    } else {
        r.precision = tp / static_cast<double>(c.tp + c.fp);
    }
    if (c.tp + c.fn == 0) {
        r.recall = 0.0;
        r.degenerate = true;
    } else {
        r.recall = tp / static_cast<double>(c.tp + c.fn);
    }
    if (r.precision + r.recall == 0.0) {
        r.f_measure = 0.0;
        r.degenerate = true;
    } else {
        r.f_measure = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    }
    return r;
}

MetricsRow metrics_row(double theta, const ConfusionCounts& c) {
    MetricsRow row;
    row.theta = theta;
    row.acc_anom = (c.tp + c.fn == 0)
                       ? 0.0
                       : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    row.acc_norm = (c.tn + c.fp == 0)
                       ? 1.0
                       : static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    const PrfResult p = prf(c);
    row.precision = p.precision;
    row.recall = p.recall;
    row.f_measure = p.f_measure;
    return row;
}

std::vector<MetricsRow> sweep(const plm::LabeledStream& stream,
                              const detector::ForecastFn& forecast,
                              detector::DetectorMode mode, const std::vector<double>& theta_grid,
                              double alpha_tail, std::size_t k,
                              const plm::TickInterval& interval) {
    require(!theta_grid.empty(), "theta grid must be non-empty");
    std::vector<double> grid = theta_grid;
    std::sort(grid.begin(), grid.end());

    // Forecasts depend on the coarse stream only, so passes over the same
    // stream reuse them (keyed by the window's position).
    detector::ForecastFn memoized = forecast;
    std::map<std::vector<double>, std::vector<double>> cache;
    if (mode == detector::DetectorMode::proposed) {
        require(static_cast<bool>(forecast), "proposed mode requires a forecaster");
        memoized = [forecast, &cache](const std::vector<double>& past) {
            auto it = cache.find(past);
            if (it != cache.end()) return it->second;
            auto pred = forecast(past);
            cache.emplace(past, pred);
            return pred;
        };
    }

    std::vector<MetricsRow> rows;
    rows.reserve(grid.size());
    for (double theta : grid) {
        stats::TestConfig cfg{theta, alpha_tail};
        const auto events = detector::run_stream(stream, memoized, mode, cfg, k, interval);
        rows.push_back(metrics_row(theta, confusion(events, stream.labels, interval)));
    }
    return rows;
}

std::vector<MetricsRow> monte_carlo(const MonteCarloConfig& cfg,
                                    const plm::LabeledStream& base_stream,
                                    const plm::TickInterval& interval,
                                    const detector::ForecastFn& forecast, std::size_t k) {
    require(cfg.n_sims >= 1, "monte carlo needs at least one simulation");
    require(!cfg.theta_grid.empty(), "theta grid must be non-empty");

    std::vector<std::vector<MetricsRow>> per_sim(cfg.n_sims);
    const std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);

    std::size_t next = 0;
    std::mutex next_mu;
    std::exception_ptr first_error;
    auto worker = [&]() {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lk(next_mu);
                if (next >= cfg.n_sims || first_error) return;
                i = next++;
            }
            try {
                const auto sim_stream = plm::inject_anomalies(base_stream, cfg.n_anomalies,
                                                              interval, cfg.base_seed + i);
                per_sim[i] = sweep(sim_stream, forecast, cfg.mode, cfg.theta_grid, cfg.alpha_tail,
                                   k, interval);
            } catch (...) {
                std::lock_guard<std::mutex> lk(next_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // Mean over a fixed index set: identical result for any thread schedule.
    std::vector<MetricsRow> mean = per_sim[0];
    for (std::size_t i = 1; i < cfg.n_sims; ++i) {
        require(per_sim[i].size() == mean.size(), "inconsistent sweep sizes");
        for (std::size_t r = 0; r < mean.size(); ++r) {
            mean[r].acc_anom += per_sim[i][r].acc_anom;
            mean[r].acc_norm += per_sim[i][r].acc_norm;
            mean[r].precision += per_sim[i][r].precision;
            mean[r].recall += per_sim[i][r].recall;
            mean[r].f_measure += per_sim[i][r].f_measure;
        }
    }
    const double n = static_cast<double>(cfg.n_sims);
    for (auto& row : mean) {
        row.acc_anom /= n;
        row.acc_norm /= n;
        row.precision /= n;
        row.recall /= n;
        row.f_measure /= n;
    }
    return mean;
}

ThetaSelection select_theta(const std::vector<MetricsRow>& rows, SelectionCriterion criterion) {
    require(!rows.empty(), "select_theta needs rows");
    ThetaSelection sel;
    for (const auto& row : rows) {
        if (criterion == SelectionCriterion::max_acc_anom_subject_to_zero_fp && row.acc_norm != 1.0) {
            continue;
        }
        const double score = criterion == SelectionCriterion::max_f_measure ? row.f_measure
                                                                            : row.acc_anom;
        const double best = criterion == SelectionCriterion::max_f_measure ? sel.row.f_measure
                                                                           : sel.row.acc_anom;
        if (!sel.feasible || score > best || (score == best && row.theta > sel.theta)) {
            sel.feasible = true;
            sel.theta = row.theta;
            sel.row = row;
        }
    }
    return sel;
}

} // namespace qot::eval
