#include "qot/detector.hpp"

#include <algorithm>

#include "qot/error.hpp"

namespace qot::detector {

const char* mode_name(DetectorMode mode) {
    return mode == DetectorMode::proposed ? "proposed" : "benchmark";
}

std::vector<double> assemble_b(const std::vector<double>& past,
                               const std::optional<std::vector<double>>& predictions,
                               DetectorMode mode) {
    if (mode == DetectorMode::benchmark) return past;
    require(predictions.has_value() && !predictions->empty(),
            "proposed mode requires predictions");
    std::vector<double> b;
    b.reserve(past.size() + predictions->size());
    b.insert(b.end(), past.begin(), past.end());
    b.insert(b.end(), predictions->begin(), predictions->end());
    return b;
}

namespace {

void refresh(DetectorState& st, const ForecastFn& forecast, DetectorMode mode) {
    if (mode == DetectorMode::proposed) {
        require(static_cast<bool>(forecast), "proposed mode requires a forecaster");
        st.predictions = forecast(st.past);
        st.stats_cache = stats::summarize(assemble_b(st.past, st.predictions, mode));
    } else {
        st.predictions.clear();
        st.stats_cache = stats::summarize(assemble_b(st.past, std::nullopt, mode));
    }
}

} // namespace

DetectorState init_state(const std::vector<double>& past_k, const ForecastFn& forecast,
                         DetectorMode mode) {
    require(!past_k.empty(), "detector state needs a past window");
    DetectorState st;
    st.past = past_k;
    refresh(st, forecast, mode);
    return st;
}

DetectorState advance(const DetectorState& state, double new_coarse_sample,
                      const ForecastFn& forecast, DetectorMode mode) {
    require(!state.past.empty(), "advance on uninitialized state");
    DetectorState st;
    st.past.reserve(state.past.size());
    st.past.assign(state.past.begin() + 1, state.past.end());
    st.past.push_back(new_coarse_sample);
    refresh(st, forecast, mode);
    return st;
}

std::vector<DetectionEvent> run_stream(const plm::LabeledStream& stream,
                                       const ForecastFn& forecast, DetectorMode mode,
                                       const stats::TestConfig& cfg, std::size_t k,
                                       const plm::TickInterval& interval) {
    cfg.validate();
    require(interval.begin <= interval.end, "empty detection interval");
    require(interval.end < stream.fine.size(), "detection interval beyond stream end");

    const std::size_t per = plm::kFinePerCoarse;
    const std::size_t c_first = interval.begin / per;
    const std::size_t c_last = interval.end / per;
    require(c_first + 1 >= k, "insufficient warm-up history before the detection interval");
    require(c_last < stream.coarse.size(), "coarse series too short for the interval");

    std::vector<double> past(k);
    for (std::size_t i = 0; i < k; ++i) {
        past[i] = stream.coarse.samples[c_first + 1 - k + i].ber;
    }
    DetectorState state = init_state(past, forecast, mode);

    std::vector<DetectionEvent> events;
    events.reserve(interval.length());
    for (std::size_t c = c_first; c <= c_last; ++c) {
        if (c > c_first) {
            state = advance(state, stream.coarse.samples[c].ber, forecast, mode);
        }
        const std::size_t lo = std::max(interval.begin, c * per);
        const std::size_t hi = std::min(interval.end, c * per + per - 1);
        for (std::size_t tick = lo; tick <= hi; ++tick) {
            DetectionEvent ev;
            ev.fine_tick = tick;
            ev.t_s = stream.fine.samples[tick].t_s;
            ev.verdict = stats::test_sample(stream.fine.samples[tick].ber, state.stats_cache, cfg);
            ev.mode = mode;
            events.push_back(ev);
        }
    }
    return events;
}

} // namespace qot::detector
