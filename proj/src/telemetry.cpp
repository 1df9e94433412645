#include "qot/telemetry.hpp"

#include <algorithm>
#include <cmath>

namespace qot::telemetry {

void BerSeries::validate() const {
    require(!samples.empty(), "series must be non-empty");
    require(resolution_s > 0, "resolution must be positive");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& smp = samples[i];
        require(smp.t_s >= 0, "timestamps must be non-negative");
        require(smp.ber > 0.0 && smp.ber <= 0.5, "ber out of range (0, 0.5]");
        if (i > 0) {
            require(smp.t_s - samples[i - 1].t_s == resolution_s,
                    "timestamps must advance by exactly the resolution");
        }
    }
}

std::vector<double> BerSeries::values() const {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& smp : samples) v.push_back(smp.ber);
    return v;
}

std::vector<WindowPair> make_windows(const BerSeries& series, const WindowConfig& cfg) {
    cfg.validate();
    const std::size_t n = series.size();
    const std::size_t span = cfg.k + cfg.s;
    if (n < span) throw Error("insufficient samples: need at least k + s");

    const std::size_t count = (n - span) / cfg.stride + 1;
    std::vector<WindowPair> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t start = i * cfg.stride;
        WindowPair w;
        w.past.reserve(cfg.k);
        w.future.reserve(cfg.s);
        for (std::size_t j = 0; j < cfg.k; ++j) w.past.push_back(series.value(start + j));
        for (std::size_t j = 0; j < cfg.s; ++j) w.future.push_back(series.value(start + cfg.k + j));
        w.origin_index = start + cfg.k - 1;
        out.push_back(std::move(w));
    }
    return out;
}

std::pair<std::vector<WindowPair>, std::vector<WindowPair>>
split_train_test(const std::vector<WindowPair>& windows, std::size_t n_train, std::size_t n_test) {
    require(n_train + n_test <= windows.size(), "split exceeds available windows");
    std::vector<WindowPair> train(windows.begin(), windows.begin() + n_train);
    std::vector<WindowPair> test(windows.begin() + n_train, windows.begin() + n_train + n_test);
    return {std::move(train), std::move(test)};
}

Normalizer fit_normalizer(const std::vector<WindowPair>& train_windows) {
    require(!train_windows.empty(), "cannot fit normalizer on empty window set");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    auto scan = [&](const std::vector<double>& vals) {
        for (double v : vals) {
            require(v > 0.0, "normalizer requires strictly positive values");
            const double lg = std::log10(v);
            lo = std::min(lo, lg);
            hi = std::max(hi, lg);
        }
    };
    for (const auto& w : train_windows) {
        scan(w.past);
        scan(w.future);
    }
    if (lo == hi) hi += 1e-6;  // degenerate constant series
    return Normalizer{lo, hi};
}

double Normalizer::norm(double v) const {
    require(v > 0.0, "norm requires positive value");
    return (std::log10(v) - lo) / (hi - lo);
}

double Normalizer::denorm(double u) const {
    return std::pow(10.0, lo + u * (hi - lo));
}

} // namespace qot::telemetry
