#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qot/error.hpp"

namespace qot::telemetry {

/// One monitored BER observation. `t_s` is the offset in seconds from the
/// series origin; `ber` is dimensionless in (0, 0.5].
struct BerSample {
    std::int64_t t_s = 0;
    double ber = 0.0;
};

/// Regularly sampled BER stream. Consecutive timestamps differ by exactly
/// `resolution_s`.
struct BerSeries {
    std::int64_t resolution_s = 0;
    std::vector<BerSample> samples;

    std::size_t size() const { return samples.size(); }
    double value(std::size_t i) const { return samples[i].ber; }

    /// Checks all series invariants; throws qot::Error on violation.
    void validate() const;

    std::vector<double> values() const;
};

struct WindowConfig {
    std::size_t k = 50;
    std::size_t s = 70;
    std::size_t stride = 1;

    void validate() const {
        require(k >= 1 && s >= 1 && stride >= 1, "window config: k, s, stride must be >= 1");
    }
};

/// One sliding-window training/inference pair: `past` holds the k values
/// ending at the present sample x_t, `future` the s values after it.
/// `origin_index` is the index of x_t in the source series.
struct WindowPair {
    std::vector<double> past;
    std::vector<double> future;
    std::size_t origin_index = 0;
};

/// log10 min-max normalizer fitted on training windows.
struct Normalizer {
    double lo = 0.0;
    double hi = 1.0;

    double norm(double v) const;
    double denorm(double u) const;
};

std::vector<WindowPair> make_windows(const BerSeries& series, const WindowConfig& cfg);

std::pair<std::vector<WindowPair>, std::vector<WindowPair>>
split_train_test(const std::vector<WindowPair>& windows, std::size_t n_train, std::size_t n_test);

Normalizer fit_normalizer(const std::vector<WindowPair>& train_windows);

} // namespace qot::telemetry
