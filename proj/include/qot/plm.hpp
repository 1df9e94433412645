#pragma once

#include <cstdint>
#include <vector>

#include "qot/error.hpp"
#include "qot/telemetry.hpp"

namespace qot::plm {

inline constexpr std::int64_t kFineResolutionS = 300;     // 5 minutes
inline constexpr std::int64_t kCoarseResolutionS = 5400;  // 1.5 hours
inline constexpr std::size_t kFinePerCoarse = 18;

/// EDFA gain-degradation time law.
struct WeibullParams {
    double scale_lambda_h = 905.0;
    double shape_beta = 2.2;

    void validate() const {
        require(scale_lambda_h > 0.0 && shape_beta > 0.0, "weibull parameters must be positive");
    }
};

/// Static description of the monitored lightpath plus the OSNR-to-decision-SNR
/// mapping of the surrogate waterfall. n_spans/span_km describe the path; the
/// BER mapping uses osnr0_db, dmax_db and snr_scale.
struct LightpathConfig {
    int n_spans = 8;
    double span_km = 100.0;
    double osnr0_db = 16.7;   // degradation-free OSNR
    double dmax_db = 5.4;     // OSNR penalty at full degradation
    double snr_scale = 0.39;  // reference-bandwidth to symbol-rate ratio

    void validate() const {
        require(n_spans >= 1, "lightpath needs at least one span");
        require(osnr0_db > 0.0 && dmax_db > 0.0, "osnr0_db and dmax_db must be positive");
        require(snr_scale > 0.0, "snr_scale must be positive");
    }
};

/// Multiplicative lognormal measurement noise on BER.
struct NoiseModel {
    double sigma_log = 0.02;

    void validate() const { require(sigma_log >= 0.0, "sigma_log must be non-negative"); }
};

/// One injected anomaly: a fractional BER increase at a single fine tick.
struct AnomalySpec {
    std::size_t tick_index = 0;
    double magnitude = 0.0;  // in [0.07, 0.15]
};

/// Inclusive fine-tick range.
struct TickInterval {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - begin + 1; }
};

/// Paired telemetry: fine 5-minute stream (tested by the detector), coarse
/// 1.5-hour subsequence (forecaster input), and per-fine-tick anomaly labels.
struct LabeledStream {
    telemetry::BerSeries coarse;
    telemetry::BerSeries fine;
    std::vector<std::uint8_t> labels;
    std::vector<AnomalySpec> anomalies;
};

/// 1 - exp(-(t/lambda)^beta)
double weibull_cdf(double t_h, const WeibullParams& p);

/// osnr0_db - dmax_db * weibull_cdf(t)
double osnr_at(double t_h, const LightpathConfig& lp, const WeibullParams& w);

/// Coherent-detection waterfall: 0.5 * erfc(sqrt(snr/2)) with
/// snr = snr_scale * 10^(osnr_db/10), clamped to [1e-15, 0.5].
double ber_from_osnr(double osnr_db, const LightpathConfig& lp);

/// Deterministic synthetic stream for a fixed seed; labels all false.
LabeledStream generate_stream(const LightpathConfig& lp, const WeibullParams& w,
                              const NoiseModel& noise, double duration_h, std::uint64_t seed);

/// Places n_anomalies single-tick BER spikes uniformly in `interval`, each a
/// fractional increase drawn uniformly from [0.07, 0.15]. A spike landing on
/// a coarse tick updates the coarse sample too (same monitor).
LabeledStream inject_anomalies(const LabeledStream& stream, std::size_t n_anomalies,
                               const TickInterval& interval, std::uint64_t seed);

} // namespace qot::plm
