#include "qot/plm.hpp"

#include <algorithm>
#include <cmath>

#include "qot/rng.hpp"

namespace qot::plm {

double weibull_cdf(double t_h, const WeibullParams& p) {
    p.validate();
    require(t_h >= 0.0, "weibull_cdf requires t >= 0");
    const double f = -std::expm1(-std::pow(t_h / p.scale_lambda_h, p.shape_beta));
    // stays in [0, 1) even where expm1 saturates
    return std::min(f, std::nextafter(1.0, 0.0));
}

double osnr_at(double t_h, const LightpathConfig& lp, const WeibullParams& w) {
    lp.validate();
    return lp.osnr0_db - lp.dmax_db * weibull_cdf(t_h, w);
}

double ber_from_osnr(double osnr_db, const LightpathConfig& lp) {
    const double snr = lp.snr_scale * std::pow(10.0, osnr_db / 10.0);
    const double ber = 0.5 * std::erfc(std::sqrt(snr / 2.0));
    return std::clamp(ber, 1e-15, 0.5);
}

LabeledStream generate_stream(const LightpathConfig& lp, const WeibullParams& w,
                              const NoiseModel& noise, double duration_h, std::uint64_t seed) {
    lp.validate();
    w.validate();
    noise.validate();
    require(duration_h > 0.0, "duration must be positive");
    const double coarse_steps = duration_h / 1.5;
    require(std::abs(coarse_steps - std::round(coarse_steps)) < 1e-9,
            "duration_h must be a whole number of 1.5 h coarse steps");

    const std::size_t n_coarse = static_cast<std::size_t>(std::llround(coarse_steps)) + 1;
    const std::size_t n_fine = (n_coarse - 1) * kFinePerCoarse + 1;

    LabeledStream out;
    out.fine.resolution_s = kFineResolutionS;
    out.coarse.resolution_s = kCoarseResolutionS;
    out.fine.samples.reserve(n_fine);
    out.coarse.samples.reserve(n_coarse);
    out.labels.assign(n_fine, 0);

    Rng rng(seed);
    for (std::size_t i = 0; i < n_fine; ++i) {
        const std::int64_t t_s = static_cast<std::int64_t>(i) * kFineResolutionS;
        const double t_h = static_cast<double>(t_s) / 3600.0;
        double ber = ber_from_osnr(osnr_at(t_h, lp, w), lp);
        if (noise.sigma_log > 0.0) {
            ber *= std::exp(noise.sigma_log * rng.normal());
        }
        ber = std::clamp(ber, 1e-15, 0.5);
        out.fine.samples.push_back({t_s, ber});
        if (i % kFinePerCoarse == 0) {
            out.coarse.samples.push_back({t_s, ber});
        }
    }
    out.fine.validate();
    out.coarse.validate();
    return out;
}

LabeledStream inject_anomalies(const LabeledStream& stream, std::size_t n_anomalies,
                               const TickInterval& interval, std::uint64_t seed) {
    require(interval.begin <= interval.end, "interval begin must not exceed end");
    require(interval.end < stream.fine.size(), "interval lies outside the stream");
    require(n_anomalies <= interval.length(), "more anomalies than interval ticks");

    LabeledStream out = stream;
    if (n_anomalies == 0) return out;

    Rng rng(seed);
    const auto ticks = rng.sample_distinct(interval.begin, interval.end, n_anomalies);
    for (std::uint64_t tick : ticks) {
        const double m = rng.uniform(0.07, 0.15);
        const auto i = static_cast<std::size_t>(tick);
        out.fine.samples[i].ber = std::min(0.5, out.fine.samples[i].ber * (1.0 + m));
        out.labels[i] = 1;
        out.anomalies.push_back({i, m});
        if (i % kFinePerCoarse == 0) {
            out.coarse.samples[i / kFinePerCoarse].ber = out.fine.samples[i].ber;
        }
    }
    return out;
}

} // namespace qot::plm
