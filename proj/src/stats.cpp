#include "qot/stats.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace qot::stats {

SummaryStats summarize(const std::vector<double>& values) {
    require(values.size() >= 2, "summarize requires at least 2 values");
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (double v : values) {
        ++n;
        const double d = v - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (v - mean);
    }
    return SummaryStats{n, mean, m2 / static_cast<double>(n - 1)};
}

namespace detail {

namespace {

// Lentz continued fraction for the incomplete beta (Numerical Recipes betacf).
double betacf(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-16;
    constexpr double fpmin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw Error("incomplete beta continued fraction did not converge");
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    require(a > 0.0 && b > 0.0, "incomplete beta requires a, b > 0");
    require(x >= 0.0 && x <= 1.0, "incomplete beta requires x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double inverse_regularized_incomplete_beta(double a, double b, double p) {
    require(p >= 0.0 && p <= 1.0, "inverse incomplete beta requires p in [0, 1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;

    double lo = 0.0, hi = 1.0;
    double x = 0.5;
    for (int it = 0; it < 200; ++it) {
        const double f = regularized_incomplete_beta(a, b, x) - p;
        if (f > 0.0) hi = x; else lo = x;
        // density of Beta(a,b) at x
        const double ln_pdf = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                              (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);
        const double pdf = std::exp(ln_pdf);
        double step = (pdf > 0.0) ? f / pdf : 0.0;
        double next = x - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) < 1e-15 * (1.0 + std::fabs(x))) return next;
        x = next;
    }
    return x;
}

} // namespace detail

double t_upper_quantile(double alpha_tail, std::size_t df) {
    require(df >= 1, "t quantile requires df >= 1");
    require(alpha_tail > 0.0 && alpha_tail < 0.5, "alpha_tail must be in (0, 0.5)");

    // every detection tick re-queries the same (alpha, df); cache idempotently
    static std::mutex cache_mu;
    static std::map<std::pair<double, std::size_t>, double> cache;
    const auto key = std::make_pair(alpha_tail, df);
    {
        std::lock_guard<std::mutex> lk(cache_mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    // P(T > q) = alpha  <=>  I_{df/(df+q^2)}(df/2, 1/2) = 2*alpha for q > 0.
    const double a = static_cast<double>(df) / 2.0;
    const double x = detail::inverse_regularized_incomplete_beta(a, 0.5, 2.0 * alpha_tail);
    const double q = std::sqrt(static_cast<double>(df) * (1.0 - x) / x);
    std::lock_guard<std::mutex> lk(cache_mu);
    cache.emplace(key, q);
    return q;
}

double exceedance_threshold(const SummaryStats& stats, const TestConfig& cfg) {
    cfg.validate();
    require(stats.n >= 2, "threshold requires n >= 2");
    require(stats.var >= 0.0, "variance must be non-negative");
    const double tq = t_upper_quantile(cfg.alpha_tail, stats.n - 1);
    return cfg.theta * stats.mean + tq * std::sqrt(stats.var / static_cast<double>(stats.n));
}

DetectionVerdict test_sample(double b_tau, const SummaryStats& stats, const TestConfig& cfg) {
    const double thr = exceedance_threshold(stats, cfg);
    DetectionVerdict v;
    v.tested_value = b_tau;
    v.threshold = thr;
    v.margin = b_tau - thr;
    v.is_anomaly = b_tau > thr;
    return v;
}

} // namespace qot::stats
