#pragma once

#include <cstddef>

#include "qot/error.hpp"

#include <vector>

namespace qot::stats {

/// Size, mean and unbiased variance of a reference sample B.
struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double var = 0.0;  // unbiased (n-1 divisor)
};

struct TestConfig {
    double theta = 1.0;        // scaling parameter on the mean
    double alpha_tail = 0.01;  // one-sided upper tail probability

    void validate() const {
        require(theta > 0.0, "theta must be positive");
        require(alpha_tail > 0.0 && alpha_tail < 0.5, "alpha_tail must be in (0, 0.5)");
    }
};

/// Outcome of testing one monitored value against the reference window.
struct DetectionVerdict {
    double tested_value = 0.0;
    double threshold = 0.0;
    bool is_anomaly = false;
    double margin = 0.0;  // tested_value - threshold; anomaly iff > 0
};

/// Mean and unbiased variance via Welford's single pass. Requires n >= 2.
SummaryStats summarize(const std::vector<double>& values);

/// Upper-tail Student's t quantile: the q with P(T_df > q) = alpha_tail.
/// Inverted from the regularized incomplete beta function; absolute accuracy
/// is well inside 1e-6 over the df range used here.
double t_upper_quantile(double alpha_tail, std::size_t df);

/// theta * mean + t_{alpha,n-1} * sqrt(var / n)
double exceedance_threshold(const SummaryStats& stats, const TestConfig& cfg);

/// Strict exceedance test of b_tau against exceedance_threshold.
DetectionVerdict test_sample(double b_tau, const SummaryStats& stats, const TestConfig& cfg);

namespace detail {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

/// Inverse of I_x(a, b) in x for fixed (a, b); Newton with bisection guards.
double inverse_regularized_incomplete_beta(double a, double b, double p);

} // namespace detail

} // namespace qot::stats
