#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qot/stats.hpp"

using namespace qot;
using namespace qot::stats;

TEST_CASE("summarize constants and hand values") {
    const auto c = summarize({2.5, 2.5, 2.5});
    CHECK(c.mean == doctest::Approx(2.5));
    CHECK(c.var == doctest::Approx(0.0));

    const auto s = summarize({1, 2, 3, 4});
    CHECK(s.n == 4);
    CHECK(s.mean == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(s.var == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("summarize matches two-pass oracle on random data") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(1e-5, 1e-2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(2 + rng() % 200);
        for (auto& x : v) x = dist(rng);
        const auto s = summarize(v);
        double mean = 0.0, var = 0.0;
        oracles::two_pass_stats(v, mean, var);
        CHECK(std::fabs(s.mean - mean) <= 1e-12 * std::fabs(mean));
        CHECK(std::fabs(s.var - var) <= 1e-12 * std::max(var, 1e-30));
    }
}

TEST_CASE("summarize needs two values") {
    CHECK_THROWS_AS(summarize({1.0}), Error);
}

TEST_CASE("t quantile: Cauchy closed form at df=1") {
    const double expected = std::tan(M_PI * (0.5 - 0.01));
    CHECK(std::fabs(t_upper_quantile(0.01, 1) - expected) < 1e-9);
}

TEST_CASE("t quantile matches numeric integration oracle") {
    for (std::size_t df : {2ul, 5ul, 10ul, 30ul, 49ul, 119ul, 200ul}) {
        for (double alpha : {0.1, 0.025, 0.01, 0.005}) {
            const double q = t_upper_quantile(alpha, df);
            const double oracle = oracles::t_upper_quantile_by_integration(alpha, double(df));
            INFO("df=", df, " alpha=", alpha, " q=", q, " oracle=", oracle);
            CHECK(std::fabs(q - oracle) < 1e-6);
        }
    }
}

TEST_CASE("t quantile approaches the normal quantile for huge df") {
    CHECK(std::fabs(t_upper_quantile(0.01, 1000000) - 2.3263478740) < 1e-3);
}

TEST_CASE("t quantile monotone in df and alpha") {
    double prev = t_upper_quantile(0.01, 1);
    for (std::size_t df = 2; df <= 300; ++df) {
        const double q = t_upper_quantile(0.01, df);
        CHECK(q < prev);
        prev = q;
    }
    prev = t_upper_quantile(0.001, 30);
    for (double alpha : {0.005, 0.01, 0.05, 0.1, 0.25}) {
        const double q = t_upper_quantile(alpha, 30);
        CHECK(q < prev);
        prev = q;
    }
}

TEST_CASE("t quantile rejects bad inputs") {
    CHECK_THROWS_AS(t_upper_quantile(0.0, 10), Error);
    CHECK_THROWS_AS(t_upper_quantile(0.6, 10), Error);
    CHECK_THROWS_AS(t_upper_quantile(0.01, 0), Error);
}

TEST_CASE("exceedance threshold: degenerate variance reduces to theta*mean") {
    SummaryStats st{120, 1e-4, 0.0};
    CHECK(exceedance_threshold(st, TestConfig{1.0, 0.01}) == doctest::Approx(1e-4).epsilon(1e-12));
}

TEST_CASE("exceedance threshold: composed value at n=120") {
    SummaryStats st{120, 1e-4, 1e-10};
    const double thr = exceedance_threshold(st, TestConfig{1.27, 0.01});
    // 1.27e-4 + t_{0.01,119} * sqrt(1e-10/120), quantile from the integration oracle
    const double tq = oracles::t_upper_quantile_by_integration(0.01, 119.0);
    const double expected = 1.27e-4 + tq * std::sqrt(1e-10 / 120.0);
    CHECK(thr == doctest::Approx(expected).epsilon(1e-9));
    CHECK(thr == doctest::Approx(1.29153e-4).epsilon(1e-4));
}

TEST_CASE("exceedance threshold strictly increasing in theta") {
    SummaryStats st{50, 2e-4, 4e-10};
    double prev = 0.0;
    for (double theta = 0.9; theta < 1.4; theta += 0.05) {
        const double thr = exceedance_threshold(st, TestConfig{theta, 0.01});
        CHECK(thr > prev);
        prev = thr;
    }
}

TEST_CASE("test_sample boundary is strict") {
    SummaryStats st{120, 1e-4, 0.0};
    const auto at_mean = test_sample(1e-4, st, TestConfig{1.0, 0.01});
    CHECK_FALSE(at_mean.is_anomaly);
    CHECK(at_mean.margin == doctest::Approx(0.0));

    const auto above = test_sample(1e-4 + 1e-12, st, TestConfig{1.0, 0.01});
    CHECK(above.is_anomaly);
    CHECK(above.margin > 0.0);
}

TEST_CASE("test_sample margin arithmetic on the composed example") {
    SummaryStats st{120, 1e-4, 1e-10};
    const auto v = test_sample(1.40e-4, st, TestConfig{1.27, 0.01});
    CHECK(v.is_anomaly);
    CHECK(v.margin == doctest::Approx(1.40e-4 - 1.29153e-4).epsilon(1e-3));
    CHECK(v.is_anomaly == (v.margin > 0.0));
}

TEST_CASE("verdict is scale covariant") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(1e-5, 1e-3);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> b(60);
        for (auto& x : b) x = dist(rng);
        const double b_tau = dist(rng) * 1.2;
        const TestConfig cfg{1.05, 0.01};
        const bool base = test_sample(b_tau, summarize(b), cfg).is_anomaly;
        for (double scale : {3.7, 0.04, 1e3}) {
            std::vector<double> bs = b;
            for (auto& x : bs) x *= scale;
            CHECK(test_sample(b_tau * scale, summarize(bs), cfg).is_anomaly == base);
        }
    }
}

TEST_CASE("flagged set shrinks as theta grows") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(9e-5, 1.1e-4);
    std::vector<double> window(120);
    for (auto& x : window) x = dist(rng);
    const auto st = summarize(window);
    std::vector<double> probes(300);
    for (auto& p : probes) p = dist(rng) * (0.9 + 0.4 * dist(rng) / 1.1e-4);

    std::vector<std::vector<std::size_t>> flagged;
    for (double theta : {0.95, 1.0, 1.05, 1.1, 1.15}) {
        std::vector<std::size_t> f;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            if (test_sample(probes[i], st, TestConfig{theta, 0.01}).is_anomaly) f.push_back(i);
        }
        flagged.push_back(f);
    }
    for (std::size_t g = 1; g < flagged.size(); ++g) {
        for (std::size_t idx : flagged[g]) {
            CHECK(std::find(flagged[g - 1].begin(), flagged[g - 1].end(), idx) !=
                  flagged[g - 1].end());
        }
    }
}

TEST_CASE("incomplete beta round trip") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    for (int trial = 0; trial < 60; ++trial) {
        const double a = 0.5 + 30.0 * u(rng);
        const double b = 0.5 + 30.0 * u(rng);
        const double p = u(rng);
        const double x = detail::inverse_regularized_incomplete_beta(a, b, p);
        CHECK(std::fabs(detail::regularized_incomplete_beta(a, b, x) - p) < 1e-10);
    }
}
