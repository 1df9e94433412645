// qot: synthetic QoT telemetry, BER forecasting, and real-time anomaly
// detection experiments. Subcommands: generate, train, detect, evaluate,
// selftest.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qot/config.hpp"
#include "qot/csv.hpp"
#include "qot/detector.hpp"
#include "qot/error.hpp"
#include "qot/eval.hpp"
#include "qot/forecaster.hpp"
#include "qot/plm.hpp"
#include "qot/stats.hpp"
#include "qot/telemetry.hpp"
#include "qot/version.hpp"

namespace {

using namespace qot;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

plm::LabeledStream generate_base_stream(const cli::RunConfig& cfg) {
    return plm::generate_stream(cfg.scenario.lightpath, cfg.scenario.weibull, cfg.scenario.noise,
                                cfg.scenario.duration_h, cfg.scenario.seed);
}

plm::LabeledStream load_stream(const cli::RunConfig& cfg) {
    plm::LabeledStream st;
    st.coarse = csv::read_series(cfg.paths.resolve(cfg.paths.coarse_csv));
    st.fine = csv::read_series(cfg.paths.resolve(cfg.paths.fine_csv));
    st.labels = csv::read_labels(cfg.paths.resolve(cfg.paths.labels_csv));
    require(st.labels.size() == st.fine.size(), "labels do not match the fine series length");
    require(st.coarse.resolution_s == plm::kCoarseResolutionS &&
                st.fine.resolution_s == plm::kFineResolutionS,
            "stream resolutions do not match the 1.5 h / 5 min pipeline layout");
    return st;
}

detector::ForecastFn make_forecast(const forecaster::EdLstmModel& model) {
    return [&model](const std::vector<double>& past) { return forecaster::predict(model, past); };
}

void check_model_window(const forecaster::EdLstmModel& model, const cli::RunConfig& cfg) {
    require(model.k == cfg.window.k && model.s == cfg.window.s,
            "checkpoint window (k=" + std::to_string(model.k) + ", s=" + std::to_string(model.s) +
                ") does not match configured window (k=" + std::to_string(cfg.window.k) +
                ", s=" + std::to_string(cfg.window.s) + ")");
}

int cmd_generate(const cli::RunConfig& cfg, std::size_t anomalies, std::uint64_t anomaly_seed) {
    const std::size_t n_coarse = static_cast<std::size_t>(cfg.scenario.duration_h / 1.5) + 1;
    require(n_coarse >= cfg.window.k + cfg.window.s,
            "duration too short: need at least k + s coarse samples");

    plm::LabeledStream stream = generate_base_stream(cfg);
    if (anomalies > 0) {
        stream = plm::inject_anomalies(stream, anomalies, cfg.detection_interval(), anomaly_seed);
    }
    const std::string hash = cli::config_hash(cfg);
    std::filesystem::create_directories(cfg.paths.out_dir);
    csv::write_series(cfg.paths.resolve(cfg.paths.coarse_csv), stream.coarse, hash);
    csv::write_series(cfg.paths.resolve(cfg.paths.fine_csv), stream.fine, hash);
    csv::write_labels(cfg.paths.resolve(cfg.paths.labels_csv), stream.labels, hash);
    std::printf("generated %.1f h: %zu coarse, %zu fine samples, %zu anomalies\n",
                cfg.scenario.duration_h, stream.coarse.size(), stream.fine.size(), anomalies);
    std::printf("wrote %s, %s, %s\n", cfg.paths.resolve(cfg.paths.coarse_csv).c_str(),
                cfg.paths.resolve(cfg.paths.fine_csv).c_str(),
                cfg.paths.resolve(cfg.paths.labels_csv).c_str());
    return kExitOk;
}

int cmd_train(const cli::RunConfig& cfg) {
    const auto coarse = csv::read_series(cfg.paths.resolve(cfg.paths.coarse_csv));
    const auto windows = telemetry::make_windows(coarse, cfg.window);
    const auto [train_all, test] =
        telemetry::split_train_test(windows, cfg.split.n_train, cfg.split.n_test);

    // chronological validation split: last tenth of the training windows
    const std::size_t n_val = std::max<std::size_t>(1, train_all.size() / 10);
    std::vector<telemetry::WindowPair> train_fit(train_all.begin(),
                                                 train_all.end() - static_cast<long>(n_val));
    std::vector<telemetry::WindowPair> val(train_all.end() - static_cast<long>(n_val),
                                           train_all.end());
    std::printf("training on %zu windows (val %zu, test %zu), hidden_dim %zu\n", train_fit.size(),
                val.size(), test.size(), cfg.train.hidden_dim);

    auto [model, report] = forecaster::train(train_fit, val, cfg.train);
    report.test_mse_raw = forecaster::raw_mse(model, test);

    const std::string hash = cli::config_hash(cfg);
    std::filesystem::create_directories(cfg.paths.out_dir);
    forecaster::save(model, cfg.paths.resolve(cfg.paths.checkpoint));
    csv::write_train_report(cfg.paths.resolve(cfg.paths.train_report_csv), report, hash);
    std::printf("best epoch %zu, val MSE %.3e (normalized), test MSE %.3e (raw BER)\n",
                report.best_epoch, report.val_loss[report.best_epoch], report.test_mse_raw);
    std::printf("wrote %s and %s\n", cfg.paths.resolve(cfg.paths.checkpoint).c_str(),
                cfg.paths.resolve(cfg.paths.train_report_csv).c_str());
    return kExitOk;
}

int cmd_detect(const cli::RunConfig& cfg, const std::string& mode_str) {
    const auto stream = load_stream(cfg);
    const plm::TickInterval interval = cfg.detection_interval();

    const detector::DetectorMode mode = mode_str == "proposed" ? detector::DetectorMode::proposed
                                                               : detector::DetectorMode::benchmark;
    std::optional<forecaster::EdLstmModel> model;
    detector::ForecastFn forecast;
    if (mode == detector::DetectorMode::proposed) {
        model = forecaster::load(cfg.paths.resolve(cfg.paths.checkpoint));
        check_model_window(*model, cfg);
        forecast = make_forecast(*model);
    }
    const auto events =
        detector::run_stream(stream, forecast, mode, cfg.test, cfg.window.k, interval);

    std::size_t flagged = 0;
    for (const auto& ev : events) flagged += ev.verdict.is_anomaly ? 1 : 0;
    const std::string hash = cli::config_hash(cfg);
    std::filesystem::create_directories(cfg.paths.out_dir);
    csv::write_events(cfg.paths.resolve(cfg.paths.events_csv), events, hash);
    std::printf("%s mode, theta %.4g: %zu ticks tested, %zu flagged\n",
                detector::mode_name(mode), cfg.test.theta, events.size(), flagged);
    std::printf("wrote %s\n", cfg.paths.resolve(cfg.paths.events_csv).c_str());
    return kExitOk;
}

void print_selection(const char* label, const eval::ThetaSelection& sel) {
    if (!sel.feasible) {
        std::printf("  %s: no feasible theta\n", label);
        return;
    }
    std::printf("  %s: theta=%.4g acc_anom=%.4f acc_norm=%.4f P=%.4f R=%.4f F=%.4f\n", label,
                sel.theta, sel.row.acc_anom, sel.row.acc_norm, sel.row.precision, sel.row.recall,
                sel.row.f_measure);
}

int cmd_evaluate(const cli::RunConfig& cfg, const std::string& mode_str) {
    const auto stream = load_stream(cfg);
    for (auto l : stream.labels) {
        require(l == 0, "evaluate needs a clean base stream (labels must be all zero); "
                        "regenerate without anomalies");
    }
    const plm::TickInterval interval = cfg.detection_interval();

    const bool want_benchmark = mode_str == "both" || mode_str == "benchmark";
    const bool want_proposed = mode_str == "both" || mode_str == "proposed";

    std::optional<forecaster::EdLstmModel> model;
    detector::ForecastFn forecast;
    if (want_proposed) {
        model = forecaster::load(cfg.paths.resolve(cfg.paths.checkpoint));
        check_model_window(*model, cfg);
        forecast = make_forecast(*model);
    }

    eval::MonteCarloConfig mc;
    mc.n_sims = cfg.eval.n_sims;
    mc.base_seed = cfg.eval.base_seed;
    mc.n_anomalies = cfg.eval.n_anomalies;
    mc.alpha_tail = cfg.test.alpha_tail;
    mc.jobs = cfg.eval.jobs;

    const std::string hash = cli::config_hash(cfg);
    std::filesystem::create_directories(cfg.paths.out_dir);

    std::vector<std::pair<detector::DetectorMode, std::vector<eval::MetricsRow>>> results;
    std::optional<eval::ThetaSelection> best_bench, best_prop;
    std::string report_text;
    for (const auto mode :
         {detector::DetectorMode::benchmark, detector::DetectorMode::proposed}) {
        if (mode == detector::DetectorMode::benchmark && !want_benchmark) continue;
        if (mode == detector::DetectorMode::proposed && !want_proposed) continue;
        mc.mode = mode;
        mc.theta_grid = mode == detector::DetectorMode::proposed ? cfg.eval.theta_grid_proposed
                                                                 : cfg.eval.theta_grid_benchmark;
        const auto rows = eval::monte_carlo(mc, stream, interval,
                                            mode == detector::DetectorMode::proposed ? forecast
                                                                                     : nullptr,
                                            cfg.window.k);
        results.emplace_back(mode, rows);
        report_text += csv::format_metrics(rows, mc.n_sims, mode, hash);

        const auto zero_fp =
            eval::select_theta(rows, eval::SelectionCriterion::max_acc_anom_subject_to_zero_fp);
        const auto max_f = eval::select_theta(rows, eval::SelectionCriterion::max_f_measure);
        std::printf("%s (%zu sims, %zu thetas):\n", detector::mode_name(mode), mc.n_sims,
                    mc.theta_grid.size());
        print_selection("best zero-fp", zero_fp);
        print_selection("best F      ", max_f);
        if (mode == detector::DetectorMode::benchmark) best_bench = zero_fp;
        else best_prop = zero_fp;
    }

    {
        std::ofstream os(cfg.paths.resolve(cfg.paths.report_csv), std::ios::trunc);
        require(os.good(), "cannot write report");
        os << report_text;
    }
    csv::write_metrics_long(cfg.paths.resolve(cfg.paths.report_long_csv), results, mc.n_sims, hash);

    if (best_bench && best_prop && best_bench->feasible && best_prop->feasible) {
        std::printf("proposed - benchmark acc_anom gap: %+.2f percentage points\n",
                    100.0 * (best_prop->row.acc_anom - best_bench->row.acc_anom));
    }
    std::printf("wrote %s and %s\n", cfg.paths.resolve(cfg.paths.report_csv).c_str(),
                cfg.paths.resolve(cfg.paths.report_long_csv).c_str());
    return kExitOk;
}

int cmd_selftest() {
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
        if (!ok) ++failures;
    };

    // upper-tail t quantiles against a precomputed high-precision table
    struct QRow {
        std::size_t df;
        double alpha;
        double expected;
    };
    const QRow table[] = {
        {1, 0.01, 31.820515953773958}, {10, 0.01, 2.7637694581126962},
        {49, 0.01, 2.4048917595376685}, {119, 0.01, 2.3580925558316698},
        {1000, 0.01, 2.3300826747555130},
    };
    std::printf("df,alpha,quantile\n");
    for (const auto& row : table) {
        const double q = stats::t_upper_quantile(row.alpha, row.df);
        std::printf("%zu,%g,%.12f\n", row.df, row.alpha, q);
    }
    for (const auto& row : table) {
        const double q = stats::t_upper_quantile(row.alpha, row.df);
        check(std::fabs(q - row.expected) < 1e-6,
              "t quantile df=" + std::to_string(row.df) + " within 1e-6 of table");
    }
    check(std::fabs(stats::t_upper_quantile(0.01, 1) - std::tan(M_PI * 0.49)) < 1e-9,
          "df=1 matches the Cauchy closed form to 1e-9");
    check(std::fabs(stats::t_upper_quantile(0.01, 1000000) - 2.3263478740) < 1e-3,
          "df=1e6 within 1e-3 of the normal quantile");

    // gradient check on a small model
    {
        Rng rng(77);
        telemetry::Normalizer nz{-5.0, -2.0};
        auto model = forecaster::init_model(4, 2, 3, nz, rng);
        forecaster::Mat past(4, 2), future(2, 2);
        for (int c = 0; c < 2; ++c) {
            for (int t = 0; t < 4; ++t) past(t, c) = rng.uniform(0.0, 1.0);
            for (int j = 0; j < 2; ++j) future(j, c) = rng.uniform(0.0, 1.0);
        }
        auto grads = forecaster::compute_gradients(model, past, future, forecaster::Mat());
        double worst = 0.0;
        auto fd_check = [&](double& p, double analytic) {
            const double p0 = p, h = 1e-5;
            p = p0 + h;
            const double up = forecaster::batch_loss(model, past, future, forecaster::Mat());
            p = p0 - h;
            const double dn = forecaster::batch_loss(model, past, future, forecaster::Mat());
            p = p0;
            const double fd = (up - dn) / (2.0 * h);
            const double denom = std::max({std::fabs(fd), std::fabs(analytic), 1e-8});
            worst = std::max(worst, std::fabs(fd - analytic) / denom);
        };
        for (Eigen::Index i = 0; i < model.encoder.w_h.size(); ++i)
            fd_check(model.encoder.w_h.data()[i], grads.enc_w_h.data()[i]);
        for (Eigen::Index i = 0; i < model.decoder.w_h.size(); ++i)
            fd_check(model.decoder.w_h.data()[i], grads.dec_w_h.data()[i]);
        for (Eigen::Index i = 0; i < model.proj_w.size(); ++i)
            fd_check(model.proj_w.data()[i], grads.proj_w.data()[i]);
        std::printf("gradient check max relative error: %.3e\n", worst);
        check(worst < 1e-4, "BPTT gradients match finite differences (< 1e-4)");
    }

    // window-count formula against enumeration
    {
        Rng rng(5);
        bool ok = true;
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t k = 1 + rng.below(30);
            const std::size_t s = 1 + rng.below(30);
            const std::size_t stride = 1 + rng.below(4);
            const std::size_t n = k + s + rng.below(150);
            telemetry::BerSeries series;
            series.resolution_s = plm::kCoarseResolutionS;
            for (std::size_t i = 0; i < n; ++i)
                series.samples.push_back(
                    {static_cast<std::int64_t>(i) * plm::kCoarseResolutionS, 1e-4});
            const auto w = telemetry::make_windows(series, {k, s, stride});
            std::size_t brute = 0;
            for (std::size_t start = 0; start + k + s <= n; start += stride) ++brute;
            ok = ok && w.size() == brute;
        }
        check(ok, "window count formula matches brute-force enumeration (50 shapes)");
    }

    // Weibull identities
    {
        const plm::WeibullParams w{1000.0, 3.0};
        bool ok = plm::weibull_cdf(0.0, w) == 0.0;
        ok = ok && std::fabs(plm::weibull_cdf(1000.0, w) - (1.0 - std::exp(-1.0))) < 1e-12;
        double prev = -1.0;
        for (double t = 0.0; t <= 4000.0; t += 100.0) {
            const double f = plm::weibull_cdf(t, w);
            ok = ok && f >= prev && f >= 0.0 && f < 1.0;
            prev = f;
        }
        plm::LightpathConfig lp;
        ok = ok && std::fabs(plm::osnr_at(0.0, lp, w) - lp.osnr0_db) < 1e-12;
        check(ok, "Weibull CDF identities and OSNR anchoring");
    }

    std::printf("%s\n", failures == 0 ? "selftest: all checks passed" : "selftest: FAILURES");
    return failures == 0 ? kExitOk : kExitRuntime;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"QoT BER forecasting and real-time anomaly detection"};
    app.set_version_flag("--version", std::string("qot ") + qot::kVersion);
    app.fallthrough();  // global flags may appear after the subcommand

    std::string config_path;
    std::string out_dir;
    bool print_config = false;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out-dir", out_dir, "output directory (overrides config and QOT_OUT_DIR)");
    app.add_flag("--print-config", print_config, "print the effective config and exit");

    // field overrides: flag > file > default
    std::optional<std::uint64_t> scenario_seed, train_seed, eval_seed;
    std::optional<std::size_t> n_sims, jobs, epochs, hidden;
    std::optional<double> theta, alpha_tail, sigma_log;
    app.add_option("--seed", scenario_seed, "scenario seed override");
    app.add_option("--train-seed", train_seed, "training seed override");
    app.add_option("--eval-seed", eval_seed, "evaluation base seed override");
    app.add_option("--n-sims", n_sims, "Monte Carlo simulation count override");
    app.add_option("--jobs", jobs, "max concurrent simulations");
    app.add_option("--epochs", epochs, "training epoch cap override");
    app.add_option("--hidden-dim", hidden, "LSTM hidden width override");
    app.add_option("--theta", theta, "detection scaling parameter override");
    app.add_option("--alpha-tail", alpha_tail, "one-sided tail probability override");
    app.add_option("--sigma-log", sigma_log, "measurement noise override");

    auto* gen = app.add_subcommand("generate", "synthesize coarse/fine telemetry CSVs");
    std::size_t gen_anomalies = 0;
    std::uint64_t gen_anomaly_seed = 9999;
    gen->add_option("--anomalies", gen_anomalies, "inject this many anomalies into interval h");
    gen->add_option("--anomaly-seed", gen_anomaly_seed, "seed for anomaly placement");

    auto* tr = app.add_subcommand("train", "fit the forecaster on generated telemetry");
    auto* det = app.add_subcommand("detect", "run online detection, write events CSV");
    std::string detect_mode = "proposed";
    det->add_option("--mode", detect_mode, "proposed|benchmark")
        ->check(CLI::IsMember({"proposed", "benchmark"}));
    auto* ev = app.add_subcommand("evaluate", "theta sweep + Monte Carlo report");
    std::string eval_mode = "both";
    ev->add_option("--mode", eval_mode, "both|proposed|benchmark")
        ->check(CLI::IsMember({"both", "proposed", "benchmark"}));
    auto* st = app.add_subcommand("selftest", "numeric self-checks, nonzero exit on failure");

    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        cli::RunConfig cfg =
            config_path.empty() ? cli::default_config() : cli::load_config(config_path);
        if (const char* env = std::getenv("QOT_OUT_DIR"); env && *env) cfg.paths.out_dir = env;
        if (!out_dir.empty()) cfg.paths.out_dir = out_dir;
        if (scenario_seed) cfg.scenario.seed = *scenario_seed;
        if (train_seed) cfg.train.seed = *train_seed;
        if (eval_seed) cfg.eval.base_seed = *eval_seed;
        if (n_sims) cfg.eval.n_sims = *n_sims;
        if (jobs) cfg.eval.jobs = *jobs;
        if (epochs) cfg.train.epochs = *epochs;
        if (hidden) cfg.train.hidden_dim = *hidden;
        if (theta) cfg.test.theta = *theta;
        if (alpha_tail) cfg.test.alpha_tail = *alpha_tail;
        if (sigma_log) cfg.scenario.noise.sigma_log = *sigma_log;
        cfg.validate();

        if (print_config) {
            std::printf("%s\n", cli::to_json(cfg).c_str());
            return kExitOk;
        }
        if (gen->parsed()) return cmd_generate(cfg, gen_anomalies, gen_anomaly_seed);
        if (tr->parsed()) return cmd_train(cfg);
        if (det->parsed()) return cmd_detect(cfg, detect_mode);
        if (ev->parsed()) return cmd_evaluate(cfg, eval_mode);
        if (st->parsed()) return cmd_selftest();
        std::fprintf(stderr, "no subcommand given; see --help\n");
        return kExitUsage;
    } catch (const qot::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
