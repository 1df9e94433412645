#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qot/rng.hpp"
#include "qot/telemetry.hpp"

namespace qot::forecaster {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Row = Eigen::RowVectorXd;

/// LSTM cell weights, gates stacked row-wise in order [input; forget; cell; output].
struct LstmCellParams {
    Mat w_x;  // 4H x input_dim
    Mat w_h;  // 4H x H
    Vec b;    // 4H

    Eigen::Index hidden() const { return w_h.cols(); }
    Eigen::Index input_dim() const { return w_x.cols(); }
};

/// The learned map from a past window of k BER values to the s-step forecast.
/// Holds both cells, the scalar projection head and the normalization fitted
/// on the training windows.
struct EdLstmModel {
    LstmCellParams encoder;
    LstmCellParams decoder;
    Vec proj_w;
    double proj_b = 0.0;
    telemetry::Normalizer norm;
    std::size_t k = 0;
    std::size_t s = 0;

    Eigen::Index hidden() const { return encoder.hidden(); }
};

struct TrainConfig {
    std::size_t epochs = 200;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double grad_clip = 1.0;  // global-norm cap
    double teacher_forcing_ratio = 0.5;
    std::uint64_t seed = 42;
    std::size_t early_stop_patience = 20;
    std::size_t hidden_dim = 64;

    void validate() const;
};

struct TrainReport {
    std::vector<double> train_loss;  // normalized-scale MSE per epoch
    std::vector<double> val_loss;
    std::size_t best_epoch = 0;
    double test_mse_raw = std::numeric_limits<double>::quiet_NaN();
};

/// Gradient holder, same shapes as the parameters they correspond to.
struct Gradients {
    Mat enc_w_x, enc_w_h;
    Vec enc_b;
    Mat dec_w_x, dec_w_h;
    Vec dec_b;
    Vec proj_w;
    double proj_b = 0.0;
};

/// One standard LSTM cell step.
void lstm_step(const LstmCellParams& p, const Vec& x, Vec& h, Vec& c);

/// Runs encoder + autoregressive decoder on one normalized past window.
/// When `future_teacher` is set, each decoder step past the first consumes the
/// teacher value with probability tf_ratio (draws from `rng`).
std::vector<double> forward(const EdLstmModel& model, const std::vector<double>& past_norm,
                            const std::optional<std::vector<double>>& future_teacher,
                            double tf_ratio, Rng* rng = nullptr);

/// Mean squared error.
double loss(const std::vector<double>& predictions, const std::vector<double>& target);

/// Batched forward returning only the batch-mean loss; `teacher_mask(j, col)`
/// nonzero means decoder step j (j >= 1) takes the teacher value. Used by the
/// finite-difference oracle, so it must traverse the exact training path.
double batch_loss(const EdLstmModel& model, const Mat& past, const Mat& future,
                  const Mat& teacher_mask);

/// Backpropagation through time over the same path as batch_loss, including
/// the feedback edges where a decoder step consumed the previous prediction.
Gradients compute_gradients(const EdLstmModel& model, const Mat& past, const Mat& future,
                            const Mat& teacher_mask, double* loss_out = nullptr);

/// Builds a randomly initialized model (uniform +-1/sqrt(H), forget bias +1).
EdLstmModel init_model(std::size_t k, std::size_t s, std::size_t hidden_dim,
                       const telemetry::Normalizer& norm, Rng& rng);

/// Trains with Adam + global-norm clipping + linearly decaying teacher
/// forcing; returns the best-validation checkpoint. Deterministic per seed.
std::pair<EdLstmModel, TrainReport> train(const std::vector<telemetry::WindowPair>& windows_train,
                                          const std::vector<telemetry::WindowPair>& windows_val,
                                          const TrainConfig& cfg);

/// Normalize -> forward (tf 0) -> denormalize, clamped to (0, 0.5].
std::vector<double> predict(const EdLstmModel& model, const std::vector<double>& past_raw);

/// Mean squared error of raw-scale predictions over a window set.
double raw_mse(const EdLstmModel& model, const std::vector<telemetry::WindowPair>& windows);

void save(const EdLstmModel& model, const std::string& path);
EdLstmModel load(const std::string& path);

} // namespace qot::forecaster
