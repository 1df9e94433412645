#include "qot/forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "qot/error.hpp"

namespace qot::forecaster {

namespace {

inline Mat sigmoid(const Mat& z) {
    return 1.0 / (1.0 + (-z.array()).exp());
}

// Post-activation gate values plus the cell/hidden trajectory of one step.
struct StepRecord {
    Row x;       // 1 x B input
    Mat h_prev;  // H x B
    Mat c_prev;
    Mat i, f, g, o;
    Mat c;
    Mat tanh_c;
};

struct CellGradAccum {
    Mat w_x, w_h;
    Vec b;

    explicit CellGradAccum(const LstmCellParams& p)
        : w_x(Mat::Zero(p.w_x.rows(), p.w_x.cols())),
          w_h(Mat::Zero(p.w_h.rows(), p.w_h.cols())),
          b(Vec::Zero(p.b.size())) {}
};

// Forward one batched step; records everything backward needs.
StepRecord step_forward(const LstmCellParams& p, const Row& x, const Mat& h_prev, const Mat& c_prev) {
    const Eigen::Index H = p.hidden();
    StepRecord r;
    r.x = x;
    r.h_prev = h_prev;
    r.c_prev = c_prev;
    Mat z = p.w_x * x + p.w_h * h_prev;
    z.colwise() += p.b;
    r.i = sigmoid(z.topRows(H));
    r.f = sigmoid(z.middleRows(H, H));
    r.g = z.middleRows(2 * H, H).array().tanh();
    r.o = sigmoid(z.bottomRows(H));
    r.c = r.f.array() * c_prev.array() + r.i.array() * r.g.array();
    r.tanh_c = r.c.array().tanh();
    return r;
}

inline Mat step_h(const StepRecord& r) { return r.o.array() * r.tanh_c.array(); }

// Backward through one step. dh/dc_in are gradients on h_t and c_t; returns
// gradients on h_prev, c_prev and the input row.
void step_backward(const LstmCellParams& p, const StepRecord& r, const Mat& dh, const Mat& dc_in,
                   CellGradAccum& acc, Mat& dh_prev, Mat& dc_prev, Row& dx) {
    const Eigen::Index H = p.hidden();
    const Mat d_o = dh.array() * r.tanh_c.array();
    const Mat dc = dc_in.array() + dh.array() * r.o.array() * (1.0 - r.tanh_c.array().square());
    const Mat di = dc.array() * r.g.array();
    const Mat dg = dc.array() * r.i.array();
    const Mat df = dc.array() * r.c_prev.array();
    dc_prev = dc.array() * r.f.array();

    Mat dz(4 * H, dh.cols());
    dz.topRows(H) = di.array() * r.i.array() * (1.0 - r.i.array());
    dz.middleRows(H, H) = df.array() * r.f.array() * (1.0 - r.f.array());
    dz.middleRows(2 * H, H) = dg.array() * (1.0 - r.g.array().square());
    dz.bottomRows(H) = d_o.array() * r.o.array() * (1.0 - r.o.array());

    acc.w_x.noalias() += dz * r.x.transpose();
    acc.w_h.noalias() += dz * r.h_prev.transpose();
    acc.b += dz.rowwise().sum();
    dh_prev.noalias() = p.w_h.transpose() * dz;
    dx.noalias() = p.w_x.transpose() * dz;
}

struct BatchTape {
    std::vector<StepRecord> enc;  // k steps
    std::vector<StepRecord> dec;  // s steps
    Mat preds;                    // s x B, normalized scale
};

// Full encoder/decoder pass over a batch. teacher_mask(j, col) != 0 means
// decoder step j >= 1 consumed future(j-1, col) instead of the previous
// prediction; row 0 of the mask is ignored (the first decoder input is the
// last past value).
BatchTape batch_forward(const EdLstmModel& m, const Mat& past, const Mat& future,
                        const Mat& teacher_mask) {
    const Eigen::Index B = past.cols();
    const Eigen::Index H = m.hidden();
    const auto k = static_cast<Eigen::Index>(m.k);
    const auto s = static_cast<Eigen::Index>(m.s);
    require(past.rows() == k, "batch past has wrong row count");

    BatchTape tape;
    tape.enc.reserve(k);
    tape.dec.reserve(s);
    Mat h = Mat::Zero(H, B), c = Mat::Zero(H, B);
    for (Eigen::Index t = 0; t < k; ++t) {
        tape.enc.push_back(step_forward(m.encoder, past.row(t), h, c));
        h = step_h(tape.enc.back());
        c = tape.enc.back().c;
    }
    tape.preds.resize(s, B);
    Row input = past.row(k - 1);
    for (Eigen::Index j = 0; j < s; ++j) {
        tape.dec.push_back(step_forward(m.decoder, input, h, c));
        h = step_h(tape.dec.back());
        c = tape.dec.back().c;
        tape.preds.row(j) = (m.proj_w.transpose() * h).array() + m.proj_b;
        if (j + 1 < s) {
            if (teacher_mask.size() > 0) {
                const auto sel = teacher_mask.row(j + 1).array();
                input = sel * future.row(j).array() + (1.0 - sel) * tape.preds.row(j).array();
            } else {
                input = tape.preds.row(j);
            }
        }
    }
    return tape;
}

double mse_of(const Mat& preds, const Mat& target) {
    return (preds - target).array().square().mean();
}

} // namespace

void TrainConfig::validate() const {
    require(epochs >= 1 && batch_size >= 1 && hidden_dim >= 1, "train config counts must be positive");
    require(learning_rate > 0.0 && adam_beta1 > 0.0 && adam_beta2 > 0.0 && adam_eps > 0.0,
            "optimizer parameters must be positive");
    require(grad_clip > 0.0, "grad_clip must be positive");
    require(teacher_forcing_ratio >= 0.0 && teacher_forcing_ratio <= 1.0,
            "teacher_forcing_ratio must be in [0, 1]");
}

void lstm_step(const LstmCellParams& p, const Vec& x, Vec& h, Vec& c) {
    require(x.size() == p.input_dim() && h.size() == p.hidden() && c.size() == p.hidden(),
            "lstm_step dimension mismatch");
    const StepRecord r = step_forward(p, x.transpose(), h, c);
    h = step_h(r);
    c = r.c;
}

std::vector<double> forward(const EdLstmModel& model, const std::vector<double>& past_norm,
                            const std::optional<std::vector<double>>& future_teacher,
                            double tf_ratio, Rng* rng) {
    require(past_norm.size() == model.k, "past window length must equal k");
    if (future_teacher) {
        require(future_teacher->size() == model.s, "teacher length must equal s");
    }
    Mat past(model.k, 1);
    for (std::size_t t = 0; t < model.k; ++t) past(static_cast<Eigen::Index>(t), 0) = past_norm[t];
    Mat future = Mat::Zero(static_cast<Eigen::Index>(model.s), 1);
    Mat mask;
    if (future_teacher && tf_ratio > 0.0) {
        for (std::size_t j = 0; j < model.s; ++j)
            future(static_cast<Eigen::Index>(j), 0) = (*future_teacher)[j];
        mask = Mat::Zero(static_cast<Eigen::Index>(model.s), 1);
        for (std::size_t j = 1; j < model.s; ++j) {
            const bool take = tf_ratio >= 1.0 || (rng != nullptr && rng->uniform01() < tf_ratio);
            mask(static_cast<Eigen::Index>(j), 0) = take ? 1.0 : 0.0;
        }
    }
    const BatchTape tape = batch_forward(model, past, future, mask);
    std::vector<double> out(model.s);
    for (std::size_t j = 0; j < model.s; ++j) out[j] = tape.preds(static_cast<Eigen::Index>(j), 0);
    return out;
}

double loss(const std::vector<double>& predictions, const std::vector<double>& target) {
    require(predictions.size() == target.size() && !predictions.empty(),
            "loss requires equal-length non-empty vectors");
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - target[i];
        acc += d * d;
    }
    return acc / static_cast<double>(predictions.size());
}

double batch_loss(const EdLstmModel& model, const Mat& past, const Mat& future,
                  const Mat& teacher_mask) {
    return mse_of(batch_forward(model, past, future, teacher_mask).preds, future);
}

Gradients compute_gradients(const EdLstmModel& model, const Mat& past, const Mat& future,
                            const Mat& teacher_mask, double* loss_out) {
    const Eigen::Index B = past.cols();
    const Eigen::Index H = model.hidden();
    const auto s = static_cast<Eigen::Index>(model.s);
    const auto k = static_cast<Eigen::Index>(model.k);

    const BatchTape tape = batch_forward(model, past, future, teacher_mask);
    if (loss_out) *loss_out = mse_of(tape.preds, future);

    CellGradAccum enc_acc(model.encoder), dec_acc(model.decoder);
    Vec dproj_w = Vec::Zero(H);
    double dproj_b = 0.0;

    // dL/dpred, extended with feedback contributions as we walk backwards.
    Mat dpred = 2.0 * (tape.preds - future) / static_cast<double>(s * B);

    Mat dh = Mat::Zero(H, B), dc = Mat::Zero(H, B);
    for (Eigen::Index j = s - 1; j >= 0; --j) {
        const Mat h_j = step_h(tape.dec[static_cast<std::size_t>(j)]);
        dproj_w += h_j * dpred.row(j).transpose();
        dproj_b += dpred.row(j).sum();
        dh.noalias() += model.proj_w * dpred.row(j);

        Mat dh_prev(H, B), dc_prev(H, B);
        Row dx(B);
        step_backward(model.decoder, tape.dec[static_cast<std::size_t>(j)], dh, dc, dec_acc,
                      dh_prev, dc_prev, dx);
        if (j >= 1) {
            // input of step j was teacher or the previous prediction
            if (teacher_mask.size() > 0) {
                dpred.row(j - 1).array() += dx.array() * (1.0 - teacher_mask.row(j).array());
            } else {
                dpred.row(j - 1) += dx;
            }
        }
        dh = dh_prev;
        dc = dc_prev;
    }
    for (Eigen::Index t = k - 1; t >= 0; --t) {
        Mat dh_prev(H, B), dc_prev(H, B);
        Row dx(B);
        step_backward(model.encoder, tape.enc[static_cast<std::size_t>(t)], dh, dc, enc_acc,
                      dh_prev, dc_prev, dx);
        dh = dh_prev;
        dc = dc_prev;
    }

    Gradients g;
    g.enc_w_x = enc_acc.w_x;
    g.enc_w_h = enc_acc.w_h;
    g.enc_b = enc_acc.b;
    g.dec_w_x = dec_acc.w_x;
    g.dec_w_h = dec_acc.w_h;
    g.dec_b = dec_acc.b;
    g.proj_w = dproj_w;
    g.proj_b = dproj_b;
    return g;
}

EdLstmModel init_model(std::size_t k, std::size_t s, std::size_t hidden_dim,
                       const telemetry::Normalizer& norm, Rng& rng) {
    const auto H = static_cast<Eigen::Index>(hidden_dim);
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
    auto fill = [&](Mat& m) {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = rng.uniform(-bound, bound);
    };
    auto make_cell = [&](Eigen::Index in_dim) {
        LstmCellParams p;
        p.w_x.resize(4 * H, in_dim);
        p.w_h.resize(4 * H, H);
        p.b = Vec::Zero(4 * H);
        fill(p.w_x);
        fill(p.w_h);
        p.b.segment(H, H).array() += 1.0;  // forget-gate bias
        return p;
    };
    EdLstmModel m;
    m.encoder = make_cell(1);
    m.decoder = make_cell(1);
    m.proj_w.resize(H);
    for (Eigen::Index i = 0; i < H; ++i) m.proj_w(i) = rng.uniform(-bound, bound);
    m.proj_b = 0.0;
    m.norm = norm;
    m.k = k;
    m.s = s;
    return m;
}

namespace {

struct AdamState {
    Mat m, v;
    explicit AdamState(Eigen::Index rows, Eigen::Index cols)
        : m(Mat::Zero(rows, cols)), v(Mat::Zero(rows, cols)) {}
};

class AdamOptimizer {
public:
    AdamOptimizer(EdLstmModel& model, const TrainConfig& cfg) : model_(model), cfg_(cfg) {
        auto add = [&](Eigen::Index r, Eigen::Index c) { states_.emplace_back(r, c); };
        add(model.encoder.w_x.rows(), model.encoder.w_x.cols());
        add(model.encoder.w_h.rows(), model.encoder.w_h.cols());
        add(model.encoder.b.size(), 1);
        add(model.decoder.w_x.rows(), model.decoder.w_x.cols());
        add(model.decoder.w_h.rows(), model.decoder.w_h.cols());
        add(model.decoder.b.size(), 1);
        add(model.proj_w.size(), 1);
        add(1, 1);
    }

    void step(Gradients& g) {
        clip(g);
        ++t_;
        std::size_t idx = 0;
        update(model_.encoder.w_x, g.enc_w_x, idx);
        update(model_.encoder.w_h, g.enc_w_h, idx);
        update_vec(model_.encoder.b, g.enc_b, idx);
        update(model_.decoder.w_x, g.dec_w_x, idx);
        update(model_.decoder.w_h, g.dec_w_h, idx);
        update_vec(model_.decoder.b, g.dec_b, idx);
        update_vec(model_.proj_w, g.proj_w, idx);
        Mat pb(1, 1), gb(1, 1);
        pb(0, 0) = model_.proj_b;
        gb(0, 0) = g.proj_b;
        update(pb, gb, idx);
        model_.proj_b = pb(0, 0);
    }

private:
    void clip(Gradients& g) const {
        double sq = g.enc_w_x.squaredNorm() + g.enc_w_h.squaredNorm() + g.enc_b.squaredNorm() +
                    g.dec_w_x.squaredNorm() + g.dec_w_h.squaredNorm() + g.dec_b.squaredNorm() +
                    g.proj_w.squaredNorm() + g.proj_b * g.proj_b;
        const double norm = std::sqrt(sq);
        if (norm > cfg_.grad_clip) {
            const double scale = cfg_.grad_clip / norm;
            g.enc_w_x *= scale;
            g.enc_w_h *= scale;
            g.enc_b *= scale;
            g.dec_w_x *= scale;
            g.dec_w_h *= scale;
            g.dec_b *= scale;
            g.proj_w *= scale;
            g.proj_b *= scale;
        }
    }

    void update(Mat& p, const Mat& g, std::size_t& idx) {
        AdamState& st = states_[idx++];
        st.m = cfg_.adam_beta1 * st.m + (1.0 - cfg_.adam_beta1) * g;
        st.v = cfg_.adam_beta2 * st.v.array().matrix() + (1.0 - cfg_.adam_beta2) * g.array().square().matrix();
        const double bc1 = 1.0 - std::pow(cfg_.adam_beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(cfg_.adam_beta2, static_cast<double>(t_));
        p.array() -= cfg_.learning_rate * (st.m.array() / bc1) /
                     ((st.v.array() / bc2).sqrt() + cfg_.adam_eps);
    }

    void update_vec(Vec& p, const Vec& g, std::size_t& idx) {
        Mat pm = p, gm = g;
        update(pm, gm, idx);
        p = pm;
    }

    EdLstmModel& model_;
    const TrainConfig& cfg_;
    std::vector<AdamState> states_;
    long t_ = 0;
};

void windows_to_matrices(const std::vector<telemetry::WindowPair>& windows,
                         const telemetry::Normalizer& norm, std::size_t k, std::size_t s,
                         Mat& past, Mat& future) {
    past.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(windows.size()));
    future.resize(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(windows.size()));
    for (std::size_t w = 0; w < windows.size(); ++w) {
        require(windows[w].past.size() == k && windows[w].future.size() == s,
                "window dimensions do not match k/s");
        for (std::size_t t = 0; t < k; ++t)
            past(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(w)) =
                norm.norm(windows[w].past[t]);
        for (std::size_t j = 0; j < s; ++j)
            future(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(w)) =
                norm.norm(windows[w].future[j]);
    }
}

} // namespace

std::pair<EdLstmModel, TrainReport> train(const std::vector<telemetry::WindowPair>& windows_train,
                                          const std::vector<telemetry::WindowPair>& windows_val,
                                          const TrainConfig& cfg) {
    cfg.validate();
    require(!windows_train.empty() && !windows_val.empty(), "train and val splits must be non-empty");
    const std::size_t k = windows_train.front().past.size();
    const std::size_t s = windows_train.front().future.size();

    const telemetry::Normalizer norm = telemetry::fit_normalizer(windows_train);
    Mat past_tr, fut_tr, past_va, fut_va;
    windows_to_matrices(windows_train, norm, k, s, past_tr, fut_tr);
    windows_to_matrices(windows_val, norm, k, s, past_va, fut_va);

    Rng rng(cfg.seed);
    EdLstmModel model = init_model(k, s, cfg.hidden_dim, norm, rng);
    AdamOptimizer opt(model, cfg);

    const std::size_t n = windows_train.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    TrainReport report;
    double best_val = std::numeric_limits<double>::infinity();
    EdLstmModel best_model = model;
    std::size_t since_best = 0;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double tf = cfg.teacher_forcing_ratio *
                          (1.0 - static_cast<double>(epoch) /
                                     static_cast<double>(std::max<std::size_t>(cfg.epochs - 1, 1)));
        for (std::size_t i = n; i > 1; --i) {
            std::swap(order[i - 1], order[rng.below(i)]);
        }
        double epoch_loss = 0.0;
        for (std::size_t off = 0; off < n; off += cfg.batch_size) {
            const std::size_t bsz = std::min(cfg.batch_size, n - off);
            Mat past(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(bsz));
            Mat future(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(bsz));
            for (std::size_t col = 0; col < bsz; ++col) {
                past.col(static_cast<Eigen::Index>(col)) =
                    past_tr.col(static_cast<Eigen::Index>(order[off + col]));
                future.col(static_cast<Eigen::Index>(col)) =
                    fut_tr.col(static_cast<Eigen::Index>(order[off + col]));
            }
            Mat mask = Mat::Zero(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(bsz));
            if (tf > 0.0) {
                for (Eigen::Index j = 1; j < mask.rows(); ++j)
                    for (Eigen::Index col = 0; col < mask.cols(); ++col)
                        mask(j, col) = rng.uniform01() < tf ? 1.0 : 0.0;
            }
            double batch_mse = 0.0;
            Gradients g = compute_gradients(model, past, future, mask, &batch_mse);
            epoch_loss += batch_mse * static_cast<double>(bsz);
            opt.step(g);
        }
        epoch_loss /= static_cast<double>(n);
        const double val = batch_loss(model, past_va, fut_va, Mat());
        if (!std::isfinite(epoch_loss) || !std::isfinite(val)) {
            throw Error("training diverged: non-finite loss at epoch " + std::to_string(epoch));
        }
        report.train_loss.push_back(epoch_loss);
        report.val_loss.push_back(val);
        if (val < best_val) {
            best_val = val;
            best_model = model;
            report.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best > cfg.early_stop_patience) {
            break;
        }
    }
    return {std::move(best_model), std::move(report)};
}

std::vector<double> predict(const EdLstmModel& model, const std::vector<double>& past_raw) {
    require(past_raw.size() == model.k, "predict: past window length must equal k");
    std::vector<double> past_norm(past_raw.size());
    for (std::size_t i = 0; i < past_raw.size(); ++i) {
        require(past_raw[i] > 0.0, "predict: BER values must be positive");
        past_norm[i] = model.norm.norm(past_raw[i]);
    }
    std::vector<double> out = forward(model, past_norm, std::nullopt, 0.0);
    for (double& v : out) {
        v = std::min(model.norm.denorm(v), 0.5);
    }
    return out;
}

double raw_mse(const EdLstmModel& model, const std::vector<telemetry::WindowPair>& windows) {
    require(!windows.empty(), "raw_mse requires windows");
    double acc = 0.0;
    std::size_t count = 0;
    for (const auto& w : windows) {
        const auto pred = predict(model, w.past);
        for (std::size_t j = 0; j < pred.size(); ++j) {
            const double d = pred[j] - w.future[j];
            acc += d * d;
            ++count;
        }
    }
    return acc / static_cast<double>(count);
}

namespace {

constexpr char kMagic[8] = {'Q', 'O', 'T', 'E', 'D', 'L', 'M', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

void write_u64(std::ofstream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_mat(std::ofstream& os, const Mat& m) {
    write_u64(os, static_cast<std::uint64_t>(m.rows()));
    write_u64(os, static_cast<std::uint64_t>(m.cols()));
    os.write(reinterpret_cast<const char*>(m.data()),
             static_cast<std::streamsize>(sizeof(double) * m.size()));
}

std::uint64_t read_u64(std::ifstream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    require(is.good(), "checkpoint truncated");
    return v;
}

Mat read_mat(std::ifstream& is) {
    const auto rows = static_cast<Eigen::Index>(read_u64(is));
    const auto cols = static_cast<Eigen::Index>(read_u64(is));
    require(rows >= 0 && cols >= 0 && rows * cols <= (1 << 28), "checkpoint tensor size implausible");
    Mat m(rows, cols);
    is.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(double) * m.size()));
    require(is.good(), "checkpoint truncated");
    return m;
}

} // namespace

void save(const EdLstmModel& model, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    require(os.good(), "cannot open checkpoint for writing: " + path);
    os.write(kMagic, sizeof(kMagic));
    const std::uint32_t version = kFormatVersion;
    os.write(reinterpret_cast<const char*>(&version), sizeof(version));
    write_u64(os, model.k);
    write_u64(os, model.s);
    write_u64(os, static_cast<std::uint64_t>(model.hidden()));
    os.write(reinterpret_cast<const char*>(&model.norm.lo), sizeof(double));
    os.write(reinterpret_cast<const char*>(&model.norm.hi), sizeof(double));
    write_mat(os, model.encoder.w_x);
    write_mat(os, model.encoder.w_h);
    write_mat(os, model.encoder.b);
    write_mat(os, model.decoder.w_x);
    write_mat(os, model.decoder.w_h);
    write_mat(os, model.decoder.b);
    write_mat(os, model.proj_w);
    os.write(reinterpret_cast<const char*>(&model.proj_b), sizeof(double));
    require(os.good(), "checkpoint write failed: " + path);
}

EdLstmModel load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(is.good(), "cannot open checkpoint: " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    require(is.good() && std::memcmp(magic, kMagic, sizeof(magic)) == 0,
            "not a model checkpoint: " + path);
    std::uint32_t version = 0;
    is.read(reinterpret_cast<char*>(&version), sizeof(version));
    require(is.good(), "checkpoint truncated");
    require(version == kFormatVersion,
            "checkpoint format version mismatch: got " + std::to_string(version) + ", expected " +
                std::to_string(kFormatVersion));
    EdLstmModel m;
    m.k = read_u64(is);
    m.s = read_u64(is);
    const std::uint64_t hidden = read_u64(is);
    is.read(reinterpret_cast<char*>(&m.norm.lo), sizeof(double));
    is.read(reinterpret_cast<char*>(&m.norm.hi), sizeof(double));
    require(is.good(), "checkpoint truncated");
    m.encoder.w_x = read_mat(is);
    m.encoder.w_h = read_mat(is);
    m.encoder.b = read_mat(is);
    m.decoder.w_x = read_mat(is);
    m.decoder.w_h = read_mat(is);
    m.decoder.b = read_mat(is);
    m.proj_w = read_mat(is);
    is.read(reinterpret_cast<char*>(&m.proj_b), sizeof(double));
    require(is.good(), "checkpoint truncated");
    require(static_cast<std::uint64_t>(m.encoder.hidden()) == hidden &&
                static_cast<std::uint64_t>(m.decoder.hidden()) == hidden &&
                static_cast<std::uint64_t>(m.proj_w.size()) == hidden,
            "checkpoint tensor dimensions inconsistent with header");
    return m;
}

} // namespace qot::forecaster
