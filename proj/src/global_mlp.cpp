#include <cmath>
#include <numeric>

#include "lomef/gfm.hpp"

namespace lomef {

GlobalMLPModel::GlobalMLPModel(DatasetTransform transform, WindowConfig window, Matrix w1,
                               Vector b1, Matrix w2, Vector b2, std::vector<double> loss_history)
    : transform_(std::move(transform)),
      window_(window),
      w1_(std::move(w1)),
      b1_(std::move(b1)),
      w2_(std::move(w2)),
      b2_(std::move(b2)),
      loss_history_(std::move(loss_history)) {}

Vector GlobalMLPModel::predict_window(const Vector& window) const {
    const double anchor = window(window.size() - 1);
    const Vector x = window.array() - anchor;
    const Vector hidden = (w1_ * x + b1_).array().tanh();
    return (w2_ * hidden + b2_).array() + anchor;
}

Vector GlobalMLPModel::one_step_fit(const Vector& values) const {
    const Eigen::Index n = window_.input_len;
    const Eigen::Index T = values.size();
    if (T <= n) fail(ErrorKind::SeriesTooShort, "series is not longer than the input window");
    const auto [z, record] = transform_.forward(values);
    Vector raw(T - n);
    for (Eigen::Index t = n; t < T; ++t) raw(t - n) = predict_window(z.segment(t - n, n))(0);
    return transform_.inverse(raw, record);
}

Vector GlobalMLPModel::forecast(const Vector& history, int horizon) const {
    const Eigen::Index n = window_.input_len;
    if (history.size() < n) fail(ErrorKind::SeriesTooShort, "history is shorter than the input window");
    if (horizon < 1) fail(ErrorKind::InvalidArgument, "horizon must be >= 1");
    const auto [z, record] = transform_.forward(history);
    Vector buffer(n + horizon);
    buffer.head(n) = z.tail(n);
    Eigen::Index produced = 0;
    while (produced < horizon) {
        const Vector out = predict_window(buffer.segment(produced, n));
        const Eigen::Index take = std::min<Eigen::Index>(out.size(), horizon - produced);
        buffer.segment(n + produced, take) = out.head(take);
        produced += take;
    }
    return transform_.inverse(buffer.tail(horizon), record);
}

namespace {

struct AdamState {
    Matrix m, v;
    explicit AdamState(Eigen::Index rows, Eigen::Index cols)
        : m(Matrix::Zero(rows, cols)), v(Matrix::Zero(rows, cols)) {}

    void apply(Eigen::Ref<Matrix> param, const Matrix& grad, double lr, int step) {
        constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        m = b1 * m + (1.0 - b1) * grad;
        v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
        const double c1 = 1.0 - std::pow(b1, step);
        const double c2 = 1.0 - std::pow(b2, step);
        param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
    }
};

}  // namespace

GlobalMLPModel fit_global_mlp(const SeriesSet& set, const WindowConfig& window, int hidden,
                              int epochs, RngSeed seed, const MlpOptions& options) {
    if (hidden < 1) fail(ErrorKind::InvalidArgument, "hidden width must be >= 1");
    if (epochs < 1) fail(ErrorKind::InvalidArgument, "epochs must be >= 1");
    if (set.series.empty()) fail(ErrorKind::InvalidArgument, "cannot fit a global model on no series");
    const Eigen::Index n = window.input_len;
    const Eigen::Index m = window.output_len;

    DatasetTransform transform = DatasetTransform::fit(set, options.preprocess);

    std::vector<WindowRecord> records;
    for (const auto& s : set.series) {
        auto windows = make_windows(transform.forward(s.values).first, window);
        records.insert(records.end(), windows.begin(), windows.end());
    }
    const Eigen::Index R = Eigen::Index(records.size());
    Matrix X(n, R), Y(m, R);
    for (Eigen::Index r = 0; r < R; ++r) {
        const double anchor = records[r].input(n - 1);
        X.col(r) = records[r].input.array() - anchor;
        Y.col(r) = records[r].output.array() - anchor;
    }

    Rng rng(seed);
    Matrix w1(hidden, n), w2(m, hidden);
    for (auto& w : w1.reshaped()) w = rng.normal() / std::sqrt(double(n));
    for (auto& w : w2.reshaped()) w = rng.normal() / std::sqrt(double(hidden));
    Matrix b1 = Matrix::Zero(hidden, 1);
    Matrix b2 = Matrix::Zero(m, 1);

    AdamState s_w1(hidden, n), s_b1(hidden, 1), s_w2(m, hidden), s_b2(m, 1);

    auto full_loss = [&] {
        const Matrix A = ((w1 * X).colwise() + b1.col(0)).array().tanh();
        const Matrix out = (w2 * A).colwise() + b2.col(0);
        return (out - Y).squaredNorm() / double(R * m);
    };

    const int checkpoint_every =
        options.checkpoint_every > 0 ? options.checkpoint_every : std::max(1, epochs / 20);
    const Eigen::Index batch = std::max<Eigen::Index>(1, options.batch_size);

    std::vector<double> losses;
    std::vector<Eigen::Index> order(R);
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    int step = 0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        for (Eigen::Index i = R - 1; i > 0; --i) {
            std::swap(order[i], order[rng.uniform_index(std::size_t(i + 1))]);
        }
        const double lr = options.learning_rate / (1.0 + 0.02 * double(epoch));
        for (Eigen::Index start = 0; start < R; start += batch) {
            const Eigen::Index B = std::min(batch, R - start);
            Matrix xb(n, B), yb(m, B);
            for (Eigen::Index j = 0; j < B; ++j) {
                xb.col(j) = X.col(order[start + j]);
                yb.col(j) = Y.col(order[start + j]);
            }
            const Matrix A = ((w1 * xb).colwise() + b1.col(0)).array().tanh();
            const Matrix out = (w2 * A).colwise() + b2.col(0);
            const Matrix d_out = 2.0 * (out - yb) / double(B * m);
            const Matrix g_w2 = d_out * A.transpose();
            const Matrix g_b2 = d_out.rowwise().sum();
            const Matrix d_z = (w2.transpose() * d_out).array() * (1.0 - A.array().square());
            const Matrix g_w1 = d_z * xb.transpose();
            const Matrix g_b1 = d_z.rowwise().sum();
            ++step;
            s_w1.apply(w1, g_w1, lr, step);
            s_b1.apply(b1, g_b1, lr, step);
            s_w2.apply(w2, g_w2, lr, step);
            s_b2.apply(b2, g_b2, lr, step);
        }
        if ((epoch + 1) % checkpoint_every == 0 || epoch + 1 == epochs) {
            const double loss = full_loss();
            if (!std::isfinite(loss)) {
                fail(ErrorKind::DivergedTraining, "training loss became non-finite at epoch " +
                                                      std::to_string(epoch + 1));
            }
            losses.push_back(loss);
        }
    }
    return GlobalMLPModel(std::move(transform), window, std::move(w1), b1.col(0), std::move(w2),
                          b2.col(0), std::move(losses));
}

}  // namespace lomef
