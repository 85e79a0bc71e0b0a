#include "simnn/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace simnn {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

// Slope parameter of the activation family; algebraically
// (-0.5 + sqrt(0.25 + 4p)) / 2, in a cancellation-free form.
double activation_slope(double p) { return 2.0 * p / (0.5 + std::sqrt(0.25 + 4.0 * p)); }

}  // namespace

double activation(double x, double p) {
    if (!(p > 0.0)) fail("activation: p must be positive");
    if (!(x >= 0.0 && x <= 1.0)) fail("activation: x must lie in [0, 1]");
    const double a = activation_slope(p);
    // group the half-distance first: near x = 0.5 it is exact, so the
    // denominator never cancels against a tiny slope parameter
    if (x <= 0.5) return a * x / (a + (0.5 - x));
    return 1.0 - a * (1.0 - x) / (a + (x - 0.5));
}

std::vector<double> smoothing_from_stats(const ClusterStats& stats) {
    if (!(stats.mean_size > 0.0 && stats.mean_similarity > 0.0))
        fail("smoothing_from_stats: global averages must be positive");
    const double alpha = std::expm1(0.1);
    const double global = stats.mean_similarity * stats.mean_size;
    std::vector<double> p(stats.sizes.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double local = stats.mean_similarities[i] * static_cast<double>(stats.sizes[i]);
        double chi = local / (local + alpha * global);
        chi = std::max(chi, 1e-300);  // keep -ln finite for pathological clusters
        p[i] = -std::log(chi);
    }
    return p;
}

double s_neuron(const SimilarityModel& model, const Example& prototype, double p, const Example& x) {
    return activation(similarity(model, x, prototype), p);
}

Eigen::MatrixXd design_matrix(const SimilarityModel& model, const std::vector<Example>& prototypes,
                              const std::vector<double>& smoothing, const std::vector<Example>& examples) {
    if (prototypes.empty()) fail("design_matrix: need at least one neuron");
    if (prototypes.size() != smoothing.size()) fail("design_matrix: prototype/smoothing arity mismatch");
    if (examples.empty()) fail("design_matrix: need at least one example");
    const auto n = static_cast<Eigen::Index>(examples.size());
    const auto h = static_cast<Eigen::Index>(prototypes.size());
    Eigen::MatrixXd H(n, h + 1);
    H.col(0).setOnes();
    for (Eigen::Index j = 0; j < h; ++j) {
        const auto& proto = prototypes[static_cast<std::size_t>(j)];
        const double p = smoothing[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < n; ++i)
            H(i, j + 1) = s_neuron(model, proto, p, examples[static_cast<std::size_t>(i)]);
    }
    return H;
}

namespace {

// Penalty pattern: identity, optionally with a zero entry for the bias column.
Eigen::VectorXd penalty_diagonal(Eigen::Index cols, bool penalize_bias) {
    Eigen::VectorXd d = Eigen::VectorXd::Ones(cols);
    if (!penalize_bias && cols > 0) d(0) = 0.0;
    return d;
}

Eigen::MatrixXd build_A(const Eigen::MatrixXd& H, double lambda, const Eigen::VectorXd& d) {
    Eigen::MatrixXd A = H.transpose() * H;
    A.diagonal() += lambda * d;
    return A;
}

struct RidgeContext {
    Eigen::MatrixXd X;       // (h+1) x m solution
    Eigen::MatrixXd R;       // N x m residual Y - HX
    double rss = 0.0;        // |R|_F^2
    double tr_p = 0.0;       // trace of the smoother complement
    double tr_ainv_d = 0.0;  // tr(A^-1 D)
    double tr_aind_sq = 0.0; // tr((A^-1 D)^2)
    double w_quad = 0.0;     // sum_k w_k^T D A^-1 D w_k
};

RidgeContext ridge_context(const Eigen::MatrixXd& H, const Eigen::MatrixXd& Y, double lambda, bool penalize_bias) {
    const Eigen::Index cols = H.cols();
    const Eigen::VectorXd d = penalty_diagonal(cols, penalize_bias);
    const Eigen::MatrixXd A = build_A(H, lambda, d);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("ridge: factorization failed");

    const Eigen::MatrixXd HtY = H.transpose() * Y;
    RidgeContext ctx;
    ctx.X = ldlt.solve(HtY);
    ctx.X += ldlt.solve(HtY - A * ctx.X);  // one refinement step
    ctx.R = Y - H * ctx.X;
    ctx.rss = ctx.R.squaredNorm();

    const Eigen::MatrixXd B = ldlt.solve(Eigen::MatrixXd(d.asDiagonal()));  // A^-1 D
    ctx.tr_ainv_d = B.trace();
    ctx.tr_aind_sq = (B.array() * B.transpose().array()).sum();
    ctx.tr_p = static_cast<double>(H.rows()) - static_cast<double>(cols) + lambda * ctx.tr_ainv_d;

    const Eigen::MatrixXd DX = d.asDiagonal() * ctx.X;
    ctx.w_quad = (DX.array() * ldlt.solve(DX).array()).sum();
    return ctx;
}

}  // namespace

Eigen::MatrixXd ridge_solve(const Eigen::MatrixXd& H, const Eigen::MatrixXd& Y, double lambda, bool penalize_bias) {
    if (!(lambda > 0.0)) fail("ridge_solve: lambda must be positive");
    if (H.rows() != Y.rows()) fail("ridge_solve: row mismatch between H and Y");
    if (!H.allFinite() || !Y.allFinite()) fail("ridge_solve: inputs must be finite");
    return ridge_context(H, Y, lambda, penalize_bias).X.transpose();
}

std::optional<double> gcv_score(const Eigen::MatrixXd& H, const Eigen::MatrixXd& Y, double lambda,
                                bool penalize_bias) {
    if (!(lambda > 0.0)) fail("gcv_score: lambda must be positive");
    if (H.rows() != Y.rows()) fail("gcv_score: row mismatch between H and Y");
    const RidgeContext ctx = ridge_context(H, Y, lambda, penalize_bias);
    const double n = static_cast<double>(H.rows());
    if (!(ctx.tr_p > 1e-12 * n)) return std::nullopt;  // saturated smoother
    return n * ctx.rss / (ctx.tr_p * ctx.tr_p);
}

std::optional<RidgeFit> optimize_lambda(const Eigen::MatrixXd& H, const Eigen::MatrixXd& Y, bool penalize_bias) {
    if (H.rows() != Y.rows()) fail("optimize_lambda: row mismatch between H and Y");
    if (!H.allFinite() || !Y.allFinite()) fail("optimize_lambda: inputs must be finite");

    constexpr int kMaxIterations = 100;
    constexpr double kLambdaFloor = 1e-12;
    const double starts[] = {1e-6, 1e-3, 1.0};

    std::optional<RidgeFit> best;
    for (double start : starts) {
        double lambda = start;
        int iterations = 0;
        bool valid = true;
        for (; iterations < kMaxIterations; ++iterations) {
            RidgeContext ctx;
            try {
                ctx = ridge_context(H, Y, lambda, penalize_bias);
            } catch (const std::exception&) {
                valid = false;
                break;
            }
            const double numer = (ctx.tr_ainv_d - lambda * ctx.tr_aind_sq) * ctx.rss;
            const double denom = ctx.tr_p * ctx.w_quad;
            const double next = numer / denom;
            if (!std::isfinite(next)) {
                valid = false;
                break;
            }
            const double clamped = std::max(next, kLambdaFloor);
            const bool converged = std::abs(clamped - lambda) <= 1e-8 * std::max(lambda, 1.0);
            lambda = clamped;
            if (converged) {
                ++iterations;
                break;
            }
        }
        if (!valid) continue;
        const auto score = gcv_score(H, Y, lambda, penalize_bias);
        if (!score) continue;
        if (!best || *score < best->gcv) {
            RidgeFit fit;
            fit.weights = ridge_solve(H, Y, lambda, penalize_bias);
            fit.lambda = lambda;
            fit.gcv = *score;
            fit.iterations = iterations;
            best = std::move(fit);
        }
    }
    return best;
}

namespace {

constexpr double kFallbackLambda = 1e-3;

struct OutputLayer {
    Eigen::MatrixXd weights;
    double lambda = kFallbackLambda;
    double gcv = std::numeric_limits<double>::quiet_NaN();
};

// Shared second-layer fit: GCV-tuned ridge, fallback lambda when the
// optimizer signals a degenerate instance.
OutputLayer fit_output_layer(const Eigen::MatrixXd& H, const Eigen::MatrixXd& Y, bool penalize_bias) {
    OutputLayer layer;
    if (auto fit = optimize_lambda(H, Y, penalize_bias)) {
        layer.weights = std::move(fit->weights);
        layer.lambda = fit->lambda;
        layer.gcv = fit->gcv;
    } else {
        layer.weights = ridge_solve(H, Y, kFallbackLambda, penalize_bias);
        if (auto score = gcv_score(H, Y, kFallbackLambda, penalize_bias)) layer.gcv = *score;
    }
    return layer;
}

Eigen::MatrixXd indicator_targets(const Dataset& data) {
    const std::size_t t = data.schema.sole_target_index();
    const auto m = static_cast<Eigen::Index>(data.schema[t].levels.size());
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(data.size()), m);
    for (std::size_t i = 0; i < data.size(); ++i)
        Y(static_cast<Eigen::Index>(i), target_class(data.schema, data.examples[i])) = 1.0;
    return Y;
}

std::int32_t argmax_class(const Eigen::VectorXd& outputs) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < outputs.size(); ++k) {
        if (outputs(k) > outputs(best)) best = k;  // ties keep the lowest index
    }
    return static_cast<std::int32_t>(best);
}

}  // namespace

SNNModel train_snn(const Dataset& train, const SnnTrainConfig& config) {
    if (train.examples.empty()) fail("train_snn: empty training fold");

    SNNModel model;
    model.similarity = fit_similarity_model(train, config.similarity);
    model.s_min = config.s_min;
    model.class_labels = class_labels(train.schema);

    const Eigen::MatrixXd sims = similarity_matrix(model.similarity, train);
    const Clustering clusters = leader2(matrix_source(sims), train.size(), config.s_min);
    const ClusterStats stats = cluster_stats(matrix_source(sims), train.size(), clusters);
    model.smoothing = smoothing_from_stats(stats);
    model.prototype_rows = clusters.leaders;
    for (std::size_t row : clusters.leaders) model.prototypes.push_back(train.examples[row]);

    const Eigen::MatrixXd H = design_matrix(model.similarity, model.prototypes, model.smoothing, train.examples);
    const Eigen::MatrixXd Y = indicator_targets(train);
    OutputLayer layer = fit_output_layer(H, Y, config.penalize_bias);
    model.weights = std::move(layer.weights);
    model.lambda = layer.lambda;
    model.gcv = layer.gcv;
    return model;
}

Prediction predict_snn(const SNNModel& model, const Example& x) {
    const auto h = static_cast<Eigen::Index>(model.prototypes.size());
    Eigen::VectorXd phi(h + 1);
    phi(0) = 1.0;
    for (Eigen::Index j = 0; j < h; ++j)
        phi(j + 1) = s_neuron(model.similarity, model.prototypes[static_cast<std::size_t>(j)],
                              model.smoothing[static_cast<std::size_t>(j)], x);
    const Eigen::VectorXd outputs = model.weights * phi;
    Prediction pred;
    pred.outputs.assign(outputs.data(), outputs.data() + outputs.size());
    pred.class_index = argmax_class(outputs);
    return pred;
}

double rbf_sigma(const Eigen::MatrixXd& centers, double factor) {
    if (centers.rows() < 1) fail("rbf_sigma: need at least one center");
    if (centers.rows() == 1) return 1.0;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < centers.rows(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < centers.rows(); ++j) {
            if (j == i) continue;
            nearest = std::min(nearest, (centers.row(i) - centers.row(j)).norm());
        }
        sum += nearest;
    }
    const double sigma = factor * sum / static_cast<double>(centers.rows());
    return std::max(sigma, 1e-6);
}

namespace {

Eigen::MatrixXd rbf_design(const Eigen::MatrixXd& X, const Eigen::MatrixXd& centers, double sigma) {
    const Eigen::Index n = X.rows();
    const Eigen::Index h = centers.rows();
    Eigen::MatrixXd H(n, h + 1);
    H.col(0).setOnes();
    const double denom = 2.0 * sigma * sigma;
    for (Eigen::Index j = 0; j < h; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            H(i, j + 1) = std::exp(-(X.row(i) - centers.row(j)).squaredNorm() / denom);
    return H;
}

}  // namespace

RBFModel train_rbf(const Dataset& train, RbfKind kind, const RbfTrainConfig& config, std::uint64_t seed) {
    if (train.examples.empty()) fail("train_rbf: empty training fold");

    RBFModel model;
    model.kind = kind;
    model.schema = train.schema;
    model.encoder = fit_encoder(train);
    model.class_labels = class_labels(train.schema);

    const auto n = static_cast<Eigen::Index>(train.size());
    Eigen::MatrixXd X(n, static_cast<Eigen::Index>(model.encoder.dimension));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto row = encode(model.encoder, train.schema, train.examples[static_cast<std::size_t>(i)]);
        for (std::size_t j = 0; j < row.size(); ++j) X(i, static_cast<Eigen::Index>(j)) = row[j];
    }

    if (kind == RbfKind::KMeansCenters) {
        const std::size_t k = std::min(config.k, train.size());  // small folds cap the center count
        model.centers = kmeans(X, k, seed).centers;
    } else {
        const SimilarityModel sim = fit_similarity_model(train, config.similarity);
        const Eigen::MatrixXd sims = similarity_matrix(sim, train);
        const Clustering clusters = leader2(matrix_source(sims), train.size(), config.s_min);
        model.centers.resize(static_cast<Eigen::Index>(clusters.leaders.size()), X.cols());
        for (std::size_t li = 0; li < clusters.leaders.size(); ++li)
            model.centers.row(static_cast<Eigen::Index>(li)) = X.row(static_cast<Eigen::Index>(clusters.leaders[li]));
    }
    model.sigma = rbf_sigma(model.centers, config.sigma_factor);

    const Eigen::MatrixXd H = rbf_design(X, model.centers, model.sigma);
    const Eigen::MatrixXd Y = indicator_targets(train);
    OutputLayer layer = fit_output_layer(H, Y, config.penalize_bias);
    model.weights = std::move(layer.weights);
    model.lambda = layer.lambda;
    model.gcv = layer.gcv;
    return model;
}

Prediction predict_rbf(const RBFModel& model, const Example& x) {
    const auto row = encode(model.encoder, model.schema, x);
    Eigen::MatrixXd X(1, static_cast<Eigen::Index>(row.size()));
    for (std::size_t j = 0; j < row.size(); ++j) X(0, static_cast<Eigen::Index>(j)) = row[j];
    const Eigen::MatrixXd H = rbf_design(X, model.centers, model.sigma);
    const Eigen::VectorXd outputs = model.weights * H.row(0).transpose();
    Prediction pred;
    pred.outputs.assign(outputs.data(), outputs.data() + outputs.size());
    pred.class_index = argmax_class(outputs);
    return pred;
}

}  // namespace simnn
