#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simnn/clustering.hpp"
#include "simnn/dataset.hpp"
#include "simnn/similarity.hpp"

namespace simnn {

struct SNNModel {
    SimilarityModel similarity;
    std::vector<Example> prototypes;          // verbatim training rows (the leaders)
    std::vector<std::size_t> prototype_rows;  // their row indices in the training fold
    std::vector<double> smoothing;            // p_i > 0, one per prototype
    Eigen::MatrixXd weights;                  // m x (h+1), column 0 = bias
    double lambda = 0.0;
    double gcv = std::numeric_limits<double>::quiet_NaN();  // NaN when degenerate
    double s_min = 0.0;
    std::vector<std::string> class_labels;
};

enum class RbfKind { KMeansCenters, LeaderCenters };

struct RBFModel {
    RbfKind kind = RbfKind::KMeansCenters;
    Schema schema;
    Encoder encoder;
    Eigen::MatrixXd centers;  // h x d encoded vectors
    double sigma = 1.0;
    Eigen::MatrixXd weights;  // m x (h+1), column 0 = bias
    double lambda = 0.0;
    double gcv = std::numeric_limits<double>::quiet_NaN();  // NaN when degenerate
    std::vector<std::string> class_labels;
};

struct RidgeFit {
    Eigen::MatrixXd weights;  // m x (h+1)
    double lambda = 0.0;
    double gcv = 0.0;
    int iterations = 0;
};

struct Prediction {
    std::vector<double> outputs;  // one per class, indicator regression scores
    std::int32_t class_index = 0;
};

struct SnnTrainConfig {
    SimilarityConfig similarity;
    double s_min = 0.6;
    bool penalize_bias = false;  // keep the bias weight out of the ridge penalty by default
};

struct RbfTrainConfig {
    SimilarityConfig similarity;  // drives the leader-based variant's clustering
    double s_min = 0.6;           // leader variant threshold
    std::size_t k = 8;            // k-means variant center count
    double sigma_factor = 1.0;
    bool penalize_bias = false;
};

// Two-branch sigmoid-like family on [0,1]: fixed points at 0, 1/2, 1,
// identity as p -> inf, Heaviside step about 0.5 as p -> 0.
double activation(double x, double p);

// chi_i = m_i l_i / (m_i l_i + alpha m̄ l̄) with alpha = e^0.1 - 1; p_i = -ln chi_i.
std::vector<double> smoothing_from_stats(const ClusterStats& stats);

double s_neuron(const SimilarityModel& model, const Example& prototype, double p, const Example& x);

// N x (h+1); column 0 all ones, column j the j-th neuron's response.
Eigen::MatrixXd design_matrix(const SimilarityModel& model, const std::vector<Example>& prototypes,
                              const std::vector<double>& smoothing, const std::vector<Example>& examples);

// Penalized least squares per output column; penalize_bias=false zeroes the
// penalty on column 0 of H.
Eigen::MatrixXd ridge_solve(const Eigen::MatrixXd& H, const Eigen::MatrixXd& Y, double lambda,
                            bool penalize_bias = false);

// N * sum_k |P y_k|^2 / (Tr P)^2 with P = I - H A^-1 H^T. Absent when Tr P
// is numerically zero (saturated fit).
std::optional<double> gcv_score(const Eigen::MatrixXd& H, const Eigen::MatrixXd& Y, double lambda,
                                bool penalize_bias = false);

// Fixed-point re-estimation from starts {1e-6, 1e-3, 1}, at most 100 iterations
// each, smallest-GCV candidate wins. Absent when every start degenerates; the
// caller then falls back to lambda = 1e-3.
std::optional<RidgeFit> optimize_lambda(const Eigen::MatrixXd& H, const Eigen::MatrixXd& Y,
                                        bool penalize_bias = false);

SNNModel train_snn(const Dataset& train, const SnnTrainConfig& config);
Prediction predict_snn(const SNNModel& model, const Example& x);

// sigma = factor * mean nearest-other-center distance; 1.0 when h = 1; floored
// at 1e-6 for coincident centers.
double rbf_sigma(const Eigen::MatrixXd& centers, double factor = 1.0);

RBFModel train_rbf(const Dataset& train, RbfKind kind, const RbfTrainConfig& config, std::uint64_t seed);
Prediction predict_rbf(const RBFModel& model, const Example& x);

}  // namespace simnn
