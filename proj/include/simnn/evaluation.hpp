#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simnn/dataset.hpp"
#include "simnn/models.hpp"

namespace simnn {

struct Metrics {
    double error_pct = 0.0;            // misclassification percentage in [0, 100]
    double mse = 0.0;                  // mean over examples and outputs
    std::optional<double> nrmse;       // absent when the test targets have zero variance
};

// predicted/target matrices are N x m; classes are level indices.
Metrics compute_metrics(const Eigen::MatrixXd& outputs, const std::vector<std::int32_t>& predicted,
                        const Eigen::MatrixXd& targets, const std::vector<std::int32_t>& truth);

using Predictor = std::function<Prediction(const Example&)>;

struct Method {
    std::string name;
    // Trains on a fold; cell_seed is unique per (replication, fold, method).
    std::function<Predictor(const Dataset& fold, std::uint64_t cell_seed)> train;
};

struct CVCell {
    bool failed = false;
    std::string error;
    Metrics metrics;
};

struct CVReport {
    std::vector<std::string> method_names;
    // cells[method][replication][fold]
    std::vector<std::array<std::array<CVCell, 2>, 5>> cells;
    std::uint64_t plan_seed = 0;

    bool any_failed(std::size_t method) const;
};

enum class MetricKind { ErrorPct, Mse, Nrmse };

const char* to_string(MetricKind kind);

// Mean of the 10 estimates; absent if any cell failed or (nrmse) any estimate is absent.
std::optional<double> mean_metric(const CVReport& report, std::size_t method, MetricKind kind);

CVReport run_5x2(const std::vector<Method>& methods, const Dataset& data, const FoldPlan& plan);

// Differences p_i^(j) between two methods, replication-major. Error rates enter
// as proportions; the tests are scale-invariant so the choice is cosmetic.
struct PairedDiffs {
    std::array<std::array<double, 2>, 5> p{};
};

// Throws std::domain_error when a needed estimate failed or is absent.
PairedDiffs paired_diffs(const CVReport& report, std::size_t method_a, std::size_t method_b, MetricKind kind);

struct TestResult {
    std::string test;       // "t" or "F"
    double statistic = 0.0;
    double threshold = 0.0;
    bool significant = false;
    std::string method_a;
    std::string method_b;
    std::string metric;
};

// t = p_1^(1) / sqrt(sum s_i^2 / 5); significant above 2.571. Throws
// std::domain_error when every s_i^2 is zero.
TestResult dietterich_t(const PairedDiffs& diffs);

// F = sum_ij (p_i^(j))^2 / (2 sum s_i^2); significant above 4.74. Throws
// std::domain_error on a zero denominator.
TestResult alpaydin_f(const PairedDiffs& diffs);

}  // namespace simnn
