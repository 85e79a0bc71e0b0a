#include "simnn/evaluation.hpp"

#include <cmath>
#include <stdexcept>

#include "simnn/rng.hpp"

namespace simnn {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

const char* to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::ErrorPct: return "error_pct";
        case MetricKind::Mse: return "mse";
        case MetricKind::Nrmse: return "nrmse";
    }
    return "?";
}

Metrics compute_metrics(const Eigen::MatrixXd& outputs, const std::vector<std::int32_t>& predicted,
                        const Eigen::MatrixXd& targets, const std::vector<std::int32_t>& truth) {
    const Eigen::Index n = outputs.rows();
    const Eigen::Index m = outputs.cols();
    if (n < 1) fail("compute_metrics: need at least one example");
    if (targets.rows() != n || targets.cols() != m) fail("compute_metrics: output/target shape mismatch");
    if (predicted.size() != static_cast<std::size_t>(n) || truth.size() != static_cast<std::size_t>(n))
        fail("compute_metrics: class vector length mismatch");

    Metrics metrics;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (predicted[i] != truth[i]) ++wrong;
    metrics.error_pct = 100.0 * static_cast<double>(wrong) / static_cast<double>(n);

    const double sse = (outputs - targets).squaredNorm();
    metrics.mse = sse / (static_cast<double>(n) * static_cast<double>(m));

    double deviation = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        const double mean = targets.col(k).mean();
        deviation += (targets.col(k).array() - mean).square().sum();
    }
    if (deviation > 0.0) metrics.nrmse = std::sqrt(sse / deviation);
    return metrics;
}

bool CVReport::any_failed(std::size_t method) const {
    for (const auto& rep : cells.at(method))
        for (const auto& cell : rep)
            if (cell.failed) return true;
    return false;
}

std::optional<double> mean_metric(const CVReport& report, std::size_t method, MetricKind kind) {
    double sum = 0.0;
    for (const auto& rep : report.cells.at(method)) {
        for (const auto& cell : rep) {
            if (cell.failed) return std::nullopt;
            switch (kind) {
                case MetricKind::ErrorPct: sum += cell.metrics.error_pct; break;
                case MetricKind::Mse: sum += cell.metrics.mse; break;
                case MetricKind::Nrmse:
                    if (!cell.metrics.nrmse) return std::nullopt;
                    sum += *cell.metrics.nrmse;
                    break;
            }
        }
    }
    return sum / 10.0;
}

namespace {

CVCell evaluate_cell(const Method& method, const Dataset& train_fold, const Dataset& test_fold,
                     std::uint64_t cell_seed) {
    CVCell cell;
    try {
        const Predictor predictor = method.train(train_fold, cell_seed);
        const std::size_t t = test_fold.schema.sole_target_index();
        const auto m = static_cast<Eigen::Index>(test_fold.schema[t].levels.size());
        const auto n = static_cast<Eigen::Index>(test_fold.size());
        Eigen::MatrixXd outputs(n, m);
        Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(n, m);
        std::vector<std::int32_t> predicted(test_fold.size());
        std::vector<std::int32_t> truth(test_fold.size());
        for (std::size_t i = 0; i < test_fold.size(); ++i) {
            const Prediction pred = predictor(test_fold.examples[i]);
            if (pred.outputs.size() != static_cast<std::size_t>(m))
                throw std::runtime_error("predictor output arity mismatch");
            for (Eigen::Index k = 0; k < m; ++k)
                outputs(static_cast<Eigen::Index>(i), k) = pred.outputs[static_cast<std::size_t>(k)];
            predicted[i] = pred.class_index;
            truth[i] = target_class(test_fold.schema, test_fold.examples[i]);
            targets(static_cast<Eigen::Index>(i), truth[i]) = 1.0;
        }
        cell.metrics = compute_metrics(outputs, predicted, targets, truth);
    } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
    }
    return cell;
}

}  // namespace

CVReport run_5x2(const std::vector<Method>& methods, const Dataset& data, const FoldPlan& plan) {
    if (methods.empty()) fail("run_5x2: no methods given");
    CVReport report;
    report.plan_seed = plan.seed;
    report.cells.resize(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m) {
        report.method_names.push_back(methods[m].name);
        for (std::size_t r = 0; r < plan.replications.size(); ++r) {
            const Dataset fold_a = subset(data, plan.replications[r].fold_a);
            const Dataset fold_b = subset(data, plan.replications[r].fold_b);
            const auto seed0 = mix_seed(plan.seed, {0xce11ULL, r, 0, m});
            const auto seed1 = mix_seed(plan.seed, {0xce11ULL, r, 1, m});
            report.cells[m][r][0] = evaluate_cell(methods[m], fold_a, fold_b, seed0);
            report.cells[m][r][1] = evaluate_cell(methods[m], fold_b, fold_a, seed1);
        }
    }
    return report;
}

PairedDiffs paired_diffs(const CVReport& report, std::size_t method_a, std::size_t method_b, MetricKind kind) {
    PairedDiffs diffs;
    for (std::size_t r = 0; r < 5; ++r) {
        for (std::size_t j = 0; j < 2; ++j) {
            const CVCell& ca = report.cells.at(method_a)[r][j];
            const CVCell& cb = report.cells.at(method_b)[r][j];
            if (ca.failed || cb.failed)
                throw std::domain_error("paired test refused: a fold estimate failed for " +
                                        report.method_names.at(ca.failed ? method_a : method_b));
            double va = 0.0, vb = 0.0;
            switch (kind) {
                case MetricKind::ErrorPct:  // proportions; the tests are scale-invariant
                    va = ca.metrics.error_pct / 100.0;
                    vb = cb.metrics.error_pct / 100.0;
                    break;
                case MetricKind::Mse:
                    va = ca.metrics.mse;
                    vb = cb.metrics.mse;
                    break;
                case MetricKind::Nrmse:
                    if (!ca.metrics.nrmse || !cb.metrics.nrmse)
                        throw std::domain_error("paired test refused: an nrmse estimate is undefined");
                    va = *ca.metrics.nrmse;
                    vb = *cb.metrics.nrmse;
                    break;
            }
            diffs.p[r][j] = va - vb;
        }
    }
    return diffs;
}

namespace {

double variance_sum(const PairedDiffs& diffs) {
    double sum = 0.0;
    for (const auto& rep : diffs.p) {
        const double mean = 0.5 * (rep[0] + rep[1]);
        sum += (rep[0] - mean) * (rep[0] - mean) + (rep[1] - mean) * (rep[1] - mean);
    }
    return sum;
}

}  // namespace

TestResult dietterich_t(const PairedDiffs& diffs) {
    const double s2 = variance_sum(diffs);
    if (s2 <= 0.0) throw std::domain_error("paired t statistic undefined: zero variance across replications");
    TestResult result;
    result.test = "t";
    result.statistic = diffs.p[0][0] / std::sqrt(s2 / 5.0);
    result.threshold = 2.571;
    result.significant = result.statistic > result.threshold;
    return result;
}

TestResult alpaydin_f(const PairedDiffs& diffs) {
    const double s2 = variance_sum(diffs);
    if (s2 <= 0.0) throw std::domain_error("paired F statistic undefined: zero variance across replications");
    double numer = 0.0;
    for (const auto& rep : diffs.p) numer += rep[0] * rep[0] + rep[1] * rep[1];
    TestResult result;
    result.test = "F";
    result.statistic = numer / (2.0 * s2);
    result.threshold = 4.74;
    result.significant = result.statistic > result.threshold;
    return result;
}

}  // namespace simnn
