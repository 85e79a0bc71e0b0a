#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "simnn/dataset.hpp"

namespace simnn {

enum class NominalMode { Overlap, Frequency };
enum class MissingPolicy { Midpoint, Gower };

struct SimilarityConfig {
    NominalMode nominal_mode = NominalMode::Frequency;
    double normalization_exponent = 1.0;  // a > 0
    double continuous_alpha = 1.0;        // alpha >= 1
    double continuous_beta = 1.0;         // 0 < beta <= 1
    MissingPolicy missing_policy = MissingPolicy::Midpoint;
    double probability_floor = 1e-6;      // epsilon in (0, 0.5)
};

// Raw partial similarity for one variable: absent when either value is missing.
using PartialSimilarity = std::optional<double>;

// Per-variable statistics fitted on a training fold. `probabilities` are the
// clamped level fractions (discrete kinds), `range_*` the observed span
// (continuous), `baseline` the mean raw pair similarity s_..k with 0.5 fallback.
// `normalized_table` caches normalized partials for discrete kinds; it is
// derived data, rebuilt by finalize_tables().
struct VariableStats {
    std::vector<double> probabilities;
    double range_lo = 0.0;
    double range_hi = 0.0;
    bool degenerate_range = true;  // fewer than 2 distinct training values
    double baseline = 0.5;
    std::vector<double> normalized_table;
};

struct SimilarityModel {
    Schema schema;
    SimilarityConfig config;
    std::vector<VariableStats> stats;        // indexed by schema variable index
    std::vector<std::size_t> predictors;     // cached schema.predictor_indices()

    // Rebuilds derived caches (normalized tables). Called by fit and by the
    // deserializer; idempotent.
    void finalize_tables();
};

SimilarityModel fit_similarity_model(const Dataset& train, const SimilarityConfig& config);

// Raw (un-normalized) partial similarity of Eq-family rules for variable k.
PartialSimilarity partial_similarity(const SimilarityModel& model, std::size_t k, const Value& u, const Value& v);

// Missing partials map to exactly 0.5; present s maps to n(s / s_..k) with
// n(z) = z^a / (z^a + 1) and n(0) = 0.
double normalize_partial(const SimilarityModel& model, std::size_t k, const PartialSimilarity& s);

// Aggregate normalized similarity over predictor variables under the model's
// missing policy. Always in [0, 1].
double similarity(const SimilarityModel& model, const Example& x, const Example& y);

// Largest similarity the model can return. Every per-variable normalized value
// caps at n(1/s_..k); averaging over all predictors bounds the midpoint policy
// by the mean cap, while the present-subset mean's supremum is the largest cap.
double max_attainable_similarity(const SimilarityModel& model);

Eigen::MatrixXd similarity_matrix(const SimilarityModel& model, const Dataset& data);

// Row-major full-precision text grid, one row per line.
std::string format_matrix(const Eigen::MatrixXd& m);

}  // namespace simnn
