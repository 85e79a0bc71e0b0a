#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "simnn/dataset.hpp"
#include "simnn/evaluation.hpp"
#include "simnn/models.hpp"

namespace simnn {

inline constexpr const char* kArtifactVersion = "1.0.0";

enum class MethodKind { Snn, Rbf2, Rbfk };

const char* to_string(MethodKind kind);

// One method entry: threshold grid for the similarity-clustered models, center
// count grid for the k-means baseline. A single-element grid pins the value;
// larger grids are resolved per training fold by smallest fit GCV.
struct MethodSpec {
    MethodKind kind = MethodKind::Snn;
    std::vector<double> s_min_grid;
    std::vector<std::size_t> k_grid;
};

struct ExperimentConfig {
    std::vector<std::string> data_files;
    std::string schema_source = "horse-colic";  // built-in name or a descriptor file path
    Task::Kind task = Task::HC24;
    std::vector<MethodSpec> methods;
    SimilarityConfig similarity;
    double sigma_factor = 1.0;
    bool penalize_bias = false;
    bool has_seed = false;  // the seed must be given explicitly
    std::uint64_t seed = 0;
    std::string output_dir = ".";
};

// Default grids when a method entry pins nothing.
std::vector<double> default_s_min_grid();
std::vector<std::size_t> default_k_grid();

// Parses a config document; accepts either a bare config or a run manifest
// (whose "config" member is then used), so a run can be repeated from its
// own manifest. Throws std::invalid_argument on validation problems.
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);
nlohmann::json experiment_config_to_json(const ExperimentConfig& config);

// Hyperparameters resolved for one train fold, plus the winning fit GCV.
struct CellSelection {
    double s_min = 0.0;
    std::size_t k = 0;
    double gcv = 0.0;
};

struct ExperimentResult {
    CVReport report;
    // selections[method] lists 10 entries in (replication, fold) order
    std::vector<std::vector<CellSelection>> selections;
    // t and F against the first-listed method, one pair per metric per method;
    // refusals (failed cells, undefined statistics) are recorded as text
    std::vector<TestResult> tests;
    std::vector<std::string> refusals;
};

Dataset load_experiment_data(const ExperimentConfig& config);

ExperimentResult run_experiment_cv(const ExperimentConfig& config, const Dataset& task_data);

// Machine-readable run manifest: config echo, per-cell numbers, means, tests.
// Deterministic content for identical configs.
nlohmann::json experiment_manifest(const ExperimentConfig& config, const ExperimentResult& result);

// Human-readable and tab-delimited table renderings.
std::string metrics_table_text(const ExperimentResult& result);
std::string metrics_table_tsv(const ExperimentResult& result);
std::string significance_table_text(const ExperimentResult& result);
std::string significance_table_tsv(const ExperimentResult& result);

}  // namespace simnn
