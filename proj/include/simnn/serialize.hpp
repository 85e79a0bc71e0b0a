#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "simnn/models.hpp"

namespace simnn {

// Versioned model documents. Enough state to reload and predict identically:
// schema descriptor text, fitted statistics, prototypes/centers, weights.
inline constexpr int kModelFormatVersion = 1;

nlohmann::json similarity_config_to_json(const SimilarityConfig& config);
SimilarityConfig similarity_config_from_json(const nlohmann::json& doc);

nlohmann::json snn_to_json(const SNNModel& model);
SNNModel snn_from_json(const nlohmann::json& doc);

nlohmann::json rbf_to_json(const RBFModel& model);
RBFModel rbf_from_json(const nlohmann::json& doc);

// Dispatching wrappers over the "model" tag ("snn", "rbf").
nlohmann::json model_to_json(const SNNModel& model);
nlohmann::json model_to_json(const RBFModel& model);

struct LoadedModel {
    std::optional<SNNModel> snn;
    std::optional<RBFModel> rbf;
};

LoadedModel model_from_json(const nlohmann::json& doc);

// Writes text to path atomically (temp file + rename in the same directory).
void write_file_atomic(const std::string& path, const std::string& text);

std::string read_file(const std::string& path);

}  // namespace simnn
