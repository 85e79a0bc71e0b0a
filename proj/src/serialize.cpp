#include "simnn/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace simnn {

namespace {

using nlohmann::json;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double finite_or_nan(const json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, Eigen::Index expected_cols = -1) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    if (n == 0) {
        if (expected_cols < 0) throw std::runtime_error("model file: empty matrix without a known width");
        return Eigen::MatrixXd(0, expected_cols);
    }
    const auto cols = static_cast<Eigen::Index>(rows.at(0).size());
    Eigen::MatrixXd m(n, cols);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols) throw std::runtime_error("model file: ragged matrix");
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
    }
    return m;
}

json similarity_to_json(const SimilarityModel& model) {
    json stats = json::array();
    for (std::size_t k : model.predictors) {
        const auto& st = model.stats[k];
        stats.push_back(json{{"variable", model.schema[k].name},
                             {"probabilities", st.probabilities},
                             {"range_lo", st.range_lo},
                             {"range_hi", st.range_hi},
                             {"degenerate_range", st.degenerate_range},
                             {"baseline", st.baseline}});
    }
    return json{{"config", similarity_config_to_json(model.config)}, {"stats", std::move(stats)}};
}

SimilarityModel similarity_from_json(const json& doc, const Schema& schema) {
    SimilarityModel model;
    model.schema = schema;
    model.config = similarity_config_from_json(doc.at("config"));
    model.stats.resize(schema.size());
    for (const auto& entry : doc.at("stats")) {
        const auto k = schema.find(entry.at("variable").get<std::string>());
        if (!k) throw std::runtime_error("model file: statistics for unknown variable");
        auto& st = model.stats[*k];
        st.probabilities = entry.at("probabilities").get<std::vector<double>>();
        st.range_lo = entry.at("range_lo").get<double>();
        st.range_hi = entry.at("range_hi").get<double>();
        st.degenerate_range = entry.at("degenerate_range").get<bool>();
        st.baseline = entry.at("baseline").get<double>();
    }
    model.finalize_tables();
    return model;
}

std::vector<Example> examples_from_lines(const json& lines, const Schema& schema, const std::string& what) {
    std::string joined;
    for (const auto& line : lines) {
        joined += line.get<std::string>();
        joined += '\n';
    }
    return parse_dataset(joined, schema, what).examples;
}

void check_header(const json& doc, const std::string& expected_model) {
    if (doc.at("format_version").get<int>() != kModelFormatVersion)
        throw std::runtime_error("model file: unsupported format version");
    if (doc.at("model").get<std::string>() != expected_model)
        throw std::runtime_error("model file: expected a '" + expected_model + "' document");
}

}  // namespace

json similarity_config_to_json(const SimilarityConfig& cfg) {
    return json{{"nominal_mode", cfg.nominal_mode == NominalMode::Overlap ? "overlap" : "frequency"},
                {"normalization_exponent", cfg.normalization_exponent},
                {"continuous_alpha", cfg.continuous_alpha},
                {"continuous_beta", cfg.continuous_beta},
                {"missing_policy", cfg.missing_policy == MissingPolicy::Gower ? "gower" : "midpoint"},
                {"probability_floor", cfg.probability_floor}};
}

SimilarityConfig similarity_config_from_json(const json& doc) {
    SimilarityConfig cfg;
    if (doc.contains("nominal_mode")) {
        const std::string mode = doc.at("nominal_mode").get<std::string>();
        if (mode == "overlap")
            cfg.nominal_mode = NominalMode::Overlap;
        else if (mode == "frequency")
            cfg.nominal_mode = NominalMode::Frequency;
        else
            throw std::invalid_argument("unknown nominal mode '" + mode + "'");
    }
    if (doc.contains("normalization_exponent"))
        cfg.normalization_exponent = doc.at("normalization_exponent").get<double>();
    if (doc.contains("continuous_alpha")) cfg.continuous_alpha = doc.at("continuous_alpha").get<double>();
    if (doc.contains("continuous_beta")) cfg.continuous_beta = doc.at("continuous_beta").get<double>();
    if (doc.contains("missing_policy")) {
        const std::string policy = doc.at("missing_policy").get<std::string>();
        if (policy == "gower")
            cfg.missing_policy = MissingPolicy::Gower;
        else if (policy == "midpoint")
            cfg.missing_policy = MissingPolicy::Midpoint;
        else
            throw std::invalid_argument("unknown missing policy '" + policy + "'");
    }
    if (doc.contains("probability_floor")) cfg.probability_floor = doc.at("probability_floor").get<double>();
    return cfg;
}

json snn_to_json(const SNNModel& model) {
    json prototypes = json::array();
    for (const auto& ex : model.prototypes) prototypes.push_back(serialize_example(model.similarity.schema, ex));
    return json{{"format_version", kModelFormatVersion},
                {"model", "snn"},
                {"schema", format_schema(model.similarity.schema)},
                {"class_labels", model.class_labels},
                {"similarity", similarity_to_json(model.similarity)},
                {"prototype_rows", model.prototype_rows},
                {"prototypes", std::move(prototypes)},
                {"smoothing", model.smoothing},
                {"weights", matrix_to_json(model.weights)},
                {"lambda", model.lambda},
                {"gcv", finite_or_null(model.gcv)},
                {"s_min", model.s_min}};
}

SNNModel snn_from_json(const json& doc) {
    check_header(doc, "snn");
    const Schema schema = parse_schema(doc.at("schema").get<std::string>());
    SNNModel model;
    model.similarity = similarity_from_json(doc.at("similarity"), schema);
    model.class_labels = doc.at("class_labels").get<std::vector<std::string>>();
    model.prototype_rows = doc.at("prototype_rows").get<std::vector<std::size_t>>();
    model.prototypes = examples_from_lines(doc.at("prototypes"), schema, "prototype");
    model.smoothing = doc.at("smoothing").get<std::vector<double>>();
    model.weights = matrix_from_json(doc.at("weights"));
    model.lambda = doc.at("lambda").get<double>();
    model.gcv = finite_or_nan(doc.at("gcv"));
    model.s_min = doc.at("s_min").get<double>();
    if (model.prototypes.size() != model.smoothing.size() ||
        model.weights.cols() != static_cast<Eigen::Index>(model.prototypes.size() + 1))
        throw std::runtime_error("model file: inconsistent layer sizes");
    return model;
}

json rbf_to_json(const RBFModel& model) {
    json rules = json::array();
    for (const auto& rule : model.encoder.rules) {
        rules.push_back(json{{"var_index", rule.var_index},
                             {"first_column", rule.first_column},
                             {"width", rule.width},
                             {"numeric_impute", rule.numeric_impute},
                             {"modal_level", rule.modal_level}});
    }
    return json{{"format_version", kModelFormatVersion},
                {"model", "rbf"},
                {"kind", model.kind == RbfKind::KMeansCenters ? "kmeans" : "leader"},
                {"schema", format_schema(model.schema)},
                {"class_labels", model.class_labels},
                {"encoder",
                 {{"rules", std::move(rules)},
                  {"mean", model.encoder.mean},
                  {"stddev", model.encoder.stddev},
                  {"dimension", model.encoder.dimension}}},
                {"centers", matrix_to_json(model.centers)},
                {"sigma", model.sigma},
                {"weights", matrix_to_json(model.weights)},
                {"lambda", model.lambda},
                {"gcv", finite_or_null(model.gcv)}};
}

RBFModel rbf_from_json(const json& doc) {
    check_header(doc, "rbf");
    RBFModel model;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "kmeans")
        model.kind = RbfKind::KMeansCenters;
    else if (kind == "leader")
        model.kind = RbfKind::LeaderCenters;
    else
        throw std::runtime_error("model file: unknown rbf kind '" + kind + "'");
    model.schema = parse_schema(doc.at("schema").get<std::string>());
    model.class_labels = doc.at("class_labels").get<std::vector<std::string>>();
    const auto& enc = doc.at("encoder");
    for (const auto& entry : enc.at("rules")) {
        Encoder::VariableRule rule;
        rule.var_index = entry.at("var_index").get<std::size_t>();
        rule.first_column = entry.at("first_column").get<std::size_t>();
        rule.width = entry.at("width").get<std::size_t>();
        rule.numeric_impute = entry.at("numeric_impute").get<double>();
        rule.modal_level = entry.at("modal_level").get<std::int32_t>();
        model.encoder.rules.push_back(rule);
    }
    model.encoder.mean = enc.at("mean").get<std::vector<double>>();
    model.encoder.stddev = enc.at("stddev").get<std::vector<double>>();
    model.encoder.dimension = enc.at("dimension").get<std::size_t>();
    model.centers = matrix_from_json(doc.at("centers"), static_cast<Eigen::Index>(model.encoder.dimension));
    model.sigma = doc.at("sigma").get<double>();
    model.weights = matrix_from_json(doc.at("weights"));
    model.lambda = doc.at("lambda").get<double>();
    model.gcv = finite_or_nan(doc.at("gcv"));
    return model;
}

json model_to_json(const SNNModel& model) { return snn_to_json(model); }
json model_to_json(const RBFModel& model) { return rbf_to_json(model); }

LoadedModel model_from_json(const json& doc) {
    LoadedModel loaded;
    const std::string kind = doc.at("model").get<std::string>();
    if (kind == "snn")
        loaded.snn = snn_from_json(doc);
    else if (kind == "rbf")
        loaded.rbf = rbf_from_json(doc);
    else
        throw std::runtime_error("model file: unknown model tag '" + kind + "'");
    return loaded;
}

void write_file_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << text;
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot replace '" + path + "': " + ec.message());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace simnn
