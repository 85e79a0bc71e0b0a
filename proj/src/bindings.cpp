// Python surface: thin wrappers over the library's main operations. Datasets
// and models are opaque handles; bulk results cross as numpy arrays.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "simnn/clustering.hpp"
#include "simnn/dataset.hpp"
#include "simnn/evaluation.hpp"
#include "simnn/models.hpp"
#include "simnn/serialize.hpp"
#include "simnn/similarity.hpp"

namespace py = pybind11;
using namespace simnn;

namespace {

Schema schema_from_text(const std::string& text) {
    return text.empty() ? horse_colic_schema() : parse_schema(text);
}

SimilarityConfig config_from_text(const std::string& json_text) {
    return similarity_config_from_json(nlohmann::json::parse(json_text));
}

Task::Kind task_from_name(const std::string& name) {
    if (name == "HC23") return Task::HC23;
    if (name == "HC24") return Task::HC24;
    throw std::invalid_argument("unknown task '" + name + "' (expected HC23 or HC24)");
}

double predictor_missing_fraction(const Dataset& data) {
    const auto predictors = data.schema.predictor_indices();
    if (data.examples.empty() || predictors.empty()) return 0.0;
    std::size_t missing = 0;
    for (const Example& example : data.examples)
        for (std::size_t v : predictors)
            if (example[v].is_missing()) ++missing;
    return static_cast<double>(missing) / static_cast<double>(data.size() * predictors.size());
}

// One trained model of any kind; prediction dispatches on which slot is set.
struct Model {
    std::optional<SNNModel> snn;
    std::optional<RBFModel> rbf;

    std::string kind() const {
        if (snn) return "snn";
        return rbf->kind == RbfKind::LeaderCenters ? "rbf2" : "rbfk";
    }

    std::string to_json() const {
        return (snn ? model_to_json(*snn) : model_to_json(*rbf)).dump(2) + "\n";
    }

    const std::vector<std::string>& labels() const { return snn ? snn->class_labels : rbf->class_labels; }

    std::pair<std::vector<std::string>, Eigen::MatrixXd> predict(const Dataset& data) const {
        const std::vector<std::string>& names = labels();
        std::vector<std::string> predicted;
        predicted.reserve(data.size());
        Eigen::MatrixXd scores(static_cast<Eigen::Index>(data.size()),
                               static_cast<Eigen::Index>(names.size()));
        for (std::size_t i = 0; i < data.size(); ++i) {
            const Prediction p = snn ? predict_snn(*snn, data.examples[i]) : predict_rbf(*rbf, data.examples[i]);
            predicted.push_back(names.at(static_cast<std::size_t>(p.class_index)));
            for (std::size_t j = 0; j < p.outputs.size(); ++j)
                scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p.outputs[j];
        }
        return {std::move(predicted), std::move(scores)};
    }
};

Model train_model(const Dataset& data, const std::string& method, double s_min, std::size_t k,
                  double sigma_factor, bool penalize_bias, std::uint64_t seed,
                  const std::string& similarity_json) {
    Model out;
    if (method == "snn") {
        SnnTrainConfig config;
        config.similarity = config_from_text(similarity_json);
        config.s_min = s_min;
        config.penalize_bias = penalize_bias;
        out.snn = train_snn(data, config);
        return out;
    }
    if (method != "rbf2" && method != "rbfk")
        throw std::invalid_argument("unknown method '" + method + "' (expected snn, rbf2, or rbfk)");
    RbfTrainConfig config;
    config.similarity = config_from_text(similarity_json);
    config.s_min = s_min;
    config.k = k;
    config.sigma_factor = sigma_factor;
    config.penalize_bias = penalize_bias;
    out.rbf = train_rbf(data, method == "rbf2" ? RbfKind::LeaderCenters : RbfKind::KMeansCenters, config, seed);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Similarity neural networks and RBF baselines for heterogeneous, incomplete tabular data";

    py::class_<Dataset>(m, "Dataset")
        .def("__len__", [](const Dataset& d) { return d.size(); })
        .def_property_readonly("schema_text", [](const Dataset& d) { return format_schema(d.schema); })
        .def_property_readonly("class_labels",
                               [](const Dataset& d) {
                                   std::vector<std::string> names;
                                   const std::size_t target = d.schema.sole_target_index();
                                   for (const Level& level : d.schema[target].levels) names.push_back(level.name);
                                   return names;
                               })
        .def("missing_fraction", &predictor_missing_fraction,
             "Fraction of predictor cells that are missing.")
        .def("target_labels",
             [](const Dataset& d) {
                 const std::size_t target = d.schema.sole_target_index();
                 const VariableSpec& spec = d.schema[target];
                 std::vector<std::string> names;
                 names.reserve(d.size());
                 for (const Example& example : d.examples) {
                     const Value& v = example[target];
                     names.push_back(v.is_missing() ? "?" : spec.levels.at(static_cast<std::size_t>(v.as_level())).name);
                 }
                 return names;
             },
             "Per-example target class name; '?' where the target is missing.")
        .def("row", [](const Dataset& d, std::size_t i) { return serialize_example(d.schema, d.examples.at(i)); },
             py::arg("i"), "One example as its raw token line.")
        .def("subset",
             [](const Dataset& d, const std::vector<std::size_t>& rows) { return subset(d, rows); },
             py::arg("rows"));

    py::class_<Model>(m, "Model")
        .def_property_readonly("kind", &Model::kind)
        .def_property_readonly("class_labels", &Model::labels)
        .def("to_json", &Model::to_json)
        .def("predict", &Model::predict, py::arg("data"),
             "Returns (predicted labels, score matrix with one column per class).");

    m.def("horse_colic_schema_text", []() { return horse_colic_schema_text(); });
    m.def("load_dataset",
          [](const std::vector<std::string>& files, const std::string& schema_text) {
              return load_dataset(files, schema_from_text(schema_text));
          },
          py::arg("files"), py::arg("schema_text") = "",
          "Loads token-grid files; an empty schema_text selects the built-in Horse Colic schema.");
    m.def("parse_dataset",
          [](const std::string& text, const std::string& schema_text) {
              return parse_dataset(text, schema_from_text(schema_text));
          },
          py::arg("text"), py::arg("schema_text") = "");
    m.def("derive_task",
          [](const Dataset& data, const std::string& task) { return derive_task(data, task_from_name(task)); },
          py::arg("data"), py::arg("task"), "Selects target column HC23 or HC24 and drops missing-target rows.");

    m.def("similarity_matrix",
          [](const Dataset& data, const std::string& similarity_json) {
              const SimilarityModel model = fit_similarity_model(data, config_from_text(similarity_json));
              return similarity_matrix(model, data);
          },
          py::arg("data"), py::arg("similarity_json") = "{}",
          "Pairwise similarities of the dataset under a model fitted to it.");

    m.def("cluster",
          [](const Dataset& data, double s_min, const std::string& similarity_json) {
              const SimilarityModel model = fit_similarity_model(data, config_from_text(similarity_json));
              const Eigen::MatrixXd matrix = similarity_matrix(model, data);
              const Clustering c = leader2(matrix_source(matrix), data.size(), s_min);
              return std::make_pair(c.leaders, c.assignment);
          },
          py::arg("data"), py::arg("s_min"), py::arg("similarity_json") = "{}",
          "Returns (leader row indices, per-example leader position).");

    m.def("train", &train_model, py::arg("data"), py::arg("method") = "snn", py::arg("s_min") = 0.6,
          py::arg("k") = 8, py::arg("sigma_factor") = 1.0, py::arg("penalize_bias") = false,
          py::arg("seed") = 0, py::arg("similarity_json") = "{}",
          "Trains an snn, rbf2 (leader centers), or rbfk (k-means centers) model.");

    m.def("model_from_json", [](const std::string& text) {
        const LoadedModel loaded = model_from_json(nlohmann::json::parse(text));
        Model out;
        out.snn = loaded.snn;
        out.rbf = loaded.rbf;
        return out;
    });
}
