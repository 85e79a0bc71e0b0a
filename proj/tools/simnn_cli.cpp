// simnn: train and compare similarity-based classifiers on heterogeneous,
// incomplete tabular data. Subcommands: inspect, cluster, train, predict,
// experiment. Exit codes: 0 ok, 1 validation error, 2 runtime failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "simnn/clustering.hpp"
#include "simnn/dataset.hpp"
#include "simnn/evaluation.hpp"
#include "simnn/experiment.hpp"
#include "simnn/models.hpp"
#include "simnn/serialize.hpp"
#include "simnn/similarity.hpp"

namespace {

using namespace simnn;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct DataArgs {
    std::vector<std::string> files;
    std::string schema_source = "horse-colic";
};

void add_data_options(CLI::App* cmd, DataArgs& args) {
    cmd->add_option("files", args.files, "input data files (whitespace-separated tokens, ? = missing)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--schema", args.schema_source, "built-in schema name or descriptor file path")
        ->capture_default_str();
}

Schema resolve_schema(const std::string& source) {
    if (source == "horse-colic") return horse_colic_schema();
    return parse_schema(read_file(source));
}

struct SimilarityArgs {
    std::string nominal = "frequency";
    double exponent = 1.0;
    double alpha = 1.0;
    double beta = 1.0;
    std::string missing = "midpoint";
};

void add_similarity_options(CLI::App* cmd, SimilarityArgs& args) {
    cmd->add_option("--nominal", args.nominal, "categorical similarity: overlap or frequency")
        ->check(CLI::IsMember({"overlap", "frequency"}))
        ->capture_default_str();
    cmd->add_option("--exponent", args.exponent, "normalization exponent a")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--alpha", args.alpha, "continuous similarity exponent alpha")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--beta", args.beta, "continuous similarity exponent beta")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--missing", args.missing, "missing policy: midpoint or gower")
        ->check(CLI::IsMember({"midpoint", "gower"}))
        ->capture_default_str();
}

SimilarityConfig to_similarity_config(const SimilarityArgs& args) {
    SimilarityConfig config;
    config.nominal_mode = args.nominal == "overlap" ? NominalMode::Overlap : NominalMode::Frequency;
    config.normalization_exponent = args.exponent;
    config.continuous_alpha = args.alpha;
    config.continuous_beta = args.beta;
    config.missing_policy = args.missing == "gower" ? MissingPolicy::Gower : MissingPolicy::Midpoint;
    return config;
}

Task::Kind parse_task(const std::string& name) {
    if (name == "HC23") return Task::HC23;
    if (name == "HC24") return Task::HC24;
    throw std::invalid_argument("unknown task '" + name + "' (expected HC23 or HC24)");
}

// --- inspect ---

int run_inspect(const DataArgs& data_args) {
    const Schema schema = resolve_schema(data_args.schema_source);
    const Dataset dataset = load_dataset(data_args.files, schema);

    std::size_t n_cat = 0, n_cont = 0, n_ord = 0, n_fuzzy = 0;
    for (std::size_t v : schema.predictor_indices()) {
        switch (schema[v].kind) {
            case VariableKind::Categorical: ++n_cat; break;
            case VariableKind::Continuous: ++n_cont; break;
            case VariableKind::Ordinal: ++n_ord; break;
            default: ++n_fuzzy; break;
        }
    }

    std::size_t missing_cells = 0;
    const auto predictors = schema.predictor_indices();
    for (const Example& example : dataset.examples)
        for (std::size_t v : predictors)
            if (example[v].is_missing()) ++missing_cells;
    const std::size_t predictor_cells = dataset.examples.size() * predictors.size();

    std::printf("examples: %zu\n", dataset.examples.size());
    std::printf("variables: %zu (%zu predictors: %zu categorical, %zu continuous, %zu ordinal",
                schema.size(), predictors.size(), n_cat, n_cont, n_ord);
    if (n_fuzzy > 0) std::printf(", %zu fuzzy", n_fuzzy);
    std::printf(")\n");
    if (predictor_cells > 0)
        std::printf("predictor cells missing: %.4f (%zu of %zu)\n",
                    static_cast<double>(missing_cells) / static_cast<double>(predictor_cells), missing_cells,
                    predictor_cells);
    std::printf("\n%-8s%-28s%-13s%-11s%-8s%s\n", "column", "name", "kind", "role", "levels", "missing");
    for (std::size_t v = 0; v < schema.size(); ++v) {
        const VariableSpec& var = schema[v];
        std::size_t missing = 0;
        for (const Example& example : dataset.examples)
            if (example[v].is_missing()) ++missing;
        const double fraction = dataset.examples.empty()
                                    ? 0.0
                                    : static_cast<double>(missing) / static_cast<double>(dataset.examples.size());
        std::string levels = "-";
        if (!var.levels.empty()) levels = std::to_string(var.levels.size());
        std::printf("%-8d%-28s%-13s%-11s%-8s%.4f\n", var.raw_column, var.name.c_str(), to_string(var.kind),
                    to_string(var.role), levels.c_str(), fraction);
    }
    return kExitOk;
}

// --- cluster ---

int run_cluster(const DataArgs& data_args, const SimilarityArgs& sim_args, double s_min,
                const std::string& matrix_path) {
    const Schema schema = resolve_schema(data_args.schema_source);
    const Dataset dataset = load_dataset(data_args.files, schema);
    if (dataset.examples.empty()) throw std::runtime_error("cluster: no examples loaded");

    const SimilarityModel model = fit_similarity_model(dataset, to_similarity_config(sim_args));
    const Eigen::MatrixXd matrix = similarity_matrix(model, dataset);
    if (!matrix_path.empty()) write_file_atomic(matrix_path, format_matrix(matrix));

    const SimilaritySource source = matrix_source(matrix);
    const Clustering clustering = leader2(source, dataset.examples.size(), s_min);
    const ClusterStats stats = cluster_stats(source, dataset.examples.size(), clustering);

    std::printf("examples: %zu  clusters: %zu  s_min: %g\n", dataset.examples.size(), clustering.leaders.size(),
                s_min);
    std::printf("mean cluster size: %.4f  mean within-cluster similarity: %.4f\n", stats.mean_size,
                stats.mean_similarity);
    for (std::size_t c = 0; c < clustering.leaders.size(); ++c) {
        std::printf("%zu:", clustering.leaders[c]);
        for (std::size_t i = 0; i < clustering.assignment.size(); ++i)
            if (clustering.assignment[i] == c && i != clustering.leaders[c]) std::printf(" %zu", i);
        std::printf("\n");
    }
    return kExitOk;
}

// --- train ---

struct TrainArgs {
    DataArgs data;
    SimilarityArgs similarity;
    std::string task = "HC24";
    std::string method = "snn";
    double s_min = 0.6;
    std::size_t k = 8;
    double sigma_factor = 1.0;
    bool penalize_bias = false;
    std::uint64_t seed = 0;
    std::string out;
};

int run_train(const TrainArgs& args) {
    const Schema schema = resolve_schema(args.data.schema_source);
    const Dataset raw = load_dataset(args.data.files, schema);
    const Dataset train = derive_task(raw, parse_task(args.task));

    json artifact;
    std::string summary;
    if (args.method == "snn") {
        SnnTrainConfig config;
        config.similarity = to_similarity_config(args.similarity);
        config.s_min = args.s_min;
        config.penalize_bias = args.penalize_bias;
        const SNNModel model = train_snn(train, config);
        artifact = model_to_json(model);
        std::ostringstream os;
        os << "snn: " << model.prototypes.size() << " prototypes, lambda " << model.lambda << ", fit gcv "
           << model.gcv;
        summary = os.str();
    } else {
        RbfTrainConfig config;
        config.similarity = to_similarity_config(args.similarity);
        config.s_min = args.s_min;
        config.k = args.k;
        config.sigma_factor = args.sigma_factor;
        config.penalize_bias = args.penalize_bias;
        const RbfKind kind = args.method == "rbf2" ? RbfKind::LeaderCenters : RbfKind::KMeansCenters;
        const RBFModel model = train_rbf(train, kind, config, args.seed);
        artifact = model_to_json(model);
        std::ostringstream os;
        os << args.method << ": " << model.centers.rows() << " centers, sigma " << model.sigma << ", lambda "
           << model.lambda << ", fit gcv " << model.gcv;
        summary = os.str();
    }

    write_file_atomic(args.out, artifact.dump(2) + "\n");
    std::printf("%s\n", summary.c_str());
    std::printf("wrote %s\n", args.out.c_str());
    return kExitOk;
}

// --- predict ---

int run_predict(const std::string& model_path, const std::vector<std::string>& files) {
    const LoadedModel loaded = model_from_json(json::parse(read_file(model_path)));
    const Schema& schema = loaded.snn ? loaded.snn->similarity.schema : loaded.rbf->schema;
    const std::vector<std::string>& labels = loaded.snn ? loaded.snn->class_labels : loaded.rbf->class_labels;

    std::string text;
    for (const std::string& file : files) text += read_file(file);
    const Dataset dataset = parse_dataset(text, schema, files.empty() ? "<none>" : files.front());

    for (std::size_t i = 0; i < dataset.examples.size(); ++i) {
        const Prediction prediction = loaded.snn ? predict_snn(*loaded.snn, dataset.examples[i])
                                                 : predict_rbf(*loaded.rbf, dataset.examples[i]);
        std::printf("%zu\t%s", i, labels[prediction.class_index].c_str());
        for (double out : prediction.outputs) std::printf("\t%.17g", out);
        std::printf("\n");
    }
    return kExitOk;
}

// --- experiment ---

struct ExperimentArgs {
    std::string config_path;
    std::vector<std::string> data_files;
    std::string schema_source;
    std::string task;
    std::vector<std::string> methods;
    std::vector<double> s_min_grid;
    std::vector<std::size_t> k_grid;
    std::optional<double> sigma_factor;
    std::optional<bool> penalize_bias;
    std::optional<std::uint64_t> seed;
    std::string output_dir;
    bool has_similarity_flags = false;
    SimilarityArgs similarity;
};

ExperimentConfig build_experiment_config(const ExperimentArgs& args) {
    json doc = json::object();
    if (!args.config_path.empty()) doc = json::parse(read_file(args.config_path));
    if (doc.contains("config")) doc = doc.at("config");  // accept a previous run manifest

    // Flag overrides win over the file.
    if (!args.data_files.empty()) doc["data"] = args.data_files;
    if (!args.schema_source.empty()) doc["schema"] = args.schema_source;
    if (!args.task.empty()) doc["task"] = args.task;
    if (args.seed) doc["seed"] = *args.seed;
    if (!args.output_dir.empty()) doc["output_dir"] = args.output_dir;
    if (args.sigma_factor) doc["sigma_factor"] = *args.sigma_factor;
    if (args.penalize_bias) doc["penalize_bias"] = *args.penalize_bias;
    if (args.has_similarity_flags) {
        json sim = similarity_config_to_json(to_similarity_config(args.similarity));
        doc["similarity"] = sim;
    }
    if (!args.methods.empty()) {
        json methods = json::array();
        for (const std::string& name : args.methods) {
            json entry{{"kind", name}};
            if (name == "rbfk") {
                if (!args.k_grid.empty()) entry["k"] = args.k_grid;
            } else if (!args.s_min_grid.empty()) {
                entry["s_min"] = args.s_min_grid;
            }
            methods.push_back(std::move(entry));
        }
        doc["methods"] = methods;
    }
    return experiment_config_from_json(doc);
}

int run_experiment_cmd(const ExperimentArgs& args) {
    const ExperimentConfig config = build_experiment_config(args);
    const Dataset task_data = load_experiment_data(config);
    const ExperimentResult result = run_experiment_cv(config, task_data);

    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const auto out = [&](const char* name) { return (fs::path(config.output_dir) / name).string(); };

    write_file_atomic(out("metrics.txt"), metrics_table_text(result));
    write_file_atomic(out("metrics.tsv"), metrics_table_tsv(result));
    write_file_atomic(out("significance.txt"), significance_table_text(result));
    write_file_atomic(out("significance.tsv"), significance_table_tsv(result));
    write_file_atomic(out("manifest.json"), experiment_manifest(config, result).dump(2) + "\n");

    std::printf("task: %s  examples: %zu  seed: %llu\n\n", config.task == Task::HC23 ? "HC23" : "HC24",
                task_data.examples.size(), static_cast<unsigned long long>(config.seed));
    std::fputs(metrics_table_text(result).c_str(), stdout);
    std::fputs("\n", stdout);
    std::fputs(significance_table_text(result).c_str(), stdout);
    std::printf("\nreports written to %s\n", config.output_dir.c_str());

    bool any_failed = false;
    for (std::size_t m = 0; m < result.report.method_names.size(); ++m)
        if (result.report.any_failed(m)) any_failed = true;
    if (any_failed) {
        std::fprintf(stderr, "error: some folds failed to train; reports mark the failed cells\n");
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"similarity neural network toolkit for heterogeneous, incomplete tabular data"};
    app.require_subcommand(1);

    // inspect
    auto* inspect = app.add_subcommand("inspect", "summarize a dataset: per-variable kind, levels, missing");
    DataArgs inspect_data;
    add_data_options(inspect, inspect_data);

    // cluster
    auto* cluster = app.add_subcommand("cluster", "similarity leader clustering dump at a given threshold");
    DataArgs cluster_data;
    SimilarityArgs cluster_sim;
    double cluster_s_min = 0.6;
    std::string matrix_path;
    add_data_options(cluster, cluster_data);
    add_similarity_options(cluster, cluster_sim);
    cluster->add_option("--s-min", cluster_s_min, "similarity threshold in [0, 1]")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cluster->add_option("--export-matrix", matrix_path, "also write the full similarity matrix to this path");

    // train
    auto* train = app.add_subcommand("train", "train one model and write a JSON artifact");
    TrainArgs train_args;
    add_data_options(train, train_args.data);
    add_similarity_options(train, train_args.similarity);
    train->add_option("--task", train_args.task, "target selection: HC23 or HC24")
        ->check(CLI::IsMember({"HC23", "HC24"}))
        ->capture_default_str();
    train->add_option("--method", train_args.method, "snn, rbf2, or rbfk")
        ->check(CLI::IsMember({"snn", "rbf2", "rbfk"}))
        ->capture_default_str();
    train->add_option("--s-min", train_args.s_min, "similarity threshold (snn, rbf2)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    train->add_option("--k", train_args.k, "center count (rbfk)")->check(CLI::PositiveNumber)->capture_default_str();
    train->add_option("--sigma-factor", train_args.sigma_factor, "width multiplier for RBF centers")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train->add_flag("--penalize-bias", train_args.penalize_bias, "include the bias weight in the ridge penalty");
    train->add_option("--seed", train_args.seed, "random seed (rbfk center initialization)");
    train->add_option("--out", train_args.out, "output model file")->required();

    // predict
    auto* predict = app.add_subcommand("predict", "load a model artifact and score a data file");
    std::string model_path;
    std::vector<std::string> predict_files;
    predict->add_option("--model", model_path, "model artifact from `train`")->required()->check(CLI::ExistingFile);
    predict->add_option("files", predict_files, "data files to score")->required()->check(CLI::ExistingFile);

    // experiment
    auto* experiment = app.add_subcommand(
        "experiment", "5x2 cross-validated method comparison with significance tests and a run manifest");
    ExperimentArgs exp_args;
    experiment->add_option("--config", exp_args.config_path, "JSON config (or a previous run manifest)")
        ->check(CLI::ExistingFile);
    experiment->add_option("--data", exp_args.data_files, "input data files (overrides config)")
        ->check(CLI::ExistingFile);
    experiment->add_option("--schema", exp_args.schema_source, "schema name or descriptor path (overrides config)");
    experiment->add_option("--task", exp_args.task, "HC23 or HC24 (overrides config)")
        ->check(CLI::IsMember({"HC23", "HC24"}));
    experiment->add_option("--method", exp_args.methods, "method list: snn, rbf2, rbfk (overrides config)")
        ->check(CLI::IsMember({"snn", "rbf2", "rbfk"}));
    experiment->add_option("--s-min-grid", exp_args.s_min_grid,
                           "threshold grid for snn/rbf2 methods given via --method");
    experiment->add_option("--k-grid", exp_args.k_grid, "center-count grid for rbfk given via --method");
    double exp_sigma = 0.0;
    auto* sigma_opt = experiment->add_option("--sigma-factor", exp_sigma, "width multiplier (overrides config)");
    bool exp_penalize = false;
    auto* penalize_opt =
        experiment->add_flag("--penalize-bias", exp_penalize, "include the bias weight in the ridge penalty");
    std::uint64_t exp_seed = 0;
    auto* seed_opt = experiment->add_option("--seed", exp_seed, "fold-plan seed (required here or in the config)");
    experiment->add_option("--output-dir", exp_args.output_dir, "directory for reports (overrides config)");
    SimilarityArgs exp_sim;
    add_similarity_options(experiment, exp_sim);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;  // --help stays 0
    }

    try {
        if (inspect->parsed()) return run_inspect(inspect_data);
        if (cluster->parsed()) return run_cluster(cluster_data, cluster_sim, cluster_s_min, matrix_path);
        if (train->parsed()) return run_train(train_args);
        if (predict->parsed()) return run_predict(model_path, predict_files);
        if (experiment->parsed()) {
            if (*sigma_opt) exp_args.sigma_factor = exp_sigma;
            if (*penalize_opt) exp_args.penalize_bias = exp_penalize;
            if (*seed_opt) exp_args.seed = exp_seed;
            exp_args.similarity = exp_sim;
            for (const char* name : {"--nominal", "--exponent", "--alpha", "--beta", "--missing"})
                if (experiment->count(name) > 0) exp_args.has_similarity_flags = true;
            return run_experiment_cmd(exp_args);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitValidation;
}
