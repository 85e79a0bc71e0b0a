#include "simnn/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "simnn/serialize.hpp"

namespace simnn {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string compact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed4(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
}

}  // namespace

const char* to_string(MethodKind kind) {
    switch (kind) {
        case MethodKind::Snn: return "snn";
        case MethodKind::Rbf2: return "rbf2";
        case MethodKind::Rbfk: return "rbfk";
    }
    return "?";
}

std::vector<double> default_s_min_grid() { return {0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80}; }
std::vector<std::size_t> default_k_grid() { return {4, 8, 16, 32}; }

ExperimentConfig experiment_config_from_json(const json& doc) {
    if (doc.contains("config")) return experiment_config_from_json(doc.at("config"));  // manifest re-run

    ExperimentConfig config;
    if (!doc.contains("data") || !doc.at("data").is_array() || doc.at("data").empty())
        fail("config: 'data' must list at least one input file");
    config.data_files = doc.at("data").get<std::vector<std::string>>();
    if (doc.contains("schema")) config.schema_source = doc.at("schema").get<std::string>();

    if (doc.contains("task")) {
        const std::string task = doc.at("task").get<std::string>();
        if (task == "HC23")
            config.task = Task::HC23;
        else if (task == "HC24")
            config.task = Task::HC24;
        else
            fail("config: task must be HC23 or HC24, got '" + task + "'");
    }

    if (!doc.contains("seed")) fail("config: an explicit 'seed' is required");
    if (!doc.at("seed").is_number_unsigned() && !doc.at("seed").is_number_integer())
        fail("config: 'seed' must be an integer");
    config.seed = doc.at("seed").get<std::uint64_t>();
    config.has_seed = true;

    if (doc.contains("output_dir")) config.output_dir = doc.at("output_dir").get<std::string>();
    if (doc.contains("similarity")) config.similarity = similarity_config_from_json(doc.at("similarity"));
    if (doc.contains("sigma_factor")) config.sigma_factor = doc.at("sigma_factor").get<double>();
    if (doc.contains("penalize_bias")) config.penalize_bias = doc.at("penalize_bias").get<bool>();

    if (!doc.contains("methods") || !doc.at("methods").is_array() || doc.at("methods").empty())
        fail("config: 'methods' must list at least one method");
    for (const auto& entry : doc.at("methods")) {
        MethodSpec spec;
        const std::string kind = entry.at("kind").get<std::string>();
        if (kind == "snn")
            spec.kind = MethodKind::Snn;
        else if (kind == "rbf2")
            spec.kind = MethodKind::Rbf2;
        else if (kind == "rbfk")
            spec.kind = MethodKind::Rbfk;
        else
            fail("config: unknown method kind '" + kind + "'");

        if (spec.kind == MethodKind::Rbfk) {
            if (entry.contains("k")) {
                if (entry.at("k").is_array())
                    spec.k_grid = entry.at("k").get<std::vector<std::size_t>>();
                else
                    spec.k_grid = {entry.at("k").get<std::size_t>()};
            } else {
                spec.k_grid = default_k_grid();
            }
            if (spec.k_grid.empty()) fail("config: empty k grid");
            for (std::size_t k : spec.k_grid)
                if (k == 0) fail("config: k must be positive");
        } else {
            if (entry.contains("s_min")) {
                if (entry.at("s_min").is_array())
                    spec.s_min_grid = entry.at("s_min").get<std::vector<double>>();
                else
                    spec.s_min_grid = {entry.at("s_min").get<double>()};
            } else {
                spec.s_min_grid = default_s_min_grid();
            }
            if (spec.s_min_grid.empty()) fail("config: empty s_min grid");
            for (double s : spec.s_min_grid)
                if (!(s >= 0.0 && s <= 1.0)) fail("config: s_min values must lie in [0, 1]");
        }
        config.methods.push_back(std::move(spec));
    }
    return config;
}

json experiment_config_to_json(const ExperimentConfig& config) {
    json methods = json::array();
    for (const auto& spec : config.methods) {
        json entry{{"kind", to_string(spec.kind)}};
        if (spec.kind == MethodKind::Rbfk)
            entry["k"] = spec.k_grid;
        else
            entry["s_min"] = spec.s_min_grid;
        methods.push_back(std::move(entry));
    }
    return json{{"data", config.data_files},
                {"schema", config.schema_source},
                {"task", config.task == Task::HC23 ? "HC23" : "HC24"},
                {"seed", config.seed},
                {"output_dir", config.output_dir},
                {"similarity", similarity_config_to_json(config.similarity)},
                {"sigma_factor", config.sigma_factor},
                {"penalize_bias", config.penalize_bias},
                {"methods", std::move(methods)}};
}

Dataset load_experiment_data(const ExperimentConfig& config) {
    if (config.schema_source == "horse-colic") {
        const Dataset raw = load_dataset(config.data_files, horse_colic_schema());
        return derive_task(raw, config.task);
    }
    const Schema schema = parse_schema(read_file(config.schema_source));
    const Dataset raw = load_dataset(config.data_files, schema);
    return derive_task(raw, config.task);
}

namespace {

// Grid resolution: smallest finite fit GCV wins, earlier grid entries win ties;
// all candidates degenerate -> the first entry stays.
Method make_method(const MethodSpec& spec, const ExperimentConfig& config,
                   const std::shared_ptr<std::vector<CellSelection>>& record) {
    Method method;
    method.name = to_string(spec.kind);
    const SimilarityConfig sim = config.similarity;
    const double sigma_factor = config.sigma_factor;
    const bool penalize_bias = config.penalize_bias;

    if (spec.kind == MethodKind::Snn) {
        const auto grid = spec.s_min_grid;
        method.train = [=](const Dataset& fold, std::uint64_t) -> Predictor {
            std::shared_ptr<SNNModel> best;
            CellSelection best_sel;
            double best_gcv = std::numeric_limits<double>::infinity();
            for (double s_min : grid) {
                SnnTrainConfig cfg;
                cfg.similarity = sim;
                cfg.s_min = s_min;
                cfg.penalize_bias = penalize_bias;
                auto model = std::make_shared<SNNModel>(train_snn(fold, cfg));
                if (!best || (std::isfinite(model->gcv) && model->gcv < best_gcv)) {
                    if (std::isfinite(model->gcv)) best_gcv = model->gcv;
                    best = model;
                    best_sel = CellSelection{s_min, 0, model->gcv};
                }
            }
            record->push_back(best_sel);
            return [best](const Example& x) { return predict_snn(*best, x); };
        };
        return method;
    }

    const RbfKind kind = spec.kind == MethodKind::Rbf2 ? RbfKind::LeaderCenters : RbfKind::KMeansCenters;
    const auto s_grid = spec.s_min_grid;
    const auto k_grid = spec.k_grid;
    method.train = [=](const Dataset& fold, std::uint64_t cell_seed) -> Predictor {
        std::shared_ptr<RBFModel> best;
        CellSelection best_sel;
        double best_gcv = std::numeric_limits<double>::infinity();
        const std::size_t candidates = kind == RbfKind::LeaderCenters ? s_grid.size() : k_grid.size();
        for (std::size_t c = 0; c < candidates; ++c) {
            RbfTrainConfig cfg;
            cfg.similarity = sim;
            cfg.sigma_factor = sigma_factor;
            cfg.penalize_bias = penalize_bias;
            CellSelection sel;
            if (kind == RbfKind::LeaderCenters) {
                cfg.s_min = s_grid[c];
                sel.s_min = s_grid[c];
            } else {
                cfg.k = k_grid[c];
                sel.k = k_grid[c];
            }
            auto model = std::make_shared<RBFModel>(train_rbf(fold, kind, cfg, cell_seed));
            sel.gcv = model->gcv;
            if (!best || (std::isfinite(model->gcv) && model->gcv < best_gcv)) {
                if (std::isfinite(model->gcv)) best_gcv = model->gcv;
                best = model;
                best_sel = sel;
            }
        }
        record->push_back(best_sel);
        return [best](const Example& x) { return predict_rbf(*best, x); };
    };
    return method;
}

}  // namespace

ExperimentResult run_experiment_cv(const ExperimentConfig& config, const Dataset& task_data) {
    if (config.methods.empty()) fail("experiment: no methods configured");
    if (!config.has_seed) fail("experiment: an explicit seed is required");

    const FoldPlan plan = make_fold_plan(task_data, config.seed);

    std::vector<Method> methods;
    std::vector<std::shared_ptr<std::vector<CellSelection>>> records;
    for (const auto& spec : config.methods) {
        auto record = std::make_shared<std::vector<CellSelection>>();
        records.push_back(record);
        methods.push_back(make_method(spec, config, record));
    }

    ExperimentResult result;
    result.report = run_5x2(methods, task_data, plan);
    for (const auto& record : records) result.selections.push_back(*record);

    const MetricKind metrics[] = {MetricKind::ErrorPct, MetricKind::Mse, MetricKind::Nrmse};
    for (std::size_t m = 1; m < methods.size(); ++m) {
        for (MetricKind metric : metrics) {
            try {
                const PairedDiffs diffs = paired_diffs(result.report, 0, m, metric);
                for (TestResult test : {dietterich_t(diffs), alpaydin_f(diffs)}) {
                    test.method_a = methods[0].name;
                    test.method_b = methods[m].name;
                    test.metric = to_string(metric);
                    result.tests.push_back(std::move(test));
                }
            } catch (const std::domain_error& e) {
                result.refusals.push_back(std::string(to_string(metric)) + " " + methods[0].name + " vs " +
                                          methods[m].name + ": " + e.what());
            }
        }
    }
    return result;
}

nlohmann::json experiment_manifest(const ExperimentConfig& config, const ExperimentResult& result) {
    json methods = json::array();
    for (std::size_t m = 0; m < result.report.method_names.size(); ++m) {
        const bool kmeans_based = result.report.method_names[m] == "rbfk";
        json cells = json::array();
        for (std::size_t r = 0; r < 5; ++r) {
            for (std::size_t j = 0; j < 2; ++j) {
                const CVCell& cell = result.report.cells[m][r][j];
                json entry{{"replication", r + 1}, {"fold", j + 1}, {"failed", cell.failed}};
                if (cell.failed) {
                    entry["error"] = cell.error;
                } else {
                    entry["error_pct"] = cell.metrics.error_pct;
                    entry["mse"] = cell.metrics.mse;
                    entry["nrmse"] = cell.metrics.nrmse ? json(*cell.metrics.nrmse) : json(nullptr);
                }
                const auto& sel = result.selections[m];
                if (r * 2 + j < sel.size()) {
                    const CellSelection& s = sel[r * 2 + j];
                    if (kmeans_based)
                        entry["k"] = s.k;
                    else
                        entry["s_min"] = s.s_min;
                    entry["fit_gcv"] = finite_or_null(s.gcv);
                }
                cells.push_back(std::move(entry));
            }
        }
        const auto mean_of = [&](MetricKind kind) {
            const auto v = mean_metric(result.report, m, kind);
            return v ? json(*v) : json(nullptr);
        };
        methods.push_back(json{{"name", result.report.method_names[m]},
                               {"cells", std::move(cells)},
                               {"means",
                                {{"error_pct", mean_of(MetricKind::ErrorPct)},
                                 {"mse", mean_of(MetricKind::Mse)},
                                 {"nrmse", mean_of(MetricKind::Nrmse)}}}});
    }

    json tests = json::array();
    for (const auto& test : result.tests) {
        tests.push_back(json{{"baseline", test.method_a},
                             {"method", test.method_b},
                             {"metric", test.metric},
                             {"test", test.test},
                             {"statistic", test.statistic},
                             {"threshold", test.threshold},
                             {"significant", test.significant}});
    }

    return json{{"artifact", "simnn"},
                {"version", kArtifactVersion},
                {"config", experiment_config_to_json(config)},
                {"results",
                 {{"plan_seed", result.report.plan_seed},
                  {"methods", std::move(methods)},
                  {"tests", std::move(tests)},
                  {"refusals", result.refusals}}}};
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string metrics_table_text(const ExperimentResult& result) {
    std::ostringstream os;
    os << pad("method", 8) << pad("error%", 10) << pad("mse", 10) << "nrmse\n";
    for (std::size_t m = 0; m < result.report.method_names.size(); ++m) {
        os << pad(result.report.method_names[m], 8);
        if (result.report.any_failed(m)) {
            std::string why = "training failed";
            for (const auto& rep : result.report.cells[m])
                for (const auto& cell : rep)
                    if (cell.failed && !cell.error.empty()) why = cell.error;
            os << "failed (" << why << ")\n";
            continue;
        }
        const auto err = mean_metric(result.report, m, MetricKind::ErrorPct);
        const auto mse = mean_metric(result.report, m, MetricKind::Mse);
        const auto nrmse = mean_metric(result.report, m, MetricKind::Nrmse);
        os << pad(err ? fixed4(*err) : "n/a", 10) << pad(mse ? fixed4(*mse) : "n/a", 10)
           << (nrmse ? fixed4(*nrmse) : "n/a") << "\n";
    }
    os << "\nmeans over the 10 fold estimates (5x2 cross-validation)\n";
    os << "nrmse: sqrt of summed squared error over summed squared deviation from the test-fold target mean,\n"
          "pooled over output columns; 1.0 matches predicting that mean\n";
    return os.str();
}

std::string metrics_table_tsv(const ExperimentResult& result) {
    std::ostringstream os;
    os << "method\terror_pct\tmse\tnrmse\n";
    for (std::size_t m = 0; m < result.report.method_names.size(); ++m) {
        const auto err = mean_metric(result.report, m, MetricKind::ErrorPct);
        const auto mse = mean_metric(result.report, m, MetricKind::Mse);
        const auto nrmse = mean_metric(result.report, m, MetricKind::Nrmse);
        os << result.report.method_names[m] << '\t' << (err ? compact(*err) : "n/a") << '\t'
           << (mse ? compact(*mse) : "n/a") << '\t' << (nrmse ? compact(*nrmse) : "n/a") << '\n';
    }
    return os.str();
}

std::string significance_table_text(const ExperimentResult& result) {
    std::ostringstream os;
    if (result.tests.empty() && result.refusals.empty()) {
        os << "no pairwise tests (single method)\n";
        return os.str();
    }
    const std::string baseline = result.tests.empty() ? result.report.method_names.front() : result.tests[0].method_a;
    os << "baseline: " << baseline << " (positive statistics favor the comparison method on error-like metrics)\n";
    os << pad("metric", 11) << pad("comparison", 12) << pad("t", 12) << "F\n";
    for (std::size_t i = 0; i + 1 < result.tests.size(); i += 2) {
        const TestResult& t = result.tests[i];
        const TestResult& f = result.tests[i + 1];
        os << pad(t.metric, 11) << pad("vs " + t.method_b, 12)
           << pad(fixed4(t.statistic) + (t.significant ? " *" : ""), 12)
           << fixed4(f.statistic) + (f.significant ? " *" : "") << "\n";
    }
    for (const auto& refusal : result.refusals) os << "refused: " << refusal << "\n";
    os << "\n* statistic exceeds the 95% threshold (t: 2.571, F: 4.74)\n";
    return os.str();
}

std::string significance_table_tsv(const ExperimentResult& result) {
    std::ostringstream os;
    os << "baseline\tmethod\tmetric\ttest\tstatistic\tthreshold\tsignificant\n";
    for (const auto& test : result.tests) {
        os << test.method_a << '\t' << test.method_b << '\t' << test.metric << '\t' << test.test << '\t'
           << compact(test.statistic) << '\t' << compact(test.threshold) << '\t' << (test.significant ? 1 : 0)
           << '\n';
    }
    return os.str();
}

}  // namespace simnn
