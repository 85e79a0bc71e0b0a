#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace simnn {

enum class VariableKind { Continuous, Ordinal, Categorical, Fuzzy };
enum class Role { Predictor, Target, Ignored };
enum class FuzzyFamily { Triangular, Trapezoidal };

const char* to_string(VariableKind kind);
const char* to_string(Role role);

struct Level {
    std::string token;  // token as it appears in raw data files
    std::string name;   // human-readable name; defaults to the token
};

// Declarative typing of one raw column. For ordinal variables the level order is
// significant (position 0 is the lowest rank).
struct VariableSpec {
    std::string name;
    VariableKind kind = VariableKind::Continuous;
    Role role = Role::Predictor;
    int raw_column = 0;  // 1-based column index in the source file
    std::vector<Level> levels;
    FuzzyFamily fuzzy_family = FuzzyFamily::Triangular;

    bool is_discrete() const { return kind == VariableKind::Ordinal || kind == VariableKind::Categorical; }
    std::optional<std::size_t> level_index(const std::string& token) const;
};

// Trapezoidal membership function a <= b <= c <= d; triangular values keep b == c.
struct FuzzyValue {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    bool operator==(const FuzzyValue&) const = default;
};

// One cell. Missing is legal for every variable kind.
class Value {
public:
    Value() : data_(std::monostate{}) {}

    static Value missing() { return Value{}; }
    static Value real(double x);
    static Value level(std::int32_t index);
    static Value fuzzy(const FuzzyValue& f);

    bool is_missing() const { return std::holds_alternative<std::monostate>(data_); }
    bool is_real() const { return std::holds_alternative<double>(data_); }
    bool is_level() const { return std::holds_alternative<std::int32_t>(data_); }
    bool is_fuzzy() const { return std::holds_alternative<FuzzyValue>(data_); }

    double as_real() const { return std::get<double>(data_); }
    std::int32_t as_level() const { return std::get<std::int32_t>(data_); }
    const FuzzyValue& as_fuzzy() const { return std::get<FuzzyValue>(data_); }

    bool operator==(const Value&) const = default;

private:
    std::variant<std::monostate, double, std::int32_t, FuzzyValue> data_;
};

using Example = std::vector<Value>;

class Schema {
public:
    Schema() = default;
    explicit Schema(std::vector<VariableSpec> vars);  // validates, throws std::invalid_argument

    std::size_t size() const { return vars_.size(); }
    const VariableSpec& operator[](std::size_t i) const { return vars_[i]; }
    const std::vector<VariableSpec>& variables() const { return vars_; }

    std::vector<std::size_t> predictor_indices() const;
    std::vector<std::size_t> target_indices() const;
    // The unique target; throws when there is none or more than one.
    std::size_t sole_target_index() const;
    std::optional<std::size_t> find(const std::string& name) const;
    std::optional<std::size_t> find_by_column(int raw_column) const;
    int max_raw_column() const;

    bool operator==(const Schema&) const = default;

private:
    std::vector<VariableSpec> vars_;
};

bool operator==(const VariableSpec& a, const VariableSpec& b);
bool operator==(const Level& a, const Level& b);

struct Dataset {
    Schema schema;
    std::vector<Example> examples;

    std::size_t size() const { return examples.size(); }
};

// Five independent stratified 50/50 splits; each replication is used twice
// (train A / test B, then train B / test A), giving ten estimates.
struct FoldPlan {
    struct Replication {
        std::vector<std::size_t> fold_a;
        std::vector<std::size_t> fold_b;
    };
    std::array<Replication, 5> replications;
    std::uint64_t seed = 0;
};

struct Task {
    enum Kind { HC23, HC24 };
};

// Per-variable encoding into a standardized real vector, for the RBF baselines.
// categorical -> 1-of-c block, ordinal -> level i / (c-1), continuous -> value;
// missing cells take the training-fold mean (numeric) or modal level (categorical).
struct Encoder {
    struct VariableRule {
        std::size_t var_index = 0;
        std::size_t first_column = 0;
        std::size_t width = 1;
        double numeric_impute = 0.0;   // continuous / ordinal
        std::int32_t modal_level = 0;  // categorical
    };
    std::vector<VariableRule> rules;
    std::vector<double> mean;    // per encoded column, training fold
    std::vector<double> stddev;  // per encoded column; 0 marks a constant column
    std::size_t dimension = 0;
};

// --- operations ---

// Parses the schema-descriptor text format (one `column ...` entry per line,
// grammar documented in docs/schema-format.md).
Schema parse_schema(const std::string& text);

// Inverse of parse_schema: canonical single-space descriptor text.
std::string format_schema(const Schema& schema);

// Built-in Horse Colic schema: 21 predictors (6 categorical, 7 continuous,
// 8 ordinal), targets at columns 23 and 24, columns 3/25/26/27/28 ignored.
const Schema& horse_colic_schema();
// The descriptor text the built-in schema is parsed from (also shipped as a file).
const std::string& horse_colic_schema_text();

// Loads whitespace-separated token grids ("?" = missing), concatenating files in order.
Dataset load_dataset(const std::vector<std::string>& files, const Schema& schema);
Dataset parse_dataset(const std::string& text, const Schema& schema, const std::string& origin = "<memory>");

// Serializes one example back to a raw token line (inverse of parsing).
std::string serialize_example(const Schema& schema, const Example& example);

// Keeps the 21 predictor variables, selects column 23 (HC23) or 24 (HC24) as the
// single target, marks other targets ignored, and drops rows with a missing target.
Dataset derive_task(const Dataset& dataset, Task::Kind task);
Dataset derive_task_by_column(const Dataset& dataset, int target_raw_column);

// Stratified 5x2 fold plan, deterministic in (class layout, seed).
FoldPlan make_fold_plan(const Dataset& dataset, std::uint64_t seed);

Dataset subset(const Dataset& dataset, const std::vector<std::size_t>& rows);

Encoder fit_encoder(const Dataset& train);
std::vector<double> encode(const Encoder& encoder, const Schema& schema, const Example& example);

// 1-of-m indicator of the target level; class index of an example's target.
std::vector<double> target_indicator(const Schema& schema, const Example& example);
std::int32_t target_class(const Schema& schema, const Example& example);
std::vector<std::string> class_labels(const Schema& schema);

}  // namespace simnn
