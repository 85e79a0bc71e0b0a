#include "simnn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "simnn/rng.hpp"

namespace simnn {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double parse_number(const std::string& tok, const std::string& context) {
    double v = 0.0;
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) fail(context + ": cannot parse number '" + tok + "'");
    return v;
}

// Shortest round-trip decimal form, "38.5" not "3.85e+01".
std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    std::string s = os.str();
    // shrink to the shortest representation that still round-trips
    for (int prec = 1; prec < 17; ++prec) {
        std::ostringstream t;
        t.precision(prec);
        t << v;
        if (std::stod(t.str()) == v) return t.str();
    }
    return s;
}

}  // namespace

const char* to_string(VariableKind kind) {
    switch (kind) {
        case VariableKind::Continuous: return "continuous";
        case VariableKind::Ordinal: return "ordinal";
        case VariableKind::Categorical: return "categorical";
        case VariableKind::Fuzzy: return "fuzzy";
    }
    return "?";
}

const char* to_string(Role role) {
    switch (role) {
        case Role::Predictor: return "predictor";
        case Role::Target: return "target";
        case Role::Ignored: return "ignored";
    }
    return "?";
}

std::optional<std::size_t> VariableSpec::level_index(const std::string& token) const {
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i].token == token) return i;
    }
    return std::nullopt;
}

bool operator==(const Level& a, const Level& b) { return a.token == b.token && a.name == b.name; }

bool operator==(const VariableSpec& a, const VariableSpec& b) {
    return a.name == b.name && a.kind == b.kind && a.role == b.role && a.raw_column == b.raw_column &&
           a.levels == b.levels && (a.kind != VariableKind::Fuzzy || a.fuzzy_family == b.fuzzy_family);
}

Value Value::real(double x) {
    Value v;
    v.data_ = x;
    return v;
}

Value Value::level(std::int32_t index) {
    Value v;
    v.data_ = index;
    return v;
}

Value Value::fuzzy(const FuzzyValue& f) {
    if (!(f.a <= f.b && f.b <= f.c && f.c <= f.d)) fail("fuzzy value parameters must be non-decreasing");
    Value v;
    v.data_ = f;
    return v;
}

Schema::Schema(std::vector<VariableSpec> vars) : vars_(std::move(vars)) {
    std::set<std::string> names;
    std::set<int> columns;
    for (const auto& var : vars_) {
        if (var.name.empty()) fail("schema: variable with empty name");
        if (!names.insert(var.name).second) fail("schema: duplicate variable name '" + var.name + "'");
        if (var.raw_column < 1) fail("schema: variable '" + var.name + "' needs a 1-based column index");
        if (!columns.insert(var.raw_column).second)
            fail("schema: duplicate column index " + std::to_string(var.raw_column));
        if (var.is_discrete()) {
            if (var.levels.empty()) fail("schema: discrete variable '" + var.name + "' has no levels");
            std::set<std::string> tokens, level_names;
            for (const auto& lvl : var.levels) {
                if (!tokens.insert(lvl.token).second)
                    fail("schema: variable '" + var.name + "' has duplicate level token '" + lvl.token + "'");
                if (!level_names.insert(lvl.name).second)
                    fail("schema: variable '" + var.name + "' has duplicate level name '" + lvl.name + "'");
            }
        } else if (!var.levels.empty()) {
            fail("schema: variable '" + var.name + "' of kind " + to_string(var.kind) + " must not list levels");
        }
    }
}

std::vector<std::size_t> Schema::predictor_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i].role == Role::Predictor) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> Schema::target_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i].role == Role::Target) out.push_back(i);
    }
    return out;
}

std::size_t Schema::sole_target_index() const {
    auto targets = target_indices();
    if (targets.empty()) fail("schema: no target variable");
    if (targets.size() > 1) fail("schema: more than one target variable; derive a task first");
    return targets.front();
}

std::optional<std::size_t> Schema::find(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i].name == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> Schema::find_by_column(int raw_column) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i].raw_column == raw_column) return i;
    }
    return std::nullopt;
}

int Schema::max_raw_column() const {
    int m = 0;
    for (const auto& var : vars_) m = std::max(m, var.raw_column);
    return m;
}

// --- schema descriptor parsing -------------------------------------------------

namespace {

VariableKind parse_kind(const std::string& s, FuzzyFamily& family) {
    if (s == "continuous") return VariableKind::Continuous;
    if (s == "ordinal") return VariableKind::Ordinal;
    if (s == "categorical") return VariableKind::Categorical;
    if (s == "fuzzy:triangular") {
        family = FuzzyFamily::Triangular;
        return VariableKind::Fuzzy;
    }
    if (s == "fuzzy:trapezoidal") {
        family = FuzzyFamily::Trapezoidal;
        return VariableKind::Fuzzy;
    }
    fail("schema: unknown kind '" + s + "'");
}

Role parse_role(const std::string& s) {
    if (s == "predictor") return Role::Predictor;
    if (s == "target") return Role::Target;
    if (s == "ignored") return Role::Ignored;
    fail("schema: unknown role '" + s + "'");
}

std::vector<Level> parse_levels(const std::string& s) {
    std::vector<Level> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        if (item.empty()) fail("schema: empty level entry in '" + s + "'");
        auto colon = item.find(':');
        if (colon == std::string::npos) {
            out.push_back(Level{item, item});
        } else {
            std::string token = item.substr(0, colon);
            std::string name = item.substr(colon + 1);
            if (token.empty() || name.empty()) fail("schema: malformed level '" + item + "'");
            out.push_back(Level{token, name});
        }
    }
    return out;
}

}  // namespace

Schema parse_schema(const std::string& text) {
    std::vector<VariableSpec> vars;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        const std::string where = "schema line " + std::to_string(line_no);
        if (tokens[0] != "column" || tokens.size() < 2) fail(where + ": expected 'column <index> key=value ...'");
        VariableSpec var;
        var.raw_column = static_cast<int>(parse_number(tokens[1], where));
        bool have_kind = false, have_role = false, have_name = false;
        for (std::size_t t = 2; t < tokens.size(); ++t) {
            auto eq = tokens[t].find('=');
            if (eq == std::string::npos) fail(where + ": expected key=value, got '" + tokens[t] + "'");
            const std::string key = tokens[t].substr(0, eq);
            const std::string value = tokens[t].substr(eq + 1);
            if (key == "name") {
                var.name = value;
                have_name = true;
            } else if (key == "kind") {
                var.kind = parse_kind(value, var.fuzzy_family);
                have_kind = true;
            } else if (key == "role") {
                var.role = parse_role(value);
                have_role = true;
            } else if (key == "levels") {
                var.levels = parse_levels(value);
            } else {
                fail(where + ": unknown field '" + key + "'");
            }
        }
        if (!have_name) fail(where + ": missing name");
        if (!have_kind) fail(where + ": missing kind");
        if (!have_role) fail(where + ": missing role");
        vars.push_back(std::move(var));
    }
    if (vars.empty()) fail("schema: document lists no variables");
    return Schema(std::move(vars));
}

std::string format_schema(const Schema& schema) {
    std::ostringstream os;
    for (const auto& var : schema.variables()) {
        os << "column " << var.raw_column << " name=" << var.name << " kind=";
        if (var.kind == VariableKind::Fuzzy)
            os << (var.fuzzy_family == FuzzyFamily::Triangular ? "fuzzy:triangular" : "fuzzy:trapezoidal");
        else
            os << to_string(var.kind);
        os << " role=" << to_string(var.role);
        if (!var.levels.empty()) {
            os << " levels=";
            for (std::size_t l = 0; l < var.levels.size(); ++l) {
                if (l) os << ',';
                os << var.levels[l].token << ':' << var.levels[l].name;
            }
        }
        os << '\n';
    }
    return os.str();
}

// --- built-in Horse Colic schema ------------------------------------------------

const std::string& horse_colic_schema_text() {
    static const std::string text = R"(# Horse Colic schema (UCI column order, 28 columns).
# Ordinal level lists are given lowest-first; tokens are the raw UCI codes.
column 1  name=surgery                   kind=categorical role=predictor levels=1:yes,2:no
column 2  name=age                       kind=categorical role=predictor levels=1:adult,9:young
column 3  name=hospital_number           kind=continuous  role=ignored
column 4  name=rectal_temperature        kind=continuous  role=predictor
column 5  name=pulse                     kind=continuous  role=predictor
column 6  name=respiratory_rate          kind=continuous  role=predictor
column 7  name=extremity_temperature     kind=ordinal     role=predictor levels=4:cold,3:cool,1:normal,2:warm
column 8  name=peripheral_pulse          kind=ordinal     role=predictor levels=4:absent,3:reduced,1:normal,2:increased
column 9  name=mucous_membranes          kind=categorical role=predictor levels=1:normal_pink,2:bright_pink,3:pale_pink,4:pale_cyanotic,5:bright_red,6:dark_cyanotic
column 10 name=capillary_refill_time     kind=categorical role=predictor levels=1:lt_3s,2:ge_3s
column 11 name=pain                      kind=ordinal     role=predictor levels=1:alert_no_pain,2:depressed,3:intermittent_mild,4:intermittent_severe,5:continuous_severe
column 12 name=peristalsis               kind=ordinal     role=predictor levels=4:absent,3:hypomotile,2:normal,1:hypermotile
column 13 name=abdominal_distension      kind=ordinal     role=predictor levels=1:none,2:slight,3:moderate,4:severe
column 14 name=nasogastric_tube          kind=ordinal     role=predictor levels=1:none,2:slight,3:significant
column 15 name=nasogastric_reflux        kind=ordinal     role=predictor levels=1:none,3:lt_1_liter,2:gt_1_liter
column 16 name=nasogastric_reflux_ph     kind=continuous  role=predictor
column 17 name=rectal_exam_feces         kind=ordinal     role=predictor levels=4:absent,3:decreased,1:normal,2:increased
column 18 name=abdomen                   kind=categorical role=predictor levels=1:normal,2:other,3:firm_feces_large,4:distended_small,5:distended_large
column 19 name=packed_cell_volume        kind=continuous  role=predictor
column 20 name=total_protein             kind=continuous  role=predictor
column 21 name=abdomocentesis_appearance kind=categorical role=predictor levels=1:clear,2:cloudy,3:serosanguinous
column 22 name=abdomocentesis_protein    kind=continuous  role=predictor
column 23 name=outcome                   kind=categorical role=target    levels=1:lived,2:died,3:euthanized
column 24 name=surgical_lesion           kind=categorical role=target    levels=1:yes,2:no
column 25 name=lesion_site_1             kind=continuous  role=ignored
column 26 name=lesion_site_2             kind=continuous  role=ignored
column 27 name=lesion_site_3             kind=continuous  role=ignored
column 28 name=pathology_data            kind=continuous  role=ignored
)";
    return text;
}

const Schema& horse_colic_schema() {
    static const Schema schema = parse_schema(horse_colic_schema_text());
    return schema;
}

// --- raw data loading -----------------------------------------------------------

namespace {

Value parse_cell(const VariableSpec& var, const std::string& token, const std::string& context) {
    if (token == "?") return Value::missing();
    switch (var.kind) {
        case VariableKind::Continuous:
            return Value::real(parse_number(token, context + " variable '" + var.name + "'"));
        case VariableKind::Ordinal:
        case VariableKind::Categorical: {
            auto idx = var.level_index(token);
            if (!idx) fail(context + ": code '" + token + "' is not a level of variable '" + var.name + "'");
            return Value::level(static_cast<std::int32_t>(*idx));
        }
        case VariableKind::Fuzzy: {
            std::vector<double> params;
            std::string part;
            std::istringstream is(token);
            while (std::getline(is, part, ':'))
                params.push_back(parse_number(part, context + " fuzzy variable '" + var.name + "'"));
            if (var.fuzzy_family == FuzzyFamily::Triangular) {
                if (params.size() != 3) fail(context + ": triangular value needs 3 parameters, got '" + token + "'");
                return Value::fuzzy(FuzzyValue{params[0], params[1], params[1], params[2]});
            }
            if (params.size() != 4) fail(context + ": trapezoidal value needs 4 parameters, got '" + token + "'");
            return Value::fuzzy(FuzzyValue{params[0], params[1], params[2], params[3]});
        }
    }
    fail(context + ": unreachable kind");
}

}  // namespace

Dataset parse_dataset(const std::string& text, const Schema& schema, const std::string& origin) {
    Dataset out;
    out.schema = schema;
    const std::size_t expected = static_cast<std::size_t>(schema.max_raw_column());
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        const std::string context = origin + ":" + std::to_string(line_no);
        if (tokens.size() != expected)
            fail(context + ": expected " + std::to_string(expected) + " columns, got " + std::to_string(tokens.size()));
        Example ex;
        ex.reserve(schema.size());
        for (const auto& var : schema.variables())
            ex.push_back(parse_cell(var, tokens[static_cast<std::size_t>(var.raw_column - 1)], context));
        out.examples.push_back(std::move(ex));
    }
    return out;
}

Dataset load_dataset(const std::vector<std::string>& files, const Schema& schema) {
    Dataset out;
    out.schema = schema;
    for (const auto& path : files) {
        std::ifstream in(path);
        if (!in) fail("cannot open data file '" + path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        Dataset part = parse_dataset(buffer.str(), schema, path);
        for (auto& ex : part.examples) out.examples.push_back(std::move(ex));
    }
    return out;
}

std::string serialize_example(const Schema& schema, const Example& example) {
    if (example.size() != schema.size()) fail("serialize_example: example/schema arity mismatch");
    const std::size_t width = static_cast<std::size_t>(schema.max_raw_column());
    std::vector<std::string> tokens(width, "?");
    for (std::size_t i = 0; i < schema.size(); ++i) {
        const auto& var = schema[i];
        const Value& v = example[i];
        std::string tok = "?";
        if (!v.is_missing()) {
            switch (var.kind) {
                case VariableKind::Continuous: tok = format_number(v.as_real()); break;
                case VariableKind::Ordinal:
                case VariableKind::Categorical: {
                    const auto idx = static_cast<std::size_t>(v.as_level());
                    if (idx >= var.levels.size()) fail("serialize_example: level index out of range");
                    tok = var.levels[idx].token;
                    break;
                }
                case VariableKind::Fuzzy: {
                    const auto& f = v.as_fuzzy();
                    if (var.fuzzy_family == FuzzyFamily::Triangular)
                        tok = format_number(f.a) + ":" + format_number(f.b) + ":" + format_number(f.d);
                    else
                        tok = format_number(f.a) + ":" + format_number(f.b) + ":" + format_number(f.c) + ":" +
                              format_number(f.d);
                    break;
                }
            }
        }
        tokens[static_cast<std::size_t>(var.raw_column - 1)] = std::move(tok);
    }
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

// --- task derivation ------------------------------------------------------------

Dataset derive_task_by_column(const Dataset& dataset, int target_raw_column) {
    auto target = dataset.schema.find_by_column(target_raw_column);
    if (!target) fail("derive_task: no variable at column " + std::to_string(target_raw_column));
    std::vector<VariableSpec> vars = dataset.schema.variables();
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i == *target) {
            vars[i].role = Role::Target;
        } else if (vars[i].role == Role::Target) {
            vars[i].role = Role::Ignored;
        }
    }
    Dataset out;
    out.schema = Schema(std::move(vars));
    for (const auto& ex : dataset.examples) {
        if (!ex[*target].is_missing()) out.examples.push_back(ex);
    }
    return out;
}

Dataset derive_task(const Dataset& dataset, Task::Kind task) {
    return derive_task_by_column(dataset, task == Task::HC23 ? 23 : 24);
}

// --- fold plan ------------------------------------------------------------------

FoldPlan make_fold_plan(const Dataset& dataset, std::uint64_t seed) {
    if (dataset.size() < 2) fail("make_fold_plan: need at least 2 examples");
    const std::size_t target = dataset.schema.sole_target_index();
    // class -> example indices, ascending; the per-(replication, class) seed stream
    // makes the plan invariant to example permutation up to relabeling.
    std::map<std::int32_t, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const Value& v = dataset.examples[i][target];
        if (v.is_missing()) fail("make_fold_plan: example " + std::to_string(i) + " has a missing target");
        by_class[v.as_level()].push_back(i);
    }
    for (const auto& [cls, rows] : by_class) {
        if (rows.size() < 2)
            fail("make_fold_plan: class index " + std::to_string(cls) + " has fewer than 2 examples");
    }

    FoldPlan plan;
    plan.seed = seed;
    for (std::size_t r = 0; r < plan.replications.size(); ++r) {
        auto& rep = plan.replications[r];
        int spill = 0;  // balances the odd-class extras between the folds
        for (const auto& [cls, rows] : by_class) {
            std::vector<std::size_t> shuffled = rows;
            Rng rng(mix_seed(seed, {0x5f01dULL, r, static_cast<std::uint64_t>(cls)}));
            rng.shuffle(shuffled);
            std::size_t take = shuffled.size() / 2;
            if (shuffled.size() % 2 == 1 && spill <= 0) {
                ++take;
                ++spill;
            } else if (shuffled.size() % 2 == 1) {
                --spill;
            }
            for (std::size_t i = 0; i < shuffled.size(); ++i)
                (i < take ? rep.fold_a : rep.fold_b).push_back(shuffled[i]);
        }
        std::sort(rep.fold_a.begin(), rep.fold_a.end());
        std::sort(rep.fold_b.begin(), rep.fold_b.end());
    }
    return plan;
}

Dataset subset(const Dataset& dataset, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.schema = dataset.schema;
    out.examples.reserve(rows.size());
    for (std::size_t r : rows) out.examples.push_back(dataset.examples.at(r));
    return out;
}

// --- encoding -------------------------------------------------------------------

namespace {

double ordinal_unit(const VariableSpec& var, std::int32_t level) {
    const std::size_t c = var.levels.size();
    if (c <= 1) return 0.0;
    return static_cast<double>(level) / static_cast<double>(c - 1);
}

// Expansion + imputation without the standardization step.
std::vector<double> encode_raw(const Encoder& encoder, const Schema& schema, const Example& example) {
    if (example.size() != schema.size()) fail("encode: example/schema arity mismatch");
    std::vector<double> out(encoder.dimension, 0.0);
    for (const auto& rule : encoder.rules) {
        const auto& var = schema[rule.var_index];
        const Value& v = example[rule.var_index];
        if (var.kind == VariableKind::Categorical) {
            std::int32_t level = v.is_missing() ? rule.modal_level : v.as_level();
            if (level < 0 || static_cast<std::size_t>(level) >= rule.width) fail("encode: level index out of range");
            out[rule.first_column + static_cast<std::size_t>(level)] = 1.0;
        } else {
            double x = rule.numeric_impute;
            if (!v.is_missing())
                x = var.kind == VariableKind::Continuous ? v.as_real() : ordinal_unit(var, v.as_level());
            out[rule.first_column] = x;
        }
    }
    return out;
}

}  // namespace

Encoder fit_encoder(const Dataset& train) {
    if (train.examples.empty()) fail("fit_encoder: empty training fold");
    const auto predictors = train.schema.predictor_indices();
    Encoder enc;
    std::size_t col = 0;
    for (std::size_t k : predictors) {
        const auto& var = train.schema[k];
        Encoder::VariableRule rule;
        rule.var_index = k;
        rule.first_column = col;
        if (var.kind == VariableKind::Categorical) {
            rule.width = var.levels.size();
            std::vector<std::size_t> counts(var.levels.size(), 0);
            for (const auto& ex : train.examples) {
                if (!ex[k].is_missing()) ++counts[static_cast<std::size_t>(ex[k].as_level())];
            }
            const auto total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
            if (total == 0) fail("fit_encoder: variable '" + var.name + "' is entirely missing in the training fold");
            rule.modal_level = static_cast<std::int32_t>(
                std::max_element(counts.begin(), counts.end()) - counts.begin());
        } else if (var.kind == VariableKind::Fuzzy) {
            fail("fit_encoder: fuzzy variables have no real encoding (RBF baselines do not support them)");
        } else {
            rule.width = 1;
            double sum = 0.0;
            std::size_t n = 0;
            for (const auto& ex : train.examples) {
                if (ex[k].is_missing()) continue;
                sum += var.kind == VariableKind::Continuous ? ex[k].as_real() : ordinal_unit(var, ex[k].as_level());
                ++n;
            }
            if (n == 0) fail("fit_encoder: variable '" + var.name + "' is entirely missing in the training fold");
            rule.numeric_impute = sum / static_cast<double>(n);
        }
        col += rule.width;
        enc.rules.push_back(rule);
    }
    enc.dimension = col;

    enc.mean.assign(enc.dimension, 0.0);
    enc.stddev.assign(enc.dimension, 0.0);
    std::vector<std::vector<double>> raw;
    raw.reserve(train.examples.size());
    for (const auto& ex : train.examples) raw.push_back(encode_raw(enc, train.schema, ex));
    const double n = static_cast<double>(raw.size());
    for (std::size_t j = 0; j < enc.dimension; ++j) {
        double m = 0.0;
        for (const auto& row : raw) m += row[j];
        m /= n;
        double ss = 0.0;
        for (const auto& row : raw) ss += (row[j] - m) * (row[j] - m);
        enc.mean[j] = m;
        enc.stddev[j] = std::sqrt(ss / n);
    }
    return enc;
}

std::vector<double> encode(const Encoder& encoder, const Schema& schema, const Example& example) {
    std::vector<double> out = encode_raw(encoder, schema, example);
    for (std::size_t j = 0; j < encoder.dimension; ++j) {
        // columns constant in the fitting fold carry no information: encode to 0
        out[j] = encoder.stddev[j] > 0.0 ? (out[j] - encoder.mean[j]) / encoder.stddev[j] : 0.0;
    }
    return out;
}

// --- targets --------------------------------------------------------------------

std::vector<double> target_indicator(const Schema& schema, const Example& example) {
    const std::size_t t = schema.sole_target_index();
    const auto& var = schema[t];
    std::vector<double> y(var.levels.size(), 0.0);
    const Value& v = example[t];
    if (v.is_missing()) fail("target_indicator: missing target value");
    y[static_cast<std::size_t>(v.as_level())] = 1.0;
    return y;
}

std::int32_t target_class(const Schema& schema, const Example& example) {
    const std::size_t t = schema.sole_target_index();
    const Value& v = example[t];
    if (v.is_missing()) fail("target_class: missing target value");
    return v.as_level();
}

std::vector<std::string> class_labels(const Schema& schema) {
    const std::size_t t = schema.sole_target_index();
    std::vector<std::string> out;
    for (const auto& lvl : schema[t].levels) out.push_back(lvl.name);
    return out;
}

}  // namespace simnn
