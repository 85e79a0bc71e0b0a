#include "simnn/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace simnn {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_config(const SimilarityConfig& c) {
    if (!(c.normalization_exponent > 0.0)) fail("similarity config: normalization exponent must be positive");
    if (!(c.probability_floor > 0.0 && c.probability_floor < 0.5))
        fail("similarity config: probability floor must lie in (0, 0.5)");
    if (!(c.continuous_alpha >= 1.0)) fail("similarity config: alpha must be at least 1");
    if (!(c.continuous_beta > 0.0 && c.continuous_beta <= 1.0)) fail("similarity config: beta must lie in (0, 1]");
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

// Sigmoid-like squashing of the ratio to the per-variable baseline.
double squash(double s, double baseline, double a) {
    if (s <= 0.0) return 0.0;
    const double z = std::pow(s / baseline, a);
    return z / (z + 1.0);
}

double continuous_raw(const VariableStats& st, const SimilarityConfig& cfg, double u, double v) {
    double z;
    if (st.degenerate_range) {
        z = (u == v) ? 0.0 : 1.0;
    } else {
        z = clamp01(std::abs(u - v) / (st.range_hi - st.range_lo));
    }
    return std::pow(1.0 - std::pow(z, cfg.continuous_beta), cfg.continuous_alpha);
}

// Possibility (sup of pointwise min) of two trapezoidal memberships.
double fuzzy_raw(const FuzzyValue& x, const FuzzyValue& y) {
    if (std::max(x.b, y.b) <= std::min(x.c, y.c)) return 1.0;  // cores intersect
    const FuzzyValue& left = x.c < y.b ? x : y;
    const FuzzyValue& right = x.c < y.b ? y : x;
    const double gap_den = (left.d - left.c) + (right.b - right.a);
    if (gap_den <= 0.0) return 0.0;  // crisp edges with disjoint cores
    return clamp01((left.d - right.a) / gap_den);
}

// Raw partial for a discrete level pair, by nominal mode or the ordinal rule.
double discrete_raw(const VariableSpec& var, const VariableStats& st, const SimilarityConfig& cfg, std::size_t i,
                    std::size_t j) {
    if (var.kind == VariableKind::Categorical) {
        if (i != j) return 0.0;
        return cfg.nominal_mode == NominalMode::Overlap ? 1.0 : 1.0 - st.probabilities[i];
    }
    // ordinal: shared mass of the closed level interval against the endpoints
    if (i == j) return 1.0;
    const auto lo = std::min(i, j);
    const auto hi = std::max(i, j);
    double interval = 0.0;
    for (std::size_t t = lo; t <= hi; ++t) interval += st.probabilities[t];
    interval = std::min(interval, 1.0);
    const double s = 2.0 * std::log(interval) / (std::log(st.probabilities[i]) + std::log(st.probabilities[j]));
    return clamp01(s);
}

void check_kind(const VariableSpec& var, const Value& v) {
    switch (var.kind) {
        case VariableKind::Continuous:
            if (!v.is_real()) fail("similarity: variable '" + var.name + "' expects a numeric value");
            return;
        case VariableKind::Ordinal:
        case VariableKind::Categorical:
            if (!v.is_level() || static_cast<std::size_t>(v.as_level()) >= var.levels.size())
                fail("similarity: variable '" + var.name + "' expects a known level");
            return;
        case VariableKind::Fuzzy:
            if (!v.is_fuzzy()) fail("similarity: variable '" + var.name + "' expects a fuzzy value");
            return;
    }
}

double raw_partial(const SimilarityModel& model, std::size_t k, const Value& u, const Value& v) {
    const auto& var = model.schema[k];
    const auto& st = model.stats[k];
    check_kind(var, u);
    check_kind(var, v);
    switch (var.kind) {
        case VariableKind::Continuous: return continuous_raw(st, model.config, u.as_real(), v.as_real());
        case VariableKind::Ordinal:
        case VariableKind::Categorical:
            return discrete_raw(var, st, model.config, static_cast<std::size_t>(u.as_level()),
                                static_cast<std::size_t>(v.as_level()));
        case VariableKind::Fuzzy: return fuzzy_raw(u.as_fuzzy(), v.as_fuzzy());
    }
    fail("similarity: unreachable kind");
}

}  // namespace

void SimilarityModel::finalize_tables() {
    predictors = schema.predictor_indices();
    for (std::size_t k : predictors) {
        const auto& var = schema[k];
        if (!var.is_discrete()) continue;
        auto& st = stats[k];
        const std::size_t c = var.levels.size();
        st.normalized_table.assign(c * c, 0.0);
        for (std::size_t i = 0; i < c; ++i) {
            for (std::size_t j = 0; j < c; ++j) {
                const double raw = discrete_raw(var, st, config, i, j);
                st.normalized_table[i * c + j] = squash(raw, st.baseline, config.normalization_exponent);
            }
        }
    }
}

SimilarityModel fit_similarity_model(const Dataset& train, const SimilarityConfig& config) {
    check_config(config);
    if (train.examples.empty()) fail("fit_similarity_model: empty training fold");
    const double eps = config.probability_floor;

    SimilarityModel model;
    model.schema = train.schema;
    model.config = config;
    model.stats.resize(train.schema.size());

    for (std::size_t k : train.schema.predictor_indices()) {
        const auto& var = train.schema[k];
        auto& st = model.stats[k];

        if (var.is_discrete()) {
            const std::size_t c = var.levels.size();
            std::vector<std::size_t> counts(c, 0);
            std::size_t present = 0;
            for (const auto& ex : train.examples) {
                const Value& v = ex[k];
                if (v.is_missing()) continue;
                check_kind(var, v);
                ++counts[static_cast<std::size_t>(v.as_level())];
                ++present;
            }
            st.probabilities.assign(c, 1.0 / static_cast<double>(c));  // all-missing fallback
            if (present > 0) {
                for (std::size_t l = 0; l < c; ++l)
                    st.probabilities[l] = static_cast<double>(counts[l]) / static_cast<double>(present);
            }
            for (double& p : st.probabilities) p = std::min(1.0 - eps, std::max(eps, p));

            // baseline from pair counts: same-level pairs n(n-1)/2, cross pairs n_a n_b
            if (present >= 2) {
                double sum = 0.0;
                double pairs = 0.0;
                for (std::size_t i = 0; i < c; ++i) {
                    for (std::size_t j = i; j < c; ++j) {
                        const double npairs =
                            i == j ? 0.5 * static_cast<double>(counts[i]) * static_cast<double>(counts[i] - 1)
                                   : static_cast<double>(counts[i]) * static_cast<double>(counts[j]);
                        if (npairs == 0.0) continue;
                        sum += npairs * discrete_raw(var, st, config, i, j);
                        pairs += npairs;
                    }
                }
                st.baseline = std::max(eps, sum / pairs);
            }
        } else if (var.kind == VariableKind::Continuous) {
            std::vector<double> vals;
            for (const auto& ex : train.examples) {
                if (ex[k].is_missing()) continue;
                check_kind(var, ex[k]);
                vals.push_back(ex[k].as_real());
            }
            if (!vals.empty()) {
                auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
                st.range_lo = *lo;
                st.range_hi = *hi;
                st.degenerate_range = !(*hi > *lo);
            }
            if (vals.size() >= 2) {
                double sum = 0.0;
                for (std::size_t i = 0; i < vals.size(); ++i)
                    for (std::size_t j = i + 1; j < vals.size(); ++j)
                        sum += continuous_raw(st, config, vals[i], vals[j]);
                const double pairs = 0.5 * static_cast<double>(vals.size()) * static_cast<double>(vals.size() - 1);
                st.baseline = std::max(eps, sum / pairs);
            }
        } else {  // fuzzy
            std::vector<FuzzyValue> vals;
            for (const auto& ex : train.examples) {
                if (ex[k].is_missing()) continue;
                check_kind(var, ex[k]);
                vals.push_back(ex[k].as_fuzzy());
            }
            if (vals.size() >= 2) {
                double sum = 0.0;
                for (std::size_t i = 0; i < vals.size(); ++i)
                    for (std::size_t j = i + 1; j < vals.size(); ++j) sum += fuzzy_raw(vals[i], vals[j]);
                const double pairs = 0.5 * static_cast<double>(vals.size()) * static_cast<double>(vals.size() - 1);
                st.baseline = std::max(eps, sum / pairs);
            }
        }
    }
    model.finalize_tables();
    return model;
}

PartialSimilarity partial_similarity(const SimilarityModel& model, std::size_t k, const Value& u, const Value& v) {
    if (k >= model.schema.size()) throw std::out_of_range("partial_similarity: variable index out of range");
    if (u.is_missing() || v.is_missing()) return std::nullopt;
    return raw_partial(model, k, u, v);
}

double normalize_partial(const SimilarityModel& model, std::size_t k, const PartialSimilarity& s) {
    if (k >= model.schema.size()) throw std::out_of_range("normalize_partial: variable index out of range");
    if (!s.has_value()) return 0.5;
    return squash(*s, model.stats[k].baseline, model.config.normalization_exponent);
}

double similarity(const SimilarityModel& model, const Example& x, const Example& y) {
    if (x.size() != model.schema.size() || y.size() != model.schema.size())
        fail("similarity: example does not match the model's schema");
    double sum = 0.0;
    std::size_t present = 0;
    for (std::size_t k : model.predictors) {
        const Value& u = x[k];
        const Value& v = y[k];
        if (u.is_missing() || v.is_missing()) {
            if (model.config.missing_policy == MissingPolicy::Midpoint) sum += 0.5;
            continue;
        }
        const auto& var = model.schema[k];
        const auto& st = model.stats[k];
        double n;
        if (var.is_discrete()) {
            check_kind(var, u);
            check_kind(var, v);
            const std::size_t c = var.levels.size();
            n = st.normalized_table[static_cast<std::size_t>(u.as_level()) * c +
                                    static_cast<std::size_t>(v.as_level())];
        } else {
            n = squash(raw_partial(model, k, u, v), st.baseline, model.config.normalization_exponent);
        }
        sum += n;
        ++present;
    }
    if (model.config.missing_policy == MissingPolicy::Midpoint)
        return model.predictors.empty() ? 0.5 : sum / static_cast<double>(model.predictors.size());
    return present == 0 ? 0.5 : sum / static_cast<double>(present);
}

double max_attainable_similarity(const SimilarityModel& model) {
    if (model.predictors.empty()) return 0.5;
    // Every per-variable normalized value is at most n(1/s_..k) >= 0.5. The
    // present-only policy averages over an arbitrary subset, so its supremum is
    // the largest per-variable cap; the midpoint policy always averages all.
    double sum = 0.0;
    double best = 0.0;
    for (std::size_t k : model.predictors) {
        const double cap = squash(1.0, model.stats[k].baseline, model.config.normalization_exponent);
        sum += cap;
        best = std::max(best, cap);
    }
    if (model.config.missing_policy == MissingPolicy::Gower) return best;
    return sum / static_cast<double>(model.predictors.size());
}

Eigen::MatrixXd similarity_matrix(const SimilarityModel& model, const Dataset& data) {
    const auto n = static_cast<Eigen::Index>(data.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double s = similarity(model, data.examples[static_cast<std::size_t>(i)],
                                        data.examples[static_cast<std::size_t>(j)]);
            m(i, j) = s;
            m(j, i) = s;
        }
    }
    return m;
}

std::string format_matrix(const Eigen::MatrixXd& m) {
    std::ostringstream os;
    os.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << m(i, j);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace simnn
