#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "simnn/dataset.hpp"
#include "simnn/rng.hpp"
#include "simnn/similarity.hpp"

using namespace simnn;

namespace {

Schema one_categorical(int levels) {
    std::string lv = "a";
    for (int i = 1; i < levels; ++i) lv += "," + std::string(1, static_cast<char>('a' + i));
    return parse_schema("column 1 name=c kind=categorical role=predictor levels=" + lv +
                        "\ncolumn 2 name=y kind=categorical role=target levels=p,q\n");
}

Schema one_ordinal(int levels) {
    std::string lv = "a";
    for (int i = 1; i < levels; ++i) lv += "," + std::string(1, static_cast<char>('a' + i));
    return parse_schema("column 1 name=o kind=ordinal role=predictor levels=" + lv +
                        "\ncolumn 2 name=y kind=categorical role=target levels=p,q\n");
}

Schema one_continuous() {
    return parse_schema(
        "column 1 name=v kind=continuous role=predictor\n"
        "column 2 name=y kind=categorical role=target levels=p,q\n");
}

// Random heterogeneous dataset: categorical(3), ordinal(4), two continuous.
Dataset random_mixed(Rng& rng, std::size_t n, double missing_rate) {
    const Schema schema = parse_schema(
        "column 1 name=c kind=categorical role=predictor levels=a,b,c\n"
        "column 2 name=o kind=ordinal role=predictor levels=w,x,y,z\n"
        "column 3 name=u kind=continuous role=predictor\n"
        "column 4 name=v kind=continuous role=predictor\n"
        "column 5 name=t kind=categorical role=target levels=p,q\n");
    std::string text;
    const char* cats = "abc";
    const char* ords = "wxyz";
    for (std::size_t i = 0; i < n; ++i) {
        auto cell = [&](const std::string& tok) {
            return rng.uniform() < missing_rate ? std::string("?") : tok;
        };
        text += cell(std::string(1, cats[rng.next_below(3)])) + " ";
        text += cell(std::string(1, ords[rng.next_below(4)])) + " ";
        text += cell(std::to_string(rng.uniform(-3.0, 3.0))) + " ";
        text += cell(std::to_string(rng.uniform(0.0, 1.0))) + " ";
        text += (rng.next_below(2) ? "p" : "q");
        text += "\n";
    }
    return parse_dataset(text, schema);
}

Example row(const Dataset& d, std::size_t i) { return d.examples[i]; }

}  // namespace

TEST_CASE("frequency rule: equal values score one minus their probability") {
    // level a appears once in five rows -> P(a) = 0.2
    const Dataset train = parse_dataset("a p\nb p\nb q\nb p\nb q\n", one_categorical(2));
    const SimilarityModel model = fit_similarity_model(train, SimilarityConfig{});
    const auto s = partial_similarity(model, 0, Value::level(0), Value::level(0));
    REQUIRE(s.has_value());
    CHECK(*s == doctest::Approx(0.8).epsilon(1e-9));
    const auto mismatch = partial_similarity(model, 0, Value::level(0), Value::level(1));
    CHECK(*mismatch == 0.0);
    // dominance: the rarer level scores strictly higher at equality
    const auto common = partial_similarity(model, 0, Value::level(1), Value::level(1));
    CHECK(*s > *common);
}

TEST_CASE("overlap rule ignores frequencies") {
    const Dataset train = parse_dataset("a p\nb p\nb q\nb p\n", one_categorical(2));
    SimilarityConfig config;
    config.nominal_mode = NominalMode::Overlap;
    const SimilarityModel model = fit_similarity_model(train, config);
    CHECK(*partial_similarity(model, 0, Value::level(0), Value::level(0)) == 1.0);
    CHECK(*partial_similarity(model, 0, Value::level(1), Value::level(1)) == 1.0);
    CHECK(*partial_similarity(model, 0, Value::level(0), Value::level(1)) == 0.0);
}

TEST_CASE("ordinal rule: log-interval oracle and clamps") {
    // empirical fractions (0.25, 0.25, 0.5) over four rows
    const Dataset train = parse_dataset("a p\nb p\nc q\nc q\n", one_ordinal(3));
    const SimilarityModel model = fit_similarity_model(train, SimilarityConfig{});

    // closed interval {a,b}: 2 log(0.5) / (log 0.25 + log 0.25) = 0.5
    const auto ab = partial_similarity(model, 0, Value::level(0), Value::level(1));
    CHECK(*ab == doctest::Approx(0.5).epsilon(1e-12));

    // equal values are exactly 1 regardless of probability
    for (int l = 0; l < 3; ++l)
        CHECK(*partial_similarity(model, 0, Value::level(l), Value::level(l)) == 1.0);

    // full interval sums to 1, clamped: 2 log(1) / (...) = 0
    const auto ac = partial_similarity(model, 0, Value::level(0), Value::level(2));
    CHECK(*ac == 0.0);

    // symmetry of the interval rule
    const auto ba = partial_similarity(model, 0, Value::level(1), Value::level(0));
    CHECK(*ab == *ba);
}

TEST_CASE("continuous rule: range-scaled difference") {
    const Dataset train = parse_dataset("0 p\n10 q\n5 p\n", one_continuous());
    SimilarityConfig config;
    const SimilarityModel model = fit_similarity_model(train, config);
    CHECK(*partial_similarity(model, 0, Value::real(2), Value::real(7)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(*partial_similarity(model, 0, Value::real(3), Value::real(3)) == 1.0);
    // out-of-range distance clamps to zero similarity
    CHECK(*partial_similarity(model, 0, Value::real(-40), Value::real(7)) == 0.0);

    // shape exponents
    config.continuous_alpha = 2.0;
    const SimilarityModel sq = fit_similarity_model(train, config);
    CHECK(*partial_similarity(sq, 0, Value::real(2), Value::real(7)) == doctest::Approx(0.25).epsilon(1e-12));
    config.continuous_alpha = 1.0;
    config.continuous_beta = 0.5;
    const SimilarityModel rt = fit_similarity_model(train, config);
    CHECK(*partial_similarity(rt, 0, Value::real(2), Value::real(7)) ==
          doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-12));

    // weak monotonicity in the distance
    double prev = 1.0;
    for (double d = 0.0; d <= 10.0; d += 0.25) {
        const double s = *partial_similarity(model, 0, Value::real(0), Value::real(d));
        CHECK(s <= prev + 1e-15);
        prev = s;
    }
}

TEST_CASE("degenerate training range falls back to equality matching") {
    const Dataset train = parse_dataset("4 p\n4 q\n4 p\n", one_continuous());
    const SimilarityModel model = fit_similarity_model(train, SimilarityConfig{});
    CHECK(*partial_similarity(model, 0, Value::real(4), Value::real(4)) == 1.0);
    CHECK(*partial_similarity(model, 0, Value::real(4), Value::real(4.001)) == 0.0);
}

TEST_CASE("fuzzy rule: possibility of trapezoid pairs") {
    const Schema schema = parse_schema(
        "column 1 name=f kind=fuzzy:trapezoidal role=predictor\n"
        "column 2 name=y kind=categorical role=target levels=p,q\n");
    const Dataset train = parse_dataset("0:1:2:3 p\n2:3:4:5 q\n", schema);
    const SimilarityModel model = fit_similarity_model(train, SimilarityConfig{});

    const auto fz = [](double a, double b, double c, double d) { return Value::fuzzy({a, b, c, d}); };
    // overlapping cores -> possibility 1
    CHECK(*partial_similarity(model, 0, fz(0, 1, 3, 4), fz(2, 3, 5, 6)) == 1.0);
    // identical values -> 1
    CHECK(*partial_similarity(model, 0, fz(0, 1, 2, 3), fz(0, 1, 2, 3)) == 1.0);
    // slopes crossing at membership 1/3
    CHECK(*partial_similarity(model, 0, fz(0, 1, 2, 4), fz(3, 4, 5, 6)) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(*partial_similarity(model, 0, fz(3, 4, 5, 6), fz(0, 1, 2, 4)) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    // disjoint supports -> 0
    CHECK(*partial_similarity(model, 0, fz(0, 1, 2, 3), fz(4, 5, 6, 7)) == 0.0);
}

TEST_CASE("missing cells make the partial missing") {
    const Dataset train = parse_dataset("a p\nb q\n", one_categorical(2));
    const SimilarityModel model = fit_similarity_model(train, SimilarityConfig{});
    CHECK_FALSE(partial_similarity(model, 0, Value::missing(), Value::level(0)).has_value());
    CHECK_FALSE(partial_similarity(model, 0, Value::level(0), Value::missing()).has_value());
    CHECK_FALSE(partial_similarity(model, 0, Value::missing(), Value::missing()).has_value());
    CHECK(normalize_partial(model, 0, std::nullopt) == 0.5);
}

TEST_CASE("normalization pivots the training mean to one half for every exponent") {
    Rng rng(321);
    const Dataset train = random_mixed(rng, 40, 0.2);
    for (double a : {0.5, 1.0, 2.0}) {
        SimilarityConfig config;
        config.normalization_exponent = a;
        const SimilarityModel model = fit_similarity_model(train, config);
        for (std::size_t k : model.predictors) {
            const double pivot = normalize_partial(model, k, model.stats[k].baseline);
            CHECK(pivot == doctest::Approx(0.5).epsilon(1e-12));
        }
    }
}

TEST_CASE("normalization maps zero to zero and is monotone") {
    const Dataset train = parse_dataset("a p\na p\nb q\n", one_categorical(2));
    for (double a : {0.5, 1.0, 2.0}) {
        SimilarityConfig config;
        config.normalization_exponent = a;
        const SimilarityModel model = fit_similarity_model(train, config);
        CHECK(normalize_partial(model, 0, 0.0) == 0.0);
        double prev = -1.0;
        for (double s = 0.0; s <= 1.0; s += 0.05) {
            const double n = normalize_partial(model, 0, s);
            CHECK(n >= prev);
            CHECK(n >= 0.0);
            CHECK(n <= 1.0);
            prev = n;
        }
    }
}

TEST_CASE("frozen baseline oracle for a three-row categorical fold") {
    // values r, r, g: P = (2/3, 1/3); raw pair sims (1/3, 0, 0) -> baseline 1/9
    const Schema schema = parse_schema(
        "column 1 name=c kind=categorical role=predictor levels=r,g\n"
        "column 2 name=y kind=categorical role=target levels=p,q\n");
    const Dataset train = parse_dataset("r p\nr q\ng p\n", schema);
    const SimilarityModel model = fit_similarity_model(train, SimilarityConfig{});
    CHECK(model.stats[0].baseline == doctest::Approx(1.0 / 9).epsilon(1e-9));
    // normalized equal-r partial: n((1/3) / (1/9)) = n(3) = 3/4 at a = 1
    const auto rr = partial_similarity(model, 0, Value::level(0), Value::level(0));
    CHECK(normalize_partial(model, 0, rr) == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("fit fallbacks: all-missing and unseen levels") {
    const Schema schema = parse_schema(
        "column 1 name=c kind=categorical role=predictor levels=a,b,c,d\n"
        "column 2 name=y kind=categorical role=target levels=p,q\n");
    const Dataset train = parse_dataset("? p\n? q\n? p\n", schema);
    const SimilarityModel model = fit_similarity_model(train, SimilarityConfig{});
    CHECK(model.stats[0].baseline == 0.5);  // no computable pair
    // uniform fallback probabilities
    for (double p : model.stats[0].probabilities) CHECK(p == doctest::Approx(0.25));

    // unseen level in a non-degenerate fold takes the floor probability
    const Dataset seen = parse_dataset("a p\na q\nb p\nb q\n", schema);
    const SimilarityModel fitted = fit_similarity_model(seen, SimilarityConfig{});
    const auto dd = partial_similarity(fitted, 0, Value::level(3), Value::level(3));
    CHECK(*dd == doctest::Approx(1.0 - 1e-6).epsilon(1e-9));
}

TEST_CASE("fitted statistics satisfy their invariants on random data") {
    Rng rng(777);
    for (int round = 0; round < 5; ++round) {
        const Dataset train = random_mixed(rng, 30 + 10 * round, 0.25);
        const SimilarityModel model = fit_similarity_model(train, SimilarityConfig{});
        for (std::size_t k : model.predictors) {
            const VariableStats& st = model.stats[k];
            CHECK(st.baseline > 0.0);
            CHECK(st.baseline <= 1.0);
            if (train.schema[k].is_discrete()) {
                double sum = 0.0;
                for (double p : st.probabilities) {
                    CHECK(p >= 1e-6);
                    CHECK(p <= 1.0 - 1e-6);
                    sum += p;
                }
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-4));
            } else {
                CHECK(st.range_hi >= st.range_lo);
            }
        }
    }
}

TEST_CASE("aggregation matches per-variable recomputation under both policies") {
    Rng rng(99);
    const Dataset train = random_mixed(rng, 50, 0.3);
    for (MissingPolicy policy : {MissingPolicy::Midpoint, MissingPolicy::Gower}) {
        SimilarityConfig config;
        config.missing_policy = policy;
        const SimilarityModel model = fit_similarity_model(train, config);
        for (int t = 0; t < 200; ++t) {
            const Example& x = row(train, rng.next_below(train.size()));
            const Example& y = row(train, rng.next_below(train.size()));
            double sum_all = 0.0, sum_present = 0.0;
            std::size_t present = 0;
            for (std::size_t k : model.predictors) {
                const auto partial = partial_similarity(model, k, x[k], y[k]);
                sum_all += normalize_partial(model, k, partial);
                if (partial.has_value()) {
                    sum_present += normalize_partial(model, k, partial);
                    ++present;
                }
            }
            const double expected =
                policy == MissingPolicy::Midpoint
                    ? sum_all / static_cast<double>(model.predictors.size())
                    : (present == 0 ? 0.5 : sum_present / static_cast<double>(present));
            CHECK(similarity(model, x, y) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("mean-replacement identity holds for the present-only aggregation") {
    // averaging present partials equals averaging over all variables after
    // substituting the present-mean for each missing one
    Rng rng(1234);
    const Dataset train = random_mixed(rng, 40, 0.35);
    SimilarityConfig config;
    config.missing_policy = MissingPolicy::Gower;
    const SimilarityModel model = fit_similarity_model(train, config);
    for (int t = 0; t < 100; ++t) {
        const Example& x = row(train, rng.next_below(train.size()));
        const Example& y = row(train, rng.next_below(train.size()));
        double sum_present = 0.0;
        std::size_t present = 0;
        for (std::size_t k : model.predictors) {
            const auto partial = partial_similarity(model, k, x[k], y[k]);
            if (partial.has_value()) {
                sum_present += normalize_partial(model, k, partial);
                ++present;
            }
        }
        if (present == 0) continue;
        const double mean_present = sum_present / static_cast<double>(present);
        const double replaced =
            (sum_present + mean_present * static_cast<double>(model.predictors.size() - present)) /
            static_cast<double>(model.predictors.size());
        CHECK(similarity(model, x, y) == doctest::Approx(replaced).epsilon(1e-12));
    }
}

TEST_CASE("similarity is symmetric, bounded, and below the model cap") {
    Rng rng(2024);
    const Dataset train = random_mixed(rng, 60, 0.25);
    for (NominalMode mode : {NominalMode::Frequency, NominalMode::Overlap}) {
        for (MissingPolicy policy : {MissingPolicy::Midpoint, MissingPolicy::Gower}) {
            SimilarityConfig config;
            config.nominal_mode = mode;
            config.missing_policy = policy;
            const SimilarityModel model = fit_similarity_model(train, config);
            const double cap = max_attainable_similarity(model);
            for (std::size_t i = 0; i < train.size(); ++i) {
                const double self = similarity(model, row(train, i), row(train, i));
                CHECK(self <= cap + 1e-12);
                for (std::size_t j = i; j < train.size(); ++j) {
                    const double s = similarity(model, row(train, i), row(train, j));
                    CHECK(s == similarity(model, row(train, j), row(train, i)));  // bit-exact
                    CHECK(s >= 0.0);
                    CHECK(s <= 1.0);
                    // each row is maximally similar to itself under the
                    // every-variable average; present-only subset averages
                    // (checked below on complete data) do not guarantee this
                    if (policy == MissingPolicy::Midpoint) CHECK(s <= self + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("self-similarity is maximal on complete data under both policies") {
    Rng rng(515);
    const Dataset train = random_mixed(rng, 40, 0.0);
    for (MissingPolicy policy : {MissingPolicy::Midpoint, MissingPolicy::Gower}) {
        SimilarityConfig config;
        config.missing_policy = policy;
        const SimilarityModel model = fit_similarity_model(train, config);
        for (std::size_t i = 0; i < train.size(); ++i) {
            const double self = similarity(model, row(train, i), row(train, i));
            CHECK(self < 1.0);  // normalization keeps the aggregate below one
            for (std::size_t j = 0; j < train.size(); ++j)
                CHECK(similarity(model, row(train, i), row(train, j)) <= self + 1e-12);
        }
    }
}

TEST_CASE("complete self-similarity reaches the model cap in overlap mode") {
    const Schema schema = parse_schema(
        "column 1 name=c kind=categorical role=predictor levels=a,b\n"
        "column 2 name=o kind=ordinal role=predictor levels=x,y,z\n"
        "column 3 name=v kind=continuous role=predictor\n"
        "column 4 name=t kind=categorical role=target levels=p,q\n");
    const Dataset train = parse_dataset("a x 0 p\nb z 10 q\na y 5 p\nb x 2 q\n", schema);
    SimilarityConfig config;
    config.nominal_mode = NominalMode::Overlap;
    const SimilarityModel model = fit_similarity_model(train, config);
    for (const Example& x : train.examples)
        CHECK(similarity(model, x, x) == doctest::Approx(max_attainable_similarity(model)).epsilon(1e-12));
}

TEST_CASE("similarity matrices are exactly symmetric with duplicate-row ties") {
    Rng rng(31337);
    Dataset train = random_mixed(rng, 25, 0.2);
    train.examples.push_back(train.examples[3]);  // duplicate row
    const SimilarityModel model = fit_similarity_model(train, SimilarityConfig{});
    const Eigen::MatrixXd m = similarity_matrix(model, train);
    CHECK(m == m.transpose());
    CHECK(m.row(3) == m.row(train.size() - 1));
    CHECK(m.minCoeff() >= 0.0);
    CHECK(m.maxCoeff() <= 1.0);
}

TEST_CASE("matrix export prints a full-precision grid") {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.123456789012345678, 0.5, 0.25;
    const std::string text = format_matrix(m);
    CHECK(text == "1 0.12345678901234568\n0.5 0.25\n");
}

TEST_CASE("config validation rejects out-of-domain parameters") {
    const Dataset train = parse_dataset("a p\nb q\n", one_categorical(2));
    SimilarityConfig config;
    config.normalization_exponent = 0.0;
    CHECK_THROWS_AS(fit_similarity_model(train, config), std::invalid_argument);
    config = SimilarityConfig{};
    config.continuous_alpha = 0.5;  // needs alpha >= 1
    CHECK_THROWS_AS(fit_similarity_model(train, config), std::invalid_argument);
    config = SimilarityConfig{};
    config.continuous_beta = 1.5;  // needs beta <= 1
    CHECK_THROWS_AS(fit_similarity_model(train, config), std::invalid_argument);
    config = SimilarityConfig{};
    config.probability_floor = 0.5;  // needs epsilon < 0.5
    CHECK_THROWS_AS(fit_similarity_model(train, config), std::invalid_argument);
    config = SimilarityConfig{};
    CHECK_THROWS_AS(fit_similarity_model(Dataset{train.schema, {}}, config), std::invalid_argument);
}
