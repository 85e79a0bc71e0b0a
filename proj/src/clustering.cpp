#include "simnn/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "simnn/rng.hpp"

namespace simnn {

Clustering leader2(const SimilaritySource& sim, std::size_t n, double s_min) {
    if (!(s_min >= 0.0 && s_min <= 1.0)) throw std::invalid_argument("leader2: s_min must lie in [0, 1]");
    if (n == 0) throw std::invalid_argument("leader2: need at least one example");

    Clustering c;
    c.s_min = s_min;
    for (std::size_t i = 0; i < n; ++i) {
        bool far_from_all = true;
        for (std::size_t leader : c.leaders) {
            if (sim(i, leader) >= s_min) {
                far_from_all = false;
                break;
            }
        }
        if (far_from_all) c.leaders.push_back(i);
    }

    c.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        double best_sim = -1.0;
        for (std::size_t li = 0; li < c.leaders.size(); ++li) {
            const double s = sim(i, c.leaders[li]);
            if (s > best_sim) {  // strict: ties keep the lowest leader position
                best_sim = s;
                best = li;
            }
        }
        c.assignment[i] = best;
    }
    return c;
}

PropertyReport verify_properties(const SimilaritySource& sim, std::size_t n, const Clustering& c) {
    // materialize once: the identical-rows check needs whole-row comparisons
    Eigen::MatrixXd S(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sim(i, j);

    PropertyReport report;
    report.member_threshold = true;
    report.leader_separation = true;
    report.identical_same_leader = true;
    report.assignment_maximal = true;

    double min_member = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double own = S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c.leaders[c.assignment[i]]));
        min_member = std::min(min_member, own);
        if (own < c.s_min) report.member_threshold = false;
        for (std::size_t leader : c.leaders) {
            if (S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(leader)) > own)
                report.assignment_maximal = false;
        }
    }

    double max_leader_pair = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < c.leaders.size(); ++a) {
        for (std::size_t b = a + 1; b < c.leaders.size(); ++b) {
            const double s = S(static_cast<Eigen::Index>(c.leaders[a]), static_cast<Eigen::Index>(c.leaders[b]));
            max_leader_pair = std::max(max_leader_pair, s);
            if (s >= c.s_min) report.leader_separation = false;
        }
    }
    report.separation_gap = c.leaders.size() < 2 || min_member > max_leader_pair;

    // examples indistinguishable to the similarity (identical rows) must share a
    // leader; bucket rows by a cheap signature so only candidates are compared
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::vector<double> signature(n);
    for (std::size_t i = 0; i < n; ++i) signature[i] = S.row(static_cast<Eigen::Index>(i)).sum();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return signature[a] < signature[b]; });
    for (std::size_t a = 0; a < n && report.identical_same_leader; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const std::size_t i = order[a];
            const std::size_t j = order[b];
            if (signature[i] != signature[j]) break;
            if (c.assignment[i] == c.assignment[j]) continue;
            if ((S.row(static_cast<Eigen::Index>(i)).array() == S.row(static_cast<Eigen::Index>(j)).array()).all()) {
                report.identical_same_leader = false;
                break;
            }
        }
    }
    return report;
}

ClusterStats cluster_stats(const SimilaritySource& sim, std::size_t n, const Clustering& c,
                           bool include_leader_term) {
    const std::size_t h = c.leaders.size();
    ClusterStats stats;
    stats.sizes.assign(h, 0);
    stats.mean_similarities.assign(h, 0.0);
    std::vector<double> sums(h, 0.0);
    std::vector<std::size_t> counted(h, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ci = c.assignment[i];
        ++stats.sizes[ci];
        if (!include_leader_term && i == c.leaders[ci]) continue;
        sums[ci] += sim(i, c.leaders[ci]);
        ++counted[ci];
    }
    for (std::size_t ci = 0; ci < h; ++ci) {
        // excluded-leader singleton: fall back to the self-similarity term
        stats.mean_similarities[ci] = counted[ci] > 0 ? sums[ci] / static_cast<double>(counted[ci])
                                                      : sim(c.leaders[ci], c.leaders[ci]);
        stats.mean_size += static_cast<double>(stats.sizes[ci]);
        stats.mean_similarity += stats.mean_similarities[ci];
    }
    stats.mean_size /= static_cast<double>(h);
    stats.mean_similarity /= static_cast<double>(h);
    return stats;
}

SimilaritySource matrix_source(const Eigen::MatrixXd& m) {
    return [m](std::size_t i, std::size_t j) { return m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); };
}

namespace {

constexpr int kMaxLloydIterations = 300;
constexpr int kRestarts = 5;

double sq_dist(const Eigen::MatrixXd& points, Eigen::Index p, const Eigen::MatrixXd& centers, Eigen::Index c) {
    return (points.row(p) - centers.row(c)).squaredNorm();
}

struct Run {
    Eigen::MatrixXd centers;
    std::vector<std::size_t> assignment;
    double wcss = std::numeric_limits<double>::infinity();
    int iterations = 0;
    std::vector<double> history;
};

Run lloyd_once(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed) {
    const auto n = points.rows();
    Run run;
    run.centers.resize(static_cast<Eigen::Index>(k), points.cols());

    // spread init: random first center, then repeatedly the point farthest
    // from its nearest chosen center (ties to the lowest index)
    Rng rng(seed);
    std::vector<Eigen::Index> chosen;
    chosen.push_back(static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n))));
    std::vector<double> nearest(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    while (chosen.size() < k) {
        const Eigen::Index last = chosen.back();
        for (Eigen::Index p = 0; p < n; ++p) {
            const double d = (points.row(p) - points.row(last)).squaredNorm();
            nearest[static_cast<std::size_t>(p)] = std::min(nearest[static_cast<std::size_t>(p)], d);
        }
        Eigen::Index best = 0;
        double best_d = -1.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            if (nearest[static_cast<std::size_t>(p)] > best_d) {
                best_d = nearest[static_cast<std::size_t>(p)];
                best = p;
            }
        }
        chosen.push_back(best);
    }
    for (std::size_t c = 0; c < k; ++c) run.centers.row(static_cast<Eigen::Index>(c)) = points.row(chosen[c]);

    run.assignment.assign(static_cast<std::size_t>(n), 0);
    for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
        run.iterations = iter + 1;
        bool changed = iter == 0;
        double wcss = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = sq_dist(points, p, run.centers, static_cast<Eigen::Index>(c));
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (run.assignment[static_cast<std::size_t>(p)] != best) {
                run.assignment[static_cast<std::size_t>(p)] = best;
                changed = true;
            }
            wcss += best_d;
        }
        run.history.push_back(wcss);
        run.wcss = wcss;
        if (!changed) break;
        if (iter + 1 == kMaxLloydIterations) break;  // keep centers/assignment in sync at the cap

        // means update
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), points.cols());
        std::vector<std::size_t> counts(k, 0);
        for (Eigen::Index p = 0; p < n; ++p) {
            sums.row(static_cast<Eigen::Index>(run.assignment[static_cast<std::size_t>(p)])) += points.row(p);
            ++counts[run.assignment[static_cast<std::size_t>(p)]];
        }
        std::vector<bool> grabbed(static_cast<std::size_t>(n), false);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                run.centers.row(static_cast<Eigen::Index>(c)) = sums.row(static_cast<Eigen::Index>(c)) /
                                                                static_cast<double>(counts[c]);
            }
        }
        // an empty cluster takes over the point farthest from its own center
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            Eigen::Index far = 0;
            double far_d = -1.0;
            for (Eigen::Index p = 0; p < n; ++p) {
                if (grabbed[static_cast<std::size_t>(p)]) continue;
                const double d = sq_dist(points, p, run.centers,
                                         static_cast<Eigen::Index>(run.assignment[static_cast<std::size_t>(p)]));
                if (d > far_d) {
                    far_d = d;
                    far = p;
                }
            }
            run.centers.row(static_cast<Eigen::Index>(c)) = points.row(far);
            grabbed[static_cast<std::size_t>(far)] = true;
        }
    }
    return run;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed) {
    const auto n = points.rows();
    if (k == 0) throw std::invalid_argument("kmeans: k must be positive");
    if (static_cast<Eigen::Index>(k) > n) throw std::invalid_argument("kmeans: k exceeds the point count");
    if (!points.allFinite()) throw std::invalid_argument("kmeans: points must be finite");

    Run best;
    for (int r = 0; r < kRestarts; ++r) {
        Run run = lloyd_once(points, k, mix_seed(seed, {0x6b6d65616e73ULL, static_cast<std::uint64_t>(r)}));
        if (run.wcss < best.wcss) best = std::move(run);
    }
    KMeansResult result;
    result.centers = std::move(best.centers);
    result.assignment = std::move(best.assignment);
    result.wcss = best.wcss;
    result.iterations = best.iterations;
    result.objective_history = std::move(best.history);
    return result;
}

}  // namespace simnn
