#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace simnn {

// Symmetric pairwise similarity lookup over examples 0..n-1.
using SimilaritySource = std::function<double(std::size_t, std::size_t)>;

struct Clustering {
    std::vector<std::size_t> leaders;     // example indices, in discovery order
    std::vector<std::size_t> assignment;  // per example: index into leaders
    double s_min = 0.0;
};

// leader2 guarantees, checkable post hoc:
//   1. every example has similarity >= s_min to its leader
//   2. distinct leaders have similarity < s_min
//   3. examples with identical similarity rows share a leader
//   4. each example's leader maximizes similarity over all leaders
// plus the separation consequence: min member-to-leader similarity exceeds
// max leader-to-leader similarity.
struct PropertyReport {
    bool member_threshold = false;
    bool leader_separation = false;
    bool identical_same_leader = false;
    bool assignment_maximal = false;
    bool separation_gap = false;

    bool all() const {
        return member_threshold && leader_separation && identical_same_leader && assignment_maximal &&
               separation_gap;
    }
};

struct ClusterStats {
    std::vector<std::size_t> sizes;          // l_i
    std::vector<double> mean_similarities;   // m_i
    double mean_size = 0.0;                  // unweighted mean of l_i
    double mean_similarity = 0.0;            // unweighted mean of m_i
};

// Two passes over index order: pass 1 grows the leader set (new leader iff
// similarity to every existing leader < s_min), pass 2 assigns each example to
// its most similar leader, ties to the lowest leader position.
Clustering leader2(const SimilaritySource& sim, std::size_t n, double s_min);

PropertyReport verify_properties(const SimilaritySource& sim, std::size_t n, const Clustering& c);

// m_i averages member-to-leader similarity; include_leader_term keeps the
// leader's self-similarity in that mean (the default reading).
ClusterStats cluster_stats(const SimilaritySource& sim, std::size_t n, const Clustering& c,
                           bool include_leader_term = true);

SimilaritySource matrix_source(const Eigen::MatrixXd& m);

struct KMeansResult {
    Eigen::MatrixXd centers;              // k x d
    std::vector<std::size_t> assignment;  // per point: center index
    double wcss = 0.0;                    // within-cluster sum of squares
    int iterations = 0;
    std::vector<double> objective_history;  // wcss after each assignment step (winning restart)
};

// Lloyd iterations to an assignment fixed point (cap 300), farthest-point
// spread init from the seeded generator, best of 5 restarts by WCSS, empty
// clusters re-seeded from the farthest point. Deterministic in (points, k, seed).
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed);

}  // namespace simnn
