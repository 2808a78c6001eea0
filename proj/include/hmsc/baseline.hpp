#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hmsc/bpm.hpp"
#include "hmsc/diffusion.hpp"
#include "hmsc/graph.hpp"

namespace hmsc {

/// Cluster-count heuristic: floor(sqrt(n)/2) + 1.
int choose_k(int64_t n);

struct KMeansResult {
    std::vector<uint32_t> assignments;  // per point, in 1..k
    Eigen::MatrixXd centroids;          // k x d
    double inertia = 0.0;
    std::vector<double> inertia_history;  // one entry per Lloyd iteration
};

/// Deterministic Lloyd iteration (cap 300, stops on an assignment fixpoint).
/// Seeding runs k-means on a uniform subsample of max(k, ceil(n/10)) points
/// drawn without replacement, Forgy-initialized with k distinct points; the
/// subsample centroids start the full run. Empty clusters reseed at the point
/// farthest from its own centroid (ties: smallest point index).
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, uint64_t seed);

/// Spectral clustering of one connected component: embed with d = k - 1, then
/// k-means. k = 1 short-circuits. Labels are 1..k over component nodes in
/// sorted order.
std::vector<uint32_t> spectral_cluster(const LocalView& lv, int k, uint64_t seed,
                                       SpectrumConvention convention, int t = 1);
std::vector<uint32_t> spectral_cluster(const Graph& g, const Component& comp, int k,
                                       uint64_t seed, SpectrumConvention convention, int t = 1);

/// Splits every label class into its connected parts; classes stay intact when
/// already connected. Labels are per node of g, 0 = unlabeled; output labels
/// are canonical (1.. by smallest node id).
std::vector<uint32_t> split_disconnected(const Graph& g, const std::vector<uint32_t>& labels);

/// Number of label classes that are disconnected in g.
int disconnected_cluster_count(const Graph& g, const std::vector<uint32_t>& labels);

struct BaselineConfig {
    int threshold = 60;
    int connectivity = 8;
    int k_override = 0;  // 0 = choose_k per component
    bool split_disconnected = false;
    int t = 1;
    SpectrumConvention spectrum = SpectrumConvention::Paper;
    uint64_t seed = 0;
};

struct BaselineResult {
    Segmentation seg;
    int disconnected_clusters = 0;  // detected before any splitting
};

/// Whole-image baseline: spectral clustering independently per thresholded
/// component, k from choose_k unless overridden.
BaselineResult baseline_segment(const BoundaryMap& bpm, const BaselineConfig& config);

}  // namespace hmsc
