#include "hmsc/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "hmsc/error.hpp"
#include "hmsc/rng.hpp"

namespace hmsc {

int choose_k(int64_t n) {
    if (n < 1) throw InvalidInput("choose_k: component size must be >= 1");
    int64_t r = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return static_cast<int>(r / 2 + 1);
}

namespace {

struct LloydOut {
    std::vector<int> assign;  // 0-based
    Eigen::MatrixXd centroids;
    double inertia = 0.0;
    std::vector<double> history;
};

LloydOut lloyd(const Eigen::MatrixXd& pts, Eigen::MatrixXd centroids, int cap) {
    const int n = static_cast<int>(pts.rows());
    const int k = static_cast<int>(centroids.rows());
    auto assign_all = [&](std::vector<int>& out) {
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = (pts.row(i) - centroids.row(0)).squaredNorm();
            for (int j = 1; j < k; ++j) {
                double d = (pts.row(i) - centroids.row(j)).squaredNorm();
                if (d < bd) {
                    bd = d;
                    best = j;
                }
            }
            out[i] = best;
        }
    };
    LloydOut out;
    out.assign.resize(n);
    assign_all(out.assign);
    std::vector<int> prev(n);
    for (int iter = 0; iter < cap; ++iter) {
        // Update step.
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, pts.cols());
        std::vector<int64_t> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            sums.row(out.assign[i]) += pts.row(i);
            ++counts[out.assign[i]];
        }
        for (int j = 0; j < k; ++j)
            if (counts[j] > 0) centroids.row(j) = sums.row(j) / static_cast<double>(counts[j]);
        for (int j = 0; j < k; ++j) {
            if (counts[j] > 0) continue;
            // Reseed at the point farthest from its own centroid.
            int far = -1;
            double fd = -1;
            for (int i = 0; i < n; ++i) {
                double d = (pts.row(i) - centroids.row(out.assign[i])).squaredNorm();
                if (d > fd) {
                    fd = d;
                    far = i;
                }
            }
            centroids.row(j) = pts.row(far);
            --counts[out.assign[far]];
            out.assign[far] = j;
            counts[j] = 1;
        }
        prev.swap(out.assign);
        assign_all(out.assign);
        out.inertia = 0;
        for (int i = 0; i < n; ++i)
            out.inertia += (pts.row(i) - centroids.row(out.assign[i])).squaredNorm();
        out.history.push_back(out.inertia);
        if (out.assign == prev) break;
    }
    out.centroids = std::move(centroids);
    return out;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, uint64_t seed) {
    const int n = static_cast<int>(points.rows());
    if (k < 1) throw InvalidInput("kmeans: k must be >= 1");
    if (k > n) throw InvalidInput("kmeans: more clusters than points");
    SplitMix64 rng(seed);
    int sub_n = std::max(static_cast<int64_t>(k), (static_cast<int64_t>(n) + 9) / 10);
    auto sub_idx = sample_without_replacement(static_cast<uint32_t>(n),
                                              static_cast<uint32_t>(sub_n), rng);
    Eigen::MatrixXd sub(sub_idx.size(), points.cols());
    for (size_t i = 0; i < sub_idx.size(); ++i) sub.row(i) = points.row(sub_idx[i]);

    // Forgy init: the subsample is already in random draw order; walk it and
    // take the first k distinct positions (padding with duplicates only when
    // the data itself has fewer than k distinct points).
    Eigen::MatrixXd init(k, points.cols());
    int got = 0;
    for (int i = 0; i < static_cast<int>(sub.rows()) && got < k; ++i) {
        bool dup = false;
        for (int j = 0; j < got && !dup; ++j) dup = init.row(j) == sub.row(i);
        if (!dup) init.row(got++) = sub.row(i);
    }
    for (int i = 0; got < k; ++i) init.row(got++) = sub.row(i % sub.rows());

    LloydOut warm = lloyd(sub, std::move(init), 300);
    LloydOut full = lloyd(points, std::move(warm.centroids), 300);

    KMeansResult res;
    res.assignments.resize(n);
    for (int i = 0; i < n; ++i) res.assignments[i] = static_cast<uint32_t>(full.assign[i] + 1);
    res.centroids = std::move(full.centroids);
    res.inertia = full.inertia;
    res.inertia_history = std::move(full.history);
    return res;
}

std::vector<uint32_t> spectral_cluster(const LocalView& lv, int k, uint64_t seed,
                                       SpectrumConvention convention, int t) {
    if (k < 1) throw InvalidInput("spectral_cluster: k must be >= 1");
    if (k == 1) return std::vector<uint32_t>(lv.n, 1);
    if (lv.n < k + 1) throw InvalidInput("spectral_cluster: component smaller than k + 1");
    DiffusionMap dm = embed(lv, k - 1, t, convention);
    return kmeans(dm.points, k, seed).assignments;
}

std::vector<uint32_t> spectral_cluster(const Graph& g, const Component& comp, int k,
                                       uint64_t seed, SpectrumConvention convention, int t) {
    return spectral_cluster(make_local_view(g, comp), k, seed, convention, t);
}

std::vector<uint32_t> split_disconnected(const Graph& g, const std::vector<uint32_t>& labels) {
    if (labels.size() != static_cast<size_t>(g.n))
        throw InvalidInput("split_disconnected: labels do not cover the graph");
    std::vector<uint32_t> out(labels.size(), 0);
    uint32_t next = 0;
    std::vector<int32_t> stack;
    for (int32_t s = 0; s < g.n; ++s) {
        if (labels[s] == 0 || out[s] != 0) continue;
        uint32_t lab = ++next;
        out[s] = lab;
        stack.push_back(s);
        while (!stack.empty()) {
            int32_t v = stack.back();
            stack.pop_back();
            for (int32_t u : g.neighbors(v)) {
                if (labels[u] == labels[s] && out[u] == 0) {
                    out[u] = lab;
                    stack.push_back(u);
                }
            }
        }
    }
    return out;
}

int disconnected_cluster_count(const Graph& g, const std::vector<uint32_t>& labels) {
    std::vector<uint32_t> parts = split_disconnected(g, labels);
    // A class is disconnected iff it maps onto more than one part.
    std::map<uint32_t, uint32_t> first_part;
    std::map<uint32_t, bool> broken;
    for (int32_t v = 0; v < g.n; ++v) {
        if (labels[v] == 0) continue;
        auto [it, inserted] = first_part.try_emplace(labels[v], parts[v]);
        if (!inserted && it->second != parts[v]) broken[labels[v]] = true;
    }
    return static_cast<int>(broken.size());
}

BaselineResult baseline_segment(const BoundaryMap& bpm, const BaselineConfig& config) {
    PixelGraph pg = build_graph(bpm, config.threshold, config.connectivity);
    std::vector<Component> comps = connected_components(pg.g);
    std::vector<uint32_t> labels(pg.g.n, 0);
    uint32_t offset = 0;
    for (const Component& comp : comps) {
        int64_t n = comp.size();
        int k;
        if (config.k_override > 0) {
            k = static_cast<int>(std::min<int64_t>(config.k_override, n - 1));
            if (k < 1) k = 1;
        } else {
            k = choose_k(n);
        }
        uint64_t sub_seed = mix_seed(config.seed, static_cast<uint64_t>(comp.nodes.front()));
        std::vector<uint32_t> local =
            spectral_cluster(pg.g, comp, k, sub_seed, config.spectrum, config.t);
        for (size_t i = 0; i < local.size(); ++i) labels[comp.nodes[i]] = offset + local[i];
        offset += static_cast<uint32_t>(k);
    }
    BaselineResult res;
    res.disconnected_clusters = disconnected_cluster_count(pg.g, labels);
    if (config.split_disconnected) labels = split_disconnected(pg.g, labels);

    res.seg.width = bpm.width;
    res.seg.height = bpm.height;
    res.seg.labels.assign(static_cast<size_t>(bpm.width) * bpm.height, 0);
    for (int32_t v = 0; v < pg.g.n; ++v)
        res.seg.labels[static_cast<size_t>(pg.py[v]) * bpm.width + pg.px[v]] = labels[v];
    canonicalize(res.seg);
    return res;
}

}  // namespace hmsc
