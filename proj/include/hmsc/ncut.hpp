#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hmsc/graph.hpp"
#include "hmsc/tree_approx.hpp"

namespace hmsc {

/// Weighted graph on tree cells; the weight of (v1, v2) counts original graph
/// edges with one endpoint in S(v1) and the other in S(v2).
struct ExtendedAdjacencyGraph {
    int32_t vertex_count = 0;
    std::map<std::pair<int32_t, int32_t>, int64_t> weights;  // keys (i, j), i < j
};

ExtendedAdjacencyGraph build_eag(const TreeApprox& tree, const LocalView& lv);

/// Cut statistics for removing one tree edge. W is the side containing the
/// edge's lower-indexed cell; volumes count nodes (sum of delta).
struct EdgeCut {
    int64_t cut = 0;
    int64_t vol_w = 0;
    int64_t vol_wc = 0;
    double ncut = 0.0;  // +inf when a side holds no nodes
};

EdgeCut ncut_of_edge(const TreeApprox& tree, const ExtendedAdjacencyGraph& eag,
                     int32_t edge_index);

struct CutResult {
    std::pair<int32_t, int32_t> tree_edge;  // cell indices of the removed edge
    std::vector<int32_t> w_nodes;           // local node ids, sorted
    std::vector<int32_t> wc_nodes;
    int64_t cut = 0;  // recomputed directly in G after connectivity repair
    int64_t vol_w = 0;
    int64_t vol_wc = 0;
    double ncut = 0.0;
};

/// Best tree-edge bipartition: prefers edges where the smaller side exceeds
/// balance * n nodes (strict), falls back to the unconstrained minimum, and
/// breaks ties toward the lexicographically smallest edge. Sides are made
/// connected before the final cut statistics are computed.
CutResult min_ncut_split(const TreeApprox& tree, const ExtendedAdjacencyGraph& eag,
                         const LocalView& lv, double balance);

/// Moves connected pieces between the sides until both are connected in the
/// component graph; the largest piece of each side never moves. Inputs must
/// partition the component's nodes.
std::pair<std::vector<int32_t>, std::vector<int32_t>> repair_connectivity(
    const std::vector<int32_t>& w, const std::vector<int32_t>& wc, const LocalView& lv);

}  // namespace hmsc
