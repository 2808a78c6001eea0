#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hmsc/bpm.hpp"

namespace hmsc {

/// Undirected graph in CSR form; both directions of every edge are stored and
/// each node's neighbor list is sorted ascending.
struct Graph {
    int32_t n = 0;
    std::vector<int64_t> offsets;  // size n+1
    std::vector<int32_t> nbrs;

    std::span<const int32_t> neighbors(int32_t v) const {
        return {nbrs.data() + offsets[v], nbrs.data() + offsets[v + 1]};
    }
    int64_t degree(int32_t v) const { return offsets[v + 1] - offsets[v]; }
    int64_t edge_count() const { return static_cast<int64_t>(nbrs.size()) / 2; }
};

/// Pixel adjacency graph over sub-threshold pixels of a boundary map.
struct PixelGraph {
    int width = 0;
    int height = 0;
    Graph g;
    std::vector<int32_t> px;  // node -> pixel x
    std::vector<int32_t> py;  // node -> pixel y
    std::vector<int32_t> node_index;  // row-major pixel -> node id, -1 if none
};

/// Node ids of one connected region, sorted ascending.
struct Component {
    std::vector<int32_t> nodes;
    int32_t size() const { return static_cast<int32_t>(nodes.size()); }
};

/// Component-local compressed subgraph: nodes renumbered 0..n-1 following the
/// sorted order of Component::nodes.
struct LocalView {
    int32_t n = 0;
    std::vector<int64_t> offsets;
    std::vector<int32_t> nbrs;
    std::vector<int32_t> global;  // local -> original node id

    std::span<const int32_t> neighbors(int32_t v) const {
        return {nbrs.data() + offsets[v], nbrs.data() + offsets[v + 1]};
    }
    int64_t degree(int32_t v) const { return offsets[v + 1] - offsets[v]; }
};

/// Nodes are pixels with value strictly below `threshold`; edges join
/// 8-neighbors. `connectivity` is 8 for 2D maps (26 is accepted as a 3D hook
/// and behaves identically on single-slice input).
PixelGraph build_graph(const BoundaryMap& bpm, int threshold, int connectivity);

/// Components sorted by their smallest node id; node lists sorted ascending.
std::vector<Component> connected_components(const Graph& g);

LocalView make_local_view(const Graph& g, const Component& comp);

bool is_connected(const LocalView& lv);

/// Builds a Graph from an undirected edge list; duplicates and self-loops are
/// rejected. Intended for tests and synthetic fixtures.
Graph graph_from_edges(int32_t n, const std::vector<std::pair<int32_t, int32_t>>& edges);

/// Labels every pixel by its component's rank (1-based, components ordered by
/// smallest node id); non-nodes get 0.
Segmentation label_components(const PixelGraph& pg, const std::vector<Component>& comps);

}  // namespace hmsc
