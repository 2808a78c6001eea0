#include "hmsc/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "hmsc/error.hpp"

namespace hmsc {

PixelGraph build_graph(const BoundaryMap& bpm, int threshold, int connectivity) {
    if (connectivity != 8 && connectivity != 26)
        throw InvalidInput("build_graph: connectivity must be 8 or 26");
    PixelGraph pg;
    pg.width = bpm.width;
    pg.height = bpm.height;
    size_t npx = static_cast<size_t>(bpm.width) * bpm.height;
    pg.node_index.assign(npx, -1);

    int32_t n = 0;
    for (size_t i = 0; i < npx; ++i) {
        if (bpm.values[i] < threshold) pg.node_index[i] = n++;
    }
    pg.g.n = n;
    pg.px.resize(n);
    pg.py.resize(n);
    for (int y = 0; y < bpm.height; ++y) {
        for (int x = 0; x < bpm.width; ++x) {
            int32_t id = pg.node_index[static_cast<size_t>(y) * bpm.width + x];
            if (id >= 0) {
                pg.px[id] = x;
                pg.py[id] = y;
            }
        }
    }

    // Node ids increase in row-major order, so for each node the neighbor list
    // built in the fixed offset order below is already sorted.
    static constexpr int DX[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
    static constexpr int DY[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
    pg.g.offsets.assign(static_cast<size_t>(n) + 1, 0);
    for (int32_t id = 0; id < n; ++id) {
        int x = pg.px[id], y = pg.py[id];
        int64_t deg = 0;
        for (int k = 0; k < 8; ++k) {
            int nx = x + DX[k], ny = y + DY[k];
            if (nx < 0 || ny < 0 || nx >= bpm.width || ny >= bpm.height) continue;
            if (pg.node_index[static_cast<size_t>(ny) * bpm.width + nx] >= 0) ++deg;
        }
        pg.g.offsets[id + 1] = deg;
    }
    for (int32_t id = 0; id < n; ++id) pg.g.offsets[id + 1] += pg.g.offsets[id];
    pg.g.nbrs.resize(static_cast<size_t>(pg.g.offsets[n]));
    for (int32_t id = 0; id < n; ++id) {
        int x = pg.px[id], y = pg.py[id];
        int64_t w = pg.g.offsets[id];
        for (int k = 0; k < 8; ++k) {
            int nx = x + DX[k], ny = y + DY[k];
            if (nx < 0 || ny < 0 || nx >= bpm.width || ny >= bpm.height) continue;
            int32_t nid = pg.node_index[static_cast<size_t>(ny) * bpm.width + nx];
            if (nid >= 0) pg.g.nbrs[w++] = nid;
        }
    }
    return pg;
}

std::vector<Component> connected_components(const Graph& g) {
    std::vector<Component> comps;
    std::vector<bool> seen(g.n, false);
    std::vector<int32_t> stack;
    for (int32_t s = 0; s < g.n; ++s) {
        if (seen[s]) continue;
        Component c;
        seen[s] = true;
        stack.push_back(s);
        while (!stack.empty()) {
            int32_t v = stack.back();
            stack.pop_back();
            c.nodes.push_back(v);
            for (int32_t u : g.neighbors(v)) {
                if (!seen[u]) {
                    seen[u] = true;
                    stack.push_back(u);
                }
            }
        }
        std::sort(c.nodes.begin(), c.nodes.end());
        comps.push_back(std::move(c));
    }
    // Seeds s are scanned in increasing order, so components already come out
    // ordered by smallest node id.
    return comps;
}

LocalView make_local_view(const Graph& g, const Component& comp) {
    LocalView lv;
    lv.n = comp.size();
    lv.global = comp.nodes;
    // comp.nodes is sorted, so membership and renumbering use binary search.
    auto local_of = [&](int32_t gid) -> int32_t {
        auto it = std::lower_bound(lv.global.begin(), lv.global.end(), gid);
        if (it == lv.global.end() || *it != gid) return -1;
        return static_cast<int32_t>(it - lv.global.begin());
    };
    lv.offsets.assign(static_cast<size_t>(lv.n) + 1, 0);
    for (int32_t v = 0; v < lv.n; ++v) {
        int64_t deg = 0;
        for (int32_t u : g.neighbors(lv.global[v]))
            if (local_of(u) >= 0) ++deg;
        lv.offsets[v + 1] = lv.offsets[v] + deg;
    }
    lv.nbrs.resize(static_cast<size_t>(lv.offsets[lv.n]));
    for (int32_t v = 0; v < lv.n; ++v) {
        int64_t w = lv.offsets[v];
        for (int32_t u : g.neighbors(lv.global[v])) {
            int32_t lu = local_of(u);
            if (lu >= 0) lv.nbrs[w++] = lu;
        }
        std::sort(lv.nbrs.begin() + lv.offsets[v], lv.nbrs.begin() + lv.offsets[v + 1]);
    }
    return lv;
}

bool is_connected(const LocalView& lv) {
    if (lv.n == 0) return false;
    std::vector<bool> seen(lv.n, false);
    std::vector<int32_t> stack{0};
    seen[0] = true;
    int32_t cnt = 0;
    while (!stack.empty()) {
        int32_t v = stack.back();
        stack.pop_back();
        ++cnt;
        for (int32_t u : lv.neighbors(v)) {
            if (!seen[u]) {
                seen[u] = true;
                stack.push_back(u);
            }
        }
    }
    return cnt == lv.n;
}

Graph graph_from_edges(int32_t n, const std::vector<std::pair<int32_t, int32_t>>& edges) {
    Graph g;
    g.n = n;
    std::vector<std::vector<int32_t>> adj(n);
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw InvalidInput("graph_from_edges: node out of range");
        if (a == b) throw InvalidInput("graph_from_edges: self loop");
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    g.offsets.assign(static_cast<size_t>(n) + 1, 0);
    for (int32_t v = 0; v < n; ++v) {
        std::sort(adj[v].begin(), adj[v].end());
        if (std::adjacent_find(adj[v].begin(), adj[v].end()) != adj[v].end())
            throw InvalidInput("graph_from_edges: duplicate edge");
        g.offsets[v + 1] = g.offsets[v] + static_cast<int64_t>(adj[v].size());
    }
    g.nbrs.reserve(static_cast<size_t>(g.offsets[n]));
    for (int32_t v = 0; v < n; ++v) g.nbrs.insert(g.nbrs.end(), adj[v].begin(), adj[v].end());
    return g;
}

Segmentation label_components(const PixelGraph& pg, const std::vector<Component>& comps) {
    Segmentation seg;
    seg.width = pg.width;
    seg.height = pg.height;
    seg.labels.assign(static_cast<size_t>(pg.width) * pg.height, 0);
    for (size_t ci = 0; ci < comps.size(); ++ci) {
        uint32_t lab = static_cast<uint32_t>(ci + 1);
        for (int32_t v : comps[ci].nodes) {
            seg.labels[static_cast<size_t>(pg.py[v]) * pg.width + pg.px[v]] = lab;
        }
    }
    return seg;
}

}  // namespace hmsc
