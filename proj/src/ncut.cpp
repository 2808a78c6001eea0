#include "hmsc/ncut.hpp"

#include <algorithm>
#include <limits>

#include "hmsc/error.hpp"

namespace hmsc {

namespace {

// side[cell] for removing tree edge e: true = side of e.first.
std::vector<bool> tree_sides(const TreeApprox& tree, int32_t edge_index) {
    int32_t n = static_cast<int32_t>(tree.cells.size());
    std::vector<std::vector<int32_t>> adj(n);
    for (size_t i = 0; i < tree.edges.size(); ++i) {
        if (static_cast<int32_t>(i) == edge_index) continue;
        adj[tree.edges[i].first].push_back(tree.edges[i].second);
        adj[tree.edges[i].second].push_back(tree.edges[i].first);
    }
    std::vector<bool> side(n, false);
    std::vector<int32_t> stack{tree.edges[edge_index].first};
    side[stack[0]] = true;
    while (!stack.empty()) {
        int32_t v = stack.back();
        stack.pop_back();
        for (int32_t u : adj[v]) {
            if (!side[u]) {
                side[u] = true;
                stack.push_back(u);
            }
        }
    }
    return side;
}

std::vector<std::vector<int32_t>> side_pieces(const LocalView& lv, const std::vector<char>& side,
                                              char which) {
    std::vector<std::vector<int32_t>> pieces;
    std::vector<bool> seen(lv.n, false);
    std::vector<int32_t> stack;
    for (int32_t s = 0; s < lv.n; ++s) {
        if (side[s] != which || seen[s]) continue;
        std::vector<int32_t> piece;
        seen[s] = true;
        stack.push_back(s);
        while (!stack.empty()) {
            int32_t v = stack.back();
            stack.pop_back();
            piece.push_back(v);
            for (int32_t u : lv.neighbors(v)) {
                if (side[u] == which && !seen[u]) {
                    seen[u] = true;
                    stack.push_back(u);
                }
            }
        }
        pieces.push_back(std::move(piece));
    }
    return pieces;
}

// Index of the piece that must not move: largest, ties to the one holding the
// smallest node id (pieces are listed in ascending seed order already).
size_t keeper(const std::vector<std::vector<int32_t>>& pieces) {
    size_t best = 0;
    for (size_t i = 1; i < pieces.size(); ++i)
        if (pieces[i].size() > pieces[best].size()) best = i;
    return best;
}

}  // namespace

ExtendedAdjacencyGraph build_eag(const TreeApprox& tree, const LocalView& lv) {
    if (static_cast<size_t>(lv.n) != tree.cell_of_node.size())
        throw InvalidInput("build_eag: tree and component disagree on node count");
    ExtendedAdjacencyGraph eag;
    eag.vertex_count = static_cast<int32_t>(tree.cells.size());
    for (int32_t u = 0; u < lv.n; ++u) {
        int32_t cu = tree.cell_of_node[u];
        for (int32_t v : lv.neighbors(u)) {
            if (v <= u) continue;
            int32_t cv = tree.cell_of_node[v];
            if (cu == cv) continue;
            ++eag.weights[{std::min(cu, cv), std::max(cu, cv)}];
        }
    }
    return eag;
}

EdgeCut ncut_of_edge(const TreeApprox& tree, const ExtendedAdjacencyGraph& eag,
                     int32_t edge_index) {
    if (edge_index < 0 || static_cast<size_t>(edge_index) >= tree.edges.size())
        throw InvalidInput("ncut_of_edge: edge index out of range");
    std::vector<bool> side = tree_sides(tree, edge_index);
    EdgeCut r;
    for (size_t i = 0; i < tree.cells.size(); ++i)
        (side[i] ? r.vol_w : r.vol_wc) += tree.delta[i];
    for (const auto& [e, w] : eag.weights)
        if (side[e.first] != side[e.second]) r.cut += w;
    if (r.vol_w == 0 || r.vol_wc == 0) {
        r.ncut = std::numeric_limits<double>::infinity();
    } else {
        r.ncut = static_cast<double>(r.cut) / static_cast<double>(r.vol_w) +
                 static_cast<double>(r.cut) / static_cast<double>(r.vol_wc);
    }
    return r;
}

std::pair<std::vector<int32_t>, std::vector<int32_t>> repair_connectivity(
    const std::vector<int32_t>& w, const std::vector<int32_t>& wc, const LocalView& lv) {
    if (w.empty() || wc.empty()) throw InvalidInput("repair_connectivity: empty side");
    std::vector<char> side(lv.n, -1);
    for (int32_t v : w) {
        if (v < 0 || v >= lv.n || side[v] != -1)
            throw InvalidInput("repair_connectivity: sides do not partition the component");
        side[v] = 0;
    }
    for (int32_t v : wc) {
        if (v < 0 || v >= lv.n || side[v] != -1)
            throw InvalidInput("repair_connectivity: sides do not partition the component");
        side[v] = 1;
    }
    for (int32_t v = 0; v < lv.n; ++v)
        if (side[v] == -1)
            throw InvalidInput("repair_connectivity: sides do not partition the component");

    // A maximal piece has no edges to the rest of its own side, so moving it
    // glues it onto the other side. Up to ten simultaneous rounds usually
    // settle it; the sequential pass afterwards is guaranteed to.
    for (int round = 0; round < 10; ++round) {
        auto pw = side_pieces(lv, side, 0);
        auto pwc = side_pieces(lv, side, 1);
        if (pw.size() <= 1 && pwc.size() <= 1) break;
        size_t kw = keeper(pw), kc = keeper(pwc);
        for (size_t i = 0; i < pw.size(); ++i)
            if (i != kw)
                for (int32_t v : pw[i]) side[v] = 1;
        for (size_t i = 0; i < pwc.size(); ++i)
            if (i != kc)
                for (int32_t v : pwc[i]) side[v] = 0;
    }
    {
        auto pw = side_pieces(lv, side, 0);
        size_t kw = keeper(pw);
        for (size_t i = 0; i < pw.size(); ++i)
            if (i != kw)
                for (int32_t v : pw[i]) side[v] = 1;
        auto pwc = side_pieces(lv, side, 1);
        size_t kc = keeper(pwc);
        for (size_t i = 0; i < pwc.size(); ++i)
            if (i != kc)
                for (int32_t v : pwc[i]) side[v] = 0;
    }
    std::pair<std::vector<int32_t>, std::vector<int32_t>> out;
    for (int32_t v = 0; v < lv.n; ++v) (side[v] == 0 ? out.first : out.second).push_back(v);
    if (out.first.empty() || out.second.empty())
        throw Error("repair_connectivity: a side vanished");
    return out;
}

CutResult min_ncut_split(const TreeApprox& tree, const ExtendedAdjacencyGraph& eag,
                         const LocalView& lv, double balance) {
    if (tree.cells.size() < 2) throw UnsplittableError("component occupies a single cell");
    const double min_vol = balance * static_cast<double>(lv.n);
    int32_t best = -1, best_feasible = -1;
    double best_ncut = 0, best_feasible_ncut = 0;
    for (int32_t e = 0; e < static_cast<int32_t>(tree.edges.size()); ++e) {
        EdgeCut r = ncut_of_edge(tree, eag, e);
        if (r.vol_w == 0 || r.vol_wc == 0) continue;
        if (best < 0 || r.ncut < best_ncut) {
            best = e;
            best_ncut = r.ncut;
        }
        if (static_cast<double>(std::min(r.vol_w, r.vol_wc)) > min_vol &&
            (best_feasible < 0 || r.ncut < best_feasible_ncut)) {
            best_feasible = e;
            best_feasible_ncut = r.ncut;
        }
    }
    if (best < 0) throw UnsplittableError("every tree cut leaves a side without nodes");
    int32_t chosen = best_feasible >= 0 ? best_feasible : best;

    std::vector<bool> cell_side = tree_sides(tree, chosen);
    std::vector<int32_t> w, wc;
    for (int32_t v = 0; v < lv.n; ++v)
        (cell_side[tree.cell_of_node[v]] ? w : wc).push_back(v);
    auto [rw, rwc] = repair_connectivity(w, wc, lv);

    CutResult res;
    res.tree_edge = tree.edges[chosen];
    res.w_nodes = std::move(rw);
    res.wc_nodes = std::move(rwc);
    std::vector<char> side(lv.n, 1);
    for (int32_t v : res.w_nodes) side[v] = 0;
    for (int32_t u = 0; u < lv.n; ++u)
        for (int32_t v : lv.neighbors(u))
            if (v > u && side[u] != side[v]) ++res.cut;
    res.vol_w = static_cast<int64_t>(res.w_nodes.size());
    res.vol_wc = static_cast<int64_t>(res.wc_nodes.size());
    res.ncut = static_cast<double>(res.cut) / static_cast<double>(res.vol_w) +
               static_cast<double>(res.cut) / static_cast<double>(res.vol_wc);
    return res;
}

}  // namespace hmsc
