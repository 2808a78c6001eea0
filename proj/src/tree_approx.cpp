#include "hmsc/tree_approx.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "hmsc/error.hpp"

namespace hmsc {

namespace {

struct NbTables {
    std::array<std::array<int, 3>, 26> off26;
    std::array<std::vector<int>, 26> adj26;      // 26-adjacency between offsets
    std::array<std::vector<int>, 26> adj6_in18;  // 6-adjacency, restricted to N18 members
    std::array<bool, 26> in18;
    std::array<bool, 26> face;

    NbTables() {
        int k = 0;
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0 && dz == 0) continue;
                    off26[k] = {dx, dy, dz};
                    int manh = std::abs(dx) + std::abs(dy) + std::abs(dz);
                    in18[k] = manh <= 2;
                    face[k] = manh == 1;
                    ++k;
                }
        for (int i = 0; i < 26; ++i)
            for (int j = 0; j < 26; ++j) {
                if (i == j) continue;
                int ax = std::abs(off26[i][0] - off26[j][0]);
                int ay = std::abs(off26[i][1] - off26[j][1]);
                int az = std::abs(off26[i][2] - off26[j][2]);
                if (std::max({ax, ay, az}) == 1) adj26[i].push_back(j);
                if (ax + ay + az == 1 && in18[i] && in18[j]) adj6_in18[i].push_back(j);
            }
    }
};

const NbTables& tables() {
    static const NbTables t;
    return t;
}

using CellMap = std::map<Cell, std::vector<int32_t>>;

std::array<bool, 26> neighborhood(const CellMap& cells, const Cell& c) {
    const auto& t = tables();
    std::array<bool, 26> occ;
    for (int i = 0; i < 26; ++i) {
        Cell nb{c.x + t.off26[i][0], c.y + t.off26[i][1], c.z + t.off26[i][2]};
        occ[i] = cells.find(nb) != cells.end();
    }
    return occ;
}

int object_neighbor_count(const CellMap& cells, const Cell& c) {
    auto occ = neighborhood(cells, c);
    int n = 0;
    for (bool b : occ) n += b;
    return n;
}

Cell nearest_surviving(const CellMap& cells, const Cell& from) {
    bool found = false;
    Cell best{};
    int64_t best_d = 0;
    for (const auto& [c, s] : cells) {
        int64_t dx = c.x - from.x, dy = c.y - from.y, dz = c.z - from.z;
        int64_t d = dx * dx + dy * dy + dz * dz;
        if (!found || d < best_d) {
            found = true;
            best = c;
            best_d = d;
        }
        // Map order is lexicographic, so on ties the first hit stands.
    }
    if (!found) throw Error("internal: no surviving cell to absorb nodes");
    return best;
}

void delete_cell(CoarseGrid& grid, const Cell& c) {
    auto it = grid.cells.find(c);
    std::vector<int32_t> orphans = std::move(it->second);
    grid.cells.erase(it);
    if (orphans.empty()) return;
    Cell target = nearest_surviving(grid.cells, c);
    std::vector<int32_t>& dst = grid.cells[target];
    std::vector<int32_t> merged;
    merged.reserve(dst.size() + orphans.size());
    std::merge(dst.begin(), dst.end(), orphans.begin(), orphans.end(), std::back_inserter(merged));
    dst = std::move(merged);
    for (int32_t v : orphans) grid.node_cell[v] = target;
}

}  // namespace

bool simple_cell(const CellMap& cells, const Cell& c) {
    const auto& t = tables();
    auto occ = neighborhood(cells, c);

    // One 26-component of object neighbors.
    int first_obj = -1;
    for (int i = 0; i < 26 && first_obj < 0; ++i)
        if (occ[i]) first_obj = i;
    if (first_obj < 0) return false;
    std::array<bool, 26> seen{};
    std::vector<int> stack{first_obj};
    seen[first_obj] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : t.adj26[v])
            if (occ[u] && !seen[u]) {
                seen[u] = true;
                stack.push_back(u);
            }
    }
    for (int i = 0; i < 26; ++i)
        if (occ[i] && !seen[i]) return false;

    // One 6-component of background in N18, counted from face neighbors.
    std::array<bool, 26> bseen{};
    int bg_comps = 0;
    for (int f = 0; f < 26; ++f) {
        if (!t.face[f] || occ[f] || bseen[f]) continue;
        ++bg_comps;
        if (bg_comps > 1) return false;
        bseen[f] = true;
        stack.push_back(f);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int u : t.adj6_in18[v])
                if (!occ[u] && !bseen[u]) {
                    bseen[u] = true;
                    stack.push_back(u);
                }
        }
    }
    return bg_comps == 1;
}

void skeletonize(CoarseGrid& grid) {
    if (grid.stage != GridStage::MConn)
        throw InvalidInput("skeletonize: grid must be reconstructed first");
    static constexpr std::array<std::array<int, 3>, 6> kDirections{
        {{0, 0, 1}, {0, 0, -1}, {0, -1, 0}, {0, 1, 0}, {-1, 0, 0}, {1, 0, 0}}};
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& dir : kDirections) {
            std::vector<Cell> candidates;
            for (const auto& [c, s] : grid.cells) {
                Cell ahead{c.x + dir[0], c.y + dir[1], c.z + dir[2]};
                if (grid.cells.find(ahead) != grid.cells.end()) continue;
                if (object_neighbor_count(grid.cells, c) <= 1) continue;
                if (!simple_cell(grid.cells, c)) continue;
                candidates.push_back(c);
            }
            for (const Cell& c : candidates) {
                if (!simple_cell(grid.cells, c)) continue;
                delete_cell(grid, c);
                changed = true;
            }
        }
    }
    grid.stage = GridStage::MSkel;
}

std::vector<double> random_walk_scores(const std::vector<std::vector<int32_t>>& adj,
                                       const std::vector<int64_t>& delta, int steps) {
    size_t n = adj.size();
    if (delta.size() != n) throw InvalidInput("random_walk_scores: size mismatch");
    if (steps < 0) throw InvalidInput("random_walk_scores: negative steps");
    double total = 0;
    for (int64_t d : delta) {
        if (d < 0) throw InvalidInput("random_walk_scores: negative density");
        total += static_cast<double>(d);
    }
    if (total <= 0) throw InvalidInput("random_walk_scores: empty density");
    std::vector<double> p(n), next(n);
    for (size_t i = 0; i < n; ++i) p[i] = static_cast<double>(delta[i]) / total;
    for (int s = 0; s < steps; ++s) {
        std::fill(next.begin(), next.end(), 0.0);
        for (size_t i = 0; i < n; ++i) {
            if (adj[i].empty()) {
                next[i] += p[i];
                continue;
            }
            double share = p[i] / static_cast<double>(adj[i].size());
            for (int32_t j : adj[i]) next[j] += share;
        }
        p.swap(next);
    }
    double mass = 0;
    for (double v : p) mass += v;
    if (std::abs(mass - 1.0) > 1e-12) throw Error("random_walk_scores: probability mass drifted");
    return p;
}

namespace {

struct CellGraph {
    std::vector<Cell> cells;  // lex order
    std::vector<std::vector<int32_t>> adj;
    std::vector<std::pair<int32_t, int32_t>> edges;  // i < j, sorted
};

CellGraph index_cells(const CellMap& cells, const std::set<std::pair<Cell, Cell>>& severed) {
    CellGraph cg;
    cg.cells.reserve(cells.size());
    for (const auto& [c, s] : cells) cg.cells.push_back(c);
    cg.adj.resize(cg.cells.size());
    const auto& t = tables();
    std::map<Cell, int32_t> index;
    for (size_t i = 0; i < cg.cells.size(); ++i) index[cg.cells[i]] = static_cast<int32_t>(i);
    for (size_t i = 0; i < cg.cells.size(); ++i) {
        const Cell& c = cg.cells[i];
        for (const auto& off : t.off26) {
            Cell o{c.x + off[0], c.y + off[1], c.z + off[2]};
            auto it = index.find(o);
            if (it == index.end()) continue;
            if (severed.count({std::min(c, o), std::max(c, o)})) continue;
            cg.adj[i].push_back(it->second);
            if (it->second > static_cast<int32_t>(i))
                cg.edges.emplace_back(static_cast<int32_t>(i), it->second);
        }
        std::sort(cg.adj[i].begin(), cg.adj[i].end());
    }
    std::sort(cg.edges.begin(), cg.edges.end());
    return cg;
}

bool connected_without(const CellGraph& cg, int32_t skip) {
    int32_t n = static_cast<int32_t>(cg.cells.size());
    if (n <= 1) return true;
    int32_t start = skip == 0 ? 1 : 0;
    std::vector<bool> seen(n, false);
    seen[start] = true;
    std::vector<int32_t> stack{start};
    int32_t cnt = 0;
    while (!stack.empty()) {
        int32_t v = stack.back();
        stack.pop_back();
        ++cnt;
        for (int32_t u : cg.adj[v]) {
            if (u == skip || seen[u]) continue;
            seen[u] = true;
            stack.push_back(u);
        }
    }
    int32_t expect = skip < 0 ? n : n - 1;
    return cnt == expect;
}

// Iterative bridge finding (Tarjan lowlink over a DFS forest).
std::set<std::pair<int32_t, int32_t>> find_bridges(const CellGraph& cg) {
    int32_t n = static_cast<int32_t>(cg.cells.size());
    std::vector<int32_t> disc(n, -1), low(n, 0), parent(n, -1);
    std::set<std::pair<int32_t, int32_t>> bridges;
    int32_t timer = 0;
    for (int32_t root = 0; root < n; ++root) {
        if (disc[root] >= 0) continue;
        std::vector<std::pair<int32_t, size_t>> stack{{root, 0}};
        disc[root] = low[root] = timer++;
        while (!stack.empty()) {
            auto& [v, idx] = stack.back();
            if (idx < cg.adj[v].size()) {
                int32_t u = cg.adj[v][idx++];
                if (disc[u] < 0) {
                    parent[u] = v;
                    disc[u] = low[u] = timer++;
                    stack.emplace_back(u, 0);
                } else if (u != parent[v]) {
                    low[v] = std::min(low[v], disc[u]);
                }
            } else {
                stack.pop_back();
                if (!stack.empty()) {
                    int32_t p = stack.back().first;
                    low[p] = std::min(low[p], low[v]);
                    if (low[v] > disc[p]) bridges.insert({std::min(p, v), std::max(p, v)});
                }
            }
        }
    }
    return bridges;
}

}  // namespace

TreeApprox break_cycles(CoarseGrid grid, int walk_steps) {
    if (grid.stage != GridStage::MSkel)
        throw InvalidInput("break_cycles: grid must be skeletonized first");
    // Cycle edges detached when no cycle cell is removable (see below).
    std::set<std::pair<Cell, Cell>> severed;
    while (true) {
        CellGraph cg = index_cells(grid.cells, severed);
        int32_t n = static_cast<int32_t>(cg.cells.size());
        if (n == 0) throw InvalidInput("break_cycles: empty grid");
        if (!connected_without(cg, -1)) throw InvalidInput("break_cycles: grid is disconnected");
        if (static_cast<int32_t>(cg.edges.size()) == n - 1) {
            TreeApprox tree;
            tree.cells = std::move(cg.cells);
            tree.edges = std::move(cg.edges);
            tree.delta.resize(tree.cells.size());
            for (size_t i = 0; i < tree.cells.size(); ++i)
                tree.delta[i] = grid.delta(tree.cells[i]);
            tree.cell_of_node.resize(grid.node_cell.size());
            std::map<Cell, int32_t> index;
            for (size_t i = 0; i < tree.cells.size(); ++i)
                index[tree.cells[i]] = static_cast<int32_t>(i);
            for (size_t v = 0; v < grid.node_cell.size(); ++v)
                tree.cell_of_node[v] = index.at(grid.node_cell[v]);
            tree.grid = std::move(grid);
            return tree;
        }

        auto bridges = find_bridges(cg);
        std::vector<int32_t> candidates;
        {
            std::vector<bool> is_cand(n, false);
            for (const auto& e : cg.edges) {
                if (bridges.count(e)) continue;
                is_cand[e.first] = is_cand[e.second] = true;
            }
            for (int32_t i = 0; i < n; ++i)
                if (is_cand[i]) candidates.push_back(i);
        }
        std::vector<int64_t> delta(n);
        for (int32_t i = 0; i < n; ++i) delta[i] = grid.delta(cg.cells[i]);
        std::vector<double> score = random_walk_scores(cg.adj, delta, walk_steps);
        std::sort(candidates.begin(), candidates.end(), [&](int32_t a, int32_t b) {
            if (score[a] != score[b]) return score[a] < score[b];
            return a < b;  // index order is lexicographic cell order
        });
        bool deleted = false;
        for (int32_t cand : candidates) {
            if (!connected_without(cg, cand)) continue;
            delete_cell(grid, cg.cells[cand]);
            deleted = true;
            break;
        }
        if (deleted) continue;

        // Every cycle cell anchors a pendant branch (e.g. a triangle with a
        // chain hanging off each corner), so no cell can go. Detach the
        // lowest-probability cycle cell instead: sever one of its non-bridge
        // edges, which never disconnects the graph. Among its cycle edges
        // pick the one whose far endpoint scores lowest, ties lexicographic.
        if (candidates.empty()) throw Error("break_cycles: cyclic grid without cycle edges");
        int32_t victim = candidates.front();
        int32_t best_other = -1;
        for (const auto& e : cg.edges) {
            if (bridges.count(e)) continue;
            int32_t other;
            if (e.first == victim)
                other = e.second;
            else if (e.second == victim)
                other = e.first;
            else
                continue;
            if (best_other < 0 || score[other] < score[best_other] ||
                (score[other] == score[best_other] && other < best_other))
                best_other = other;
        }
        if (best_other < 0) throw Error("break_cycles: candidate lost its cycle edges");
        Cell a = cg.cells[victim], b = cg.cells[best_other];
        severed.insert({std::min(a, b), std::max(a, b)});
    }
}

}  // namespace hmsc
