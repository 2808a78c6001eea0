#include "hmsc/coarse_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "hmsc/error.hpp"

namespace hmsc {

CoarseGrid coarsen(const DiffusionMap& dmap, int resolution) {
    if (resolution < 1) throw InvalidInput("coarsen: resolution must be >= 1");
    if (dmap.d > 3) throw InvalidInput("coarsen: embedding has more than 3 dimensions");
    const auto n = dmap.points.rows();
    if (n == 0) throw InvalidInput("coarsen: empty embedding");

    CoarseGrid grid;
    grid.resolution = resolution;
    grid.stage = GridStage::M;
    grid.node_cell.resize(static_cast<size_t>(n));

    double lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
    for (int a = 0; a < dmap.d; ++a) {
        lo[a] = dmap.points.col(a).minCoeff();
        hi[a] = dmap.points.col(a).maxCoeff();
    }
    auto bucket = [&](double v, int a) -> int {
        if (a >= dmap.d || hi[a] <= lo[a]) return 0;
        int idx = static_cast<int>(std::floor((v - lo[a]) / (hi[a] - lo[a]) * resolution));
        return std::clamp(idx, 0, resolution - 1);
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        Cell c{bucket(dmap.d > 0 ? dmap.points(i, 0) : 0.0, 0),
               bucket(dmap.d > 1 ? dmap.points(i, 1) : 0.0, 1),
               bucket(dmap.d > 2 ? dmap.points(i, 2) : 0.0, 2)};
        grid.cells[c].push_back(static_cast<int32_t>(i));
        grid.node_cell[static_cast<size_t>(i)] = c;
    }
    return grid;
}

double density_std(const CoarseGrid& grid) {
    if (grid.stage != GridStage::M)
        throw InvalidInput("density_std: grid was already reconstructed");
    if (grid.cells.empty()) throw InvalidInput("density_std: empty grid");
    double mean = 0;
    for (const auto& [c, s] : grid.cells) mean += static_cast<double>(s.size());
    mean /= static_cast<double>(grid.cells.size());
    double acc = 0;
    for (const auto& [c, s] : grid.cells) {
        double dlt = static_cast<double>(s.size()) - mean;
        acc += dlt * dlt;
    }
    return std::sqrt(acc / static_cast<double>(grid.cells.size()));
}

std::vector<Cell> bresenham3(Cell a, Cell b) {
    std::vector<Cell> line;
    int dx = std::abs(b.x - a.x), dy = std::abs(b.y - a.y), dz = std::abs(b.z - a.z);
    int sx = b.x > a.x ? 1 : -1, sy = b.y > a.y ? 1 : -1, sz = b.z > a.z ? 1 : -1;
    Cell c = a;
    line.push_back(c);
    if (dx >= dy && dx >= dz) {
        int e1 = 2 * dy - dx, e2 = 2 * dz - dx;
        for (int i = 0; i < dx; ++i) {
            c.x += sx;
            if (e1 >= 0) {
                c.y += sy;
                e1 -= 2 * dx;
            }
            if (e2 >= 0) {
                c.z += sz;
                e2 -= 2 * dx;
            }
            e1 += 2 * dy;
            e2 += 2 * dz;
            line.push_back(c);
        }
    } else if (dy >= dx && dy >= dz) {
        int e1 = 2 * dx - dy, e2 = 2 * dz - dy;
        for (int i = 0; i < dy; ++i) {
            c.y += sy;
            if (e1 >= 0) {
                c.x += sx;
                e1 -= 2 * dy;
            }
            if (e2 >= 0) {
                c.z += sz;
                e2 -= 2 * dy;
            }
            e1 += 2 * dx;
            e2 += 2 * dz;
            line.push_back(c);
        }
    } else {
        int e1 = 2 * dy - dz, e2 = 2 * dx - dz;
        for (int i = 0; i < dz; ++i) {
            c.z += sz;
            if (e1 >= 0) {
                c.y += sy;
                e1 -= 2 * dz;
            }
            if (e2 >= 0) {
                c.x += sx;
                e2 -= 2 * dz;
            }
            e1 += 2 * dy;
            e2 += 2 * dx;
            line.push_back(c);
        }
    }
    return line;
}

namespace {

// 26-connected components over the current cell set; returns component id per
// cell in map iteration (lexicographic) order.
std::map<Cell, int> grid_components(const std::map<Cell, std::vector<int32_t>>& cells,
                                    int* count_out) {
    std::map<Cell, int> comp;
    for (const auto& [c, s] : cells) comp[c] = -1;
    int count = 0;
    std::vector<Cell> stack;
    for (const auto& [start, s] : cells) {
        if (comp[start] >= 0) continue;
        comp[start] = count;
        stack.push_back(start);
        while (!stack.empty()) {
            Cell c = stack.back();
            stack.pop_back();
            for (int dz = -1; dz <= 1; ++dz)
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0 && dz == 0) continue;
                        Cell nb{c.x + dx, c.y + dy, c.z + dz};
                        auto it = comp.find(nb);
                        if (it != comp.end() && it->second < 0) {
                            it->second = count;
                            stack.push_back(nb);
                        }
                    }
        }
        ++count;
    }
    *count_out = count;
    return comp;
}

}  // namespace

void reconstruct(CoarseGrid& grid, const LocalView& lv) {
    if (grid.stage != GridStage::M) throw InvalidInput("reconstruct: grid not at stage M");
    if (grid.node_cell.size() != static_cast<size_t>(lv.n))
        throw InvalidInput("reconstruct: grid and component disagree on node count");
    while (true) {
        int ncomp = 0;
        std::map<Cell, int> comp = grid_components(grid.cells, &ncomp);
        if (ncomp <= 1) break;
        // First graph edge (u, v), u < v, whose endpoint cells sit in
        // different grid components. Node ids ascend, so scanning u then its
        // sorted neighbors yields the lowest pair.
        int32_t bu = -1, bv = -1;
        for (int32_t u = 0; u < lv.n && bu < 0; ++u) {
            int cu = comp[grid.node_cell[u]];
            for (int32_t v : lv.neighbors(u)) {
                if (v <= u) continue;
                if (comp[grid.node_cell[v]] != cu) {
                    bu = u;
                    bv = v;
                    break;
                }
            }
        }
        if (bu < 0) throw Error("reconstruct: disconnected grid but no bridging edge");
        for (const Cell& c : bresenham3(grid.node_cell[bu], grid.node_cell[bv])) {
            grid.cells.try_emplace(c);
        }
    }
    grid.stage = GridStage::MConn;
}

}  // namespace hmsc
