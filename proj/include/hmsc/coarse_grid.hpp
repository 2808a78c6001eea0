#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <vector>

#include "hmsc/diffusion.hpp"
#include "hmsc/graph.hpp"

namespace hmsc {

struct Cell {
    int x = 0;
    int y = 0;
    int z = 0;
    auto operator<=>(const Cell&) const = default;
};

enum class GridStage { M, MConn, MSkel };

/// Occupancy grid over the embedding cube. Each occupied cell carries the
/// component-local ids of the nodes that landed in it; bridge cells inserted
/// during reconstruction carry an empty list. Every node stays in exactly one
/// cell at all stages (deletions merge the list into a surviving cell).
struct CoarseGrid {
    int resolution = 25;
    GridStage stage = GridStage::M;
    std::map<Cell, std::vector<int32_t>> cells;
    std::vector<Cell> node_cell;  // local node id -> its cell

    int64_t delta(const Cell& c) const {
        auto it = cells.find(c);
        return it == cells.end() ? 0 : static_cast<int64_t>(it->second.size());
    }
    int64_t total_nodes() const { return static_cast<int64_t>(node_cell.size()); }
};

/// Maps embedding points into a resolution^3 cube with per-axis affine
/// rescale; a degenerate axis (max == min) collapses to plane 0, as do axes
/// beyond the embedding dimension.
CoarseGrid coarsen(const DiffusionMap& dmap, int resolution);

/// Population standard deviation of node counts over occupied cells.
/// Only meaningful before reconstruction (stage M).
double density_std(const CoarseGrid& grid);

/// Inclusive 3D raster line from a to b; consecutive cells are 26-adjacent.
std::vector<Cell> bresenham3(Cell a, Cell b);

/// Bridges 26-disconnected groups of cells by rasterizing lines along graph
/// edges whose endpoints fell into different groups, lowest node-id pair
/// first, until the cell set is 26-connected. Stage M -> MConn.
void reconstruct(CoarseGrid& grid, const LocalView& lv);

}  // namespace hmsc
