#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hmsc/coarse_grid.hpp"

namespace hmsc {

/// Malandain-Bertrand simple-point test for (26,6) connectivity: the object
/// restricted to the 26-neighborhood stays one 26-component, and exactly one
/// 6-component of background in the 18-neighborhood touches a face of c.
bool simple_cell(const std::map<Cell, std::vector<int32_t>>& cells, const Cell& c);

/// Directional thinning. Each of the six subpasses freezes its candidate set
/// (border cells that are simple and not line endpoints), then deletes
/// sequentially in lexicographic order, re-testing simplicity before each
/// deletion. Nodes of a deleted cell move to the nearest surviving cell.
/// Stage MConn -> MSkel.
void skeletonize(CoarseGrid& grid);

/// Density-seeded random walk: p0 proportional to delta, then `steps`
/// applications of the uniform transition matrix (isolated vertices keep
/// their mass). Returns the final distribution.
std::vector<double> random_walk_scores(const std::vector<std::vector<int32_t>>& adj,
                                       const std::vector<int64_t>& delta, int steps);

/// Skeleton cells with their 26-adjacency edges, guaranteed acyclic.
struct TreeApprox {
    CoarseGrid grid;
    std::vector<Cell> cells;                          // lexicographic order
    std::vector<std::pair<int32_t, int32_t>> edges;   // (i, j), i < j, sorted
    std::vector<int64_t> delta;                       // node count per cell
    std::vector<int32_t> cell_of_node;                // local node -> cell index
};

/// Removes cycle cells one at a time: among cells incident to a non-bridge
/// edge, the one with the lowest walk probability whose removal keeps the
/// grid connected goes first (ties: lexicographically smaller cell). When
/// every cycle cell anchors a pendant branch and none can be removed, the
/// lowest-probability one is detached instead: one of its cycle edges is
/// severed, which always preserves connectivity.
TreeApprox break_cycles(CoarseGrid grid, int walk_steps);

}  // namespace hmsc
