#pragma once

#include <cstdint>
#include <iosfwd>

#include "hmsc/bpm.hpp"
#include "hmsc/coarse_grid.hpp"
#include "hmsc/diffusion.hpp"
#include "hmsc/graph.hpp"

namespace hmsc {

struct HmscConfig {
    int threshold = 60;
    int connectivity = 8;
    int d = 3;
    int t = 1;
    SpectrumConvention spectrum = SpectrumConvention::Paper;
    int resolution = 25;  // coarse grid cells per axis
    double std_threshold = 10.0;
    double balance = 0.1;
    int walk_steps = 10;
    int min_component_size = 10;
    int max_depth = 64;
    uint64_t seed = 0;
    int threads = 1;
};

/// Strict comparison: a component splits only when its stage-M density spread
/// exceeds the threshold.
bool should_split(const CoarseGrid& grid, const HmscConfig& config);

/// Full recursive segmentation. Components recurse independently (config.threads
/// workers); per-component randomness is seeded from config.seed mixed with the
/// component's smallest node id, so thread count never changes the result.
/// One log line per split/stop goes to `log` when given.
Segmentation segment(const BoundaryMap& bpm, const HmscConfig& config,
                     std::ostream* log = nullptr);

/// Threshold + connected components only (no spectral machinery).
Segmentation cc_segment(const BoundaryMap& bpm, int threshold, int connectivity);

}  // namespace hmsc
