#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hmsc {

/// Grayscale boundary probability map, row-major, 0 = certainly interior.
struct BoundaryMap {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> values;

    uint8_t at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    uint8_t& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
};

/// Pixel labeling. Label 0 marks boundary/unsegmented pixels, segments are 1..L.
struct Segmentation {
    int width = 0;
    int height = 0;
    std::vector<uint32_t> labels;

    uint32_t at(int x, int y) const { return labels[static_cast<size_t>(y) * width + x]; }
    uint32_t& at(int x, int y) { return labels[static_cast<size_t>(y) * width + x]; }
};

struct SynthSpec {
    int width = 0;
    int height = 0;
    int regions = 1;
    int errors = 0;       // number of gaps punched into boundary lines
    int gap_width = 3;
    uint8_t boundary_value = 255;
    uint8_t interior_value = 0;
    uint64_t seed = 0;
};

struct SynthResult {
    BoundaryMap bpm;
    Segmentation truth;
};

BoundaryMap load_bpm(const std::string& path);
void save_bpm(const std::string& path, const BoundaryMap& bpm);

BoundaryMap parse_pgm(std::istream& in);
void write_pgm(std::ostream& out, const BoundaryMap& bpm);

Segmentation load_labels(const std::string& path);
void save_labels(const std::string& path, const Segmentation& seg);

Segmentation parse_labels(std::istream& in);
void write_labels(std::ostream& out, const Segmentation& seg);

/// PPM render: label 0 black, other labels colored by a golden-angle hue wheel.
void render_labels(std::ostream& out, const Segmentation& seg);

/// Rewrite labels as 1..L in row-major first-occurrence order; 0 stays 0.
void canonicalize(Segmentation& seg);

/// Regions in a near-square grid separated by 1px boundary lines, with
/// `errors` gap squares punched through the lines at seeded positions.
/// Ground truth keeps the intact lines: gap pixels stay labeled 0.
SynthResult generate_synthetic(const SynthSpec& spec);

}  // namespace hmsc
