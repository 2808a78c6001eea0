#include "hmsc/bpm.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hmsc/error.hpp"
#include "hmsc/rng.hpp"

namespace hmsc {

namespace {

constexpr int kMaxDim = 1 << 20;

// Reads one PNM header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (!std::isspace(c)) break;
    }
    if (c == EOF) return tok;
    do {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    } while (c != EOF && !std::isspace(c) && c != '#');
    if (c == '#') in.unget();
    return tok;
}

int parse_dim(const std::string& tok, const char* field) {
    if (tok.empty()) throw ParseError(std::string("pgm: missing ") + field);
    long v = 0;
    for (char ch : tok) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw ParseError(std::string("pgm: bad ") + field + " '" + tok + "'");
        v = v * 10 + (ch - '0');
        if (v > kMaxDim) throw ParseError(std::string("pgm: ") + field + " too large");
    }
    return static_cast<int>(v);
}

void put_u32le(std::ostream& out, uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(b, 4);
}

uint32_t get_u32le(std::istream& in, const char* field) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (in.gcount() != 4) throw ParseError(std::string("labels: truncated ") + field);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

std::array<uint8_t, 3> label_color(uint32_t label) {
    if (label == 0) return {0, 0, 0};
    // Golden-angle hue walk keeps consecutive labels far apart on the wheel.
    double hue = std::fmod(static_cast<double>(label) * 0.6180339887498949, 1.0);
    double s = 0.62, v = 0.95;
    double h6 = hue * 6.0;
    int sector = static_cast<int>(h6) % 6;
    double f = h6 - std::floor(h6);
    double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
    double r, g, b;
    switch (sector) {
        case 0: r = v, g = t, b = p; break;
        case 1: r = q, g = v, b = p; break;
        case 2: r = p, g = v, b = t; break;
        case 3: r = p, g = q, b = v; break;
        case 4: r = t, g = p, b = v; break;
        default: r = v, g = p, b = q; break;
    }
    auto to8 = [](double x) { return static_cast<uint8_t>(std::lround(x * 255.0)); };
    return {to8(r), to8(g), to8(b)};
}

}  // namespace

BoundaryMap parse_pgm(std::istream& in) {
    std::string magic = next_token(in);
    if (magic != "P5") throw ParseError("pgm: expected magic P5, got '" + magic + "'");
    BoundaryMap bpm;
    bpm.width = parse_dim(next_token(in), "width");
    bpm.height = parse_dim(next_token(in), "height");
    if (bpm.width <= 0 || bpm.height <= 0) throw ParseError("pgm: zero dimension");
    int maxval = parse_dim(next_token(in), "maxval");
    if (maxval != 255) throw ParseError("pgm: unsupported maxval " + std::to_string(maxval));
    // The header ends with exactly one whitespace byte; next_token consumed it.
    size_t n = static_cast<size_t>(bpm.width) * bpm.height;
    bpm.values.resize(n);
    in.read(reinterpret_cast<char*>(bpm.values.data()), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in.gcount()) != n) throw ParseError("pgm: truncated pixel data");
    return bpm;
}

void write_pgm(std::ostream& out, const BoundaryMap& bpm) {
    out << "P5\n" << bpm.width << " " << bpm.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(bpm.values.data()),
              static_cast<std::streamsize>(bpm.values.size()));
}

BoundaryMap load_bpm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_pgm(in);
}

void save_bpm(const std::string& path, const BoundaryMap& bpm) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    write_pgm(out, bpm);
    if (!out) throw ParseError("write failed for '" + path + "'");
}

Segmentation parse_labels(std::istream& in) {
    char magic[8];
    in.read(magic, 8);
    if (in.gcount() != 8 || std::string(magic, 8) != "HMSCLBL1")
        throw ParseError("labels: bad magic");
    Segmentation seg;
    uint32_t w = get_u32le(in, "width");
    uint32_t h = get_u32le(in, "height");
    if (w == 0 || h == 0 || w > kMaxDim || h > kMaxDim)
        throw ParseError("labels: implausible dimensions");
    seg.width = static_cast<int>(w);
    seg.height = static_cast<int>(h);
    size_t n = static_cast<size_t>(w) * h;
    seg.labels.resize(n);
    for (size_t i = 0; i < n; ++i) seg.labels[i] = get_u32le(in, "pixel data");
    return seg;
}

void write_labels(std::ostream& out, const Segmentation& seg) {
    out.write("HMSCLBL1", 8);
    put_u32le(out, static_cast<uint32_t>(seg.width));
    put_u32le(out, static_cast<uint32_t>(seg.height));
    for (uint32_t v : seg.labels) put_u32le(out, v);
}

Segmentation load_labels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_labels(in);
}

void save_labels(const std::string& path, const Segmentation& seg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    write_labels(out, seg);
    if (!out) throw ParseError("write failed for '" + path + "'");
}

void render_labels(std::ostream& out, const Segmentation& seg) {
    out << "P6\n" << seg.width << " " << seg.height << "\n255\n";
    for (uint32_t lab : seg.labels) {
        auto rgb = label_color(lab);
        out.write(reinterpret_cast<const char*>(rgb.data()), 3);
    }
}

void canonicalize(Segmentation& seg) {
    std::vector<uint32_t> remap;
    uint32_t next = 0;
    // Dense remap table sized to the max label; labels come from our own code
    // paths so they are small.
    uint32_t maxlab = 0;
    for (uint32_t v : seg.labels) maxlab = std::max(maxlab, v);
    remap.assign(static_cast<size_t>(maxlab) + 1, 0);
    std::vector<bool> seen(static_cast<size_t>(maxlab) + 1, false);
    for (uint32_t& v : seg.labels) {
        if (v == 0) continue;
        if (!seen[v]) {
            seen[v] = true;
            remap[v] = ++next;
        }
        v = remap[v];
    }
}

SynthResult generate_synthetic(const SynthSpec& spec) {
    if (spec.width <= 0 || spec.height <= 0) throw InvalidInput("synth: non-positive dimensions");
    if (spec.regions < 1) throw InvalidInput("synth: regions must be >= 1");
    if (spec.errors < 0) throw InvalidInput("synth: errors must be >= 0");
    if (spec.gap_width < 1) throw InvalidInput("synth: gap_width must be >= 1");

    // Near-square region lattice, rows <= cols.
    int rows = 1;
    for (int r = 1; r * r <= spec.regions; ++r)
        if (spec.regions % r == 0) rows = r;
    int cols = spec.regions / rows;

    auto cuts = [](int extent, int parts) {
        std::vector<int> sep(static_cast<size_t>(parts) + 1);
        sep[0] = -1;
        for (int i = 1; i < parts; ++i)
            sep[i] = static_cast<int>(std::llround(static_cast<double>(i) * extent / parts));
        sep[parts] = extent;
        return sep;
    };
    std::vector<int> sx = cuts(spec.width, cols);
    std::vector<int> sy = cuts(spec.height, rows);
    for (int i = 0; i < cols; ++i)
        if (sx[i + 1] - sx[i] - 1 < 3) throw InvalidInput("synth: regions too large for image");
    for (int j = 0; j < rows; ++j)
        if (sy[j + 1] - sy[j] - 1 < 3) throw InvalidInput("synth: regions too large for image");

    SynthResult out;
    out.bpm.width = spec.width;
    out.bpm.height = spec.height;
    out.bpm.values.assign(static_cast<size_t>(spec.width) * spec.height, spec.interior_value);
    out.truth.width = spec.width;
    out.truth.height = spec.height;
    out.truth.labels.assign(out.bpm.values.size(), 0);

    auto is_sep = [&](int v, const std::vector<int>& sep, int parts) {
        for (int i = 1; i < parts; ++i)
            if (sep[i] == v) return true;
        return false;
    };
    std::vector<bool> col_sep(spec.width, false), row_sep(spec.height, false);
    for (int x = 0; x < spec.width; ++x) col_sep[x] = is_sep(x, sx, cols);
    for (int y = 0; y < spec.height; ++y) row_sep[y] = is_sep(y, sy, rows);

    std::vector<int> col_region(spec.width, -1), row_region(spec.height, -1);
    {
        int ci = 0;
        for (int x = 0; x < spec.width; ++x) {
            if (col_sep[x]) {
                ++ci;
                continue;
            }
            col_region[x] = ci;
        }
        int ri = 0;
        for (int y = 0; y < spec.height; ++y) {
            if (row_sep[y]) {
                ++ri;
                continue;
            }
            row_region[y] = ri;
        }
    }

    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            if (row_sep[y] || col_sep[x]) {
                out.bpm.at(x, y) = spec.boundary_value;
            } else {
                out.truth.at(x, y) =
                    static_cast<uint32_t>(row_region[y] * cols + col_region[x] + 1);
            }
        }
    }

    // Gap centers are drawn from boundary pixels whose gap square stays inside
    // the image, scanned row-major so the eligible list is reproducible.
    int off = spec.gap_width / 2;
    std::vector<std::pair<int, int>> eligible;
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            if (!(row_sep[y] || col_sep[x])) continue;
            if (x - off < 0 || x - off + spec.gap_width > spec.width) continue;
            if (y - off < 0 || y - off + spec.gap_width > spec.height) continue;
            eligible.emplace_back(x, y);
        }
    }
    if (static_cast<size_t>(spec.errors) > eligible.size())
        throw InvalidInput("synth: more gaps requested than eligible boundary pixels");
    SplitMix64 rng(spec.seed);
    auto picks = sample_without_replacement(static_cast<uint32_t>(eligible.size()),
                                            static_cast<uint32_t>(spec.errors), rng);
    for (uint32_t pi : picks) {
        auto [cx, cy] = eligible[pi];
        for (int dy = 0; dy < spec.gap_width; ++dy)
            for (int dx = 0; dx < spec.gap_width; ++dx)
                out.bpm.at(cx - off + dx, cy - off + dy) = spec.interior_value;
    }
    return out;
}

}  // namespace hmsc
