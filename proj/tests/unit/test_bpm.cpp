#include <doctest.h>

#include <cstring>
#include <map>
#include <set>
#include <sstream>

#include "hmsc/bpm.hpp"
#include "hmsc/error.hpp"

using namespace hmsc;

namespace {

BoundaryMap parse_string(const std::string& bytes) {
    std::istringstream in(bytes, std::ios::binary);
    return parse_pgm(in);
}

std::string dump_labels(const Segmentation& seg) {
    std::ostringstream out(std::ios::binary);
    write_labels(out, seg);
    return out.str();
}

}  // namespace

TEST_SUITE("bpm") {

TEST_CASE("pgm parse round-trips a 2x2 payload byte for byte") {
    std::string file = "P5\n2 2\n255\n";
    file += '\0';
    file += '\xff';
    file += '\x3c';
    file += '\x3b';
    BoundaryMap bpm = parse_string(file);
    CHECK(bpm.width == 2);
    CHECK(bpm.height == 2);
    REQUIRE(bpm.values.size() == 4);
    CHECK(bpm.values[0] == 0);
    CHECK(bpm.values[1] == 255);
    CHECK(bpm.values[2] == 60);
    CHECK(bpm.values[3] == 59);

    std::ostringstream out(std::ios::binary);
    write_pgm(out, bpm);
    BoundaryMap again = parse_string(out.str());
    CHECK(again.values == bpm.values);
    CHECK(again.width == bpm.width);
    CHECK(again.height == bpm.height);
}

TEST_CASE("pgm parse tolerates comments and odd whitespace in the header") {
    std::string file = "P5 # magic\n# a comment line\n  2\t1 # dims\n255\nAB";
    BoundaryMap bpm = parse_string(file);
    CHECK(bpm.width == 2);
    CHECK(bpm.height == 1);
    CHECK(bpm.values[0] == 'A');
    CHECK(bpm.values[1] == 'B');
}

TEST_CASE("pgm parse rejects malformed input naming the field") {
    CHECK_THROWS_WITH_AS(parse_string("P6\n2 2\n255\nxxxx"),
                         doctest::Contains("magic"), ParseError);
    CHECK_THROWS_WITH_AS(parse_string("P5\n2 2\n65535\nxxxx"),
                         doctest::Contains("maxval"), ParseError);
    CHECK_THROWS_WITH_AS(parse_string("P5\n2 2\n255\nxx"),
                         doctest::Contains("truncated"), ParseError);
    CHECK_THROWS_WITH_AS(parse_string("P5\n-3 2\n255\nxxxx"),
                         doctest::Contains("width"), ParseError);
    CHECK_THROWS_AS(parse_string("P5\n2 abc\n255\nxxxx"), ParseError);
}

TEST_CASE("label file layout is magic, u32 dims, u32 payload, little endian") {
    Segmentation seg{1, 1, {0}};
    std::string bytes = dump_labels(seg);
    REQUIRE(bytes.size() == 8 + 4 + 4 + 4);
    CHECK(bytes.substr(0, 8) == "HMSCLBL1");
    const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data());
    CHECK(p[8] == 1);   // width LSB first
    CHECK(p[9] == 0);
    CHECK(p[12] == 1);  // height
    CHECK(p[16] == 0);  // the single label

    Segmentation wide{2, 1, {0x01020304u, 7u}};
    std::string wb = dump_labels(wide);
    const unsigned char* q = reinterpret_cast<const unsigned char*>(wb.data());
    CHECK(q[16] == 0x04);
    CHECK(q[17] == 0x03);
    CHECK(q[18] == 0x02);
    CHECK(q[19] == 0x01);
}

TEST_CASE("label round-trip preserves the struct exactly") {
    Segmentation seg{3, 2, {0, 1, 2, 2, 1, 9000001}};
    std::istringstream in(dump_labels(seg), std::ios::binary);
    Segmentation again = parse_labels(in);
    CHECK(again.width == seg.width);
    CHECK(again.height == seg.height);
    CHECK(again.labels == seg.labels);
}

TEST_CASE("label parse rejects bad magic and truncation") {
    std::string bytes = dump_labels(Segmentation{1, 1, {3}});
    std::string bad = bytes;
    bad[0] = 'X';
    std::istringstream in1(bad, std::ios::binary);
    CHECK_THROWS_WITH_AS(parse_labels(in1), doctest::Contains("bad magic"), ParseError);

    std::istringstream in2(bytes.substr(0, bytes.size() - 2), std::ios::binary);
    CHECK_THROWS_WITH_AS(parse_labels(in2), doctest::Contains("truncated"), ParseError);
}

TEST_CASE("render maps label 0 to black and distinct labels to distinct colors") {
    Segmentation seg{3, 1, {0, 1, 2}};
    std::ostringstream out(std::ios::binary);
    render_labels(out, seg);
    std::string ppm = out.str();
    CHECK(ppm.substr(0, 2) == "P6");
    std::string pixels = ppm.substr(ppm.size() - 9);
    CHECK(pixels.substr(0, 3) == std::string(3, '\0'));
    std::set<std::string> colors{pixels.substr(0, 3), pixels.substr(3, 3), pixels.substr(6, 3)};
    CHECK(colors.size() == 3);

    std::ostringstream out2(std::ios::binary);
    render_labels(out2, seg);
    CHECK(out2.str() == ppm);
}

TEST_CASE("canonicalize renumbers labels by first occurrence keeping zero") {
    Segmentation seg{5, 1, {0, 7, 7, 3, 9}};
    canonicalize(seg);
    CHECK(seg.labels == std::vector<uint32_t>{0, 1, 1, 2, 3});

    // already canonical input is a fixpoint
    canonicalize(seg);
    CHECK(seg.labels == std::vector<uint32_t>{0, 1, 1, 2, 3});
}

TEST_CASE("synthetic generator with no errors keeps regions sealed") {
    SynthSpec spec;
    spec.width = 40;
    spec.height = 30;
    spec.regions = 6;
    spec.seed = 11;
    SynthResult r = generate_synthetic(spec);

    // ground truth uses exactly `regions` labels plus 0 for the lines
    std::set<uint32_t> used(r.truth.labels.begin(), r.truth.labels.end());
    CHECK(used.count(0) == 1);
    CHECK(used.size() == 7);
    CHECK(*used.rbegin() == 6);

    // boundary lines and only they carry boundary_value; labels 0 exactly there
    for (int y = 0; y < 30; ++y)
        for (int x = 0; x < 40; ++x) {
            bool is_line = r.bpm.at(x, y) == spec.boundary_value;
            CHECK(is_line == (r.truth.at(x, y) == 0));
        }
}

TEST_CASE("synthetic generator punches exactly errors gaps deterministically") {
    SynthSpec spec;
    spec.width = 60;
    spec.height = 60;
    spec.regions = 4;
    spec.errors = 3;
    spec.seed = 7;
    SynthResult a = generate_synthetic(spec);
    SynthResult b = generate_synthetic(spec);
    CHECK(a.bpm.values == b.bpm.values);
    CHECK(a.truth.labels == b.truth.labels);

    // gaps only clear line pixels; ground truth keeps the intact partition
    SynthSpec sealed = spec;
    sealed.errors = 0;
    SynthResult base = generate_synthetic(sealed);
    CHECK(a.truth.labels == base.truth.labels);
    int cleared = 0;
    for (size_t i = 0; i < a.bpm.values.size(); ++i) {
        if (a.bpm.values[i] != base.bpm.values[i]) {
            CHECK(base.bpm.values[i] == spec.boundary_value);
            CHECK(a.bpm.values[i] == spec.interior_value);
            ++cleared;
        }
    }
    // three gap squares: each clears 3..5 line pixels, squares may overlap
    CHECK(cleared >= 5);
    CHECK(cleared <= 15);

    SynthSpec other = spec;
    other.seed = 8;
    CHECK(generate_synthetic(other).bpm.values != a.bpm.values);
}

TEST_CASE("synthetic generator rejects oversubscribed layouts") {
    SynthSpec spec;
    spec.width = 8;
    spec.height = 8;
    spec.regions = 9;  // 3x3 grid leaves < 3px interior per region
    CHECK_THROWS_AS(generate_synthetic(spec), InvalidInput);

    SynthSpec one;
    one.width = 10;
    one.height = 10;
    one.regions = 1;
    SynthResult r = generate_synthetic(one);
    std::set<uint32_t> used(r.truth.labels.begin(), r.truth.labels.end());
    CHECK(used == std::set<uint32_t>{1});
}

TEST_CASE("file io round-trips through the filesystem") {
    std::string dir = "/tmp/hmsc_bpm_test";
    std::string pgm = dir + "_img.pgm";
    std::string lbl = dir + "_seg.lbl";

    BoundaryMap bpm{2, 3, {0, 10, 255, 60, 59, 128}};
    save_bpm(pgm, bpm);
    BoundaryMap b2 = load_bpm(pgm);
    CHECK(b2.values == bpm.values);

    Segmentation seg{2, 3, {0, 1, 1, 2, 2, 3}};
    save_labels(lbl, seg);
    Segmentation s2 = load_labels(lbl);
    CHECK(s2.labels == seg.labels);

    CHECK_THROWS_AS(load_bpm(dir + "_missing.pgm"), Error);
}

}  // TEST_SUITE
