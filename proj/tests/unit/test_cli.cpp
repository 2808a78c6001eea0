#include <doctest.h>

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hmsc/bpm.hpp"
#include "hmsc/cli.hpp"

using namespace hmsc;
namespace fs = std::filesystem;

namespace {

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"hmsc"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const char* name) {
    fs::path d = fs::temp_directory_path() / "hmsc_cli_tests" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// redirects an fd into a file for the duration of one CLI call
class CaptureFd {
  public:
    CaptureFd(int fd, fs::path path) : fd_(fd), path_(std::move(path)) {
        std::fflush(nullptr);
        saved_ = dup(fd_);
        int f = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        dup2(f, fd_);
        ::close(f);
    }
    std::string finish() {
        std::fflush(nullptr);
        dup2(saved_, fd_);
        ::close(saved_);
        std::ifstream in(path_);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

  private:
    int fd_;
    int saved_;
    fs::path path_;
};

void make_synth(const fs::path& dir, int size, int regions, int errors, uint64_t seed) {
    REQUIRE(run({"synth", "--width", std::to_string(size), "--height", std::to_string(size),
                 "--regions", std::to_string(regions), "--errors", std::to_string(errors),
                 "--seed", std::to_string(seed), "--out", (dir / "bpm.pgm").string(), "--gt",
                 (dir / "gt.lbl").string()}) == 0);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors") {
    CaptureFd out(1, fs::temp_directory_path() / "hmsc_cli_help.txt");
    int help = run({"--help"});
    std::string text = out.finish();
    CHECK(help == 0);
    CHECK(text.find("synth") != std::string::npos);
    CHECK(text.find("segment") != std::string::npos);

    CaptureFd err(2, fs::temp_directory_path() / "hmsc_cli_err.txt");
    int bad_cmd = run({"frobnicate"});
    int missing = run({"synth", "--width", "8", "--height", "8", "--regions", "2"});
    int no_cmd = run({});
    err.finish();
    CHECK(bad_cmd == 1);
    CHECK(missing == 1);  // --out is required
    CHECK(no_cmd == 1);
}

TEST_CASE("synth, cc and eval round-trip on sealed regions") {
    fs::path dir = fresh_dir("sealed");
    make_synth(dir, 40, 3, 0, 5);

    REQUIRE(run({"cc", "--input", (dir / "bpm.pgm").string(), "--output",
                 (dir / "cc.lbl").string()}) == 0);

    CaptureFd out(1, dir / "eval.txt");
    int code = run({"eval", "--pred", (dir / "cc.lbl").string(), "--gt",
                    (dir / "gt.lbl").string()});
    std::string text = out.finish();
    CHECK(code == 0);
    CHECK(text == "vi=0.000000 rand=0.000000\n");
}

TEST_CASE("segment heals a punched gap end to end") {
    fs::path dir = fresh_dir("gap");
    make_synth(dir, 60, 2, 1, 3);

    REQUIRE(run({"segment", "--input", (dir / "bpm.pgm").string(), "--output",
                 (dir / "seg.lbl").string(), "--quiet"}) == 0);
    CHECK(slurp(dir / "seg.lbl").substr(0, 8) == "HMSCLBL1");

    CaptureFd out(1, dir / "eval.txt");
    int code = run({"eval", "--pred", (dir / "seg.lbl").string(), "--gt",
                    (dir / "gt.lbl").string()});
    std::string text = out.finish();
    CHECK(code == 0);
    CHECK(text == "vi=0.000000 rand=0.000000\n");

    // byte-identical rerun
    REQUIRE(run({"segment", "--input", (dir / "bpm.pgm").string(), "--output",
                 (dir / "seg2.lbl").string(), "--quiet"}) == 0);
    CHECK(slurp(dir / "seg.lbl") == slurp(dir / "seg2.lbl"));
}

TEST_CASE("baseline with k=1 reproduces sealed components") {
    fs::path dir = fresh_dir("baseline");
    make_synth(dir, 40, 3, 0, 9);
    REQUIRE(run({"baseline", "--input", (dir / "bpm.pgm").string(), "--output",
                 (dir / "base.lbl").string(), "--k", "1"}) == 0);
    CaptureFd out(1, dir / "eval.txt");
    int code = run({"eval", "--pred", (dir / "base.lbl").string(), "--gt",
                    (dir / "gt.lbl").string()});
    std::string text = out.finish();
    CHECK(code == 0);
    CHECK(text == "vi=0.000000 rand=0.000000\n");
}

TEST_CASE("render writes a plausible PPM") {
    fs::path dir = fresh_dir("render");
    make_synth(dir, 30, 2, 0, 1);
    REQUIRE(run({"render", "--input", (dir / "gt.lbl").string(), "--out",
                 (dir / "img.ppm").string()}) == 0);
    std::string ppm = slurp(dir / "img.ppm");
    CHECK(ppm.substr(0, 2) == "P6");
    CHECK(ppm.find("30 30") != std::string::npos);
    CHECK(ppm.size() > 30u * 30u * 3u);
}

TEST_CASE("dump-embedding emits one row per node") {
    fs::path dir = fresh_dir("dump");
    make_synth(dir, 12, 1, 0, 1);
    REQUIRE(run({"dump-embedding", "--input", (dir / "bpm.pgm").string(), "--out",
                 (dir / "emb.csv").string()}) == 0);
    std::ifstream in(dir / "emb.csv");
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "node,x,y,z");
    int rows = 0;
    int commas_ok = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (std::count(line.begin(), line.end(), ',') == 3) ++commas_ok;
    }
    // a sealed single-region map is one all-interior component
    CHECK(rows == 12 * 12);
    CHECK(commas_ok == rows);
}

TEST_CASE("processing failures exit with code 2") {
    fs::path dir = fresh_dir("procfail");
    fs::path dir2 = fresh_dir("procfail_other");
    make_synth(dir, 20, 2, 0, 2);
    make_synth(dir2, 30, 2, 0, 2);

    CaptureFd err(2, dir / "stderr.txt");
    int missing_file = run({"cc", "--input", (dir / "nope.pgm").string(), "--output",
                            (dir / "x.lbl").string()});
    int bad_conn = run({"cc", "--input", (dir / "bpm.pgm").string(), "--output",
                        (dir / "x.lbl").string(), "--connectivity", "4"});
    int dim_mismatch = run({"eval", "--pred", (dir / "gt.lbl").string(), "--gt",
                            (dir2 / "gt.lbl").string()});
    std::string text = err.finish();
    CHECK(missing_file == 2);
    CHECK(bad_conn == 2);
    CHECK(dim_mismatch == 2);
    CHECK(text.find("error:") != std::string::npos);
}

}  // TEST_SUITE
