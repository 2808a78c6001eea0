#include "hmsc/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "hmsc/baseline.hpp"
#include "hmsc/bpm.hpp"
#include "hmsc/coarse_grid.hpp"
#include "hmsc/diffusion.hpp"
#include "hmsc/driver.hpp"
#include "hmsc/error.hpp"
#include "hmsc/graph.hpp"
#include "hmsc/metrics.hpp"
#include "hmsc/rng.hpp"

namespace hmsc {

namespace {

SpectrumConvention parse_convention(const std::string& s) {
    if (s == "paper") return SpectrumConvention::Paper;
    if (s == "standard") return SpectrumConvention::Standard;
    throw InvalidInput("unknown spectrum convention '" + s + "'");
}

void add_graph_flags(CLI::App* cmd, int& threshold, int& connectivity) {
    cmd->add_option("--threshold", threshold, "Boundary threshold; pixels strictly below become nodes")
        ->capture_default_str();
    cmd->add_option("--connectivity", connectivity, "Pixel connectivity (8, or 26 for volumes)")
        ->capture_default_str();
}

int cmd_synth(const SynthSpec& spec, const std::string& out, const std::string& gt) {
    SynthResult r = generate_synthetic(spec);
    save_bpm(out, r.bpm);
    if (!gt.empty()) save_labels(gt, r.truth);
    return 0;
}

int cmd_segment(const std::string& input, const std::string& output, const HmscConfig& cfg,
                bool quiet) {
    BoundaryMap bpm = load_bpm(input);
    Segmentation seg = segment(bpm, cfg, quiet ? nullptr : &std::cerr);
    save_labels(output, seg);
    return 0;
}

int cmd_baseline(const std::string& input, const std::string& output, const BaselineConfig& cfg) {
    BoundaryMap bpm = load_bpm(input);
    BaselineResult r = baseline_segment(bpm, cfg);
    if (r.disconnected_clusters > 0) {
        std::cerr << "baseline: " << r.disconnected_clusters << " disconnected cluster(s)"
                  << (cfg.split_disconnected ? ", split by connectivity" : " left in output")
                  << "\n";
    }
    save_labels(output, r.seg);
    return 0;
}

int cmd_cc(const std::string& input, const std::string& output, int threshold, int connectivity) {
    BoundaryMap bpm = load_bpm(input);
    save_labels(output, cc_segment(bpm, threshold, connectivity));
    return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& gt_path) {
    Segmentation pred = load_labels(pred_path);
    Segmentation gt = load_labels(gt_path);
    double vi = variation_of_information(pred, gt);
    double rand = adapted_rand_error(pred, gt);
    std::printf("vi=%.6f rand=%.6f\n", vi, rand);
    return 0;
}

int cmd_render(const std::string& input, const std::string& out) {
    Segmentation seg = load_labels(input);
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ParseError("cannot open '" + out + "' for writing");
    render_labels(f, seg);
    if (!f) throw ParseError("write failed for '" + out + "'");
    return 0;
}

int cmd_dump_embedding(const std::string& input, const std::string& out, const HmscConfig& cfg) {
    BoundaryMap bpm = load_bpm(input);
    PixelGraph pg = build_graph(bpm, cfg.threshold, cfg.connectivity);
    std::vector<std::array<double, 4>> rows;  // node, x, y, z
    for (const Component& comp : connected_components(pg.g)) {
        if (comp.size() < cfg.d + 2) continue;  // too small to embed
        LocalView lv = make_local_view(pg.g, comp);
        EigenSolveOptions opts;
        opts.seed = mix_seed(cfg.seed, static_cast<uint64_t>(comp.nodes.front()));
        DiffusionMap dm = embed(lv, cfg.d, cfg.t, cfg.spectrum, opts);
        for (int32_t i = 0; i < lv.n; ++i) {
            std::array<double, 4> row{static_cast<double>(comp.nodes[i]), 0, 0, 0};
            for (int j = 0; j < std::min(cfg.d, 3); ++j) row[j + 1] = dm.points(i, j);
            rows.push_back(row);
        }
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    std::ostream* os = &std::cout;
    std::ofstream f;
    if (!out.empty() && out != "-") {
        f.open(out);
        if (!f) throw ParseError("cannot open '" + out + "' for writing");
        os = &f;
    }
    (*os) << "node,x,y,z\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", static_cast<int>(r[0]), r[1],
                      r[2], r[3]);
        (*os) << buf;
    }
    if (os == &f && !f) throw ParseError("write failed for '" + out + "'");
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Hierarchical manifold spectral clustering segmentation"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic boundary map");
    SynthSpec spec;
    int synth_boundary = 255, synth_interior = 0;
    std::string synth_out, synth_gt;
    synth->add_option("--width", spec.width, "Image width")->required();
    synth->add_option("--height", spec.height, "Image height")->required();
    synth->add_option("--regions", spec.regions, "Number of regions")->required();
    synth->add_option("--errors", spec.errors, "Number of boundary gaps")->capture_default_str();
    synth->add_option("--gap-width", spec.gap_width, "Side of each punched gap square")
        ->capture_default_str();
    synth->add_option("--boundary-value", synth_boundary, "Pixel value on boundary lines")
        ->check(CLI::Range(0, 255))
        ->capture_default_str();
    synth->add_option("--interior-value", synth_interior, "Pixel value inside regions")
        ->check(CLI::Range(0, 255))
        ->capture_default_str();
    synth->add_option("--seed", spec.seed, "Gap placement seed")->capture_default_str();
    synth->add_option("--out", synth_out, "Output PGM path")->required();
    synth->add_option("--gt", synth_gt, "Optional ground-truth label file path");

    // shared config used by segment / dump-embedding
    HmscConfig cfg;
    std::string seg_in, seg_out, spectrum_name = "paper";
    bool quiet = false;
    auto add_embed_flags = [&spectrum_name](CLI::App* cmd, HmscConfig& c) {
        cmd->add_option("--dims", c.d, "Embedding dimension")->capture_default_str();
        cmd->add_option("--t", c.t, "Diffusion time (integer exponent)")->capture_default_str();
        cmd->add_option("--spectrum", spectrum_name, "Eigenvalue weighting: paper|standard")
            ->capture_default_str();
        cmd->add_option("--seed", c.seed, "Run seed")->capture_default_str();
    };

    auto* seg = app.add_subcommand("segment", "Run the full HMSC segmentation");
    seg->add_option("--input", seg_in, "Input PGM boundary map")->required();
    seg->add_option("--output", seg_out, "Output label file")->required();
    add_graph_flags(seg, cfg.threshold, cfg.connectivity);
    add_embed_flags(seg, cfg);
    seg->add_option("--grid", cfg.resolution, "Coarse grid resolution per axis")
        ->capture_default_str();
    seg->add_option("--std-threshold", cfg.std_threshold, "Density spread needed to split")
        ->capture_default_str();
    seg->add_option("--balance", cfg.balance, "Minimum side fraction for a balanced cut")
        ->capture_default_str();
    seg->add_option("--walk-steps", cfg.walk_steps, "Random walk steps for cycle breaking")
        ->capture_default_str();
    seg->add_option("--min-component-size", cfg.min_component_size,
                    "Components below this many nodes are kept whole")
        ->capture_default_str();
    seg->add_option("--max-depth", cfg.max_depth, "Recursion depth cap")->capture_default_str();
    seg->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
    seg->add_flag("--quiet", quiet, "Suppress the split log on stderr");

    // baseline
    auto* base = app.add_subcommand("baseline", "Per-component spectral clustering baseline");
    BaselineConfig bcfg;
    std::string base_in, base_out, base_spectrum = "paper";
    base->add_option("--input", base_in, "Input PGM boundary map")->required();
    base->add_option("--output", base_out, "Output label file")->required();
    add_graph_flags(base, bcfg.threshold, bcfg.connectivity);
    base->add_option("--t", bcfg.t, "Diffusion time (integer exponent)")->capture_default_str();
    base->add_option("--spectrum", base_spectrum, "Eigenvalue weighting: paper|standard")
        ->capture_default_str();
    base->add_option("--seed", bcfg.seed, "k-means seed")->capture_default_str();
    base->add_option("--k", bcfg.k_override, "Fixed cluster count (0 = sqrt heuristic)")
        ->capture_default_str();
    base->add_flag("--split-disconnected", bcfg.split_disconnected,
                   "Split clusters that are disconnected in the pixel graph");

    // cc
    auto* cc = app.add_subcommand("cc", "Threshold and label connected components");
    std::string cc_in, cc_out;
    int cc_threshold = 60, cc_connectivity = 8;
    cc->add_option("--input", cc_in, "Input PGM boundary map")->required();
    cc->add_option("--output", cc_out, "Output label file")->required();
    add_graph_flags(cc, cc_threshold, cc_connectivity);

    // eval
    auto* eval = app.add_subcommand("eval", "Compare a prediction against ground truth");
    std::string eval_pred, eval_gt;
    eval->add_option("--pred", eval_pred, "Predicted label file")->required();
    eval->add_option("--gt", eval_gt, "Ground-truth label file")->required();

    // render
    auto* render = app.add_subcommand("render", "Render a label file to PPM");
    std::string render_in, render_out;
    render->add_option("--input", render_in, "Label file")->required();
    render->add_option("--out", render_out, "Output PPM path")->required();

    // dump-embedding
    auto* dump = app.add_subcommand("dump-embedding", "Write per-node embedding coordinates");
    std::string dump_in, dump_out = "-";
    dump->add_option("--input", dump_in, "Input PGM boundary map")->required();
    dump->add_option("--out", dump_out, "Output CSV path (- for stdout)")->capture_default_str();
    add_graph_flags(dump, cfg.threshold, cfg.connectivity);
    add_embed_flags(dump, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) {
            spec.boundary_value = static_cast<uint8_t>(synth_boundary);
            spec.interior_value = static_cast<uint8_t>(synth_interior);
            return cmd_synth(spec, synth_out, synth_gt);
        }
        if (seg->parsed()) {
            cfg.spectrum = parse_convention(spectrum_name);
            return cmd_segment(seg_in, seg_out, cfg, quiet);
        }
        if (base->parsed()) {
            bcfg.spectrum = parse_convention(base_spectrum);
            return cmd_baseline(base_in, base_out, bcfg);
        }
        if (cc->parsed()) return cmd_cc(cc_in, cc_out, cc_threshold, cc_connectivity);
        if (eval->parsed()) return cmd_eval(eval_pred, eval_gt);
        if (render->parsed()) return cmd_render(render_in, render_out);
        if (dump->parsed()) {
            cfg.spectrum = parse_convention(spectrum_name);
            return cmd_dump_embedding(dump_in, dump_out, cfg);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace hmsc
