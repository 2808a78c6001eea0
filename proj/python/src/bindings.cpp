#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hmsc/baseline.hpp"
#include "hmsc/bpm.hpp"
#include "hmsc/driver.hpp"
#include "hmsc/error.hpp"
#include "hmsc/metrics.hpp"

namespace py = pybind11;

namespace {

hmsc::BoundaryMap bpm_from_array(const py::array_t<uint8_t>& img) {
    auto buf = img.unchecked<2>();
    hmsc::BoundaryMap bpm;
    bpm.height = static_cast<int>(buf.shape(0));
    bpm.width = static_cast<int>(buf.shape(1));
    bpm.values.resize(static_cast<size_t>(bpm.width) * bpm.height);
    for (int y = 0; y < bpm.height; ++y)
        for (int x = 0; x < bpm.width; ++x) bpm.at(x, y) = buf(y, x);
    return bpm;
}

py::array_t<uint32_t> labels_to_array(const hmsc::Segmentation& seg) {
    py::array_t<uint32_t> out({seg.height, seg.width});
    auto buf = out.mutable_unchecked<2>();
    for (int y = 0; y < seg.height; ++y)
        for (int x = 0; x < seg.width; ++x) buf(y, x) = seg.at(x, y);
    return out;
}

hmsc::Segmentation seg_from_array(const py::array_t<uint32_t>& arr) {
    auto buf = arr.unchecked<2>();
    hmsc::Segmentation seg;
    seg.height = static_cast<int>(buf.shape(0));
    seg.width = static_cast<int>(buf.shape(1));
    seg.labels.resize(static_cast<size_t>(seg.width) * seg.height);
    for (int y = 0; y < seg.height; ++y)
        for (int x = 0; x < seg.width; ++x) seg.at(x, y) = buf(y, x);
    return seg;
}

hmsc::SpectrumConvention convention_of(const std::string& s) {
    if (s == "paper") return hmsc::SpectrumConvention::Paper;
    if (s == "standard") return hmsc::SpectrumConvention::Standard;
    throw hmsc::InvalidInput("unknown spectrum convention '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_hmsc, m) {
    m.doc() = "Hierarchical manifold spectral clustering segmentation";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const hmsc::InvalidInput& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def(
        "segment",
        [](py::array_t<uint8_t> img, int threshold, int connectivity, int dims, int t,
           const std::string& spectrum, int grid, double std_threshold, double balance,
           int walk_steps, int min_component_size, int max_depth, uint64_t seed, int threads) {
            hmsc::HmscConfig cfg;
            cfg.threshold = threshold;
            cfg.connectivity = connectivity;
            cfg.d = dims;
            cfg.t = t;
            cfg.spectrum = convention_of(spectrum);
            cfg.resolution = grid;
            cfg.std_threshold = std_threshold;
            cfg.balance = balance;
            cfg.walk_steps = walk_steps;
            cfg.min_component_size = min_component_size;
            cfg.max_depth = max_depth;
            cfg.seed = seed;
            cfg.threads = threads;
            hmsc::BoundaryMap bpm = bpm_from_array(img);
            hmsc::Segmentation seg;
            {
                py::gil_scoped_release release;
                seg = hmsc::segment(bpm, cfg);
            }
            return labels_to_array(seg);
        },
        py::arg("image"), py::kw_only(), py::arg("threshold") = 60, py::arg("connectivity") = 8,
        py::arg("dims") = 3, py::arg("t") = 1, py::arg("spectrum") = "paper",
        py::arg("grid") = 25, py::arg("std_threshold") = 10.0, py::arg("balance") = 0.1,
        py::arg("walk_steps") = 10, py::arg("min_component_size") = 10, py::arg("max_depth") = 64,
        py::arg("seed") = 0, py::arg("threads") = 1,
        "Run HMSC segmentation on a 2D uint8 boundary map; returns uint32 labels.");

    m.def(
        "baseline",
        [](py::array_t<uint8_t> img, int threshold, int connectivity, int k, bool split,
           int t, const std::string& spectrum, uint64_t seed) {
            hmsc::BaselineConfig cfg;
            cfg.threshold = threshold;
            cfg.connectivity = connectivity;
            cfg.k_override = k;
            cfg.split_disconnected = split;
            cfg.t = t;
            cfg.spectrum = convention_of(spectrum);
            cfg.seed = seed;
            hmsc::BoundaryMap bpm = bpm_from_array(img);
            hmsc::BaselineResult r;
            {
                py::gil_scoped_release release;
                r = hmsc::baseline_segment(bpm, cfg);
            }
            return py::make_tuple(labels_to_array(r.seg), r.disconnected_clusters);
        },
        py::arg("image"), py::kw_only(), py::arg("threshold") = 60, py::arg("connectivity") = 8,
        py::arg("k") = 0, py::arg("split_disconnected") = false, py::arg("t") = 1,
        py::arg("spectrum") = "paper", py::arg("seed") = 0,
        "Spectral-clustering baseline; returns (labels, disconnected_cluster_count).");

    m.def(
        "cc",
        [](py::array_t<uint8_t> img, int threshold, int connectivity) {
            return labels_to_array(cc_segment(bpm_from_array(img), threshold, connectivity));
        },
        py::arg("image"), py::kw_only(), py::arg("threshold") = 60, py::arg("connectivity") = 8,
        "Threshold and label connected components.");

    m.def(
        "generate_synthetic",
        [](int width, int height, int regions, int errors, int gap_width, uint64_t seed) {
            hmsc::SynthSpec spec;
            spec.width = width;
            spec.height = height;
            spec.regions = regions;
            spec.errors = errors;
            spec.gap_width = gap_width;
            spec.seed = seed;
            hmsc::SynthResult r = hmsc::generate_synthetic(spec);
            py::array_t<uint8_t> img({r.bpm.height, r.bpm.width});
            auto buf = img.mutable_unchecked<2>();
            for (int y = 0; y < r.bpm.height; ++y)
                for (int x = 0; x < r.bpm.width; ++x) buf(y, x) = r.bpm.at(x, y);
            return py::make_tuple(img, labels_to_array(r.truth));
        },
        py::arg("width"), py::arg("height"), py::arg("regions"), py::kw_only(),
        py::arg("errors") = 0, py::arg("gap_width") = 3, py::arg("seed") = 0,
        "Generate a synthetic boundary map; returns (image, ground_truth).");

    m.def(
        "variation_of_information",
        [](py::array_t<uint32_t> a, py::array_t<uint32_t> b) {
            return hmsc::variation_of_information(seg_from_array(a), seg_from_array(b));
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "adapted_rand_error",
        [](py::array_t<uint32_t> pred, py::array_t<uint32_t> truth) {
            return hmsc::adapted_rand_error(seg_from_array(pred), seg_from_array(truth));
        },
        py::arg("pred"), py::arg("truth"));

    m.def("choose_k", &hmsc::choose_k, py::arg("n"),
          "Cluster-count heuristic floor(sqrt(n)/2)+1.");
}
