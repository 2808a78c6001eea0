#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "hmsc/graph.hpp"

namespace hmsc {

/// Weighting of embedding coordinates. Paper scales coordinate j by
/// eigenvalue lambda_{j+1} of the normalized Laplacian; Standard uses the
/// diffusion-operator eigenvalue 1 - lambda_{j+1}.
enum class SpectrumConvention { Paper, Standard };

struct EigenSolveOptions {
    int dense_cutoff = 512;    // solve densely at or below this many nodes
    double shift = 1e-5;       // sigma in the shift-inverted operator
    double residual_tol = 1e-8;
    int max_subspace = 192;    // Lanczos basis cap
    uint64_t seed = 0x6b4fb9a13ad2f1c5ull;  // start-vector stream
};

/// Smallest eigenpairs of the symmetric normalized Laplacian of one connected
/// component. Columns of `vectors` are unit eigenvectors sorted by ascending
/// eigenvalue; `phi` holds the random-walk eigenvectors D^{-1/2} v.
struct EigenPairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    Eigen::MatrixXd phi;
    Eigen::VectorXd residuals;  // ||L v - lambda v|| per pair
};

EigenPairs smallest_eigenpairs(const LocalView& lv, int m, const EigenSolveOptions& opts = {});
EigenPairs smallest_eigenpairs(const Graph& g, const Component& comp, int m,
                               const EigenSolveOptions& opts = {});

/// Spectral embedding of a connected component into R^d. Row i corresponds to
/// the i-th node of the component in sorted order.
struct DiffusionMap {
    int d = 0;
    int t = 1;
    SpectrumConvention convention = SpectrumConvention::Paper;
    Eigen::MatrixXd points;  // n x d
};

DiffusionMap embed(const LocalView& lv, int d, int t, SpectrumConvention convention,
                   const EigenSolveOptions& opts = {});
DiffusionMap embed(const Graph& g, const Component& comp, int d, int t,
                   SpectrumConvention convention, const EigenSolveOptions& opts = {});

}  // namespace hmsc
