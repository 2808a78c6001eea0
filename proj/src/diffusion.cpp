#include "hmsc/diffusion.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hmsc/error.hpp"
#include "hmsc/rng.hpp"

namespace hmsc {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// L_sym = I - D^{-1/2} A D^{-1/2}, assembled once per component.
SpMat build_laplacian(const LocalView& lv, double shift) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(lv.nbrs.size() + lv.n);
    std::vector<double> inv_sqrt_deg(lv.n);
    for (int32_t v = 0; v < lv.n; ++v) {
        if (lv.degree(v) == 0) throw InvalidInput("eigensolver: isolated node in component");
        inv_sqrt_deg[v] = 1.0 / std::sqrt(static_cast<double>(lv.degree(v)));
    }
    for (int32_t v = 0; v < lv.n; ++v) {
        trips.emplace_back(v, v, 1.0 + shift);
        for (int32_t u : lv.neighbors(v))
            trips.emplace_back(v, u, -inv_sqrt_deg[v] * inv_sqrt_deg[u]);
    }
    SpMat k(lv.n, lv.n);
    k.setFromTriplets(trips.begin(), trips.end());
    return k;
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    double maxabs = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-12 * maxabs) {
            if (v[i] < 0) v = -v;
            return;
        }
    }
}

EigenPairs finalize(const LocalView& lv, const SpMat& k, double shift, Eigen::VectorXd values,
                    Eigen::MatrixXd vectors, double tol) {
    int m = static_cast<int>(values.size());
    EigenPairs out;
    out.values = std::move(values);
    out.vectors = std::move(vectors);
    out.residuals.resize(m);
    for (int j = 0; j < m; ++j) {
        fix_sign(out.vectors.col(j));
        Eigen::VectorXd lv_ = k * out.vectors.col(j) - shift * out.vectors.col(j);
        out.residuals[j] = (lv_ - out.values[j] * out.vectors.col(j)).norm();
        if (!(out.residuals[j] <= tol * std::max(1.0, std::abs(out.values[j]))))
            throw SolverError("eigensolver: residual " + std::to_string(out.residuals[j]) +
                                  " exceeds tolerance for eigenvalue " +
                                  std::to_string(out.values[j]),
                              out.residuals[j]);
    }
    out.phi.resize(lv.n, m);
    for (int32_t v = 0; v < lv.n; ++v) {
        double s = 1.0 / std::sqrt(static_cast<double>(lv.degree(v)));
        out.phi.row(v) = out.vectors.row(v) * s;
    }
    return out;
}

EigenPairs solve_dense(const LocalView& lv, int m, const EigenSolveOptions& opts) {
    SpMat k = build_laplacian(lv, opts.shift);
    Eigen::MatrixXd dense = Eigen::MatrixXd(k) - opts.shift * Eigen::MatrixXd::Identity(lv.n, lv.n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    if (es.info() != Eigen::Success)
        throw SolverError("eigensolver: dense decomposition failed", 0.0);
    Eigen::VectorXd values = es.eigenvalues().head(m);
    Eigen::MatrixXd vectors = es.eigenvectors().leftCols(m);
    return finalize(lv, k, opts.shift, std::move(values), std::move(vectors), opts.residual_tol);
}

// Shift-inverted Lanczos with full reorthogonalization. The known nullspace
// direction D^{1/2} 1 is deflated exactly: it is reported analytically as the
// first pair and projected out of every basis vector, which also stops the
// 1/shift amplification of round-off along that direction.
EigenPairs solve_lanczos(const LocalView& lv, int m, const EigenSolveOptions& opts) {
    const int n = lv.n;
    const int want = m - 1;  // nontrivial pairs
    SpMat k = build_laplacian(lv, opts.shift);
    Eigen::SimplicialLDLT<SpMat> ldlt(k);
    if (ldlt.info() != Eigen::Success)
        throw SolverError("eigensolver: LDLT factorization failed", 0.0);

    Eigen::VectorXd v1(n);
    for (int32_t v = 0; v < n; ++v) v1[v] = std::sqrt(static_cast<double>(lv.degree(v)));
    v1.normalize();

    double best_worst_residual = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 3; ++attempt) {
        SplitMix64 rng(opts.seed + 0x51ed270b0a9fdull * attempt);
        const int cap = std::min(opts.max_subspace, n);
        Eigen::MatrixXd q(n, std::min(64, cap));
        std::vector<double> alpha, beta;

        Eigen::VectorXd w(n);
        for (int i = 0; i < n; ++i) w[i] = rng.next_double() - 0.5;
        w -= v1.dot(w) * v1;
        w.normalize();
        q.col(0) = w;

        auto extract = [&](int steps) {
            // Ritz pairs of the tridiagonal section; mu descending = lambda ascending.
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
            for (int i = 0; i < steps; ++i) {
                t(i, i) = alpha[i];
                if (i + 1 < steps) t(i, i + 1) = t(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
            return es;
        };

        int steps = 0;
        bool converged = false;
        while (steps < cap && !converged) {
            Eigen::VectorXd cur = q.col(steps);
            w = ldlt.solve(cur);
            w -= v1.dot(w) * v1;
            if (steps > 0) w -= beta[steps - 1] * q.col(steps - 1);
            double a = cur.dot(w);
            alpha.push_back(a);
            w -= a * cur;
            // Two rounds of classical Gram-Schmidt against the whole basis.
            for (int pass = 0; pass < 2; ++pass) {
                w -= v1.dot(w) * v1;
                w -= q.leftCols(steps + 1) * (q.leftCols(steps + 1).transpose() * w);
            }
            double b = w.norm();
            ++steps;
            bool injected = false;
            if (b < 1e-12) {
                // Breakdown: the Krylov space is exhausted. Either we already
                // span enough directions or we inject a fresh random vector,
                // which starts an independent section (coupling beta of 0).
                if (steps >= want + 1) {
                    converged = true;
                    break;
                }
                for (int i = 0; i < n; ++i) w[i] = rng.next_double() - 0.5;
                for (int pass = 0; pass < 2; ++pass) {
                    w -= v1.dot(w) * v1;
                    w -= q.leftCols(steps) * (q.leftCols(steps).transpose() * w);
                }
                b = w.norm();
                if (b < 1e-12) break;  // component space truly exhausted
                injected = true;
            }
            if (steps < cap) {
                if (steps >= q.cols()) q.conservativeResize(Eigen::NoChange, std::min(steps + 64, cap));
                beta.push_back(injected ? 0.0 : b);
                q.col(steps) = w / b;
            }

            bool at_checkpoint = !injected && steps >= want + 2 && (steps % 8 == 0 || steps == cap);
            if (at_checkpoint) {
                auto es = extract(steps);
                bool all_ok = true;
                for (int i = 0; i < want; ++i) {
                    double mu = es.eigenvalues()[steps - 1 - i];
                    if (mu <= 0) {
                        all_ok = false;
                        break;
                    }
                    double bound = (steps < cap ? beta[steps - 1] : b) *
                                   std::abs(es.eigenvectors()(steps - 1, steps - 1 - i));
                    // ||L y - lambda y|| <= ||K|| * bound / mu with ||K|| < 2.1.
                    if (bound > 0.2 * opts.residual_tol * mu / 2.1) {
                        all_ok = false;
                        break;
                    }
                }
                if (all_ok) converged = true;
            }
        }

        int basis = steps;
        if (basis >= want + 1) {
            auto es = extract(basis);
            Eigen::VectorXd values(m);
            Eigen::MatrixXd vectors(n, m);
            values[0] = 0.0;
            vectors.col(0) = v1;
            for (int i = 0; i < want; ++i) {
                Eigen::VectorXd y = q.leftCols(basis) * es.eigenvectors().col(basis - 1 - i);
                y -= v1.dot(y) * v1;
                y.normalize();
                Eigen::VectorXd ky = k * y;
                values[i + 1] = y.dot(ky) - opts.shift;
                vectors.col(i + 1) = y;
            }
            // Ritz values come out ascending in lambda already; sort defensively.
            for (int i = 1; i + 1 < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    if (values[j] < values[i]) {
                        std::swap(values[i], values[j]);
                        vectors.col(i).swap(vectors.col(j));
                    }
            try {
                return finalize(lv, k, opts.shift, std::move(values), std::move(vectors),
                                opts.residual_tol);
            } catch (const SolverError& e) {
                best_worst_residual = std::min(best_worst_residual, e.residual);
                // fall through to restart with a fresh start vector
            }
        }
    }
    throw SolverError("eigensolver: no convergence after restarts, best residual " +
                          std::to_string(best_worst_residual),
                      best_worst_residual);
}

}  // namespace

EigenPairs smallest_eigenpairs(const LocalView& lv, int m, const EigenSolveOptions& opts) {
    if (m < 1 || m > lv.n) throw InvalidInput("eigensolver: need 1 <= m <= component size");
    if (!is_connected(lv)) throw InvalidInput("eigensolver: component is not connected");
    if (lv.n <= opts.dense_cutoff || m >= lv.n - 2) return solve_dense(lv, m, opts);
    return solve_lanczos(lv, m, opts);
}

EigenPairs smallest_eigenpairs(const Graph& g, const Component& comp, int m,
                               const EigenSolveOptions& opts) {
    return smallest_eigenpairs(make_local_view(g, comp), m, opts);
}

DiffusionMap embed(const LocalView& lv, int d, int t, SpectrumConvention convention,
                   const EigenSolveOptions& opts) {
    if (d < 1) throw InvalidInput("embed: d must be >= 1");
    if (t < 0) throw InvalidInput("embed: t must be >= 0");
    if (lv.n < d + 2) throw InvalidInput("embed: component smaller than d + 2");
    EigenPairs eig = smallest_eigenpairs(lv, d + 1, opts);
    DiffusionMap dm;
    dm.d = d;
    dm.t = t;
    dm.convention = convention;
    dm.points.resize(lv.n, d);
    for (int j = 0; j < d; ++j) {
        double lambda = eig.values[j + 1];
        double w = convention == SpectrumConvention::Paper ? lambda : 1.0 - lambda;
        double wt = 1.0;
        for (int p = 0; p < t; ++p) wt *= w;
        dm.points.col(j) = wt * eig.phi.col(j + 1);
    }
    return dm;
}

DiffusionMap embed(const Graph& g, const Component& comp, int d, int t,
                   SpectrumConvention convention, const EigenSolveOptions& opts) {
    return embed(make_local_view(g, comp), d, t, convention, opts);
}

}  // namespace hmsc
