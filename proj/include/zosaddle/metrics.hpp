#pragma once

#include <optional>

#include "zosaddle/oracles.hpp"

namespace zosaddle {

/// Per-iteration measurements; optional fields stay empty when the problem
/// lacks the structure to compute them.
struct TraceRecord {
    long k = 0;
    long long oracle_calls = 0;  // cumulative, value + gradient calls
    std::optional<double> eps_sad;
    std::optional<double> residual_F;             // ||F(z) - F(z*)||_2^2
    std::optional<double> bregman_to_solution;    // V_z(z*)
    std::optional<double> euclid_sq_to_solution;  // ||z - z*||_2^2
    double wall_ms = 0.0;
};

/// Duality gap of a bilinear simplex game at (xbar, ybar):
///   max_j (C xbar)_j - min_i (C^T ybar)_i.
/// A linear objective over a simplex peaks at a vertex, so scanning the
/// payoff products is exact.
inline double eps_sad_bilinear(const Matrix& C, std::span<const double> xbar,
                               std::span<const double> ybar) {
    if (xbar.size() != C.cols || ybar.size() != C.rows)
        throw std::invalid_argument("eps_sad: strategy dimensions do not match payoff");
    SetBlock sx = SimplexBlock{C.cols}, sy = SimplexBlock{C.rows};
    if (!block_contains(sx, xbar, 1e-9) || !block_contains(sy, ybar, 1e-9))
        throw std::invalid_argument("eps_sad: strategies must lie on the probability simplex");
    Vec cx = matvec(C, xbar);
    Vec cty = mat_t_vec(C, ybar);
    double best_y = cx[0], best_x = cty[0];
    for (double v : cx) best_y = std::max(best_y, v);
    for (double v : cty) best_x = std::min(best_x, v);
    return best_y - best_x;
}

/// Squared operator residual ||F(z) - F(z*)||_2^2.
inline double residual_F(const ProblemSpec& problem, const SaddleIterate& z) {
    if (!problem.has_analytic_F() || !problem.solution)
        throw CapabilityError("residual: needs analytic operator and known solution");
    Vec fz = problem.analytic_F(z.x, z.y);
    Vec fs = problem.analytic_F(problem.solution->x, problem.solution->y);
    double s = 0.0;
    for (std::size_t i = 0; i < fz.size(); ++i) {
        double d = fz[i] - fs[i];
        s += d * d;
    }
    return s;
}

struct DistancePair {
    double bregman = 0.0;
    double euclid_sq = 0.0;
};

/// (V_z(z*), ||z - z*||_2^2) under the active geometry.
inline DistancePair distance_metrics(const GeometrySetup& setup, const SaddleIterate& z,
                                     const SaddleIterate& zstar) {
    return DistancePair{bregman(setup, z, zstar), euclid_sq(z, zstar)};
}

}  // namespace zosaddle
