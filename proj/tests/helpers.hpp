#pragma once

// Test-only utilities: independent oracles (finite differences, grid search,
// linear fits) kept separate from the library code they check.

#include <cmath>
#include <functional>
#include <vector>

#include "zosaddle/problems.hpp"

namespace testutil {

using zosaddle::Vec;

/// Central-difference approximation of the operator (grad_x f, -grad_y f),
/// independent of any analytic_F the problem carries.
inline Vec finite_difference_operator(const zosaddle::ProblemSpec& p,
                                      const zosaddle::SaddleIterate& z, double h = 1e-6) {
    Vec out(p.nx + p.ny, 0.0);
    Vec x(z.x), y(z.y);
    for (std::size_t i = 0; i < p.nx; ++i) {
        double keep = x[i];
        x[i] = keep + h;
        double fp = p.value(x, y);
        x[i] = keep - h;
        double fm = p.value(x, y);
        x[i] = keep;
        out[i] = (fp - fm) / (2.0 * h);
    }
    for (std::size_t j = 0; j < p.ny; ++j) {
        double keep = y[j];
        y[j] = keep + h;
        double fp = p.value(x, y);
        y[j] = keep - h;
        double fm = p.value(x, y);
        y[j] = keep;
        out[p.nx + j] = -(fp - fm) / (2.0 * h);
    }
    return out;
}

/// Random point on the probability simplex (normalized exponentials).
inline Vec random_simplex_point(std::size_t dim, zosaddle::RandomStream& rng) {
    Vec v(dim);
    double s = 0.0;
    for (double& x : v) {
        x = std::exp(rng.uniform(-1.5, 1.5));
        s += x;
    }
    for (double& x : v) x /= s;
    return v;
}

/// Enumerate the barycentric grid on a simplex of the given dimension with
/// `steps` subdivisions, invoking fn on every grid point.
inline void for_each_simplex_grid_point(std::size_t dim, int steps,
                                        const std::function<void(const Vec&)>& fn) {
    Vec point(dim, 0.0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int remaining) {
        if (i + 1 == dim) {
            point[i] = static_cast<double>(remaining) / steps;
            fn(point);
            return;
        }
        for (int t = 0; t <= remaining; ++t) {
            point[i] = static_cast<double>(t) / steps;
            rec(i + 1, remaining - t);
        }
    };
    rec(0, steps);
}

struct LineFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

/// Least-squares line through (x, y) pairs with the coefficient of
/// determination.
inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::size_t n = xs.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

/// Objective minimized by the prox-operator at center z: V_u(z) + <g, u>.
inline double prox_objective(const zosaddle::GeometrySetup& setup,
                             const zosaddle::SaddleIterate& center,
                             const zosaddle::SaddleIterate& u, std::span<const double> g) {
    double v = zosaddle::bregman(setup, u, center);
    v += zosaddle::dot(std::span<const double>(u.x), g.subspan(0, u.x.size()));
    v += zosaddle::dot(std::span<const double>(u.y), g.subspan(u.x.size(), u.y.size()));
    return v;
}

}  // namespace testutil
