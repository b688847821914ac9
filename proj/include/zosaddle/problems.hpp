#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "zosaddle/geometry.hpp"

namespace zosaddle {

// ---------------------------------------------------------------------------
// dense matrices (row-major)
// ---------------------------------------------------------------------------

struct Matrix {
    std::size_t rows = 0, cols = 0;
    Vec a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

inline Vec matvec(const Matrix& m, std::span<const double> x) {
    Vec out(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double s = 0.0;
        const double* row = m.a.data() + i * m.cols;
        for (std::size_t j = 0; j < m.cols; ++j) s += row[j] * x[j];
        out[i] = s;
    }
    return out;
}

inline Vec mat_t_vec(const Matrix& m, std::span<const double> y) {
    Vec out(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* row = m.a.data() + i * m.cols;
        for (std::size_t j = 0; j < m.cols; ++j) out[j] += row[j] * y[i];
    }
    return out;
}

inline double max_abs(const Matrix& m) {
    double v = 0.0;
    for (double x : m.a) v = std::max(v, std::abs(x));
    return v;
}

/// Spectral norm by power iteration on C^T C (deterministic start vector).
inline double spectral_norm(const Matrix& m, double tol = 1e-10, int max_iter = 10000) {
    if (m.rows == 0 || m.cols == 0) return 0.0;
    Vec v(m.cols);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = 1.0 + static_cast<double>(i) / static_cast<double>(v.size());
    double vn = norm2(v);
    for (double& x : v) x /= vn;
    double sigma = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vec w = matvec(m, v);  // C v, with ||v|| = 1
        double s = norm2(w);
        if (s == 0.0) return 0.0;
        Vec u = mat_t_vec(m, w);  // power step on C^T C
        double un = norm2(u);
        if (un == 0.0) return s;
        for (double& x : u) x /= un;
        v = std::move(u);
        if (std::abs(s - sigma) <= tol * std::max(1.0, s)) return s;
        sigma = s;
    }
    return sigma;
}

// CSV layout: first line "rows,cols", then one comma-separated line per row.
inline void save_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << m.rows << "," << m.cols << "\n";
    char buf[64];
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m.at(i, j));
            out << buf << (j + 1 < m.cols ? "," : "\n");
        }
    }
}

inline Matrix load_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("matrix file is empty");
    std::size_t rows = 0, cols = 0;
    {
        std::istringstream hdr(line);
        char comma = 0;
        if (!(hdr >> rows >> comma >> cols) || comma != ',' || rows == 0 || cols == 0)
            throw std::runtime_error("bad matrix header (want rows,cols): " + line);
    }
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("matrix file truncated");
        std::istringstream row(line);
        std::string cell;
        for (std::size_t j = 0; j < cols; ++j) {
            if (!std::getline(row, cell, ',')) throw std::runtime_error("matrix row too short");
            m.at(i, j) = std::stod(cell);
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// problem instances
// ---------------------------------------------------------------------------

enum class SmoothnessClass { smooth, firmly_smooth, both };

struct ProblemConstants {
    double L = 0.0;   // operator Lipschitz constant, Euclidean norm
    double L2 = 0.0;  // second-moment Lipschitz bound (equals L when noise-free)
    double mu = 0.0;  // strong convexity/concavity modulus, 0 if merely convex
    SmoothnessClass smoothness = SmoothnessClass::smooth;
};

/// A saddle-point instance: deterministic value oracle plus whatever analytic
/// structure the instance can offer (operator F, exact y-gradient, solution).
/// All evaluators are defined on an open neighborhood of the feasible set so
/// tau-perturbations used by the estimators stay well-defined.
struct ProblemSpec {
    std::size_t nx = 0, ny = 0;
    FeasibleSet set;
    std::function<double(std::span<const double>, std::span<const double>)> value;
    std::function<Vec(std::span<const double>, std::span<const double>)> analytic_F;
    std::function<Vec(std::span<const double>, std::span<const double>)> y_gradient;
    std::optional<SaddleIterate> solution;
    ProblemConstants constants;
    std::shared_ptr<const Matrix> payoff;  // present for bilinear matrix games

    bool has_analytic_F() const { return static_cast<bool>(analytic_F); }
    bool has_y_gradient() const { return static_cast<bool>(y_gradient); }

    double eval(const SaddleIterate& z) const { return value(z.x, z.y); }
    Vec operator_at(const SaddleIterate& z) const {
        if (!analytic_F) throw std::runtime_error("problem exposes no analytic operator");
        return analytic_F(z.x, z.y);
    }
};

/// Bilinear matrix game f(x, y) = y^T C x on Delta_n x Delta_k.
inline ProblemSpec make_matrix_game(Matrix C) {
    if (C.rows == 0 || C.cols == 0) throw std::invalid_argument("matrix game: empty payoff");
    if (!all_finite(C.a)) throw std::invalid_argument("matrix game: non-finite payoff entries");
    auto cp = std::make_shared<const Matrix>(std::move(C));
    ProblemSpec p;
    p.nx = cp->cols;
    p.ny = cp->rows;
    p.set = FeasibleSet{SimplexBlock{p.nx}, SimplexBlock{p.ny}};
    p.payoff = cp;
    p.value = [cp](std::span<const double> x, std::span<const double> y) {
        return dot(y, matvec(*cp, x));
    };
    p.analytic_F = [cp](std::span<const double> x, std::span<const double> y) {
        Vec fx = mat_t_vec(*cp, y);        // grad_x = C^T y
        Vec cx = matvec(*cp, x);
        Vec out = std::move(fx);
        out.reserve(out.size() + cx.size());
        for (double v : cx) out.push_back(-v);  // -grad_y = -C x
        return out;
    };
    p.y_gradient = [cp](std::span<const double> x, std::span<const double>) {
        return matvec(*cp, x);
    };
    double L = spectral_norm(*cp);
    p.constants = ProblemConstants{L, L, 0.0, SmoothnessClass::smooth};
    return p;
}

/// The benchmark payoff matrix: i.i.d. U[0,1] entries, one uniformly chosen
/// row overwritten with U[5,10], then one element of that row overwritten
/// with U[1,5].
inline Matrix generate_paper_matrix(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("matrix generator: n must be >= 2");
    RandomStream rng(seed);
    Matrix m(n, n);
    for (double& v : m.a) v = rng.uniform01();
    std::size_t row = static_cast<std::size_t>(rng.below(n));
    for (std::size_t j = 0; j < n; ++j) m.at(row, j) = rng.uniform(5.0, 10.0);
    std::size_t col = static_cast<std::size_t>(rng.below(n));
    m.at(row, col) = rng.uniform(1.0, 5.0);
    return m;
}

/// Strongly-convex-strongly-concave quadratic
///   f(x, y) = (mu/2)||x||^2 + x^T A y - (mu/2)||y||^2
/// with solution z* = 0, constrained to (large) Euclidean balls.
inline ProblemSpec make_sc_quadratic(std::size_t nx, std::size_t ny, double mu, Matrix A,
                                     double radius = 10.0) {
    if (!(mu > 0.0)) throw std::invalid_argument("sc quadratic: mu must be positive");
    if (A.rows != nx || A.cols != ny) throw std::invalid_argument("sc quadratic: A must be nx x ny");
    auto ap = std::make_shared<const Matrix>(std::move(A));
    ProblemSpec p;
    p.nx = nx;
    p.ny = ny;
    p.set = FeasibleSet{Ball2Block{Vec(nx, 0.0), radius}, Ball2Block{Vec(ny, 0.0), radius}};
    p.value = [ap, mu](std::span<const double> x, std::span<const double> y) {
        Vec ay = matvec(*ap, y);
        return 0.5 * mu * norm2_sq(x) + dot(x, ay) - 0.5 * mu * norm2_sq(y);
    };
    p.analytic_F = [ap, mu](std::span<const double> x, std::span<const double> y) {
        Vec ay = matvec(*ap, y);   // A y
        Vec atx = mat_t_vec(*ap, x);  // A^T x
        Vec out(x.size() + y.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = mu * x[i] + ay[i];
        for (std::size_t j = 0; j < y.size(); ++j) out[x.size() + j] = -atx[j] + mu * y[j];
        return out;
    };
    p.y_gradient = [ap, mu](std::span<const double> x, std::span<const double> y) {
        Vec g = mat_t_vec(*ap, x);  // grad_y = A^T x - mu y
        for (std::size_t j = 0; j < y.size(); ++j) g[j] -= mu * y[j];
        return g;
    };
    p.solution = SaddleIterate{Vec(nx, 0.0), Vec(ny, 0.0)};
    double an = spectral_norm(*ap);
    double L = mu + an;
    // firm smoothness ||F1 - F2||^2 <= L <F1 - F2, z1 - z2> needs mu >= ||A||
    auto cls = (mu >= an) ? SmoothnessClass::both : SmoothnessClass::smooth;
    p.constants = ProblemConstants{L, L, mu, cls};
    return p;
}

/// Scalar function with an optional gradient, for Lagrangian construction.
struct ScalarFn {
    std::function<double(std::span<const double>)> value;
    std::function<Vec(std::span<const double>)> gradient;  // optional
};

/// Lagrangian saddle problem L(x, lambda) = f(x) + <lambda, g(x)> over a box
/// X and the truncated positive orthant [0, lambda_max]^m.  The multiplier
/// gradient is g(x) itself, so the mixed oracle gets it with no extra
/// function evaluations.
inline ProblemSpec make_lagrangian(ScalarFn objective, std::vector<ScalarFn> constraints,
                                   Vec x_lower, Vec x_upper, double lambda_max,
                                   ProblemConstants constants = {}) {
    if (constraints.empty()) throw std::invalid_argument("lagrangian: need at least one constraint");
    if (x_lower.size() != x_upper.size() || x_lower.empty())
        throw std::invalid_argument("lagrangian: bad box bounds");
    std::size_t nx = x_lower.size();
    std::size_t m = constraints.size();
    auto obj = std::make_shared<ScalarFn>(std::move(objective));
    auto cons = std::make_shared<std::vector<ScalarFn>>(std::move(constraints));

    ProblemSpec p;
    p.nx = nx;
    p.ny = m;
    p.set = FeasibleSet{BoxBlock{std::move(x_lower), std::move(x_upper)},
                        BoxBlock{Vec(m, 0.0), Vec(m, lambda_max)}};
    p.value = [obj, cons](std::span<const double> x, std::span<const double> lam) {
        double v = obj->value(x);
        for (std::size_t i = 0; i < cons->size(); ++i) v += lam[i] * (*cons)[i].value(x);
        return v;
    };
    p.y_gradient = [cons](std::span<const double> x, std::span<const double>) {
        Vec g(cons->size());
        for (std::size_t i = 0; i < cons->size(); ++i) g[i] = (*cons)[i].value(x);
        return g;
    };
    bool have_grads = static_cast<bool>(obj->gradient);
    for (const auto& c : *cons) have_grads = have_grads && static_cast<bool>(c.gradient);
    if (have_grads) {
        p.analytic_F = [obj, cons, nx, m](std::span<const double> x, std::span<const double> lam) {
            Vec out(nx + m, 0.0);
            Vec gf = obj->gradient(x);
            for (std::size_t i = 0; i < nx; ++i) out[i] = gf[i];
            for (std::size_t k = 0; k < m; ++k) {
                Vec gk = (*cons)[k].gradient(x);
                for (std::size_t i = 0; i < nx; ++i) out[i] += lam[k] * gk[i];
                out[nx + k] = -(*cons)[k].value(x);  // -grad_lambda
            }
            return out;
        };
    }
    p.constants = constants;
    return p;
}

/// Toy KKT instance: min x^2 s.t. 1 - x <= 0 on X = [0, 2], lambda in [0, 10].
/// Stationarity 2x = lambda with the active constraint x = 1 gives the saddle
/// point (x*, lambda*) = (1, 2).
inline ProblemSpec make_lagrangian_toy() {
    ScalarFn f{[](std::span<const double> x) { return x[0] * x[0]; },
               [](std::span<const double> x) { return Vec{2.0 * x[0]}; }};
    ScalarFn g{[](std::span<const double> x) { return 1.0 - x[0]; },
               [](std::span<const double>) { return Vec{-1.0}; }};
    // operator Jacobian [[2, -1], [1, 0]] has spectral norm 1 + sqrt(2)
    ProblemConstants c{1.0 + std::numbers::sqrt2, 1.0 + std::numbers::sqrt2, 0.0,
                       SmoothnessClass::smooth};
    auto p = make_lagrangian(std::move(f), {std::move(g)}, Vec{0.0}, Vec{2.0}, 10.0, c);
    p.solution = SaddleIterate{Vec{1.0}, Vec{2.0}};
    return p;
}

}  // namespace zosaddle
