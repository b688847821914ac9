#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "zosaddle/problems.hpp"

namespace zosaddle {

/// Raised when an operation needs analytic structure a problem does not
/// expose (exact operator, y-gradient, known solution).
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// noise model
// ---------------------------------------------------------------------------

enum class DeltaKind { zero, sine_adversarial, custom };

/// Stochastic + adversarial corruption of the value oracle.
///
/// One draw xi produces a vector c with E||c||_2^2 = sigma^2 and the oracle
/// returns f(z) + <c, z> + delta(z).  All evaluations within one estimator
/// call share the draw, so the finite differences see a stochastic-gradient
/// perturbation with second moment exactly sigma^2.  delta(z) is
/// deterministic and bounded by delta_cap.
struct NoiseModel {
    double sigma = 0.0;
    double delta_cap = 0.0;
    DeltaKind delta_kind = DeltaKind::zero;
    std::uint64_t stream_id = 0;
    Vec sine_w;  // fixed direction for the sine_adversarial kind
    std::function<double(std::span<const double>, std::span<const double>)> custom_delta;
};

inline NoiseModel make_noise(double sigma, double delta_cap, DeltaKind kind, std::size_t dim,
                             std::uint64_t stream_id = 0) {
    if (sigma < 0.0 || delta_cap < 0.0)
        throw std::invalid_argument("noise: sigma and delta_cap must be >= 0");
    NoiseModel nm;
    nm.sigma = sigma;
    nm.delta_cap = delta_cap;
    nm.delta_kind = kind;
    nm.stream_id = stream_id;
    if (kind == DeltaKind::sine_adversarial) {
        RandomStream rng(derive_seed(stream_id, "noise-direction", 0));
        nm.sine_w = sample_sphere(dim, rng);
    }
    return nm;
}

inline double delta_at(const NoiseModel& nm, std::span<const double> x,
                       std::span<const double> y) {
    double d = 0.0;
    switch (nm.delta_kind) {
        case DeltaKind::zero:
            return 0.0;
        case DeltaKind::sine_adversarial: {
            auto wx = std::span<const double>(nm.sine_w).subspan(0, x.size());
            auto wy = std::span<const double>(nm.sine_w).subspan(x.size(), y.size());
            d = nm.delta_cap * std::sin(1e3 * (dot(wx, x) + dot(wy, y)));
            break;
        }
        case DeltaKind::custom:
            d = nm.custom_delta(x, y);
            break;
    }
    if (std::abs(d) > nm.delta_cap + 1e-15)
        throw std::runtime_error("noise: realized |delta(z)| exceeds delta_cap");
    return d;
}

/// One realization of the stochastic noise; empty c means sigma = 0.
struct NoiseDraw {
    Vec c;
};

inline NoiseDraw draw_noise(const NoiseModel& nm, std::size_t dim, RandomStream& rng) {
    NoiseDraw d;
    if (nm.sigma > 0.0) {
        d.c.resize(dim);
        double scale = nm.sigma / std::sqrt(static_cast<double>(dim));
        for (double& v : d.c) v = scale * rng.normal();
    }
    return d;
}

/// f~(z, xi) = f(z) + <c(xi), z> + delta(z) for a fixed draw.
inline double eval_with(const ProblemSpec& problem, std::span<const double> x,
                        std::span<const double> y, const NoiseModel& nm, const NoiseDraw& draw) {
    double v = problem.value(x, y);
    if (!std::isfinite(v)) throw std::runtime_error("problem evaluation returned non-finite value");
    if (!draw.c.empty()) {
        auto cx = std::span<const double>(draw.c).subspan(0, x.size());
        auto cy = std::span<const double>(draw.c).subspan(x.size(), y.size());
        v += dot(cx, x) + dot(cy, y);
    }
    return v + delta_at(nm, x, y);
}

/// Noisy value oracle: draws a fresh xi and evaluates.  Deterministic given
/// (z, rng state).
inline double noisy_eval(const ProblemSpec& problem, const SaddleIterate& z, const NoiseModel& nm,
                         RandomStream& rng) {
    NoiseDraw d = draw_noise(nm, z.dim(), rng);
    return eval_with(problem, z.x, z.y, nm, d);
}

// ---------------------------------------------------------------------------
// gradient estimators
// ---------------------------------------------------------------------------

enum class EstimatorKind { random_direction, full_coordinate, mixed };

/// How the random directions (e_x, e_y) are produced: as the two blocks of a
/// single unit-sphere vector in R^(nx+ny), or as independent unit-sphere
/// vectors per block.  joint_split keeps the n/tau-scaled estimator unbiased
/// on linear objectives; independent_blocks rescales each block by n/n_block.
enum class DirectionMode { joint_split, independent_blocks };

struct EstimatorConfig {
    EstimatorKind kind = EstimatorKind::random_direction;
    double tau = 1e-3;
    DirectionMode direction_mode = DirectionMode::joint_split;
};

/// One estimator output plus the exact oracle accounting: oracle_calls is
/// the number of scalar f-evaluations consumed, gradient_calls the number of
/// exact y-gradient evaluations (mixed oracle only).
struct GradientSample {
    Vec g;
    int oracle_calls = 0;
    int gradient_calls = 0;
};

namespace detail {
inline void require_tau(const EstimatorConfig& cfg) {
    if (!(cfg.tau > 0.0) || !std::isfinite(cfg.tau))
        throw std::invalid_argument("estimator: smoothing tau must be positive");
}
}  // namespace detail

/// Random-direction two-point estimator with externally supplied directions
/// and noise draw; the three evaluations share the one draw.
///
///   x-block: (n/tau) (f~(x + tau e_x, y) - f~(x, y)) e_x
///   y-block: (n/tau) (f~(x, y) - f~(x, y + tau e_y)) e_y,  n = nx + ny.
inline GradientSample g_random_direction_with(const ProblemSpec& problem, const SaddleIterate& z,
                                              const EstimatorConfig& cfg, const NoiseModel& nm,
                                              std::span<const double> ex,
                                              std::span<const double> ey, const NoiseDraw& draw) {
    detail::require_tau(cfg);
    std::size_t nx = z.x.size(), ny = z.y.size();
    double n_total = static_cast<double>(nx + ny);

    double f0 = eval_with(problem, z.x, z.y, nm, draw);
    Vec xp(z.x);
    for (std::size_t i = 0; i < nx; ++i) xp[i] += cfg.tau * ex[i];
    double fx = eval_with(problem, xp, z.y, nm, draw);
    Vec yp(z.y);
    for (std::size_t j = 0; j < ny; ++j) yp[j] += cfg.tau * ey[j];
    double fy = eval_with(problem, z.x, yp, nm, draw);

    GradientSample out;
    out.g.resize(nx + ny);
    double sx = n_total / cfg.tau * (fx - f0);
    double sy = n_total / cfg.tau * (f0 - fy);
    for (std::size_t i = 0; i < nx; ++i) out.g[i] = sx * ex[i];
    for (std::size_t j = 0; j < ny; ++j) out.g[nx + j] = sy * ey[j];
    out.oracle_calls = 3;
    return out;
}

/// Full-coordinate estimator with a fixed draw: forward differences over the
/// standard basis, sharing one base evaluation and one draw; the y-block is
/// sign-flipped to estimate (grad_x f, -grad_y f).
inline GradientSample g_full_coordinate_with(const ProblemSpec& problem, const SaddleIterate& z,
                                             const EstimatorConfig& cfg, const NoiseModel& nm,
                                             const NoiseDraw& draw) {
    detail::require_tau(cfg);
    std::size_t nx = z.x.size(), ny = z.y.size();
    double base = eval_with(problem, z.x, z.y, nm, draw);

    GradientSample out;
    out.g.resize(nx + ny);
    Vec xp(z.x);
    for (std::size_t i = 0; i < nx; ++i) {
        double keep = xp[i];
        xp[i] = keep + cfg.tau;
        out.g[i] = (eval_with(problem, xp, z.y, nm, draw) - base) / cfg.tau;
        xp[i] = keep;
    }
    Vec yp(z.y);
    for (std::size_t j = 0; j < ny; ++j) {
        double keep = yp[j];
        yp[j] = keep + cfg.tau;
        out.g[nx + j] = (base - eval_with(problem, z.x, yp, nm, draw)) / cfg.tau;
        yp[j] = keep;
    }
    out.oracle_calls = static_cast<int>(nx + ny) + 1;
    return out;
}

/// Mixed oracle with a fixed draw: full-coordinate differences on the
/// x-block (nx + 1 evaluations), exact stochastic y-gradient on the y-block.
inline GradientSample g_mixed_with(const ProblemSpec& problem, const SaddleIterate& z,
                                   const EstimatorConfig& cfg, const NoiseModel& nm,
                                   const NoiseDraw& draw) {
    detail::require_tau(cfg);
    if (!problem.has_y_gradient())
        throw CapabilityError("mixed oracle: problem exposes no y-gradient");
    std::size_t nx = z.x.size(), ny = z.y.size();
    double base = eval_with(problem, z.x, z.y, nm, draw);

    GradientSample out;
    out.g.resize(nx + ny);
    Vec xp(z.x);
    for (std::size_t i = 0; i < nx; ++i) {
        double keep = xp[i];
        xp[i] = keep + cfg.tau;
        out.g[i] = (eval_with(problem, xp, z.y, nm, draw) - base) / cfg.tau;
        xp[i] = keep;
    }
    Vec gy = problem.y_gradient(z.x, z.y);
    for (std::size_t j = 0; j < ny; ++j) {
        double noise = draw.c.empty() ? 0.0 : draw.c[nx + j];
        out.g[nx + j] = -(gy[j] + noise);
    }
    out.oracle_calls = static_cast<int>(nx) + 1;
    out.gradient_calls = 1;
    return out;
}

/// Direction pair for the random-direction estimator under a given mode.
struct DirectionPair {
    Vec ex, ey;
};

inline DirectionPair sample_directions(std::size_t nx, std::size_t ny, DirectionMode mode,
                                       RandomStream& rng) {
    if (mode == DirectionMode::joint_split) {
        Vec e = sample_sphere(nx + ny, rng);
        return DirectionPair{Vec(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(nx)),
                             Vec(e.begin() + static_cast<std::ptrdiff_t>(nx), e.end())};
    }
    Vec ex = sample_sphere(nx, rng);
    Vec ey = sample_sphere(ny, rng);
    return DirectionPair{std::move(ex), std::move(ey)};
}

inline GradientSample g_random_direction(const ProblemSpec& problem, const SaddleIterate& z,
                                         const EstimatorConfig& cfg, const NoiseModel& nm,
                                         RandomStream& rng) {
    detail::require_tau(cfg);
    DirectionPair d = sample_directions(z.x.size(), z.y.size(), cfg.direction_mode, rng);
    NoiseDraw draw = draw_noise(nm, z.dim(), rng);
    return g_random_direction_with(problem, z, cfg, nm, d.ex, d.ey, draw);
}

inline GradientSample g_full_coordinate(const ProblemSpec& problem, const SaddleIterate& z,
                                        const EstimatorConfig& cfg, const NoiseModel& nm,
                                        RandomStream& rng) {
    detail::require_tau(cfg);
    NoiseDraw draw = draw_noise(nm, z.dim(), rng);
    return g_full_coordinate_with(problem, z, cfg, nm, draw);
}

inline GradientSample g_mixed(const ProblemSpec& problem, const SaddleIterate& z,
                              const EstimatorConfig& cfg, const NoiseModel& nm, RandomStream& rng) {
    detail::require_tau(cfg);
    NoiseDraw draw = draw_noise(nm, z.dim(), rng);
    return g_mixed_with(problem, z, cfg, nm, draw);
}

inline GradientSample sample_gradient(const ProblemSpec& problem, const SaddleIterate& z,
                                      const EstimatorConfig& cfg, const NoiseModel& nm,
                                      RandomStream& rng) {
    switch (cfg.kind) {
        case EstimatorKind::random_direction:
            return g_random_direction(problem, z, cfg, nm, rng);
        case EstimatorKind::full_coordinate:
            return g_full_coordinate(problem, z, cfg, nm, rng);
        case EstimatorKind::mixed:
            return g_mixed(problem, z, cfg, nm, rng);
    }
    throw std::invalid_argument("unknown estimator kind");
}

// ---------------------------------------------------------------------------
// Monte-Carlo diagnostics
// ---------------------------------------------------------------------------

struct BiasReport {
    Vec bias;                // mean(g) - F(z)
    double bias_q_norm = 0;  // ||mean(g) - F(z)||_q
    Vec stderr_components;   // componentwise standard error of the mean
    bool stderr_usable = false;
};

/// Empirical estimator bias against the analytic operator at a fixed point.
inline BiasReport estimator_bias_mc(const ProblemSpec& problem, const SaddleIterate& z,
                                    const EstimatorConfig& cfg, const NoiseModel& nm,
                                    const NormExponent& q, std::size_t samples,
                                    RandomStream& rng) {
    if (!problem.has_analytic_F())
        throw CapabilityError("bias diagnostic: problem exposes no analytic operator");
    if (samples == 0) throw std::invalid_argument("bias diagnostic: need at least one sample");
    std::size_t n = z.dim();
    Vec mean(n, 0.0), m2(n, 0.0);
    for (std::size_t s = 0; s < samples; ++s) {
        GradientSample g = sample_gradient(problem, z, cfg, nm, rng);
        for (std::size_t i = 0; i < n; ++i) {
            double d = g.g[i] - mean[i];
            mean[i] += d / static_cast<double>(s + 1);
            m2[i] += d * (g.g[i] - mean[i]);
        }
    }
    Vec f = problem.analytic_F(z.x, z.y);
    BiasReport rep;
    rep.bias.resize(n);
    for (std::size_t i = 0; i < n; ++i) rep.bias[i] = mean[i] - f[i];
    rep.bias_q_norm = dual_norm(q, rep.bias);
    rep.stderr_usable = samples >= 2;
    rep.stderr_components.assign(n, std::numeric_limits<double>::quiet_NaN());
    if (rep.stderr_usable) {
        for (std::size_t i = 0; i < n; ++i)
            rep.stderr_components[i] = std::sqrt(
                m2[i] / static_cast<double>(samples - 1) / static_cast<double>(samples));
    }
    return rep;
}

struct SecondMomentReport {
    double mean = 0.0;
    double stderr_mean = 0.0;
};

/// Monte-Carlo second moment of the estimator: E||g||_q^2 for the
/// random-direction oracle, E||g - F(z)||_q^2 for full-coordinate and mixed.
inline SecondMomentReport estimator_second_moment_mc(const ProblemSpec& problem,
                                                     const SaddleIterate& z,
                                                     const EstimatorConfig& cfg,
                                                     const NoiseModel& nm, const NormExponent& q,
                                                     std::size_t samples, RandomStream& rng) {
    if (samples == 0) throw std::invalid_argument("second-moment diagnostic: need samples");
    bool centered = cfg.kind != EstimatorKind::random_direction;
    Vec f;
    if (centered) {
        if (!problem.has_analytic_F())
            throw CapabilityError("second-moment diagnostic: problem exposes no analytic operator");
        f = problem.analytic_F(z.x, z.y);
    }
    double mean = 0.0, m2 = 0.0;
    Vec buf(z.dim());
    for (std::size_t s = 0; s < samples; ++s) {
        GradientSample g = sample_gradient(problem, z, cfg, nm, rng);
        double val;
        if (centered) {
            for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = g.g[i] - f[i];
            val = dual_norm(q, buf);
        } else {
            val = dual_norm(q, g.g);
        }
        val *= val;
        double d = val - mean;
        mean += d / static_cast<double>(s + 1);
        m2 += d * (val - mean);
    }
    SecondMomentReport rep;
    rep.mean = mean;
    rep.stderr_mean = samples >= 2 ? std::sqrt(m2 / static_cast<double>(samples - 1) /
                                               static_cast<double>(samples))
                                   : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

// ---------------------------------------------------------------------------
// theoretical envelopes for the estimator moments
// ---------------------------------------------------------------------------

/// ||E g_d - F(z)||_q <= 2 n^(1/q + 1/2) sqrt(rho_n) (L tau + 2 Delta / tau).
inline double rd_bias_bound(std::size_t n, const NormExponent& q, double L, double tau,
                            double delta) {
    double rho = rho_n(q, n);
    double nq = q.is_infinite() ? 1.0 : std::pow(static_cast<double>(n), 1.0 / q.value());
    double pref = 2.0 * nq * std::sqrt(static_cast<double>(n)) * std::sqrt(rho);
    return pref * L * tau + 2.0 * pref * delta / tau;
}

/// E||g_d||_q^2 <= 48 n^(2/q) rho (||F(z)-F(z*)||^2 + ||F(z*)||^2 + sigma^2)
///              + 8 n^(2/q + 1) rho L^2 tau^2 + 16 n^(2/q + 1) rho Delta^2/tau^2.
inline double rd_second_moment_bound(std::size_t n, const NormExponent& q, double f_dist_sq,
                                     double f_star_sq, double sigma, double L, double tau,
                                     double delta) {
    double rho = rho_n(q, n);
    double n2q = q.is_infinite() ? 1.0 : std::pow(static_cast<double>(n), 2.0 / q.value());
    double nd = static_cast<double>(n);
    return 48.0 * n2q * rho * (f_dist_sq + f_star_sq + sigma * sigma) +
           8.0 * n2q * nd * rho * L * L * tau * tau +
           16.0 * n2q * nd * rho * delta * delta / (tau * tau);
}

/// ||E g_f - F(z)||_q <= sqrt(n) L tau + 2 sqrt(n) Delta / tau.
inline double fc_bias_bound(std::size_t n, double L, double tau, double delta) {
    double rn = std::sqrt(static_cast<double>(n));
    return rn * L * tau + 2.0 * rn * delta / tau;
}

/// E||g_f - F(z)||_q^2 <= 3 sigma^2 + 3 n L2^2 tau^2 + 6 n Delta^2 / tau^2.
inline double fc_second_moment_bound(std::size_t n, double sigma, double L2, double tau,
                                     double delta) {
    double nd = static_cast<double>(n);
    return 3.0 * sigma * sigma + 3.0 * nd * L2 * L2 * tau * tau +
           6.0 * nd * delta * delta / (tau * tau);
}

}  // namespace zosaddle
