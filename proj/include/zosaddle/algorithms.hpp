#pragma once

#include <chrono>
#include <iostream>
#include <limits>
#include <optional>

#include "zosaddle/metrics.hpp"

namespace zosaddle {

enum class Algorithm { zovia, zoesvia, zosc_esvia, zoesvia_same_direction };
enum class OutputMode { last_iterate, averaged };

/// Everything one solver run needs besides the problem and geometry.
/// `iterations` counts loop bodies (the listing's k = 0..N has N+1 of them);
/// a positive `oracle_budget` stops the run once cumulative calls reach it.
struct RunConfig {
    Algorithm algorithm = Algorithm::zoesvia;
    EstimatorConfig estimator;
    double gamma = 0.1;
    long iterations = 100;
    std::uint64_t seed = 0;
    OutputMode output_mode = OutputMode::averaged;
    int trace_cadence = 1;
    long long oracle_budget = 0;  // 0 = no budget
    std::optional<SaddleIterate> start;
};

struct RunResult {
    SaddleIterate final;
    SaddleIterate averaged;
    std::vector<TraceRecord> trace;
    long long total_oracle_calls = 0;    // scalar f-evaluations
    long long total_gradient_calls = 0;  // exact y-gradient evaluations
    long iterations_run = 0;
};

/// Arithmetic mean of a set of iterates (the averaged output z-bar).
inline SaddleIterate average_iterates(std::span<const SaddleIterate> iterates) {
    if (iterates.empty()) throw std::invalid_argument("average_iterates: empty trace");
    SaddleIterate acc{Vec(iterates[0].x.size(), 0.0), Vec(iterates[0].y.size(), 0.0)};
    for (const auto& z : iterates) {
        for (std::size_t i = 0; i < acc.x.size(); ++i) acc.x[i] += z.x[i];
        for (std::size_t i = 0; i < acc.y.size(); ++i) acc.y[i] += z.y[i];
    }
    double inv = 1.0 / static_cast<double>(iterates.size());
    for (double& v : acc.x) v *= inv;
    for (double& v : acc.y) v *= inv;
    return acc;
}

namespace detail {

struct RunningMean {
    Vec sx, sy;
    long count = 0;

    void add(const SaddleIterate& z) {
        if (count == 0) {
            sx.assign(z.x.size(), 0.0);
            sy.assign(z.y.size(), 0.0);
        }
        for (std::size_t i = 0; i < sx.size(); ++i) sx[i] += z.x[i];
        for (std::size_t i = 0; i < sy.size(); ++i) sy[i] += z.y[i];
        ++count;
    }

    SaddleIterate mean() const {
        SaddleIterate m{sx, sy};
        double inv = 1.0 / static_cast<double>(count);
        for (double& v : m.x) v *= inv;
        for (double& v : m.y) v *= inv;
        return m;
    }
};

class TraceBuilder {
public:
    TraceBuilder(const ProblemSpec& problem, const GeometrySetup& setup, const RunConfig& cfg)
        : problem_(problem), setup_(setup), cfg_(cfg),
          t0_(std::chrono::steady_clock::now()) {}

    void record(long k, bool force, long long cum_calls, const SaddleIterate& current,
                const RunningMean& avg, std::vector<TraceRecord>& out) {
        if (!force && cfg_.trace_cadence > 1 && k % cfg_.trace_cadence != 0) return;
        const SaddleIterate point =
            (cfg_.output_mode == OutputMode::averaged && avg.count > 0) ? avg.mean() : current;
        TraceRecord r;
        r.k = k;
        r.oracle_calls = cum_calls;
        if (problem_.payoff && setup_.set.is_simplex_product())
            r.eps_sad = eps_sad_bilinear(*problem_.payoff, point.x, point.y);
        if (problem_.solution) {
            if (problem_.has_analytic_F()) r.residual_F = residual_F(problem_, point);
            DistancePair d = distance_metrics(setup_, point, *problem_.solution);
            r.bregman_to_solution = d.bregman;
            r.euclid_sq_to_solution = d.euclid_sq;
        }
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              t0_)
                        .count();
        out.push_back(std::move(r));
    }

private:
    const ProblemSpec& problem_;
    const GeometrySetup& setup_;
    const RunConfig& cfg_;
    std::chrono::steady_clock::time_point t0_;
};

inline Vec scaled(double gamma, const Vec& g) {
    Vec s(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) s[i] = gamma * g[i];
    return s;
}

inline void validate_common(const ProblemSpec& problem, const GeometrySetup& setup,
                            const RunConfig& cfg) {
    if (!(cfg.gamma > 0.0)) throw std::invalid_argument("run: step size gamma must be positive");
    if (cfg.iterations < 1 && cfg.oracle_budget <= 0)
        throw std::invalid_argument("run: need iterations >= 1 or a positive oracle budget");
    if (cfg.trace_cadence < 1) throw std::invalid_argument("run: trace cadence must be >= 1");
    if (setup.set.dim_x() != problem.nx || setup.set.dim_y() != problem.ny)
        throw std::invalid_argument("run: geometry set does not match problem dimensions");
    if (cfg.start && (cfg.start->x.size() != problem.nx || cfg.start->y.size() != problem.ny))
        throw std::invalid_argument("run: start iterate has wrong dimensions");
}

inline long effective_iterations(const RunConfig& cfg) {
    if (cfg.iterations >= 1) return cfg.iterations;
    return std::numeric_limits<long>::max();  // budget-bounded
}

inline bool budget_exhausted(const RunConfig& cfg, long long calls) {
    return cfg.oracle_budget > 0 && calls >= cfg.oracle_budget;
}

}  // namespace detail

/// Mirror-descent loop: z_{k+1} = prox_{z_k}(gamma * grad(z_k)), fresh
/// direction and noise every iteration.  Averaged output is the mean of the
/// produced iterates.
inline RunResult run_zovia(const ProblemSpec& problem, const GeometrySetup& setup,
                           const RunConfig& cfg, const NoiseModel& noise = {}) {
    detail::validate_common(problem, setup, cfg);
    if (cfg.estimator.kind == EstimatorKind::mixed)
        throw std::invalid_argument("zovia: estimator must be random_direction or full_coordinate");

    RandomStream rng(cfg.seed);
    SaddleIterate z = cfg.start ? *cfg.start : center_point(setup.set);
    detail::RunningMean avg;
    detail::TraceBuilder tracer(problem, setup, cfg);
    RunResult res;
    long max_iter = detail::effective_iterations(cfg);

    for (long k = 0; k < max_iter; ++k) {
        if (detail::budget_exhausted(cfg, res.total_oracle_calls + res.total_gradient_calls)) break;
        GradientSample d;
        try {
            d = sample_gradient(problem, z, cfg.estimator, noise, rng);
            z = prox(setup, z, detail::scaled(cfg.gamma, d.g));
        } catch (const std::exception& e) {
            throw std::runtime_error("zovia: iteration " + std::to_string(k) + ": " + e.what());
        }
        res.total_oracle_calls += d.oracle_calls;
        res.total_gradient_calls += d.gradient_calls;
        avg.add(z);
        res.iterations_run = k + 1;
        bool last = (k + 1 == max_iter) ||
                    detail::budget_exhausted(cfg, res.total_oracle_calls + res.total_gradient_calls);
        tracer.record(k, last, res.total_oracle_calls + res.total_gradient_calls, z, avg,
                      res.trace);
    }
    res.final = z;
    res.averaged = avg.count > 0 ? avg.mean() : z;
    return res;
}

namespace detail {

// Shared extra-step body for zoESVIA and its same-direction variant.
inline RunResult run_extra_step(const ProblemSpec& problem, const GeometrySetup& setup,
                                const RunConfig& cfg, const NoiseModel& noise,
                                bool same_direction) {
    validate_common(problem, setup, cfg);
    if (same_direction && cfg.estimator.kind == EstimatorKind::mixed)
        throw std::invalid_argument(
            "same-direction variant: estimator must be random_direction or full_coordinate");

    RandomStream rng(cfg.seed);
    SaddleIterate z = cfg.start ? *cfg.start : center_point(setup.set);
    RunningMean avg;
    TraceBuilder tracer(problem, setup, cfg);
    RunResult res;
    long max_iter = effective_iterations(cfg);
    std::size_t nx = problem.nx, ny = problem.ny;

    for (long k = 0; k < max_iter; ++k) {
        if (budget_exhausted(cfg, res.total_oracle_calls + res.total_gradient_calls)) break;
        try {
            GradientSample d_k, d_half;
            SaddleIterate z_half{};
            if (!same_direction) {
                d_k = sample_gradient(problem, z, cfg.estimator, noise, rng);
                z_half = prox(setup, z, scaled(cfg.gamma, d_k.g));
                d_half = sample_gradient(problem, z_half, cfg.estimator, noise, rng);
            } else {
                // one (e, xi) pair serves both half-steps of the iteration
                DirectionPair dir;
                if (cfg.estimator.kind == EstimatorKind::random_direction)
                    dir = sample_directions(nx, ny, cfg.estimator.direction_mode, rng);
                NoiseDraw draw = draw_noise(noise, nx + ny, rng);
                if (cfg.estimator.kind == EstimatorKind::random_direction) {
                    d_k = g_random_direction_with(problem, z, cfg.estimator, noise, dir.ex,
                                                  dir.ey, draw);
                    z_half = prox(setup, z, scaled(cfg.gamma, d_k.g));
                    d_half = g_random_direction_with(problem, z_half, cfg.estimator, noise,
                                                     dir.ex, dir.ey, draw);
                } else {
                    d_k = g_full_coordinate_with(problem, z, cfg.estimator, noise, draw);
                    z_half = prox(setup, z, scaled(cfg.gamma, d_k.g));
                    d_half = g_full_coordinate_with(problem, z_half, cfg.estimator, noise, draw);
                }
            }
            res.total_oracle_calls += d_k.oracle_calls + d_half.oracle_calls;
            res.total_gradient_calls += d_k.gradient_calls + d_half.gradient_calls;
            z = prox(setup, z, scaled(cfg.gamma, d_half.g));
            avg.add(z_half);
        } catch (const std::exception& e) {
            throw std::runtime_error("extra-step: iteration " + std::to_string(k) + ": " +
                                     e.what());
        }
        res.iterations_run = k + 1;
        bool last = (k + 1 == max_iter) ||
                    budget_exhausted(cfg, res.total_oracle_calls + res.total_gradient_calls);
        tracer.record(k, last, res.total_oracle_calls + res.total_gradient_calls, z, avg,
                      res.trace);
    }
    res.final = z;
    res.averaged = avg.count > 0 ? avg.mean() : z;
    return res;
}

}  // namespace detail

/// Extra-step (mirror-prox style) loop with two estimator calls per
/// iteration; supports the mixed oracle.  Averaged output uses the half-step
/// iterates z_{k+1/2}.
inline RunResult run_zoesvia(const ProblemSpec& problem, const GeometrySetup& setup,
                             const RunConfig& cfg, const NoiseModel& noise = {}) {
    return detail::run_extra_step(problem, setup, cfg, noise, false);
}

/// Extra-step variant reusing one (e, xi) pair within each iteration.
inline RunResult run_zoesvia_same_direction(const ProblemSpec& problem,
                                            const GeometrySetup& setup, const RunConfig& cfg,
                                            const NoiseModel& noise = {}) {
    return detail::run_extra_step(problem, setup, cfg, noise, true);
}

/// Single-call extra-step loop: the half step reuses the previous
/// iteration's gradient, so each iteration costs one estimator call.
/// Requires Euclidean geometry.  d_{-1} comes from one extra estimator call
/// at z_0, counted in the totals.
inline RunResult run_zosc_esvia(const ProblemSpec& problem, const GeometrySetup& setup,
                                const RunConfig& cfg, const NoiseModel& noise = {}) {
    detail::validate_common(problem, setup, cfg);
    if (setup.prox_kind != ProxKind::squared_euclidean)
        throw std::invalid_argument("zosc_esvia: requires squared-Euclidean geometry (p = 2)");
    if (cfg.estimator.kind == EstimatorKind::mixed)
        throw std::invalid_argument(
            "zosc_esvia: estimator must be random_direction or full_coordinate");

    RandomStream rng(cfg.seed);
    SaddleIterate z = cfg.start ? *cfg.start : center_point(setup.set);
    detail::RunningMean avg;
    detail::TraceBuilder tracer(problem, setup, cfg);
    RunResult res;
    long max_iter = detail::effective_iterations(cfg);

    GradientSample d_prev = sample_gradient(problem, z, cfg.estimator, noise, rng);
    res.total_oracle_calls += d_prev.oracle_calls;
    res.total_gradient_calls += d_prev.gradient_calls;

    for (long k = 0; k < max_iter; ++k) {
        if (detail::budget_exhausted(cfg, res.total_oracle_calls + res.total_gradient_calls)) break;
        try {
            SaddleIterate z_half = prox(setup, z, detail::scaled(cfg.gamma, d_prev.g));
            GradientSample d_k = sample_gradient(problem, z_half, cfg.estimator, noise, rng);
            res.total_oracle_calls += d_k.oracle_calls;
            res.total_gradient_calls += d_k.gradient_calls;
            z = prox(setup, z, detail::scaled(cfg.gamma, d_k.g));
            d_prev = std::move(d_k);
            avg.add(z_half);
        } catch (const std::exception& e) {
            throw std::runtime_error("zosc_esvia: iteration " + std::to_string(k) + ": " +
                                     e.what());
        }
        res.iterations_run = k + 1;
        bool last = (k + 1 == max_iter) ||
                    detail::budget_exhausted(cfg, res.total_oracle_calls + res.total_gradient_calls);
        tracer.record(k, last, res.total_oracle_calls + res.total_gradient_calls, z, avg,
                      res.trace);
    }
    res.final = z;
    res.averaged = avg.count > 0 ? avg.mean() : z;
    return res;
}

inline RunResult run_algorithm(const ProblemSpec& problem, const GeometrySetup& setup,
                               const RunConfig& cfg, const NoiseModel& noise = {}) {
    switch (cfg.algorithm) {
        case Algorithm::zovia:
            return run_zovia(problem, setup, cfg, noise);
        case Algorithm::zoesvia:
            return run_zoesvia(problem, setup, cfg, noise);
        case Algorithm::zosc_esvia:
            return run_zosc_esvia(problem, setup, cfg, noise);
        case Algorithm::zoesvia_same_direction:
            return run_zoesvia_same_direction(problem, setup, cfg, noise);
    }
    throw std::invalid_argument("unknown algorithm");
}

// ---------------------------------------------------------------------------
// step / smoothing schedules
// ---------------------------------------------------------------------------

enum class Corollary {
    c1_convex,           // mirror descent, convex-concave, firmly smooth
    c1_strongly_convex,  // mirror descent, strongly-convex-strongly-concave
    c2_convex,           // extra-step, convex-concave, full coordinates
    c2_strongly_convex,  // single-call extra-step, p = 2
    c3_mixed             // extra-step with the mixed oracle (n = n_x)
};

/// Problem constants feeding the schedules.  The tau expressions are
/// order-level, so tau (and the delta budget L2 tau^2) carry a configurable
/// constant factor.
struct ScheduleParams {
    double L = 0.0, L2 = 0.0, mu = 0.0, sigma = 0.0, delta_cap = 0.0, D_p = 0.0;
    Corollary corollary = Corollary::c2_convex;
    double constant_factor = 1.0;
};

struct Schedule {
    double gamma = 0.0;
    double tau = 0.0;
    double delta_budget = 0.0;
    long iterations = 0;
    double target_eps = 0.0;
};

namespace detail {

struct ScheduleContext {
    double rho, n2q, n1q_half;  // rho_n, n^(2/q), n^(1/q + 1/2)
    double nd;
};

// The geometry factors rho_n, n^(2/q) enter only the mirror-descent
// corollaries; the extra-step ones must not require n >= 2.
inline ScheduleContext schedule_context(const GeometrySetup& setup, std::size_t n,
                                        bool need_geometry_factors) {
    ScheduleContext c{};
    double nd = static_cast<double>(n);
    c.nd = nd;
    if (!need_geometry_factors) {
        c.rho = 0.0;
        c.n2q = 1.0;
        c.n1q_half = std::sqrt(nd);
        return c;
    }
    c.rho = rho_n(setup.q, n);
    if (setup.q.is_infinite()) {
        c.n2q = 1.0;
        c.n1q_half = std::sqrt(nd);
    } else {
        c.n2q = std::pow(nd, 2.0 / setup.q.value());
        c.n1q_half = std::pow(nd, 1.0 / setup.q.value() + 0.5);
    }
    return c;
}

inline void validate_schedule(const ScheduleParams& p, bool needs_mu) {
    if (!(p.L > 0.0) || !(p.L2 > 0.0))
        throw std::invalid_argument("schedule: L and L2 must be positive");
    if (!(p.D_p > 0.0)) throw std::invalid_argument("schedule: D_p must be positive");
    if (p.sigma < 0.0 || p.delta_cap < 0.0)
        throw std::invalid_argument("schedule: sigma and delta_cap must be >= 0");
    if (needs_mu && !(p.mu > 0.0))
        throw std::invalid_argument("schedule: mu must be positive for strongly-convex variants");
    if (!(p.constant_factor > 0.0))
        throw std::invalid_argument("schedule: constant_factor must be positive");
}

inline long to_iterations(double n) {
    if (!(n >= 1.0)) return 1;
    if (n > 2e18) throw std::invalid_argument("schedule: iteration count overflows");
    return static_cast<long>(std::ceil(n));
}

// N(eps) for the sublinear corollaries N = max{A/eps, B/eps^2} and its
// inverse eps(N) = max{A/N, sqrt(B/N)}.
inline double sublinear_N(double A, double B, double eps) {
    return std::max(A / eps, B / (eps * eps));
}
inline double sublinear_eps(double A, double B, double N) {
    return std::max(A / N, std::sqrt(B / N));
}

// N(eps) for the linear-rate corollaries N = max{a ln(1/eps), b/eps} and its
// inverse eps(N) = max{exp(-N/a), b/N}.
inline double linear_N(double a, double b, double eps) {
    double logterm = std::max(1.0, std::log(1.0 / eps));
    return std::max(a * logterm, b / eps);
}
inline double linear_eps(double a, double b, double N) {
    double e1 = std::exp(-N / a);
    double e2 = b > 0.0 ? b / N : 0.0;
    return std::max(e1, e2);
}

inline Schedule build_schedule(const ScheduleParams& p, const GeometrySetup& setup, std::size_t n,
                               std::optional<long> fixed_N, std::optional<double> fixed_eps) {
    bool needs_mu = p.corollary == Corollary::c1_strongly_convex ||
                    p.corollary == Corollary::c2_strongly_convex;
    bool needs_geometry = p.corollary == Corollary::c1_convex ||
                          p.corollary == Corollary::c1_strongly_convex;
    validate_schedule(p, needs_mu);
    ScheduleContext c = schedule_context(setup, n, needs_geometry);
    const double inf = std::numeric_limits<double>::infinity();

    double A = 0.0, B = 0.0;  // sublinear complexity coefficients
    double a = 0.0, b = 0.0;  // linear-rate complexity coefficients
    bool linear = false;
    switch (p.corollary) {
        case Corollary::c1_convex:
            A = c.n2q * c.rho * p.L * p.L * p.D_p * p.D_p;
            B = c.n2q * c.rho * p.sigma * p.sigma * p.D_p * p.D_p;
            break;
        case Corollary::c1_strongly_convex:
            linear = true;
            a = c.n2q * c.rho * p.L * p.L / (p.mu * p.mu);
            b = c.n2q * c.rho * p.sigma * p.sigma / (p.mu * p.mu);
            break;
        case Corollary::c2_convex:
        case Corollary::c3_mixed:
            A = p.L * p.D_p * p.D_p;
            B = p.sigma * p.sigma * p.D_p * p.D_p;
            break;
        case Corollary::c2_strongly_convex:
            linear = true;
            a = p.L / p.mu;
            b = p.sigma * p.sigma / (p.mu * p.mu);
            break;
    }

    Schedule s;
    if (fixed_eps) {
        if (!(*fixed_eps > 0.0)) throw std::invalid_argument("schedule: target eps must be > 0");
        s.target_eps = *fixed_eps;
        s.iterations = to_iterations(linear ? linear_N(a, b, s.target_eps)
                                            : sublinear_N(A, B, s.target_eps));
    } else {
        if (!fixed_N || *fixed_N < 1)
            throw std::invalid_argument("schedule: need a target accuracy or iteration count");
        s.iterations = *fixed_N;
        double N = static_cast<double>(s.iterations);
        s.target_eps = linear ? linear_eps(a, b, N) : sublinear_eps(A, B, N);
    }

    double eps = s.target_eps;
    double N = static_cast<double>(s.iterations);
    double sqrt_n = std::sqrt(c.nd);
    switch (p.corollary) {
        case Corollary::c1_convex: {
            double g1 = 1.0 / (48.0 * c.n2q * c.rho * p.L);
            double g2 = p.sigma > 0.0
                            ? p.D_p / (std::pow(c.nd, setup.q.is_infinite() ? 0.0
                                                                            : 1.0 / setup.q.value()) *
                                       std::sqrt(c.rho) * p.sigma * std::sqrt(N))
                            : inf;
            s.gamma = std::min(g1, g2);
            double t1 = eps / (c.n1q_half * std::sqrt(c.rho) * p.L * p.L * p.D_p);
            double t2 = std::max(std::sqrt(eps / (c.nd * p.L2 * p.L2)),
                                 p.sigma / (sqrt_n * p.L2));
            s.tau = std::min(t1, t2);
            break;
        }
        case Corollary::c1_strongly_convex: {
            s.gamma = p.mu / (96.0 * c.n2q * c.rho * p.L * p.L);
            double t1 = std::max(std::sqrt(eps) * p.L / p.L2, p.sigma / (sqrt_n * p.L2));
            double t2 = std::max(eps * p.mu / (c.n1q_half * std::sqrt(c.rho) * p.L * p.D_p),
                                 p.sigma * p.sigma * p.mu /
                                     (c.n1q_half * std::sqrt(c.rho) * p.L * p.L * p.L * p.D_p));
            s.tau = std::min(t1, t2);
            break;
        }
        case Corollary::c2_convex:
        case Corollary::c3_mixed: {
            double g2 = p.sigma > 0.0 ? p.D_p / (p.sigma * std::sqrt(N)) : inf;
            s.gamma = std::min(1.0 / (2.0 * p.L), g2);
            double t1 = eps / (sqrt_n * p.L * p.D_p);
            double t2 = std::max(std::sqrt(eps * p.L / (c.nd * p.L2 * p.L2)),
                                 p.sigma / (sqrt_n * p.L2));
            s.tau = std::min(t1, t2);
            break;
        }
        case Corollary::c2_strongly_convex: {
            s.gamma = 1.0 / (6.0 * p.L);
            double t1 = std::max(std::sqrt(eps * p.mu * p.L) / p.L2, p.sigma / (sqrt_n * p.L2));
            double t2 = std::max(p.mu * eps / (sqrt_n * p.L * p.D_p),
                                 p.sigma * p.sigma / (sqrt_n * p.L * p.L * p.D_p));
            s.tau = std::min(t1, t2);
            break;
        }
    }
    s.tau *= p.constant_factor;
    s.delta_budget = p.constant_factor * p.L2 * s.tau * s.tau;
    return s;
}

}  // namespace detail

/// Schedule for a target accuracy: derives the iteration count from the
/// corollary's complexity expression, then gamma and tau.
inline Schedule schedule_for_accuracy(const ScheduleParams& params, const GeometrySetup& setup,
                                      std::size_t n, double target_eps) {
    return detail::build_schedule(params, setup, n, std::nullopt, target_eps);
}

/// Schedule for a fixed iteration budget: inverts the complexity expression
/// to the accuracy it buys, then derives gamma and tau at that accuracy.
inline Schedule schedule_for_iterations(const ScheduleParams& params, const GeometrySetup& setup,
                                        std::size_t n, long iterations) {
    return detail::build_schedule(params, setup, n, iterations, std::nullopt);
}

/// Fill a run config from a schedule.  gamma <= 0 means "take the scheduled
/// step"; an explicit gamma is kept even above the corollary bound (with a
/// warning), since running beyond the theory is a legitimate harness use
/// case.  tau <= 0 likewise takes the scheduled smoothing.
inline Schedule apply_schedule(RunConfig& cfg, const ScheduleParams& params,
                               const GeometrySetup& setup, std::size_t n, double target_eps) {
    Schedule s = schedule_for_accuracy(params, setup, n, target_eps);
    if (cfg.gamma <= 0.0) {
        cfg.gamma = s.gamma;
    } else if (cfg.gamma > s.gamma * (1.0 + 1e-12)) {
        std::cerr << "warning: gamma " << cfg.gamma << " exceeds the schedule bound " << s.gamma
                  << "\n";
    }
    if (cfg.estimator.tau <= 0.0) cfg.estimator.tau = s.tau;
    if (cfg.iterations < 1) cfg.iterations = s.iterations;
    return s;
}

}  // namespace zosaddle
