#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "zosaddle/oracles.hpp"

using namespace zosaddle;
using Catch::Approx;

namespace {

ProblemSpec scalar_bilinear() {  // f(x, y) = x * y
    Matrix c(1, 1);
    c.at(0, 0) = 1.0;
    return make_matrix_game(std::move(c));
}

ProblemSpec linear_problem(Vec cx, Vec by) {  // f = <c, x> - <b, y>
    ProblemSpec p;
    p.nx = cx.size();
    p.ny = by.size();
    p.set = FeasibleSet{FreeBlock{p.nx}, FreeBlock{p.ny}};
    auto c = std::make_shared<Vec>(std::move(cx));
    auto b = std::make_shared<Vec>(std::move(by));
    p.value = [c, b](std::span<const double> x, std::span<const double> y) {
        return dot(*c, x) - dot(*b, y);
    };
    p.analytic_F = [c, b](std::span<const double>, std::span<const double>) {
        Vec f(*c);
        f.insert(f.end(), b->begin(), b->end());  // -grad_y(-<b,y>) = b
        return f;
    };
    p.constants = ProblemConstants{1.0, 1.0, 0.0, SmoothnessClass::smooth};
    return p;
}

}  // namespace

TEST_CASE("noisy evaluation") {
    auto p = scalar_bilinear();
    SaddleIterate z{{1.0}, {1.0}};
    RandomStream rng(1);

    SECTION("noiseless value is exact") {
        NoiseModel nm = make_noise(0.0, 0.0, DeltaKind::zero, 2);
        CHECK(noisy_eval(p, z, nm, rng) == 1.0);
    }
    SECTION("adversarial part is bounded") {
        NoiseModel nm = make_noise(0.0, 0.01, DeltaKind::sine_adversarial, 2, 5);
        for (int i = 0; i < 100; ++i) {
            SaddleIterate w{{rng.uniform(0, 1)}, {rng.uniform(0, 1)}};
            double v = noisy_eval(p, w, nm, rng);
            CHECK(std::abs(v - p.eval(w)) <= 0.01 + 1e-15);
        }
    }
    SECTION("restored stream state replays the value") {
        NoiseModel nm = make_noise(0.7, 0.0, DeltaKind::zero, 2);
        RandomStream s(42);
        RandomStream saved = s;
        double v1 = noisy_eval(p, z, nm, s);
        double v2 = noisy_eval(p, z, nm, saved);
        CHECK(v1 == v2);
    }
    SECTION("custom delta exceeding its cap is rejected") {
        NoiseModel nm;
        nm.delta_cap = 0.1;
        nm.delta_kind = DeltaKind::custom;
        nm.custom_delta = [](std::span<const double>, std::span<const double>) { return 0.5; };
        CHECK_THROWS_AS(noisy_eval(p, z, nm, rng), std::runtime_error);
    }
}

TEST_CASE("random-direction estimator formula") {
    auto p = scalar_bilinear();
    SaddleIterate z{{1.0}, {1.0}};
    NoiseModel nm;
    EstimatorConfig cfg{EstimatorKind::random_direction, 0.1, DirectionMode::joint_split};
    Vec ex{1.0}, ey{1.0};
    auto g = g_random_direction_with(p, z, cfg, nm, ex, ey, NoiseDraw{});
    CHECK(g.g[0] == Approx(2.0).margin(1e-9));
    CHECK(g.g[1] == Approx(-2.0).margin(1e-9));
    CHECK(g.oracle_calls == 3);
    CHECK(g.gradient_calls == 0);

    EstimatorConfig bad{EstimatorKind::random_direction, 0.0, DirectionMode::joint_split};
    RandomStream rng(2);
    CHECK_THROWS_AS(g_random_direction(p, z, bad, nm, rng), std::invalid_argument);
}

TEST_CASE("full-coordinate estimator") {
    NoiseModel nm;
    SECTION("exact on linear objectives for any tau") {
        auto p = linear_problem({0.3, -1.2, 0.7}, {0.5, -0.25});
        SaddleIterate z{{0.1, 0.2, 0.3}, {0.4, 0.5}};
        for (double tau : {1.0, 0.1, 1e-3}) {
            EstimatorConfig cfg{EstimatorKind::full_coordinate, tau, DirectionMode::joint_split};
            RandomStream rng(3);
            auto g = g_full_coordinate(p, z, cfg, nm, rng);
            Vec f = p.analytic_F(z.x, z.y);
            for (std::size_t i = 0; i < f.size(); ++i)
                CHECK(std::abs(g.g[i] - f[i]) <= 1e-12 * std::max(1.0, std::abs(f[i]) / tau));
            CHECK(g.oracle_calls == 6);
        }
    }
    SECTION("forward-difference bias on the quadratic") {
        auto p = make_sc_quadratic(1, 1, 1.0, Matrix(1, 1));  // f = x^2/2 - y^2/2
        SaddleIterate z{{1.0}, {1.0}};
        EstimatorConfig cfg{EstimatorKind::full_coordinate, 0.1, DirectionMode::joint_split};
        auto g = g_full_coordinate_with(p, z, cfg, nm, NoiseDraw{});
        CHECK(g.g[0] == Approx(1.05).margin(1e-9));
        CHECK(g.g[1] == Approx(1.05).margin(1e-9));
        CHECK(g.oracle_calls == 3);
    }
    SECTION("error scales linearly in tau") {
        RandomStream rng(9);
        Matrix a(2, 2);
        for (double& v : a.a) v = rng.normal();
        auto p = make_sc_quadratic(2, 2, 1.0, std::move(a));
        SaddleIterate z{{0.4, -0.2}, {0.3, 0.1}};
        Vec f = p.analytic_F(z.x, z.y);
        std::vector<double> errs;
        for (double tau : {1e-1, 5e-2, 2.5e-2}) {
            EstimatorConfig cfg{EstimatorKind::full_coordinate, tau, DirectionMode::joint_split};
            auto g = g_full_coordinate_with(p, z, cfg, nm, NoiseDraw{});
            double e = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i) e += (g.g[i] - f[i]) * (g.g[i] - f[i]);
            errs.push_back(std::sqrt(e));
        }
        CHECK(errs[1] / errs[0] == Approx(0.5).epsilon(0.2));
        CHECK(errs[2] / errs[1] == Approx(0.5).epsilon(0.2));
    }
}

TEST_CASE("mixed oracle") {
    NoiseModel nm;
    SECTION("x-block differenced, y-block exact") {
        auto p = make_sc_quadratic(1, 1, 1.0, Matrix(1, 1));
        SaddleIterate z{{1.0}, {1.0}};
        EstimatorConfig cfg{EstimatorKind::mixed, 0.1, DirectionMode::joint_split};
        auto g = g_mixed_with(p, z, cfg, nm, NoiseDraw{});
        CHECK(g.g[0] == Approx(1.05).margin(1e-9));
        CHECK(g.g[1] == Approx(1.0).margin(1e-12));
        CHECK(g.oracle_calls == 2);
        CHECK(g.gradient_calls == 1);
    }
    SECTION("multiplier block is the negated constraint value") {
        auto toy = make_lagrangian_toy();
        SaddleIterate z{{0.25}, {3.0}};
        EstimatorConfig cfg{EstimatorKind::mixed, 1e-4, DirectionMode::joint_split};
        auto g = g_mixed_with(toy, z, cfg, nm, NoiseDraw{});
        CHECK(g.g[1] == Approx(-(1.0 - 0.25)).margin(1e-12));
    }
    SECTION("missing y-gradient is a capability error") {
        auto p = linear_problem({1.0}, {1.0});  // no y_gradient registered
        SaddleIterate z{{0.0}, {0.0}};
        EstimatorConfig cfg{EstimatorKind::mixed, 0.1, DirectionMode::joint_split};
        RandomStream rng(4);
        CHECK_THROWS_AS(g_mixed(p, z, cfg, nm, rng), CapabilityError);
    }
}

TEST_CASE("sign convention: y-block estimates the negated y-gradient") {
    auto p = scalar_bilinear();
    SaddleIterate z{{0.8}, {0.6}};
    NoiseModel nm;
    // -grad_y f = -x = -0.8
    EstimatorConfig fc{EstimatorKind::full_coordinate, 1e-6, DirectionMode::joint_split};
    auto gf = g_full_coordinate_with(p, z, fc, nm, NoiseDraw{});
    CHECK(gf.g[1] == Approx(-0.8).margin(1e-6));
    EstimatorConfig mx{EstimatorKind::mixed, 1e-6, DirectionMode::joint_split};
    auto gm = g_mixed_with(p, z, mx, nm, NoiseDraw{});
    CHECK(gm.g[1] == Approx(-0.8).margin(1e-12));
}

TEST_CASE("oracle call accounting") {
    RandomStream rng(5);
    NoiseModel nm;
    auto p = make_sc_quadratic(3, 2, 1.0, Matrix(3, 2));
    SaddleIterate z{{0.1, 0.2, 0.3}, {0.4, 0.5}};
    auto rd = sample_gradient(p, z, {EstimatorKind::random_direction, 1e-3}, nm, rng);
    CHECK(rd.oracle_calls == 3);
    auto fc = sample_gradient(p, z, {EstimatorKind::full_coordinate, 1e-3}, nm, rng);
    CHECK(fc.oracle_calls == 3 + 2 + 1);
    auto mx = sample_gradient(p, z, {EstimatorKind::mixed, 1e-3}, nm, rng);
    CHECK(mx.oracle_calls == 3 + 1);
    CHECK(mx.gradient_calls == 1);
}

TEST_CASE("estimators are deterministic per seed") {
    auto p = make_sc_quadratic(2, 2, 1.0, Matrix(2, 2));
    SaddleIterate z{{0.3, -0.1}, {0.2, 0.4}};
    NoiseModel nm = make_noise(0.5, 1e-3, DeltaKind::sine_adversarial, 4, 77);
    for (auto kind : {EstimatorKind::random_direction, EstimatorKind::full_coordinate,
                      EstimatorKind::mixed}) {
        EstimatorConfig cfg{kind, 1e-2, DirectionMode::joint_split};
        RandomStream r1(123), r2(123);
        auto g1 = sample_gradient(p, z, cfg, nm, r1);
        auto g2 = sample_gradient(p, z, cfg, nm, r2);
        CHECK(g1.g == g2.g);
    }
}

TEST_CASE("one shared draw per estimator call") {
    // On a linear objective the finite differences recover the drawn noise
    // field exactly, so the centered second moment equals sigma^2.
    auto p = linear_problem({0.5, -0.3}, {0.2, 0.1});
    SaddleIterate z{{0.0, 0.0}, {0.0, 0.0}};
    double sigma = 0.8;
    NoiseModel nm = make_noise(sigma, 0.0, DeltaKind::zero, 4);
    EstimatorConfig cfg{EstimatorKind::full_coordinate, 1e-3, DirectionMode::joint_split};
    RandomStream rng(6);
    auto rep = estimator_second_moment_mc(p, z, cfg, nm, NormExponent::finite(2.0), 20000, rng);
    CHECK(rep.mean == Approx(sigma * sigma).epsilon(0.05));
}

TEST_CASE("random-direction estimator is unbiased on a bilinear game") {
    auto p = make_matrix_game(generate_paper_matrix(4, 21));
    RandomStream zr(10);
    SaddleIterate z{testutil::random_simplex_point(4, zr), testutil::random_simplex_point(4, zr)};
    NoiseModel nm;
    EstimatorConfig cfg{EstimatorKind::random_direction, 1e-4, DirectionMode::joint_split};
    RandomStream rng(11);
    auto rep = estimator_bias_mc(p, z, cfg, nm, NormExponent::finite(2.0), 30000, rng);
    REQUIRE(rep.stderr_usable);
    for (std::size_t i = 0; i < rep.bias.size(); ++i)
        CHECK(std::abs(rep.bias[i]) <= 3.0 * rep.stderr_components[i] + 1e-9);
}

TEST_CASE("independent block directions rescale the blocks") {
    // With per-block unit spheres the estimator mean is ((n/nx) F_x, (n/ny) F_y)
    // on linear objectives; this is the documented deviation from joint_split.
    auto p = linear_problem({1.0}, {0.5});
    SaddleIterate z{{0.0}, {0.0}};
    NoiseModel nm;
    EstimatorConfig cfg{EstimatorKind::random_direction, 1e-4,
                        DirectionMode::independent_blocks};
    RandomStream rng(12);
    Vec mean(2, 0.0);
    const int M = 40000;
    for (int i = 0; i < M; ++i) {
        auto g = g_random_direction(p, z, cfg, nm, rng);
        mean[0] += g.g[0];
        mean[1] += g.g[1];
    }
    CHECK(mean[0] / M == Approx(2.0 * 1.0).epsilon(0.05));
    CHECK(mean[1] / M == Approx(2.0 * 0.5).epsilon(0.05));
}

TEST_CASE("bias diagnostic handles the degenerate sample size") {
    auto p = scalar_bilinear();
    SaddleIterate z{{0.5}, {0.5}};
    NoiseModel nm;
    EstimatorConfig cfg{EstimatorKind::full_coordinate, 1e-3, DirectionMode::joint_split};
    RandomStream rng(13);
    auto rep = estimator_bias_mc(p, z, cfg, nm, NormExponent::finite(2.0), 1, rng);
    CHECK_FALSE(rep.stderr_usable);
    CHECK(rep.bias.size() == 2);
    CHECK(std::isfinite(rep.bias_q_norm));

    ProblemSpec no_f = p;
    no_f.analytic_F = nullptr;
    CHECK_THROWS_AS(estimator_bias_mc(no_f, z, cfg, nm, NormExponent::finite(2.0), 10, rng),
                    CapabilityError);
}

TEST_CASE("full-coordinate bias respects its envelope") {
    RandomStream rng(14);
    Matrix a(2, 2);
    for (double& v : a.a) v = rng.normal();
    double s = spectral_norm(a);
    for (double& v : a.a) v /= s;
    auto p = make_sc_quadratic(2, 2, 1.0, std::move(a));
    double L = p.constants.L;
    for (double delta : {0.0, 1e-4}) {
        NoiseModel nm = make_noise(0.0, delta,
                                   delta > 0 ? DeltaKind::sine_adversarial : DeltaKind::zero, 4,
                                   3);
        for (int rep = 0; rep < 20; ++rep) {
            SaddleIterate z{{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)},
                            {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)}};
            double tau = 0.01;
            EstimatorConfig cfg{EstimatorKind::full_coordinate, tau,
                                DirectionMode::joint_split};
            auto g = g_full_coordinate_with(p, z, cfg, nm, NoiseDraw{});
            Vec f = p.analytic_F(z.x, z.y);
            Vec diff(4);
            for (int i = 0; i < 4; ++i) diff[i] = g.g[i] - f[i];
            CHECK(dual_norm(NormExponent::finite(2.0), diff) <= fc_bias_bound(4, L, tau, delta));
        }
    }
}
