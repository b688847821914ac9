#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "zosaddle/geometry.hpp"

using namespace zosaddle;
using Catch::Approx;

namespace {
SaddleIterate make_z(Vec x, Vec y) { return SaddleIterate{std::move(x), std::move(y)}; }
}  // namespace

TEST_CASE("dual norms") {
    Vec v{3.0, 4.0};
    CHECK(dual_norm(NormExponent::finite(2.0), v) == Approx(5.0));
    Vec w{-3.0, 2.0};
    CHECK(dual_norm(NormExponent::infinity(), w) == Approx(3.0));
    Vec u{1.0, 1.0};
    CHECK(dual_norm(NormExponent::finite(4.0), u) == Approx(std::pow(2.0, 0.25)));
    CHECK(dual_norm(NormExponent::finite(2.0), Vec{}) == 0.0);
    CHECK(norm_p(1.0, w) == Approx(5.0));
}

TEST_CASE("geometry factor rho_n") {
    CHECK(rho_n(NormExponent::finite(2.0), 200) == Approx(1.0));
    CHECK(rho_n(NormExponent::infinity(), 200) == Approx(16.0 * std::log(200.0) - 8.0));
    CHECK(rho_n(NormExponent::infinity(), 200) == Approx(76.77307786).epsilon(1e-8));
    CHECK(rho_n(NormExponent::finite(2.0), 2) == Approx(1.0));
    CHECK_THROWS_AS(rho_n(NormExponent::finite(2.0), 1), std::invalid_argument);
}

TEST_CASE("setup invariants") {
    CHECK_NOTHROW(entropy_simplex_setup(3, 2));
    CHECK_NOTHROW(GeometrySetup::make(1.5, NormExponent::finite(3.0), ProxKind::squared_euclidean,
                                      FeasibleSet{FreeBlock{1}, FreeBlock{1}}, 1.0));
    // 1/p + 1/q must be 1
    CHECK_THROWS_AS(GeometrySetup::make(2.0, NormExponent::finite(3.0),
                                        ProxKind::squared_euclidean,
                                        FeasibleSet{FreeBlock{1}, FreeBlock{1}}, 1.0),
                    std::invalid_argument);
    // infinite q pairs with p = 1 only
    CHECK_THROWS_AS(GeometrySetup::make(2.0, NormExponent::infinity(),
                                        ProxKind::squared_euclidean,
                                        FeasibleSet{FreeBlock{1}, FreeBlock{1}}, 1.0),
                    std::invalid_argument);
    // entropy prox needs simplex blocks
    CHECK_THROWS_AS(GeometrySetup::make(1.0, NormExponent::infinity(), ProxKind::entropy_simplex,
                                        FeasibleSet{BoxBlock{{0.0}, {1.0}}, SimplexBlock{2}},
                                        1.0),
                    std::invalid_argument);
}

TEST_CASE("bregman divergence closed forms") {
    auto ent = entropy_simplex_setup(2, 1);
    auto z = make_z({0.5, 0.5}, {1.0});
    CHECK(bregman(ent, z, z) == Approx(0.0).margin(1e-15));

    // KL against the uniform center with a boundary point, clamped
    auto zb = make_z({1.0, 0.0}, {1.0});
    auto w = make_z({0.5, 0.5}, {1.0});
    CHECK(bregman(ent, zb, w) == Approx(std::log(2.0)).margin(1e-12));

    auto euc = euclidean_setup(FeasibleSet{FreeBlock{1}, FreeBlock{1}});
    CHECK(bregman(euc, make_z({1.0}, {0.0}), make_z({0.0}, {0.0})) == Approx(0.5));

    // negative components are outside the domain
    CHECK_THROWS_AS(bregman(ent, make_z({1.2, -0.2}, {1.0}), w), std::domain_error);
}

TEST_CASE("bregman KL across both blocks") {
    auto ent = entropy_simplex_setup(2, 2);
    auto z = make_z({0.5, 0.5}, {0.25, 0.75});
    auto w = make_z({0.25, 0.75}, {0.5, 0.5});
    double klx = 0.5 * std::log(2.0) + 0.5 * std::log(0.5 / 0.75);
    double kly = 0.25 * std::log(0.5) + 0.75 * std::log(1.5);
    CHECK(bregman(ent, z, w) == Approx(klx + kly).margin(1e-12));
}

TEST_CASE("prox closed forms") {
    auto ent = entropy_simplex_setup(2, 1);
    auto z = make_z({0.5, 0.5}, {1.0});

    Vec g0{0.0, 0.0, 0.0};
    auto u0 = prox(ent, z, g0);
    CHECK(u0.x[0] == Approx(0.5).margin(1e-12));
    CHECK(u0.x[1] == Approx(0.5).margin(1e-12));

    Vec g1{std::log(2.0), 0.0, 0.0};
    auto u1 = prox(ent, z, g1);
    CHECK(u1.x[0] == Approx(1.0 / 3.0).margin(1e-12));
    CHECK(u1.x[1] == Approx(2.0 / 3.0).margin(1e-12));

    auto euc_free = euclidean_setup(FeasibleSet{FreeBlock{1}, FreeBlock{1}});
    auto u2 = prox(euc_free, make_z({1.0}, {1.0}), Vec{0.25, -0.5});
    CHECK(u2.x[0] == Approx(0.75));
    CHECK(u2.y[0] == Approx(1.5));

    auto euc_box = euclidean_setup(
        FeasibleSet{BoxBlock{{0.0, 0.0}, {1.0, 1.0}}, FreeBlock{0}});
    auto u3 = prox(euc_box, make_z({0.1, 0.9}, {}), Vec{0.5, -0.5});
    CHECK(u3.x[0] == Approx(0.0).margin(1e-15));
    CHECK(u3.x[1] == Approx(1.0).margin(1e-15));

    CHECK_THROWS_AS(prox(ent, z, Vec{std::nan(""), 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("prox overflow safety for large steps") {
    auto ent = entropy_simplex_setup(3, 1);
    auto z = make_z({0.2, 0.3, 0.5}, {1.0});
    Vec g{1e6, -1e6, 0.0, 0.0};
    auto u = prox(ent, z, g);
    REQUIRE(all_finite(u.x));
    CHECK(u.x[1] == Approx(1.0).margin(1e-9));
    double s = u.x[0] + u.x[1] + u.x[2];
    CHECK(s == Approx(1.0).margin(1e-12));
}

TEST_CASE("prox output stays feasible") {
    RandomStream rng(11);
    auto ent = entropy_simplex_setup(4, 3);
    for (int rep = 0; rep < 200; ++rep) {
        auto z = make_z(testutil::random_simplex_point(4, rng),
                        testutil::random_simplex_point(3, rng));
        Vec g(7);
        for (double& v : g) v = rng.uniform(-5.0, 5.0);
        auto u = prox(ent, z, g);
        CHECK(contains(ent.set, u, 1e-12));
    }
    auto euc = euclidean_setup(FeasibleSet{SimplexBlock{4}, Ball2Block{Vec{0.0, 0.0}, 1.5}});
    for (int rep = 0; rep < 200; ++rep) {
        auto z = make_z(testutil::random_simplex_point(4, rng), Vec{rng.uniform(-1, 1), 0.3});
        Vec g(6);
        for (double& v : g) v = rng.uniform(-5.0, 5.0);
        auto u = prox(euc, z, g);
        CHECK(contains(euc.set, u, 1e-12));
    }
}

TEST_CASE("prox optimality against random candidates") {
    RandomStream rng(42);
    auto ent = entropy_simplex_setup(3, 2);
    auto z = make_z(testutil::random_simplex_point(3, rng),
                    testutil::random_simplex_point(2, rng));
    Vec g(5);
    for (double& v : g) v = rng.uniform(-2.0, 2.0);
    auto u = prox(ent, z, g);
    double best = testutil::prox_objective(ent, z, u, g);
    for (int rep = 0; rep < 20000; ++rep) {
        auto cand = make_z(testutil::random_simplex_point(3, rng),
                           testutil::random_simplex_point(2, rng));
        CHECK(best <= testutil::prox_objective(ent, z, cand, g) + 1e-8);
    }

    auto euc = euclidean_setup(FeasibleSet{BoxBlock{{0.0, 0.0}, {1.0, 1.0}}, FreeBlock{0}});
    auto zb = make_z({0.3, 0.8}, {});
    Vec gb{0.7, -0.4};
    auto ub = prox(euc, zb, gb);
    double bestb = testutil::prox_objective(euc, zb, ub, gb);
    for (int rep = 0; rep < 20000; ++rep) {
        auto cand = make_z({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)}, {});
        CHECK(bestb <= testutil::prox_objective(euc, zb, cand, gb) + 1e-8);
    }
}

TEST_CASE("euclidean simplex projection") {
    Vec v{0.9, 0.8, -0.5};
    project_simplex(v);
    double s = v[0] + v[1] + v[2];
    CHECK(s == Approx(1.0).margin(1e-12));
    for (double x : v) CHECK(x >= 0.0);
    // projection of a feasible point is the identity
    Vec w{0.2, 0.5, 0.3};
    Vec w0 = w;
    project_simplex(w);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(w[i] == Approx(w0[i]).margin(1e-12));
    // nearest-point property against random feasible candidates
    RandomStream rng(3);
    Vec t{1.4, -0.3, 0.6, 0.1};
    Vec proj = t;
    project_simplex(proj);
    double dproj = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) dproj += (proj[i] - t[i]) * (proj[i] - t[i]);
    for (int rep = 0; rep < 20000; ++rep) {
        Vec c = testutil::random_simplex_point(4, rng);
        double dc = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) dc += (c[i] - t[i]) * (c[i] - t[i]);
        CHECK(dproj <= dc + 1e-9);
    }
}

TEST_CASE("bregman dominates the squared p-norm") {
    RandomStream rng(5);
    // Entropy case: KL >= (1/2)||.||_1^2 holds per simplex block (Pinsker);
    // summing blocks gives the joint bound with the product norm
    // sqrt(||dx||_1^2 + ||dy||_1^2), and constant 1/4 for the plain joint
    // 1-norm.
    auto ent1 = entropy_simplex_setup(4, 1);
    for (int rep = 0; rep < 2000; ++rep) {
        auto z = make_z(testutil::random_simplex_point(4, rng), {1.0});
        auto w = make_z(testutil::random_simplex_point(4, rng), {1.0});
        Vec diff(4);
        for (std::size_t i = 0; i < 4; ++i) diff[i] = z.x[i] - w.x[i];
        double p1 = norm_p(1.0, diff);
        CHECK(bregman(ent1, z, w) >= 0.5 * p1 * p1 - 1e-12);
    }
    auto ent = entropy_simplex_setup(4, 3);
    for (int rep = 0; rep < 2000; ++rep) {
        auto z = make_z(testutil::random_simplex_point(4, rng),
                        testutil::random_simplex_point(3, rng));
        auto w = make_z(testutil::random_simplex_point(4, rng),
                        testutil::random_simplex_point(3, rng));
        Vec dx(4), dy(3);
        for (std::size_t i = 0; i < 4; ++i) dx[i] = z.x[i] - w.x[i];
        for (std::size_t i = 0; i < 3; ++i) dy[i] = z.y[i] - w.y[i];
        double nx1 = norm_p(1.0, dx), ny1 = norm_p(1.0, dy);
        double v = bregman(ent, z, w);
        CHECK(v >= 0.5 * (nx1 * nx1 + ny1 * ny1) - 1e-12);
        double joint = nx1 + ny1;
        CHECK(v >= 0.25 * joint * joint - 1e-12);
        CHECK(v >= -1e-15);
    }
    auto euc = euclidean_setup(FeasibleSet{FreeBlock{3}, FreeBlock{2}});
    for (int rep = 0; rep < 2000; ++rep) {
        SaddleIterate z{{rng.normal(), rng.normal(), rng.normal()}, {rng.normal(), rng.normal()}};
        SaddleIterate w{{rng.normal(), rng.normal(), rng.normal()}, {rng.normal(), rng.normal()}};
        Vec diff(5);
        auto zj = z.joint(), wj = w.joint();
        for (std::size_t i = 0; i < 5; ++i) diff[i] = zj[i] - wj[i];
        double p2 = norm_p(2.0, diff);
        CHECK(bregman(euc, z, w) == Approx(0.5 * p2 * p2).margin(1e-12));
    }
}

TEST_CASE("sphere sampling") {
    RandomStream rng(17);
    SECTION("one dimension gives signs") {
        bool plus = false, minus = false;
        for (int i = 0; i < 100; ++i) {
            Vec e = sample_sphere(1, rng);
            CHECK(std::abs(std::abs(e[0]) - 1.0) <= 1e-12);
            (e[0] > 0 ? plus : minus) = true;
        }
        CHECK(plus);
        CHECK(minus);
    }
    SECTION("unit norm in high dimension") {
        for (int i = 0; i < 50; ++i) {
            Vec e = sample_sphere(50, rng);
            CHECK(norm2(e) == Approx(1.0).margin(1e-12));
        }
    }
    SECTION("componentwise symmetry") {
        const int M = 100000;
        Vec mean(3, 0.0);
        for (int i = 0; i < M; ++i) {
            Vec e = sample_sphere(3, rng);
            for (int j = 0; j < 3; ++j) mean[j] += e[j];
        }
        double tol = 3.0 * (1.0 / std::sqrt(3.0)) / std::sqrt(static_cast<double>(M));
        for (int j = 0; j < 3; ++j) CHECK(std::abs(mean[j] / M) <= tol);
    }
    SECTION("zero dimension rejected") {
        CHECK_THROWS_AS(sample_sphere(0, rng), std::invalid_argument);
    }
}

TEST_CASE("sphere q-norm second moment stays under the envelope") {
    RandomStream rng(23);
    for (std::size_t n : {8, 50}) {
        for (auto q : {NormExponent::finite(2.0), NormExponent::finite(4.0),
                       NormExponent::infinity()}) {
            const int M = 20000;
            double mean = 0.0, m2 = 0.0;
            for (int i = 0; i < M; ++i) {
                Vec e = sample_sphere(n, rng);
                double v = dual_norm(q, e);
                v *= v;
                double d = v - mean;
                mean += d / (i + 1);
                m2 += d * (v - mean);
            }
            double se = std::sqrt(m2 / (M - 1) / M);
            double expo = q.is_infinite() ? -1.0 : 2.0 / q.value() - 1.0;
            double bound = std::pow(static_cast<double>(n), expo) * rho_n(q, n);
            INFO("n=" << n << " q=" << (q.is_infinite() ? -1.0 : q.value()));
            CHECK(mean <= bound + 3.0 * se + 1e-12);
        }
    }
}

TEST_CASE("random stream determinism") {
    RandomStream a(99);
    for (int i = 0; i < 5; ++i) (void)a.normal();
    RandomStream b = a;  // restored state
    for (int i = 0; i < 20; ++i) CHECK(a.normal() == b.normal());
    RandomStream c(99), d(99);
    for (int i = 0; i < 20; ++i) CHECK(c.uniform01() == d.uniform01());
}

TEST_CASE("feasible set membership") {
    FeasibleSet set{SimplexBlock{2}, BoxBlock{{0.0}, {2.0}}};
    CHECK(contains(set, make_z({0.5, 0.5}, {1.0})));
    CHECK_FALSE(contains(set, make_z({0.6, 0.6}, {1.0})));
    CHECK_FALSE(contains(set, make_z({0.5, 0.5}, {2.5})));
    CHECK_FALSE(contains(set, make_z({0.5, 0.5}, {1.0, 1.0})));
}
