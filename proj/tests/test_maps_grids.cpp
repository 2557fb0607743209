#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mongeo/mongeo.hpp"
#include "oracles.hpp"

using namespace mongeo;

TEST_CASE("grids expose exact endpoints and uniform spacing") {
    SpaceGrid g(8);
    CHECK(g.h() == 0.125);
    CHECK(g.nodes() == 9);
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(8) == 1.0);

    TimeGrid t(4, 2.0);
    CHECK(t.dt() == 0.5);
    CHECK(t.node(0) == 0.0);
    CHECK(t.node(4) == 2.0);

    CHECK_THROWS_AS(SpaceGrid(0), DomainError);
    CHECK_THROWS_AS(TimeGrid(0, 1.0), DomainError);
    CHECK_THROWS_AS(TimeGrid(4, -1.0), DomainError);
}

TEST_CASE("validate_monotone accepts the identity and flat segments") {
    SpaceGrid g(4);
    const auto id = MonotoneMap::identity(g);
    for (std::size_t j = 0; j <= 4; ++j) CHECK(id.values[j] == g.node(j));

    // flat segments are allowed: maps need not be strictly increasing
    CHECK_NOTHROW(MonotoneMap(SpaceGrid(3), {0.0, 0.25, 0.25, 1.0}));
}

TEST_CASE("validate_monotone rejects bad boundaries and decreasing values") {
    CHECK_THROWS_AS(MonotoneMap(SpaceGrid(3), {0.0, 0.5, 0.4, 1.0}), MonotonicityViolation);
    CHECK_THROWS_AS(MonotoneMap(SpaceGrid(3), {0.01, 0.5, 0.6, 1.0}), BoundaryViolation);
    CHECK_THROWS_AS(MonotoneMap(SpaceGrid(3), {0.0, 0.5, 0.6, 0.99}), BoundaryViolation);
}

TEST_CASE("validate_monotone snaps endpoints and clamps round-off increments") {
    const double eps = 5e-13; // below the tolerance, must be absorbed
    MonotoneMap m(SpaceGrid(3), {eps, 0.5, 0.5 - eps, 1.0 - eps});
    CHECK(m.values[0] == 0.0);
    CHECK(m.values[3] == 1.0);
    CHECK(m.values[2] >= m.values[1]);
}

TEST_CASE("from_increments normalizes cell masses") {
    const auto m = MonotoneMap::from_increments(SpaceGrid(4), {1.0, 1.0, 1.0, 1.0});
    for (std::size_t j = 0; j <= 4; ++j) CHECK(m.values[j] == Catch::Approx(0.25 * j));
    CHECK_THROWS_AS(MonotoneMap::from_increments(SpaceGrid(2), {1.0, -0.5}),
                    MonotonicityViolation);
    CHECK_THROWS_AS(MonotoneMap::from_increments(SpaceGrid(2), {0.0, 0.0}), DomainError);
}

TEST_CASE("eval_map interpolates piecewise-linearly") {
    SpaceGrid g(100);
    const auto id = MonotoneMap::identity(g);
    CHECK(eval_map(id, 0.37) == Catch::Approx(0.37).margin(1e-15));
    CHECK(eval_map(id, 1.0) == 1.0);

    std::vector<double> sq(g.nodes());
    for (std::size_t j = 0; j <= 100; ++j) sq[j] = g.node(j) * g.node(j);
    MonotoneMap parab(g, sq);
    CHECK(std::abs(eval_map(parab, 0.5) - 0.25) <= g.h() * g.h());

    CHECK_THROWS_AS(eval_map(id, -0.1), DomainError);
    CHECK_THROWS_AS(eval_map(id, 1.1), DomainError);
}

TEST_CASE("eval_map is nondecreasing on random monotone maps") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 5; ++trial) {
        MonotoneMap m(SpaceGrid(32), oracle::random_monotone_values(32, rng));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> xs(50);
        for (auto& x : xs) x = u(rng);
        std::sort(xs.begin(), xs.end());
        for (std::size_t i = 1; i < xs.size(); ++i)
            CHECK(eval_map(m, xs[i]) >= eval_map(m, xs[i - 1]));
    }
}

TEST_CASE("generalized_inverse recovers analytic inverses") {
    SpaceGrid g(200);
    const auto id = MonotoneMap::identity(g);
    const auto inv_id = generalized_inverse(id, g);
    for (std::size_t j = 0; j <= 200; ++j)
        CHECK(inv_id.values[j] == Catch::Approx(g.node(j)).margin(1e-12));

    std::vector<double> sq(g.nodes());
    for (std::size_t j = 0; j <= 200; ++j) sq[j] = g.node(j) * g.node(j);
    const auto inv_sq = generalized_inverse(MonotoneMap(g, sq), g);
    for (std::size_t j = 0; j <= 200; ++j)
        CHECK(std::abs(inv_sq.values[j] - std::sqrt(g.node(j))) <= 2.0 * g.h());
}

TEST_CASE("generalized_inverse of a step map is the plateau value") {
    SpaceGrid g(10);
    std::vector<double> step(g.nodes(), 0.0);
    for (std::size_t j = 6; j <= 10; ++j) step[j] = 1.0; // ramp lives in cell [0.5, 0.6]
    const auto psi = generalized_inverse(MonotoneMap(g, step), SpaceGrid(20));
    for (std::size_t i = 1; i < 20; ++i)
        CHECK(std::abs(psi.values[i] - 0.5) <= 2.0 * g.h());
}

TEST_CASE("generalized_inverse is an involution on strictly increasing maps") {
    std::mt19937 rng(7);
    SpaceGrid g(64);
    MonotoneMap m(g, oracle::random_monotone_values(64, rng, 0.2));
    const auto back = generalized_inverse(generalized_inverse(m, g), g);
    // resampling error scales with the inverse's slope, 1/density <= ~3 here
    for (std::size_t j = 0; j <= 64; ++j)
        CHECK(std::abs(back.values[j] - m.values[j]) <= 3.0 * g.h());
}

TEST_CASE("inverse composed with the map evaluates to the argument") {
    std::mt19937 rng(11);
    SpaceGrid g(128);
    MonotoneMap m(g, oracle::random_monotone_values(128, rng, 0.2));
    const auto psi = generalized_inverse(m, g);
    for (double y : {0.1, 0.33, 0.5, 0.77, 0.9})
        CHECK(eval_map(m, eval_map(psi, y)) == Catch::Approx(y).margin(2.0 * g.h()));
}

TEST_CASE("compose applies maps right to left") {
    SpaceGrid g(50);
    std::vector<double> sq(g.nodes());
    for (std::size_t j = 0; j <= 50; ++j) sq[j] = g.node(j) * g.node(j);
    MonotoneMap parab(g, sq);
    const auto id = MonotoneMap::identity(g);

    const auto same = compose(parab, id);
    for (std::size_t j = 0; j <= 50; ++j)
        CHECK(same.values[j] == Catch::Approx(parab.values[j]).margin(1e-12));

    const auto fourth = compose(parab, parab); // x -> (x^2)^2 sampled on nodes
    CHECK(fourth.values[25] == Catch::Approx(std::pow(0.5, 4)).margin(2.0 * g.h()));
}

TEST_CASE("paths validate every slice") {
    SpaceGrid g(4);
    TimeGrid t(2, 1.0);
    const auto c = PathGrid::constant(MonotoneMap::identity(g), t);
    CHECK(c.at(2, 2) == 0.5);

    CHECK_THROWS_AS(PathGrid(g, t, std::vector<double>(5, 0.0)), GridMismatch);

    std::vector<double> vals = c.values;
    vals[1 * 5 + 2] = 0.1; // below its left neighbor 0.25
    CHECK_THROWS_AS(PathGrid(g, t, vals), MonotonicityViolation);
}

TEST_CASE("free-upper paths admit slices ending below one") {
    SpaceGrid g(2);
    TimeGrid t(1, 1.0);
    const std::vector<double> vals{0.0, 0.3, 0.7, 0.0, 0.35, 0.7};
    CHECK_NOTHROW(PathGrid(g, t, vals, SliceBounds::free_upper));
    CHECK_THROWS_AS(PathGrid(g, t, vals, SliceBounds::unit_range), BoundaryViolation);
}

TEST_CASE("velocity fields pin the boundary to zero") {
    SpaceGrid g(4);
    TimeGrid t(1, 1.0);
    std::vector<double> ok{0.0, 1.0, 2.0, 1.0, 0.0, 0.0, -1.0, 0.5, -1.0, 0.0};
    const VelocityField v(g, t, ok);
    CHECK(v.at(0, 2) == 2.0);
    CHECK(v.at(1, 0) == 0.0);

    std::vector<double> bad = ok;
    bad[0] = 0.01;
    CHECK_THROWS_AS(VelocityField(g, t, bad), BoundaryViolation);
}

TEST_CASE("velocity field evaluation is bilinear") {
    SpaceGrid g(2);
    TimeGrid t(1, 1.0);
    // rows: t=0 -> (0, 2, 0); t=1 -> (0, 4, 0)
    const VelocityField v(g, t, {0.0, 2.0, 0.0, 0.0, 4.0, 0.0});
    CHECK(v.eval(0, 0.0, 0.5) == Catch::Approx(2.0));
    CHECK(v.eval(0, 1.0, 0.5) == Catch::Approx(4.0));
    CHECK(v.eval(0, 0.5, 0.5) == Catch::Approx(3.0));
    CHECK(v.eval(0, 0.5, 0.25) == Catch::Approx(1.5)); // halfway up the left ramp
    CHECK(v.eval(0, 0.0, 0.0) == 0.0);
}

TEST_CASE("jump records derive velocities consistent with their limits") {
    TimeGrid t(4, 1.0);
    std::vector<double> lo{0.2, 0.225, 0.25, 0.275, 0.3};
    std::vector<double> hi{0.6, 0.625, 0.65, 0.675, 0.7};
    JumpRecord j(0.4, t, lo, hi);
    CHECK(j.check_velocity_consistency() == 0.0);
    CHECK(j.gap(0) == Catch::Approx(0.4));
    CHECK(j.max_gap() == Catch::Approx(0.4));
    for (std::size_t k = 0; k <= 4; ++k) CHECK(j.lo_vel[k] == Catch::Approx(0.1));
}

TEST_CASE("jump records reject crossed limits and exterior locations") {
    TimeGrid t(1, 1.0);
    CHECK_THROWS_AS(JumpRecord(0.5, t, {0.4, 0.4}, {0.3, 0.5}), MonotonicityViolation);
    CHECK_THROWS_AS(JumpRecord(0.0, t, {0.1, 0.1}, {0.2, 0.2}), DomainError);
    CHECK_THROWS_AS(JumpRecord(0.5, t, {0.1}, {0.2, 0.2}), GridMismatch);
}

TEST_CASE("energy breakdown total is the exact sum of parts") {
    EnergyBreakdown e;
    e.kinetic = 0.1;
    e.fisher_rao = 0.2;
    e.jump = 0.4;
    CHECK(e.total() == 0.1 + 0.2 + 0.4);
}
