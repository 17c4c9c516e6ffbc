#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlepi/diagnostics.hpp"
#include "nlepi/grid.hpp"

using namespace nlepi;

TEST_CASE("build_grid basics") {
    Grid g = build_grid(-1.7, 1.7, 340);
    CHECK(g.dim == 1);
    CHECK(g.dx[0] == (1.7 - (-1.7)) / 340);
    CHECK(g.dx[0] == doctest::Approx(0.01).epsilon(1e-13));
    CHECK(g.cell_count() == 340);
    CHECK(g.interface_count(0) == 341);

    Grid q = build_grid(0.0, 1.0, 4);
    CHECK(q.dx[0] == 0.25);
    CHECK(q.center(0, 0) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(q.center(0, 1) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(q.center(0, 2) == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(q.center(0, 3) == doctest::Approx(0.875).epsilon(1e-15));
    CHECK(q.interface(0, 1) == 0.25);
}

TEST_CASE("build_grid rejects bad input") {
    CHECK_THROWS_AS(build_grid(0.0, 1.0, 3), validation_error);
    CHECK_THROWS_AS(build_grid(1.0, 1.0, 10), validation_error);
    CHECK_THROWS_AS(build_grid(2.0, 1.0, 10), validation_error);
    CHECK_THROWS_AS(build_grid({0.0, 0.0}, {1.0, 1.0}, {8, 3}), validation_error);
}

TEST_CASE("2D grid layout") {
    Grid g = build_grid({-1.0, -2.0}, {1.0, 2.0}, {8, 16});
    CHECK(g.dim == 2);
    CHECK(g.dx[0] == 0.25);
    CHECK(g.dx[1] == 0.25);
    CHECK(g.cell_count() == 128);
    CHECK(g.index(3, 2) == 2 * 8 + 3);
    CHECK(g.cell_measure() == 0.0625);
    CHECK(g.interface_count(0) == 9 * 16);
    CHECK(g.interface_count(1) == 8 * 17);
}

TEST_CASE("coordinates are pure arithmetic, reproducible bit-exactly") {
    Grid g = build_grid(-1.7, 1.7, 340);
    for (int k : {0, 1, 17, 200, 339}) {
        CHECK(g.center(0, k) == g.lo[0] + (k + 0.5) * g.dx[0]);
        CHECK(g.center(0, k) == g.center(0, k));
        CHECK(g.interface(0, k) == g.lo[0] + k * g.dx[0]);
    }
}

TEST_CASE("cell measures telescope to the domain measure") {
    for (auto [lo, hi, n] : {std::tuple{-1.7, 1.7, 340}, {0.0, 1.0, 7}, {-3.0, 9.0, 77}}) {
        Grid g = build_grid(lo, hi, n);
        double sum = 0.0;
        for (int j = 0; j < g.n[0]; ++j) sum += g.dx[0];
        CHECK(sum == doctest::Approx(hi - lo).epsilon(n * 1e-15));
    }
}

TEST_CASE("project_function samples midpoints") {
    Grid g = build_grid(0.0, 1.0, 8);
    Field zero = project_function(g, [](double) { return 0.0; });
    for (double v : zero.values) CHECK(v == 0.0);

    Field c = project_function(g, [](double) { return 3.5; });
    CHECK(total_mass(g, c) == doctest::Approx(3.5 * 1.0).epsilon(1e-14));

    // Tiny negative round-off is clamped, genuine negatives kept.
    Field clamped = project_function(g, [](double) { return -5e-15; });
    for (double v : clamped.values) CHECK(v == 0.0);
    Field neg = project_function(g, [](double) { return -0.5; });
    for (double v : neg.values) CHECK(v == -0.5);
}

TEST_CASE("indicator projection mass matches the exact integral to one cell") {
    Grid g = build_grid(-1.7, 1.7, 340);
    Field f = project_function(g, [](double x) { return (x >= -0.25 && x <= 0.25) ? 2.0 : 0.0; });
    double exact = 2.0 * 0.5;
    CHECK(std::abs(total_mass(g, f) - exact) <= 1.0 * g.dx[0] * 2.0);
}

TEST_CASE("project_function rejects non-finite samples") {
    Grid g = build_grid(0.0, 1.0, 8);
    CHECK_THROWS_AS(project_function(g, [](double x) { return x > 0.5 ? std::nan("") : 0.0; }),
                    validation_error);
}

TEST_CASE("projection is linear") {
    Grid g = build_grid(-2.0, 2.0, 64);
    auto f = [](double x) { return std::sin(3.0 * x) + 1.5; };
    auto h = [](double x) { return std::exp(-x * x); };
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    for (int rep = 0; rep < 20; ++rep) {
        double a = coef(rng), b = coef(rng);
        Field combo = project_function(g, [&](double x) { return a * f(x) + b * h(x); });
        Field fa = project_function(g, f);
        Field fb = project_function(g, h);
        for (int j = 0; j < g.n[0]; ++j) {
            double expected = a * fa.values[j] + b * fb.values[j];
            CHECK(combo.values[j] == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("2D projection") {
    Grid g = build_grid({0.0, 0.0}, {1.0, 1.0}, {8, 8});
    Field f = project_function(g, [](double x, double y) { return x + 10.0 * y; });
    CHECK(f.values[g.index(2, 5)] ==
          doctest::Approx(g.center(0, 2) + 10.0 * g.center(1, 5)).epsilon(1e-15));
}
