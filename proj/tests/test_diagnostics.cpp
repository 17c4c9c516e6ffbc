#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlepi/diagnostics.hpp"

using namespace nlepi;

TEST_CASE("total_mass") {
    Grid g = build_grid(0.0, 1.0, 8);
    Field z(g);
    CHECK(total_mass(g, z) == 0.0);
    Field c = project_function(g, [](double) { return 1.5; });
    CHECK(total_mass(g, c) == doctest::Approx(1.5).epsilon(1e-14));

    // Linear and monotone in the field.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    Field a(g), b(g);
    for (int j = 0; j < 8; ++j) {
        a.values[j] = u(rng);
        b.values[j] = a.values[j] + u(rng);
    }
    CHECK(total_mass(g, b) >= total_mass(g, a));
    Field sum(g);
    for (int j = 0; j < 8; ++j) sum.values[j] = a.values[j] + b.values[j];
    CHECK(total_mass(g, sum) ==
          doctest::Approx(total_mass(g, a) + total_mass(g, b)).epsilon(1e-13));
}

TEST_CASE("lp_norm") {
    Grid g = build_grid(0.0, 1.0, 10);  // dx = 0.1
    Field z(g);
    CHECK(lp_norm(g, z, LpNorm::l1) == 0.0);
    CHECK(lp_norm(g, z, LpNorm::l2) == 0.0);
    CHECK(lp_norm(g, z, LpNorm::linf) == 0.0);

    Field f(g);
    f.values[4] = 2.0;
    CHECK(lp_norm(g, f, LpNorm::l1) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(lp_norm(g, f, LpNorm::l2) == doctest::Approx(std::sqrt(4.0 * 0.1)).epsilon(1e-15));
    CHECK(lp_norm(g, f, LpNorm::linf) == 2.0);

    // Constant-field identities tying the three norms together.
    Field c = project_function(g, [](double) { return 3.0; });
    double measure = 1.0;
    CHECK(lp_norm(g, c, LpNorm::l1) ==
          doctest::Approx(lp_norm(g, c, LpNorm::linf) * measure).epsilon(1e-14));
    CHECK(lp_norm(g, c, LpNorm::l2) ==
          doctest::Approx(lp_norm(g, c, LpNorm::linf) * std::sqrt(measure)).epsilon(1e-14));
}

TEST_CASE("collector records aligned series and the run invariants") {
    Grid g = build_grid(-1.7, 1.7, 170);
    ModelSpec m = make_sis(1.0, 0.5, QuadAbsKernel{0.5}, 0.0);
    State s;
    s.fields.push_back(project_function(g, [](double x) { return std::abs(x) < 0.5 ? 0.4 : 0.0; }));
    s.fields.push_back(project_function(g, [](double x) { return std::abs(x) < 0.1 ? 0.25 : 0.0; }));
    SolverConfig cfg;
    cfg.t_final = 1.0;
    cfg.cfl = 0.45;
    cfg.snapshot_every = 50;
    DiagnosticsCollector coll;
    RunResult res = run(m, s, cfg, {coll.sink()});
    REQUIRE(!res.summary.aborted);
    const auto& ser = coll.series();
    REQUIRE(ser.size() >= 3);
    CHECK(ser.per_compartment_mass.size() == ser.size());
    CHECK(ser.linf_per_compartment.size() == ser.size());
    CHECK(ser.min_value.size() == ser.size());
    CHECK(ser.support_width_n.size() == ser.size());
    for (size_t k = 1; k < ser.size(); ++k) CHECK(ser.times[k] > ser.times[k - 1]);
    // Mass stays constant and the positivity floor holds at every snapshot.
    for (size_t k = 0; k < ser.size(); ++k) {
        CHECK(std::abs(ser.total_mass[k] - ser.total_mass[0]) <= 1e-9 * ser.total_mass[0]);
        CHECK(ser.min_value[k] >= -1e-12);
    }
}

TEST_CASE("refinement_order validates its ladder") {
    ModelSpec m = make_sis(0.0, 0.0, ZeroKernel{}, 0.0);
    SolverConfig cfg;
    cfg.t_final = 0.1;
    cfg.cfl = 0.4;
    std::vector<std::function<double(double)>> init{[](double) { return 0.0; },
                                                    [](double) { return 0.0; }};
    CHECK_THROWS_AS(refinement_order(m, init, -1.0, 1.0, cfg, {0.04, 0.02}), validation_error);
    CHECK_THROWS_AS(refinement_order(m, init, -1.0, 1.0, cfg, {0.04, 0.02, 0.015}),
                    validation_error);
}

TEST_CASE("refinement_order on zero data reports exact") {
    ModelSpec m = make_sis(0.0, 0.0, QuadAbsKernel{0.5}, 0.0);
    SolverConfig cfg;
    cfg.t_final = 0.1;
    cfg.cfl = 0.4;
    std::vector<std::function<double(double)>> init{[](double) { return 0.0; },
                                                    [](double) { return 0.0; }};
    auto res = refinement_order(m, init, -1.0, 1.0, cfg, {0.04, 0.02, 0.01});
    CHECK(res.exact);
    for (double d : res.l1_diffs) CHECK(d == 0.0);
}

TEST_CASE("upwind transport of a smooth bump converges at first order") {
    // A frozen blob in the second compartment induces a fixed smooth
    // velocity on the first; the reaction is identically zero.
    auto km = KernelMatrix::from_entries(
        {"P", "Q"}, {ZeroKernel{}, GaussianKernel{1.0, 0.3, GaussSign::attractive}, ZeroKernel{},
                     ZeroKernel{}});
    GenericC1Reaction none;
    none.g = [](std::span<const double>, std::span<double> r) {
        for (auto& v : r) v = 0.0;
    };
    ModelSpec m = make_generic({"P", "Q"}, km, none, 0.0);
    std::vector<std::function<double(double)>> init{
        [](double x) {
            double z = (x + 0.3) / 0.15;
            return std::exp(-0.5 * z * z);
        },
        [](double x) {
            double z = (x - 0.5) / 0.2;
            return 2.0 * std::exp(-0.5 * z * z);
        }};
    SolverConfig cfg;
    cfg.t_final = 0.2;
    cfg.cfl = 0.4;
    auto res = refinement_order(m, init, -1.3, 1.3, cfg, {0.04, 0.02, 0.01});
    REQUIRE(!res.exact);
    CHECK(res.fitted_order >= 0.8);
    CHECK(res.fitted_order <= 1.2);
}

TEST_CASE("viscosity_study trivial and monotone cases") {
    Grid g = build_grid(-1.7, 1.7, 170);
    ModelSpec m = make_sis(1.0, 0.5, QuadAbsKernel{0.5}, 0.0);
    State s;
    s.fields.push_back(project_function(g, [](double x) { return std::abs(x) < 0.5 ? 0.4 : 0.0; }));
    s.fields.push_back(project_function(g, [](double x) { return std::abs(x) < 0.1 ? 0.25 : 0.0; }));
    SolverConfig cfg;
    cfg.t_final = 0.5;
    cfg.cfl = 0.45;

    SUBCASE("eps = {0} compares the reference with itself") {
        auto res = viscosity_study(m, s, cfg, {0.0});
        for (double d : res.distances[0]) CHECK(d == 0.0);
    }

    SUBCASE("distances decrease strictly as eps vanishes") {
        auto res = viscosity_study(m, s, cfg, {1e-2, 1e-3, 1e-4});
        CHECK(res.strictly_decreasing);
        for (size_t k = 0; k < res.eps.size(); ++k)
            for (double d : res.distances[k]) CHECK(d > 0.0);
    }

    SUBCASE("validation") {
        CHECK_THROWS_AS(viscosity_study(m, s, cfg, {}), validation_error);
        CHECK_THROWS_AS(viscosity_study(m, s, cfg, {1e-3, 1e-2}), validation_error);
    }
}

TEST_CASE("interior cells of a zero-kernel constant state never feel the boundary leak") {
    // The centered Laplacian of an interior-constant state is exactly
    // zero, so with zero kernels the epsilon runs differ from the eps=0
    // run only within the stencil's reach of the boundary.
    Grid g = build_grid(-1.0, 1.0, 100);
    ModelSpec m = make_sis(0.0, 0.0, ZeroKernel{}, 1e-3);
    State s;
    s.fields.push_back(project_function(g, [](double) { return 1.0; }));
    s.fields.push_back(project_function(g, [](double) { return 0.5; }));
    SolverConfig cfg;
    cfg.t_final = 0.05;
    cfg.cfl = 0.45;
    RunResult with_eps = run(m, s, cfg);
    ModelSpec m0 = m;
    m0.epsilon = 0.0;
    RunResult without = run(m0, s, cfg);
    REQUIRE(!with_eps.summary.aborted);
    long reach = 2 * (with_eps.summary.steps + 1);
    for (int xi = 0; xi < 2; ++xi)
        for (long j = reach; j < g.n[0] - reach; ++j)
            CHECK(with_eps.final_state.fields[xi].values[j] ==
                  without.final_state.fields[xi].values[j]);
}
