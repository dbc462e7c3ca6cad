#include <doctest.h>

#include <cmath>

#include "sps/solver.hpp"
#include "sps/talenti.hpp"

using namespace sps;

namespace {

struct Setup {
    Problem pb = Problem::make({3, 2.0, 2.0, 4.0, {}});
    GridPtr grid = make_grid(3, 40.0, 512, 2.0);
    RieszKernel K = build_kernel(grid, 2.0, 4);
    double cs = c_star(pb.exps, best_sobolev_constant(3));
};

const Setup& setup() {
    static const Setup s;
    return s;
}

}  // namespace

TEST_CASE("init parsing") {
    CHECK(parse_init("gaussian").kind == InitKind::gaussian);
    const auto t = parse_init("talenti:0.25");
    CHECK(t.kind == InitKind::talenti);
    CHECK(t.eps == 0.25);
    CHECK(parse_init("file:/tmp/x.csv").path == "/tmp/x.csv");
    CHECK(to_string(parse_init("talenti:2")) == "talenti:2");
    CHECK_THROWS_AS(parse_init("banana"), std::invalid_argument);
    CHECK_THROWS_AS(parse_init("talenti:-1"), std::invalid_argument);
}

TEST_CASE("solve at half the threshold and verify") {
    const auto& s = setup();
    SolveConfig cfg;
    cfg.c_star = s.cs;
    const double c = 0.5 * s.cs;
    const auto res = minimize_Lambda_c(c, s.pb, s.K, cfg);
    REQUIRE(res.converged);
    CHECK(res.lambda_star > 0);
    CHECK(res.pohozaev_rel < 1e-3);
    CHECK(res.H_residual < 1e-8);
    CHECK(res.lambda_star == doctest::Approx(3.5134).epsilon(2e-3));
    const auto vr = verify_solution(res, s.pb, s.K);
    CHECK(vr.energy_rel < 1e-6);
    CHECK(vr.weak_residual < 1e-4);
    CHECK(vr.ok());
    // The minimizer is a fiber maximum: its dilations do not increase λ_c.
    const auto fr = solve_tc(c, res.rec, s.pb.exps);
    CHECK(fr.t_c == doctest::Approx(1.0).epsilon(1e-6));

    // A different start reaches the same level.
    SolveConfig cfg2 = cfg;
    cfg2.init = parse_init("talenti:2");
    const auto res2 = minimize_Lambda_c(c, s.pb, s.K, cfg2);
    REQUIRE(res2.converged);
    CHECK(res2.lambda_star == doctest::Approx(res.lambda_star).epsilon(1e-5));

    // Warm start from the minimizer converges immediately.
    SolveConfig warm = cfg;
    warm.init.kind = InitKind::profile;
    warm.init.values = res.u_star.values;
    const auto res3 = minimize_Lambda_c(c, s.pb, s.K, warm);
    CHECK(res3.converged);
    CHECK(res3.iterations <= 5);
}

TEST_CASE("verify flags a non-solution") {
    const auto& s = setup();
    auto u = sample(s.grid, [](double r) { return std::exp(-r * r); });
    const auto rec = evaluate(u, s.K, s.pb);
    const double c = nehari_H(rec, s.pb.exps) / s.pb.exps.s_r;
    const auto vr = verify_solution(u, lambda_c(rec, c), c, s.pb, s.K);
    CHECK(vr.energy_ok);
    CHECK(vr.membership_ok);
    CHECK_FALSE(vr.weak_ok);
    CHECK_FALSE(vr.ok());
}

TEST_CASE("no solution for c <= 0") {
    const auto& s = setup();
    CHECK_THROWS_AS(minimize_Lambda_c(0.0, s.pb, s.K, SolveConfig{}), NoRootError);
}

TEST_CASE("smooth directions are reproducible") {
    const auto& s = setup();
    const auto a = smooth_directions(*s.grid, 5, 3), b = smooth_directions(*s.grid, 5, 3);
    CHECK(a == b);
    for (const auto& v : a) CHECK(v.back() == 0.0);
}

TEST_CASE("first eigenvalue at r = q") {
    const auto pb = Problem::make({3, 2.0, 2.0, 3.0, {}});
    auto g = make_grid(3, 100.0, 1024, 2.0);
    const auto K = build_kernel(g, 2.0, 4);
    const auto er = eigen_lambda1(pb, K, SolveConfig{});
    REQUIRE(er.converged);
    CHECK(er.rec.I == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(er.lambda_1 == doctest::Approx(1.0 / er.rec.F).epsilon(1e-12));
    CHECK(er.eigen_residual < 1e-5);
    CHECK(er.lambda_1 == doctest::Approx(2.7732).epsilon(3e-3));
    CHECK_THROWS_AS(eigen_lambda1(Problem::make({3, 2.0, 2.0, 4.0, {}}), K, SolveConfig{}), std::invalid_argument);
}
