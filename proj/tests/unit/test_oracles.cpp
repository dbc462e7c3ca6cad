#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sps/params.hpp"

using namespace sps;

TEST_CASE("report arithmetic") {
    const auto r = oracles::compare("x", 2.0, 2.001, 1e-3);
    CHECK(r.rel_error == doctest::Approx(5e-4));
    CHECK(r.pass);
    CHECK_FALSE(oracles::compare("y", 2.0, 2.1, 1e-3).pass);
}

TEST_CASE("golden section finds a known maximum") {
    CHECK(oracles::golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); }, -2, 2) ==
          doctest::Approx(0.3).epsilon(1e-7));
}

TEST_CASE("bisection reproduces the r = q closed form") {
    const auto e = derive_exponents({3, 2.0, 2.0, 3.0, {}});
    DerivedExponents x = e;
    x.s_r = x.s_q;
    const double t = oracles::tc_bisection(0.7, 1.0, 0.4, x);
    CHECK(t == doctest::Approx(std::pow(x.s_q * 0.7 / ((x.s_2star - x.s_q) * 0.4), 1.0 / x.s_2star)).epsilon(1e-12));
}

TEST_CASE("brute-force Coulomb on simple inputs") {
    auto g = make_grid(3, 8.0, 48, 2.0);
    auto zero = sample(g, [](double) { return 0.0; });
    CHECK(oracles::coulomb_bruteforce(zero, 3, 2.0) == 0.0);
    auto gauss = sample(g, [](double r) { return std::exp(-r * r); });
    CHECK(oracles::coulomb_bruteforce(gauss, 3, 2.0) == doctest::Approx(oracles::gaussian_coulomb(3, 2.0, 1.0)).epsilon(1e-3));
    auto big = make_grid(3, 8.0, 300, 2.0);
    CHECK_THROWS_AS(oracles::coulomb_bruteforce(sample(big, [](double) { return 1.0; }), 3, 2.0), std::invalid_argument);
}

TEST_CASE("Newtonian closed forms are continuous at the boundary") {
    CHECK(oracles::newtonian_ball_potential(1.0 - 1e-12) == doctest::Approx(oracles::newtonian_ball_potential(1.0)));
    CHECK(oracles::newtonian_ball_potential(0.0) == doctest::Approx(0.5));
    // Energy = ∫_B potential.
    double e = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double r = (i + 0.5) / n;
        e += 4 * M_PI * r * r * oracles::newtonian_ball_potential(r) / n;
    }
    CHECK(e == doctest::Approx(oracles::newtonian_ball_energy()).epsilon(1e-8));
}

TEST_CASE("Gaussian integrals by quadrature") {
    // ∫_{R^3} e^{-2r²} = (π/2)^{3/2}.
    CHECK(oracles::gaussian_lp(3, 1.0, 2.0) == doctest::Approx(std::pow(M_PI / 2, 1.5)));
    double d = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double r = (i + 0.5) * 10.0 / n;
        d += 4 * M_PI * r * r * 4 * r * r * std::exp(-2 * r * r) * 10.0 / n;
    }
    CHECK(oracles::gaussian_dirichlet(3, 1.0) == doctest::Approx(d).epsilon(1e-8));
}
