#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sps/grid.hpp"

using namespace sps;

TEST_CASE("sphere areas") {
    CHECK(sphere_area(1) == doctest::Approx(2 * M_PI));
    CHECK(sphere_area(2) == doctest::Approx(4 * M_PI));
    CHECK(sphere_area(3) == doctest::Approx(2 * M_PI * M_PI));
}

TEST_CASE("grid construction") {
    auto g = make_grid(3, 10.0, 64, 2.0);
    CHECK(g->size() == 64);
    CHECK(g->nodes.back() == 10.0);
    for (std::size_t i = 1; i < g->size(); ++i) CHECK(g->nodes[i] > g->nodes[i - 1]);
    for (double w : g->quad_weights) CHECK(w > 0);
    CHECK_THROWS_AS(make_grid(3, -1.0, 64, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(3, 1.0, 8, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(3, 1.0, 64, 0.5), std::invalid_argument);
    auto h = make_geometric_grid(3, 4.0, 128, 1e-6);
    CHECK(h->nodes.front() == doctest::Approx(1e-6));
    CHECK(h->nodes[2] / h->nodes[1] == doctest::Approx(h->nodes[101] / h->nodes[100]));
    CHECK_THROWS_AS(make_geometric_grid(3, 4.0, 128, 5.0), std::invalid_argument);
}

TEST_CASE("weights integrate ball volume exactly") {
    for (int N : {3, 4, 5}) {
        auto g = make_grid(N, 2.0, 200, 1.5);
        std::vector<double> one(g->size(), 1.0);
        const double vol = sphere_area(N - 1) * std::pow(2.0, N) / N;
        CHECK(integrate(*g, one) == doctest::Approx(vol).epsilon(1e-13));
        std::vector<double> lin(g->nodes);
        CHECK(integrate(*g, lin) == doctest::Approx(sphere_area(N - 1) * std::pow(2.0, N + 1) / (N + 1)).epsilon(1e-6));
    }
}

TEST_CASE("Gaussian integrals match closed forms") {
    for (int N : {3, 4}) {
        auto g = make_grid(N, 12.0, 2048, 2.0);
        auto u = sample(g, [](double r) { return std::exp(-r * r); });
        CHECK(dirichlet_energy(u) == doctest::Approx(oracles::gaussian_dirichlet(N, 1.0)).epsilon(1e-5));
        for (double ell : {2.0, 3.0, 6.0})
            CHECK(lp_norm_pow(u, ell) == doctest::Approx(oracles::gaussian_lp(N, 1.0, ell)).epsilon(5e-5));
    }
}

TEST_CASE("Dirichlet gradient is the derivative of the energy") {
    auto g = make_grid(3, 8.0, 128, 2.0);
    auto u = sample(g, [](double r) { return std::exp(-r * r) * (1 + r); });
    const auto grad = dirichlet_gradient(*g, u.values);
    std::vector<double> v(g->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(g->nodes[i]) * std::exp(-g->nodes[i]);
    v.back() = 0;
    double dot = 0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += grad[i] * v[i];
    const double h = 1e-6;
    auto up = u.values, dn = u.values;
    for (std::size_t i = 0; i < v.size(); ++i) {
        up[i] += h * v[i];
        dn[i] -= h * v[i];
    }
    const double fd = (dirichlet_energy(*g, up) - dirichlet_energy(*g, dn)) / (2 * h);
    CHECK(dot == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("H1 preconditioner inverts its matrix") {
    auto g = make_grid(3, 8.0, 100, 2.0);
    H1Preconditioner P(*g, true, 0.7);
    std::vector<double> x(g->size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(g->nodes[i]);
    x.back() = 0;
    // b = (0.7 W + A) x with A the Dirichlet Hessian (half the gradient map).
    auto b = dirichlet_gradient(*g, x);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = 0.5 * b[i] + 0.7 * g->quad_weights[i] * x[i];
    const auto y = P.solve(b);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-10));
    CHECK(P.dual_norm(b) > 0);
}

TEST_CASE("dilation of a closed form is exact") {
    auto g = make_grid(3, 20.0, 512, 2.0);
    auto u = sample(g, [](double r) { return std::exp(-r * r); });
    const auto d = resample_dilation(u, 2.0, 1.0);
    for (std::size_t i = 0; i + 1 < g->size(); ++i)
        CHECK(d.u.values[i] == doctest::Approx(2.0 * std::exp(-4 * g->nodes[i] * g->nodes[i])));
    // Interpolated path agrees with the closed form to interpolation accuracy.
    auto raw = from_values(g, u.values);
    const auto e = resample_dilation(raw, 0.5, 1.0);
    const auto f = resample_dilation(u, 0.5, 1.0);
    for (std::size_t i = 0; i + 1 < g->size(); ++i) CHECK(std::abs(e.u.values[i] - f.u.values[i]) < 1e-4);
    CHECK_THROWS_AS(resample_dilation(u, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("dilation truncation is reported") {
    auto g = make_grid(3, 4.0, 256, 2.0);
    auto u = sample(g, [](double r) { return std::exp(-r * r / 4); });
    const auto d = resample_dilation(u, 0.25, 1.0);
    CHECK(d.truncation_loss > 0.1);
    CHECK(d.truncation_warning);
}
