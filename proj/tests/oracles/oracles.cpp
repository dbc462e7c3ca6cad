#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

namespace sps::oracles {

namespace {

constexpr double pi = std::numbers::pi;

double sphere(int n) { return 2.0 * std::pow(pi, (n + 1) / 2.0) / std::tgamma((n + 1) / 2.0); }

double riesz_A(int N, double alpha) {
    return std::tgamma((N - alpha) / 2.0) / (std::tgamma(alpha / 2.0) * std::pow(pi, N / 2.0) * std::pow(2.0, alpha));
}

double interp(const RadialFunction& f, double r) {
    if (f.closed_form) return f.closed_form(r);
    const auto& x = f.grid->nodes;
    if (r <= x.front()) return f.values.front();
    if (r >= x.back()) return 0.0;
    const auto k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), r) - x.begin());
    const double s = (r - x[k - 1]) / (x[k] - x[k - 1]);
    return (1 - s) * f.values[k - 1] + s * f.values[k];
}

}  // namespace

OracleReport compare(std::string name, double reference, double artifact, double tolerance) {
    OracleReport rep;
    rep.name = std::move(name);
    rep.reference_value = reference;
    rep.artifact_value = artifact;
    rep.rel_error = reference != 0.0 ? std::abs(artifact - reference) / std::abs(reference)
                                     : std::abs(artifact);
    rep.tolerance = tolerance;
    rep.pass = rep.rel_error <= tolerance;
    return rep;
}

double coulomb_bruteforce(const RadialFunction& f, int N, double alpha) {
    if (!f.grid) throw std::invalid_argument("coulomb_bruteforce: no grid");
    const int M = static_cast<int>(f.grid->size());
    if (M > 256) throw std::invalid_argument("coulomb_bruteforce: M <= 256 only");
    const int nr = 4 * M, nt = 4 * M;
    const double R = f.grid->R_max, h = R / nr, dth = pi / nt;

    std::vector<double> cosv(nt), sinw(nt);
    for (int k = 0; k < nt; ++k) {
        const double th = (k + 0.5) * dth;
        cosv[k] = std::cos(th);
        sinw[k] = std::pow(std::sin(th), N - 2) * dth;
    }
    std::vector<double> r(nr + 1), fw(nr + 1);
    for (int i = 0; i <= nr; ++i) {
        r[i] = i * h;
        const double w = (i == 0 || i == nr) ? 0.5 * h : h;
        fw[i] = interp(f, r[i]) * std::pow(r[i], N - 1) * w;
    }
    const double e = (alpha - N) / 2.0;
    double total = 0.0;
    for (int i = 1; i <= nr; ++i) {
        if (fw[i] == 0.0) continue;
        for (int j = 1; j <= i; ++j) {
            if (fw[j] == 0.0) continue;
            double J = 0.0;
            for (int k = 0; k < nt; ++k) J += std::pow(r[i] * r[i] + r[j] * r[j] - 2 * r[i] * r[j] * cosv[k], e) * sinw[k];
            total += (i == j ? 1.0 : 2.0) * fw[i] * fw[j] * J;
        }
    }
    return riesz_A(N, alpha) * sphere(N - 1) * sphere(N - 2) * total;
}

double tc_bisection(double c, double I, double G, const DerivedExponents& x) {
    if (!(c > 0)) throw std::domain_error("tc_bisection: c must be positive");
    auto H = [&](double t) {
        return (x.s_r - x.s_q) * std::pow(t, x.s_q) * I + (x.s_2star - x.s_r) * std::pow(t, x.s_2star) * G -
               x.s_r * c;
    };
    double lo = 1.0, hi = 1.0;
    while (H(lo) > 0) lo *= 0.5;
    while (H(hi) < 0) hi *= 2.0;
    double a = std::log(lo), b = std::log(hi);
    for (int it = 0; it < 400 && b - a > 1e-14; ++it) {
        const double m = 0.5 * (a + b);
        (H(std::exp(m)) < 0 ? a : b) = m;
    }
    return std::exp(0.5 * (a + b));
}

double golden_section_max(const std::function<double(double)>& f, double a, double b, double tol) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

double zu_argmax(const DerivedExponents& x, double S, double L) {
    auto z = [&](double lt) {
        const double t = std::exp(lt);
        return 0.5 * S * std::pow(L, 2.0 / x.two_star) * std::pow(t, x.s_q) - L / x.two_star * std::pow(t, x.s_2star);
    };
    return std::exp(golden_section_max(z, -30.0, 30.0, 1e-15));
}

double newtonian_ball_potential(double r) { return r < 1.0 ? (3.0 - r * r) / 6.0 : 1.0 / (3.0 * r); }

double newtonian_ball_energy() { return 8.0 * pi / 15.0; }

double gaussian_dirichlet(int N, double a) { return a * N * std::pow(pi / (2.0 * a), N / 2.0); }

double gaussian_lp(int N, double a, double ell) { return std::pow(pi / (a * ell), N / 2.0); }

double gaussian_coulomb(int N, double alpha, double b) {
    // f⋆f = (π/2b)^{N/2} e^{-b|z|²/2}; integrate against A_α |z|^{α-N}.
    return riesz_A(N, alpha) * std::pow(pi / (2.0 * b), N / 2.0) * sphere(N - 1) * 0.5 * std::tgamma(alpha / 2.0) *
           std::pow(b / 2.0, -alpha / 2.0);
}

double talenti_sobolev(int N) {
    const double k = (N - 2) / 2.0, two_star = 2.0 * N / (N - 2.0);
    boost::math::quadrature::exp_sinh<double> q;
    // Integrands in log form so that the far tail underflows to 0 instead of 0·inf.
    auto power_law = [](double r, double a, double b) {
        return r > 0 ? std::exp(a * std::log(r) - b * std::log1p(r * r)) : 0.0;
    };
    const double grad = 4.0 * k * k * q.integrate([&](double r) { return power_law(r, N + 1.0, 2.0 * k + 2.0); });
    const double l = q.integrate([&](double r) { return power_law(r, N - 1.0, k * two_star); });
    // ω_{N-1} cancels only partially: S = ω grad / (ω l)^{2/2*}.
    const double w = sphere(N - 1);
    return w * grad / std::pow(w * l, 2.0 / two_star);
}

}  // namespace sps::oracles
