#include "sps/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

// pchip.hpp in Boost 1.74 calls isnan unqualified.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

namespace sps {

double sphere_area(int n) {
    const double d = n + 1.0;
    return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

namespace {

// ∫_0^1 (1-s)(a+hs)^{n} ds, ∫_0^1 s(a+hs)^{n} ds and ∫_0^1 (a+hs)^n ds by
// binomial expansion; every term is nonnegative, so no cancellation.
struct CellMoments {
    double left = 0, right = 0, full = 0;
};

CellMoments cell_moments(double a, double h, int n) {
    CellMoments m;
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
        const double term = binom * std::pow(a, n - k) * std::pow(h, k);
        m.left += term / ((k + 1.0) * (k + 2.0));
        m.right += term / (k + 2.0);
        m.full += term / (k + 1.0);
        binom = binom * (n - k) / (k + 1.0);
    }
    return m;
}

}  // namespace

namespace {

void fill_weights(RadialGrid& g) {
    const int N = g.N, M = g.M;
    g.omega = sphere_area(N - 1);
    g.quad_weights.assign(M, 0.0);
    g.shell_measure.assign(M - 1, 0.0);
    const double r1 = g.nodes[0];
    g.quad_weights[0] = g.omega * std::pow(r1, N) / N;
    for (int i = 0; i + 1 < M; ++i) {
        const double a = g.nodes[i];
        const double h = g.nodes[i + 1] - a;
        const auto m = cell_moments(a, h, N - 1);
        g.quad_weights[i] += g.omega * h * m.left;
        g.quad_weights[i + 1] += g.omega * h * m.right;
        g.shell_measure[i] = g.omega * h * m.full;
    }
}

void check_common(int N, double R_max, int M) {
    if (N < 1) throw std::invalid_argument("make_grid: N must be positive");
    if (!(R_max > 0.0) || !std::isfinite(R_max))
        throw std::invalid_argument("make_grid: R_max must be positive");
    if (M < 16) throw std::invalid_argument("make_grid: M must be at least 16");
}

}  // namespace

GridPtr make_grid(int N, double R_max, int M, double gamma) {
    check_common(N, R_max, M);
    if (!(gamma >= 1.0)) throw std::invalid_argument("make_grid: grading gamma must be >= 1");

    auto g = std::make_shared<RadialGrid>();
    g->N = N;
    g->R_max = R_max;
    g->M = M;
    g->gamma = gamma;
    g->nodes.resize(M);
    for (int i = 0; i < M; ++i)
        g->nodes[i] = R_max * std::pow(static_cast<double>(i + 1) / M, gamma);
    g->nodes.back() = R_max;
    fill_weights(*g);
    return g;
}

GridPtr make_geometric_grid(int N, double R_max, int M, double r_min) {
    check_common(N, R_max, M);
    if (!(r_min > 0.0 && r_min < R_max)) throw std::invalid_argument("make_geometric_grid: need 0 < r_min < R_max");

    auto g = std::make_shared<RadialGrid>();
    g->N = N;
    g->R_max = R_max;
    g->M = M;
    g->gamma = 0.0;
    g->r_min = r_min;
    g->nodes.resize(M);
    const double ratio = std::log(R_max / r_min);
    for (int i = 0; i < M; ++i) g->nodes[i] = r_min * std::exp(ratio * i / (M - 1.0));
    g->nodes.back() = R_max;
    fill_weights(*g);
    return g;
}

RadialFunction sample(const GridPtr& grid, std::function<double(double)> f) {
    RadialFunction u;
    u.grid = grid;
    u.values.resize(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) u.values[i] = f(grid->nodes[i]);
    u.values.back() = 0.0;
    u.closed_form = std::move(f);
    return u;
}

RadialFunction from_values(const GridPtr& grid, std::vector<double> values) {
    if (values.size() != grid->size())
        throw std::invalid_argument("from_values: value count does not match grid size");
    RadialFunction u;
    u.grid = grid;
    u.values = std::move(values);
    u.values.back() = 0.0;
    return u;
}

double integrate(const RadialGrid& grid, std::span<const double> f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += grid.quad_weights[i] * f[i];
    return s;
}

double dirichlet_energy(const RadialGrid& grid, std::span<const double> u) {
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double h = grid.nodes[i + 1] - grid.nodes[i];
        const double d = (u[i + 1] - u[i]) / h;
        e += grid.shell_measure[i] * d * d;
    }
    return e;
}

double dirichlet_energy(const RadialFunction& u) { return dirichlet_energy(*u.grid, u.values); }

std::vector<double> dirichlet_gradient(const RadialGrid& grid, std::span<const double> u) {
    std::vector<double> g(u.size(), 0.0);
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double h = grid.nodes[i + 1] - grid.nodes[i];
        const double flux = 2.0 * grid.shell_measure[i] * (u[i + 1] - u[i]) / (h * h);
        g[i] -= flux;
        g[i + 1] += flux;
    }
    return g;
}

double lp_norm_pow(const RadialGrid& grid, std::span<const double> u, double ell) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += grid.quad_weights[i] * std::pow(std::abs(u[i]), ell);
    return s;
}

double lp_norm_pow(const RadialFunction& u, double ell) { return lp_norm_pow(*u.grid, u.values, ell); }

DilationResult resample_dilation(const RadialFunction& u, double t, double sigma) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("resample_dilation: t must be positive");
    const RadialGrid& g = *u.grid;
    const double scale = std::pow(t, sigma);
    DilationResult out;
    out.u.grid = u.grid;
    out.u.decays_to_zero = u.decays_to_zero;
    out.u.values.resize(g.size());

    if (u.closed_form) {
        auto f = u.closed_form;
        out.u.closed_form = [f, t, scale](double r) { return scale * f(t * r); };
        for (std::size_t i = 0; i < g.size(); ++i) out.u.values[i] = scale * f(t * g.nodes[i]);
    } else {
        std::vector<double> x(g.nodes.begin(), g.nodes.end());
        std::vector<double> y(u.values.begin(), u.values.end());
        const double x_first = x.front(), x_last = x.back(), y_first = y.front();
        boost::math::interpolators::pchip<std::vector<double>> spline(std::move(x), std::move(y));
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double s = t * g.nodes[i];
            double v;
            if (s <= x_first)
                v = y_first;
            else if (s >= x_last)
                v = 0.0;
            else
                v = spline(s);
            out.u.values[i] = scale * v;
        }
    }
    out.u.values.back() = 0.0;

    if (t < 1.0) {
        const double cut = t * g.R_max;
        double lost = 0.0, total = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double m = g.quad_weights[i] * u.values[i] * u.values[i];
            total += m;
            if (g.nodes[i] >= cut) lost += m;
        }
        out.truncation_loss = total > 0.0 ? lost / total : 0.0;
        out.truncation_warning = out.truncation_loss > kTruncationWarnLevel;
    }
    return out;
}

H1Preconditioner::H1Preconditioner(const RadialGrid& grid, bool use_stiffness, double mass_scale) {
    const std::size_t M = grid.size();
    lower_.assign(M, 0.0);
    diag_.assign(M, 0.0);
    upper_.assign(M, 0.0);
    for (std::size_t i = 0; i < M; ++i) diag_[i] = mass_scale * grid.quad_weights[i];
    if (use_stiffness) {
        for (std::size_t i = 0; i + 1 < M; ++i) {
            const double h = grid.nodes[i + 1] - grid.nodes[i];
            const double k = grid.shell_measure[i] / (h * h);
            diag_[i] += k;
            diag_[i + 1] += k;
            upper_[i] = -k;
            lower_[i + 1] = -k;
        }
    }
    // Pinned boundary row.
    diag_[M - 1] = 1.0;
    lower_[M - 1] = 0.0;
    if (M >= 2) upper_[M - 2] = 0.0;
}

std::vector<double> H1Preconditioner::solve(std::span<const double> g) const {
    const std::size_t M = diag_.size();
    std::vector<double> c(M), x(M);
    std::vector<double> rhs(g.begin(), g.end());
    rhs[M - 1] = 0.0;
    // Thomas algorithm; P is symmetric positive definite and diagonally dominant.
    double denom = diag_[0];
    c[0] = upper_[0] / denom;
    x[0] = rhs[0] / denom;
    for (std::size_t i = 1; i < M; ++i) {
        denom = diag_[i] - lower_[i] * c[i - 1];
        c[i] = upper_[i] / denom;
        x[i] = (rhs[i] - lower_[i] * x[i - 1]) / denom;
    }
    for (std::size_t i = M - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

double H1Preconditioner::dual_norm(std::span<const double> g) const {
    const auto x = solve(g);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) s += g[i] * x[i];
    return std::sqrt(std::max(s, 0.0));
}

}  // namespace sps
