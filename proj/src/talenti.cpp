#include "sps/talenti.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sps/parallel.hpp"

namespace sps {

double smoothstep_cutoff(double r, double rho) {
    const double half = 0.5 * rho;
    if (r <= half) return 1.0;
    if (r >= rho) return 0.0;
    const double s = (r - half) / half;
    return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

TalentiFunction make_v_eps(const TalentiParams& tp, const GridPtr& grid) {
    if (!(tp.eps > 0.0)) throw std::invalid_argument("make_v_eps: eps must be positive");
    if (!(tp.rho > 0.0 && tp.rho <= grid->R_max)) throw std::invalid_argument("make_v_eps: rho must lie in (0, R_max]");
    const int N = grid->N;
    const double eps = tp.eps, rho = tp.rho;
    const double k = (N - 2.0) / 2.0;
    auto u_eps = [eps, rho, k](double r) {
        return smoothstep_cutoff(r, rho) * std::pow(eps / (eps * eps + r * r), k);
    };
    TalentiFunction out;
    RadialFunction u = sample(grid, u_eps);
    const double ts = 2.0 * N / (N - 2.0);
    out.norm_2star = std::pow(lp_norm_pow(u, ts), 1.0 / ts);
    const double inv = 1.0 / out.norm_2star;
    for (auto& v : u.values) v *= inv;
    u.closed_form = [u_eps, inv](double r) { return inv * u_eps(r); };
    out.v = std::move(u);
    const auto inside = std::count_if(grid->nodes.begin(), grid->nodes.end(), [eps](double r) { return r < eps; });
    out.eps_too_small = inside < 8;
    return out;
}

std::vector<double> geometric_eps(double hi, double lo, int n) {
    if (n < 2 || !(hi > lo && lo > 0.0)) throw std::invalid_argument("geometric_eps: need hi > lo > 0 and n >= 2");
    std::vector<double> e(n);
    for (int i = 0; i < n; ++i) e[i] = hi * std::pow(lo / hi, static_cast<double>(i) / (n - 1));
    return e;
}

GridPtr talenti_grid(int N, double rho, int M) { return make_geometric_grid(N, 4.0 * rho, M, 1e-10 * rho); }

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("loglog_slope: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Branch lp_branch(int N, double ell) {
    const double crit = N / (N - 2.0);
    if (std::abs(ell - crit) <= kExponentTol) return {"l=N/(N-2)", N / 2.0, 1.0};
    if (ell > crit) return {"l>N/(N-2)", (2.0 * N - (N - 2.0) * ell) / 2.0, 0.0};
    return {"l<N/(N-2)", (N - 2.0) * ell / 2.0, 0.0};
}

Branch coulomb_branch(int N, double alpha, double p) {
    const double lhs = 2.0 * N * p / (N + alpha), rhs = N / (N - 2.0);
    if (std::abs(lhs - rhs) <= kExponentTol) return {"2Np/(N+a)=N/(N-2)", (N + alpha) / 2.0, (N + alpha) / N};
    if (lhs > rhs) return {"2Np/(N+a)>N/(N-2)", N + alpha - (N - 2.0) * p, 0.0};
    return {"2Np/(N+a)<N/(N-2)", (N - 2.0) * p, 0.0};
}

namespace {

void finish(SlopeReport& rep) {
    const std::size_t n = rep.eps.size();
    const std::size_t skip = static_cast<std::size_t>(rep.discarded);
    if (n < skip + 2) throw std::invalid_argument("slope fit: too few eps values after discarding");
    std::vector<double> x(rep.eps.begin() + skip, rep.eps.end());
    std::vector<double> y(rep.values.begin() + skip, rep.values.end());
    if (rep.log_corrected)
        for (std::size_t i = 0; i < x.size(); ++i) y[i] /= std::pow(std::abs(std::log(x[i])), rep.log_power);
    rep.slope = loglog_slope(x, y);
    rep.rel_error = std::abs(rep.slope - rep.expected) / std::abs(rep.expected);
    rep.monotone = true;
    for (std::size_t i = 1; i < n; ++i)
        if (!(rep.values[i] < rep.values[i - 1])) rep.monotone = false;
}

std::vector<double> descending(std::vector<double> e) {
    std::sort(e.begin(), e.end(), std::greater<>());
    return e;
}

}  // namespace

SlopeReport gradient_deficit(const std::vector<double>& eps_list, const GridPtr& grid, double S_ref, double rho) {
    SlopeReport rep;
    rep.quantity = "grad_deficit";
    rep.branch = "S+O(eps^(N-2))";
    rep.expected = grid->N - 2.0;
    rep.eps = descending(eps_list);
    for (double e : rep.eps) rep.values.push_back(dirichlet_energy(make_v_eps({e, rho}, grid).v) - S_ref);
    finish(rep);
    return rep;
}

SlopeReport norm_asymptotics(const std::vector<double>& eps_list, double ell, const GridPtr& grid, double rho) {
    SlopeReport rep;
    const auto br = lp_branch(grid->N, ell);
    rep.quantity = "lp_norm";
    rep.branch = br.name;
    rep.expected = br.exponent;
    rep.log_corrected = br.log_power > 0.0;
    rep.log_power = br.log_power;
    rep.eps = descending(eps_list);
    for (double e : rep.eps) rep.values.push_back(lp_norm_pow(make_v_eps({e, rho}, grid).v, ell));
    finish(rep);
    return rep;
}

SlopeReport coulomb_asymptotics(const std::vector<double>& eps_list, const RieszKernel& kernel, double p,
                                double rho) {
    SlopeReport rep;
    const auto br = coulomb_branch(kernel.N, kernel.alpha, p);
    rep.quantity = "coulomb";
    rep.branch = br.name;
    rep.expected = br.exponent;
    rep.log_corrected = br.log_power > 0.0;
    rep.log_power = br.log_power;
    rep.eps = descending(eps_list);
    for (double e : rep.eps) {
        const auto v = make_v_eps({e, rho}, kernel.grid).v;
        std::vector<double> f(v.size());
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(std::abs(v.values[i]), p);
        rep.values.push_back(coulomb_energy(kernel, f));
    }
    finish(rep);
    return rep;
}

SobolevEstimate estimate_sobolev(const std::vector<double>& eps_list, const GridPtr& grid, double rho) {
    if (eps_list.size() < 3) throw std::invalid_argument("estimate_sobolev: need at least three eps values");
    SobolevEstimate est;
    est.eps = descending(eps_list);
    for (double e : est.eps) est.grad_sq.push_back(dirichlet_energy(make_v_eps({e, rho}, grid).v));
    // Solve S + a x + b x² = g at the three smallest ε, x = ε^{N-2}.
    const std::size_t n = est.eps.size();
    const double k = grid->N - 2.0;
    double x[3], g[3];
    for (int i = 0; i < 3; ++i) {
        x[i] = std::pow(est.eps[n - 3 + i], k);
        g[i] = est.grad_sq[n - 3 + i];
    }
    // Newton divided differences; the constant term is the value at x = 0.
    const double d01 = (g[1] - g[0]) / (x[1] - x[0]);
    const double d12 = (g[2] - g[1]) / (x[2] - x[1]);
    const double d012 = (d12 - d01) / (x[2] - x[0]);
    est.S_extrapolated = g[0] + d01 * (0.0 - x[0]) + d012 * (0.0 - x[0]) * (0.0 - x[1]);
    est.S_exact = best_sobolev_constant(grid->N);
    est.rel_diff = std::abs(est.S_extrapolated - est.S_exact) / est.S_exact;
    return est;
}

double best_sobolev_constant(int N) { return sobolev_constant_exact(N); }

ProbeReport lambda_sign_probe(double c, const std::vector<double>& eps_list, const RieszKernel& kernel,
                              const Problem& pb, double S, double rho, int jobs) {
    ProbeReport rep;
    rep.c = c;
    rep.c_star = c_star(pb.exps, S);
    const auto eps = descending(eps_list);
    rep.rows.resize(eps.size());
    parallel_for(eps.size(), jobs, [&](std::size_t i) {
        const auto v = make_v_eps({eps[i], rho}, kernel.grid).v;
        const auto rec = evaluate(v, kernel, pb);
        const auto fr = solve_tc(c, rec, pb.exps);
        const auto cc = t0_and_cstar(pb.params.N, pb.exps, S, rec.lp_2star);
        ProbeRow& row = rep.rows[i];
        row.eps = eps[i];
        row.grad_sq = rec.dirichlet;
        row.coulomb = rec.coulomb;
        row.F = rec.F;
        row.t_c = fr.t_c;
        row.Lambda = fr.phi_at_tc;
        row.lower_bound = std::pow(cc.t_0, -pb.exps.s_r) * (rep.c_star - c) / rec.F;
    });
    rep.first_Lambda = rep.rows.front().Lambda;
    rep.min_Lambda = rep.rows.front().Lambda;
    rep.t_min = rep.t_max = rep.rows.front().t_c;
    rep.all_positive = true;
    rep.above_lower_bound = true;
    for (const auto& row : rep.rows) {
        rep.min_Lambda = std::min(rep.min_Lambda, row.Lambda);
        rep.t_min = std::min(rep.t_min, row.t_c);
        rep.t_max = std::max(rep.t_max, row.t_c);
        if (!(row.Lambda > 0.0)) rep.all_positive = false;
        if (row.Lambda < 0.0) rep.any_negative = true;
        if (row.Lambda < row.lower_bound) rep.above_lower_bound = false;
    }
    return rep;
}

std::vector<TalentiRow> talenti_sweep(const std::vector<double>& eps_list, const std::vector<double>& ells,
                                      const RieszKernel& kernel, const Problem& pb, double c, double rho,
                                      int jobs) {
    const auto eps = descending(eps_list);
    std::vector<TalentiRow> rows(eps.size());
    parallel_for(eps.size(), jobs, [&](std::size_t i) {
        const auto v = make_v_eps({eps[i], rho}, kernel.grid).v;
        const auto rec = evaluate(v, kernel, pb);
        TalentiRow& row = rows[i];
        row.eps = eps[i];
        row.grad_sq = rec.dirichlet;
        for (double ell : ells) row.lp.push_back(lp_norm_pow(v, ell));
        row.coulomb = rec.coulomb;
        const auto fr = solve_tc(c, rec, pb.exps);
        row.t_c = fr.t_c;
        row.Lambda_c = fr.phi_at_tc;
    });
    return rows;
}

}  // namespace sps
