#include "sps/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "sps/io.hpp"
#include "sps/talenti.hpp"

namespace sps {

InitSpec parse_init(const std::string& s) {
    InitSpec init;
    if (s == "gaussian") return init;
    if (s == "talenti") {
        init.kind = InitKind::talenti;
        return init;
    }
    if (s.rfind("talenti:", 0) == 0) {
        init.kind = InitKind::talenti;
        try {
            init.eps = std::stod(s.substr(8));
        } catch (const std::exception&) {
            throw std::invalid_argument("init: bad talenti width in '" + s + "'");
        }
        if (!(init.eps > 0.0)) throw std::invalid_argument("init: talenti width must be positive");
        return init;
    }
    if (s.rfind("file:", 0) == 0 && s.size() > 5) {
        init.kind = InitKind::file;
        init.path = s.substr(5);
        return init;
    }
    throw std::invalid_argument("init: expected gaussian, talenti[:eps] or file:<path>, got '" + s + "'");
}

std::string to_string(const InitSpec& init) {
    switch (init.kind) {
        case InitKind::gaussian: return "gaussian";
        case InitKind::talenti: return "talenti:" + format_double(init.eps);
        case InitKind::file: return "file:" + init.path;
        case InitKind::profile: return "profile";
    }
    return "gaussian";
}

RadialFunction initial_profile(const InitSpec& init, const GridPtr& grid) {
    switch (init.kind) {
        case InitKind::gaussian: return sample(grid, [](double r) { return std::exp(-r * r); });
        case InitKind::talenti: return make_v_eps({init.eps, grid->R_max / 4.0}, grid).v;
        case InitKind::file: return resample_onto(grid, read_radial_csv(init.path));
        case InitKind::profile: return from_values(grid, init.values);
    }
    throw std::logic_error("initial_profile: unknown kind");
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double dual_norm_rel(const H1Preconditioner& P, std::span<const double> num, std::span<const double> den) {
    const double d = P.dual_norm(den);
    return d > 0.0 ? P.dual_norm(num) / d : 0.0;
}

// Fraction of ∫|u|^{2*} inside r < radius.
double inner_fraction(const RadialGrid& g, std::span<const double> u, double ts, double radius) {
    double in = 0.0, all = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double m = g.quad_weights[i] * std::pow(std::abs(u[i]), ts);
        all += m;
        if (g.nodes[i] < radius) in += m;
    }
    return all > 0.0 ? in / all : 0.0;
}

// κ = min(1, ∫|∇u|²/∫u²) of the starting profile: wide profiles get a
// correspondingly weaker mass term in the metric.
double mass_scale(const RadialGrid& g, std::span<const double> u) {
    const double m = lp_norm_pow(g, u, 2.0);
    const double d = dirichlet_energy(g, u);
    return m > 0.0 && d > 0.0 ? std::min(1.0, d / m) : 1.0;
}

}  // namespace

SolveResult minimize_Lambda_c(double c, const Problem& pb, const RieszKernel& kernel, const SolveConfig& cfg) {
    if (!(c > 0.0)) throw NoRootError("N_c nonempty iff c>0 (got c=" + format_double(c) + ")");
    const GridPtr& grid = kernel.grid;
    const auto& e = pb.exps;
    const bool near_threshold = cfg.c_star > 0.0 && c > 0.98 * cfg.c_star;
    const int max_iters = near_threshold ? std::min(cfg.max_iters, cfg.near_cstar_max_iters) : cfg.max_iters;

    SolveResult res;
    res.c = c;
    std::vector<double> u = initial_profile(cfg.init, grid).values;
    {
        const auto rec0 = evaluate(u, kernel, pb);
        if (!(rec0.F > 0.0)) throw std::invalid_argument("solve: initial profile vanishes");
        const double a = amplitude_for_Nc(rec0, pb, c);
        for (auto& v : u) v *= a;
    }
    const H1Preconditioner P(*grid, cfg.precondition, mass_scale(*grid, u));

    const std::size_t M = u.size();
    std::vector<double> d(M), trial(M);
    double tau = cfg.armijo_step;
    GradientRecord gr = gradients(u, kernel, pb, c);
    int it = 0;
    for (;; ++it) {
        if (!(gr.rec.F > 1e-200) || !std::isfinite(gr.lambda_c)) {
            res.collapsed = true;
            res.message = "degenerate iterate: F(u) -> 0, Lambda_c -> infinity";
            break;
        }
        std::vector<double> h(M);
        for (std::size_t i = 0; i < M; ++i) h[i] = (e.s_r - e.s_q) * gr.gI[i] + (e.s_2star - e.s_r) * gr.gG[i];
        const auto Pg = P.solve(gr.g_lambda_c);
        const auto Ph = P.solve(h);
        const double mu = dot(h, Pg) / dot(h, Ph);
        for (std::size_t i = 0; i < M; ++i) d[i] = Pg[i] - mu * Ph[i];
        d[M - 1] = 0.0;
        const double slope = std::max(dot(gr.g_lambda_c, d), 0.0);
        const double scale = P.dual_norm(gr.gI) / gr.rec.F;
        res.grad_norm = std::sqrt(slope) / scale;
        if (res.grad_norm < cfg.grad_tol) break;
        if (it >= max_iters) {
            res.message = "iteration limit reached";
            break;
        }

        tau = it == 0 ? cfg.armijo_step : std::min(2.0 * tau, 1e6);
        bool accepted = false;
        double lam_trial = 0.0;
        for (int k = 0; k <= cfg.armijo_max_backtracks; ++k) {
            for (std::size_t i = 0; i < M; ++i) trial[i] = u[i] - tau * d[i];
            const auto rec_t = evaluate(trial, kernel, pb);
            if (rec_t.F > 1e-200 && (rec_t.I > 0.0 || rec_t.G > 0.0)) {
                const double a = amplitude_for_Nc(rec_t, pb, c);
                lam_trial = lambda_c(scale_amplitude(rec_t, a, pb), c);
                if (lam_trial <= gr.lambda_c - cfg.armijo_c1 * tau * slope) {
                    for (auto& v : trial) v *= a;
                    accepted = true;
                    break;
                }
            }
            tau *= cfg.armijo_backtrack;
        }
        if (!accepted) {
            res.message = "line search failed to decrease Lambda_c";
            break;
        }
        std::swap(u, trial);
        gr = gradients(u, kernel, pb, c);
    }

    res.iterations = it;
    res.rec = gr.rec;
    res.u_star = from_values(grid, u);
    res.lambda_star = gr.lambda_c;
    if (!res.collapsed) {
        std::vector<double> phi_prime(M);
        for (std::size_t i = 0; i < M; ++i) phi_prime[i] = gr.gI[i] - gr.gG[i] - gr.lambda_c * gr.gF[i];
        res.unconstrained_grad = dual_norm_rel(P, phi_prime, gr.gI);
        res.pohozaev_rel = pohozaev_relative(gr.rec, pb);
        res.H_residual = membership_residual(gr.rec, e, c);
        res.t_c_at_min = std::pow(gr.rec.I, 1.0 / e.s_q);
        res.F_at_min = gr.rec.F * std::pow(gr.rec.I, -e.s_r / e.s_q);
    }
    res.converged = !res.collapsed && res.grad_norm < cfg.grad_tol && res.H_residual < 1e-8 && res.pohozaev_rel < 1e-3;
    if (res.converged) res.message = "converged";
    else if (res.message.empty()) res.message = "stationarity reached but residual checks failed";
    if (near_threshold) {
        const double radius = 10.0 * grid->R_max / grid->M;
        res.possible_concentration = inner_fraction(*grid, u, e.two_star, radius) > 0.5;
        if (res.possible_concentration) res.message += "; possible concentration near c*";
    }
    return res;
}

std::vector<std::vector<double>> smooth_directions(const RadialGrid& grid, int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0), width(0.5, 8.0);
    std::vector<std::vector<double>> out;
    for (int k = 0; k < count; ++k) {
        const double a0 = coef(rng), a1 = coef(rng), a2 = coef(rng), s = width(rng);
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double x = grid.nodes[i] / s;
            v[i] = (a0 + a1 * std::cos(x) + a2 * x) * std::exp(-x * x);
        }
        v.back() = 0.0;
        out.push_back(std::move(v));
    }
    return out;
}

VerifyReport verify_solution(const RadialFunction& u, double lambda, double c, const Problem& pb,
                             const RieszKernel& kernel) {
    VerifyReport rep;
    const auto gr = gradients(u, kernel, pb, c);
    rep.energy_rel = std::abs(phi_lambda(gr.rec, lambda) - c) / c;
    for (const auto& v : smooth_directions(*kernel.grid, 20, 20240601u)) {
        const double a = dot(gr.gI, v), b = dot(gr.gF, v), g = dot(gr.gG, v);
        const double den = std::abs(a) + std::abs(lambda * b) + std::abs(g);
        if (den > 0.0) rep.weak_residual = std::max(rep.weak_residual, std::abs(a - lambda * b - g) / den);
    }
    rep.pohozaev_rel = pohozaev_relative(gr.rec, pb);
    rep.H_residual = membership_residual(gr.rec, pb.exps, c);
    rep.energy_ok = rep.energy_rel < 1e-6;
    rep.weak_ok = rep.weak_residual < 1e-4;
    rep.pohozaev_ok = rep.pohozaev_rel < 1e-3;
    rep.membership_ok = rep.H_residual < 1e-8;
    auto note = [&](bool ok, const char* what, double v) {
        if (!ok) rep.failures.push_back(std::string(what) + " = " + format_double(v));
    };
    note(rep.energy_ok, "energy |Phi_lambda(u) - c|/c", rep.energy_rel);
    note(rep.weak_ok, "weak-form residual", rep.weak_residual);
    note(rep.pohozaev_ok, "Pohozaev residual", rep.pohozaev_rel);
    note(rep.membership_ok, "N_c membership residual", rep.H_residual);
    return rep;
}

VerifyReport verify_solution(const SolveResult& res, const Problem& pb, const RieszKernel& kernel) {
    return verify_solution(res.u_star, res.lambda_star, res.c, pb, kernel);
}

EigenResult eigen_lambda1(const Problem& pb, const RieszKernel& kernel, const SolveConfig& cfg) {
    if (!pb.r_equals_q) throw InvalidParameter("eigenvalue problem needs r=q");
    if (!(pb.params.alpha > 1.0)) throw InvalidParameter("(H1): r=q requires alpha>1");
    const GridPtr& grid = kernel.grid;
    const H1Preconditioner P(*grid, cfg.precondition);
    EigenResult res;
    std::vector<double> u = initial_profile(cfg.init, grid).values;
    {
        const auto rec0 = evaluate(u, kernel, pb);
        const double a = amplitude_for_I(rec0, pb, 1.0);
        for (auto& v : u) v *= a;
    }
    const std::size_t M = u.size();
    std::vector<double> d(M), trial(M), g(M);
    double tau = cfg.armijo_step;
    GradientRecord gr = gradients(u, kernel, pb, 0.0);
    int it = 0;
    for (;; ++it) {
        const double F = gr.rec.F;
        const double val = 1.0 / F;
        for (std::size_t i = 0; i < M; ++i) g[i] = -gr.gF[i] / (F * F);
        const auto Pg = P.solve(g);
        const auto Ph = P.solve(gr.gI);
        const double mu = dot(gr.gI, Pg) / dot(gr.gI, Ph);
        for (std::size_t i = 0; i < M; ++i) d[i] = Pg[i] - mu * Ph[i];
        d[M - 1] = 0.0;
        const double slope = std::max(dot(g, d), 0.0);
        res.grad_norm = std::sqrt(slope) / (P.dual_norm(gr.gF) / (F * F));
        if (res.grad_norm < cfg.grad_tol || it >= cfg.max_iters) break;

        tau = it == 0 ? cfg.armijo_step : std::min(2.0 * tau, 1e8);
        bool accepted = false;
        for (int k = 0; k <= cfg.armijo_max_backtracks; ++k) {
            for (std::size_t i = 0; i < M; ++i) trial[i] = u[i] - tau * d[i];
            const auto rec_t = evaluate(trial, kernel, pb);
            if (rec_t.I > 0.0) {
                const double a = amplitude_for_I(rec_t, pb, 1.0);
                const double v = 1.0 / scale_amplitude(rec_t, a, pb).F;
                if (v <= val - cfg.armijo_c1 * tau * slope) {
                    for (auto& x : trial) x *= a;
                    accepted = true;
                    break;
                }
            }
            tau *= cfg.armijo_backtrack;
        }
        if (!accepted) break;
        std::swap(u, trial);
        gr = gradients(u, kernel, pb, 0.0);
    }
    res.iterations = it;
    res.rec = gr.rec;
    res.lambda_1 = 1.0 / gr.rec.F;
    res.u = from_values(grid, u);
    std::vector<double> resid(M);
    for (std::size_t i = 0; i < M; ++i) resid[i] = gr.gI[i] - res.lambda_1 * gr.gF[i];
    res.eigen_residual = dual_norm_rel(P, resid, gr.gI);
    res.converged = res.grad_norm < cfg.grad_tol && res.eigen_residual < 1e-4;
    return res;
}

}  // namespace sps
