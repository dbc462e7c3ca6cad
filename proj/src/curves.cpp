#include "sps/curves.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sps/parallel.hpp"

namespace sps {

CurvePoint to_curve_point(const SolveResult& res) {
    CurvePoint p;
    p.c = res.c;
    p.lambda = res.lambda_star;
    p.converged = res.converged;
    p.grad_norm = res.grad_norm;
    p.pohozaev_rel = res.pohozaev_rel;
    p.t_c_at_min = res.t_c_at_min;
    p.F_at_min = res.F_at_min;
    p.iterations = res.iterations;
    return p;
}

namespace {

SolveConfig warm(const SolveConfig& cfg, const SolveResult& from) {
    SolveConfig w = cfg;
    w.init.kind = InitKind::profile;
    w.init.values = from.u_star.values;
    return w;
}

}  // namespace

CurveReport trace_curve(const std::vector<double>& c_grid, const Problem& pb, const RieszKernel& kernel,
                        const SolveConfig& cfg, const TraceOptions& opt) {
    if (!std::is_sorted(c_grid.begin(), c_grid.end())) throw std::invalid_argument("trace_curve: c grid must ascend");
    CurveReport rep;
    std::vector<SolveResult> sols(c_grid.size());
    if (opt.warm_start) {
        for (std::size_t k = 0; k < c_grid.size(); ++k) {
            // Warm start from the last converged point, if any.
            const SolveResult* prev = nullptr;
            for (std::size_t j = k; j-- > 0;)
                if (sols[j].converged) {
                    prev = &sols[j];
                    break;
                }
            sols[k] = minimize_Lambda_c(c_grid[k], pb, kernel, prev ? warm(cfg, *prev) : cfg);
        }
    } else {
        parallel_for(c_grid.size(), opt.jobs,
                     [&](std::size_t k) { sols[k] = minimize_Lambda_c(c_grid[k], pb, kernel, cfg); });
    }
    for (const auto& s : sols) rep.points.push_back(to_curve_point(s));

    rep.monotone = true;
    const CurvePoint* last = nullptr;
    for (const auto& p : rep.points) {
        if (!p.converged) continue;
        if (last) {
            if (!(p.lambda < last->lambda)) rep.monotone = false;
            ChordCheck ch;
            ch.a = last->c;
            ch.b = p.c;
            ch.slope = (p.lambda - last->lambda) / (p.c - last->c);
            // dλ/dc = -1/F(u*) with F(u*) = t_c^{s_r} F_M at the minimizer.
            const double Fa = std::pow(last->t_c_at_min, pb.exps.s_r) * last->F_at_min;
            const double Fb = std::pow(p.t_c_at_min, pb.exps.s_r) * p.F_at_min;
            ch.C = std::max({Fa, 1.0 / Fa, Fb, 1.0 / Fb});
            ch.within = ch.slope >= -ch.C && ch.slope <= -1.0 / ch.C;
            rep.chords.push_back(ch);
        }
        last = &p;
    }

    if (opt.envelope) {
        for (std::size_t k = 0; k < sols.size(); ++k) {
            if (!sols[k].converged) continue;
            const double c = c_grid[k], h = opt.envelope_h;
            const auto wc = warm(cfg, sols[k]);
            const auto lo = minimize_Lambda_c(c * (1.0 - h), pb, kernel, wc);
            const auto hi = minimize_Lambda_c(c * (1.0 + h), pb, kernel, wc);
            EnvelopeCheck ec;
            ec.c = c;
            ec.fd_slope = (hi.lambda_star - lo.lambda_star) / (2.0 * h * c);
            ec.analytic = -std::pow(sols[k].t_c_at_min, -pb.exps.s_r) / sols[k].F_at_min;
            ec.rel_err = std::abs(ec.fd_slope - ec.analytic) / std::abs(ec.analytic);
            rep.max_envelope_err = std::max(rep.max_envelope_err, ec.rel_err);
            rep.envelope.push_back(ec);
        }
    }
    if (opt.keep_solutions) rep.solutions = std::move(sols);
    return rep;
}

std::vector<double> default_c_grid(double c_star, int n, double lo, double hi) {
    if (n < 2) return {lo * c_star};
    std::vector<double> c(n);
    for (int i = 0; i < n; ++i) c[i] = c_star * lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return c;
}

LimitZeroReport limit_c_to_zero(const Problem& pb, const RieszKernel& kernel, const SolveConfig& cfg,
                                double c_star, const std::vector<double>& fractions) {
    LimitZeroReport rep;
    rep.branch = pb.r_equals_q ? "r=q" : "r>q";
    std::vector<double> fr = fractions;
    std::sort(fr.begin(), fr.end(), std::greater<>());
    SolveConfig run = cfg;
    for (double f : fr) {
        const auto res = minimize_Lambda_c(f * c_star, pb, kernel, run);
        rep.c.push_back(f * c_star);
        rep.lambda.push_back(res.lambda_star);
        rep.t_c.push_back(res.t_c_at_min);
        rep.converged.push_back(res.converged);
        if (res.converged) run = warm(cfg, res);
    }
    for (std::size_t k = 1; k < rep.lambda.size(); ++k) rep.ratios.push_back(rep.lambda[k] / rep.lambda[k - 1]);
    if (pb.r_equals_q) {
        const auto eig = eigen_lambda1(pb, kernel, cfg);
        rep.lambda_1 = eig.lambda_1;
        rep.rel_to_lambda1 = std::abs(rep.lambda.back() - eig.lambda_1) / eig.lambda_1;
        rep.pass = eig.converged && rep.rel_to_lambda1 < 0.05;
    } else {
        rep.pass = !rep.ratios.empty();
        for (double q : rep.ratios)
            if (!(q >= 2.0)) rep.pass = false;
    }
    return rep;
}

LimitCstarReport limit_c_to_cstar(const Problem& pb, const RieszKernel& kernel, const SolveConfig& cfg,
                                  double c_star, const std::vector<double>& fractions) {
    if (fractions.size() != 3) throw std::invalid_argument("limit_c_to_cstar: expects three fractions");
    LimitCstarReport rep;
    SolveConfig run = cfg;
    run.c_star = c_star;
    const auto half = minimize_Lambda_c(0.5 * c_star, pb, kernel, run);
    rep.lambda_half = half.lambda_star;
    SolveConfig next = half.converged ? warm(run, half) : run;
    std::vector<double> fr = fractions;
    std::sort(fr.begin(), fr.end());
    for (double f : fr) {
        const auto res = minimize_Lambda_c(f * c_star, pb, kernel, next);
        rep.c.push_back(f * c_star);
        rep.lambda.push_back(res.lambda_star);
        rep.converged.push_back(res.converged);
        rep.concentration.push_back(res.possible_concentration);
        if (res.converged) next = warm(run, res);
    }
    rep.monotone = rep.lambda[2] < rep.lambda[1] && rep.lambda[1] < rep.lambda[0];
    // Lagrange interpolant through the three points, evaluated at c*.
    const double x = c_star;
    const auto& c = rep.c;
    const auto& l = rep.lambda;
    rep.extrapolate = l[0] * (x - c[1]) * (x - c[2]) / ((c[0] - c[1]) * (c[0] - c[2])) +
                      l[1] * (x - c[0]) * (x - c[2]) / ((c[1] - c[0]) * (c[1] - c[2])) +
                      l[2] * (x - c[0]) * (x - c[1]) / ((c[2] - c[0]) * (c[2] - c[1]));
    rep.zero_expected = classify_regime(pb.params).lambda_tilde1_zero;
    rep.pass = rep.zero_expected && half.converged && rep.extrapolate < 0.1 * rep.lambda_half;
    return rep;
}

std::vector<InitSpec> default_inits() {
    InitSpec g;
    InitSpec t1;
    t1.kind = InitKind::talenti;
    t1.eps = 0.5;
    InitSpec t2 = t1;
    t2.eps = 2.0;
    return {g, t1, t2};
}

MultiStartReport multi_start(double c, const Problem& pb, const RieszKernel& kernel, const SolveConfig& cfg,
                             const std::vector<InitSpec>& inits, int jobs) {
    MultiStartReport rep;
    std::vector<SolveResult> sols(inits.size());
    parallel_for(inits.size(), jobs, [&](std::size_t k) {
        SolveConfig run = cfg;
        run.init = inits[k];
        sols[k] = minimize_Lambda_c(c, pb, kernel, run);
    });
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t k = 0; k < inits.size(); ++k) {
        rep.inits.push_back(to_string(inits[k]));
        rep.lambda.push_back(sols[k].lambda_star);
        rep.converged.push_back(sols[k].converged);
        if (sols[k].converged) {
            lo = std::min(lo, sols[k].lambda_star);
            hi = std::max(hi, sols[k].lambda_star);
        }
    }
    rep.best = lo;
    rep.spread = lo < INFINITY ? (hi - lo) / lo : INFINITY;
    return rep;
}

}  // namespace sps
