#include "sps/fiber.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace sps {

double phi(double c, const FunctionalRecord& rec, const DerivedExponents& e, double t) {
    const double num = std::pow(t, e.s_q - e.s_r) * rec.I - std::pow(t, e.s_2star - e.s_r) * rec.G -
                       std::pow(t, -e.s_r) * c;
    return num / rec.F;
}

double phi_prime(double c, const FunctionalRecord& rec, const DerivedExponents& e, double t) {
    const double num = (e.s_q - e.s_r) * std::pow(t, e.s_q - e.s_r - 1.0) * rec.I -
                       (e.s_2star - e.s_r) * std::pow(t, e.s_2star - e.s_r - 1.0) * rec.G +
                       e.s_r * std::pow(t, -e.s_r - 1.0) * c;
    return num / rec.F;
}

PowerRoot power_sum_root(std::span<const PowerTerm> terms, double target) {
    if (!(target > 0.0)) throw std::invalid_argument("power_sum_root: target must be positive");
    const double log_target = std::log(target);
    double lo = std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    std::size_t active = 0;
    for (const auto& t : terms)
        if (t.k > 0.0) ++active;
    if (active == 0) throw std::invalid_argument("power_sum_root: all coefficients vanish");
    for (const auto& t : terms) {
        if (!(t.k > 0.0)) continue;
        const double y = (log_target - std::log(t.k)) / t.e;
        hi = std::min(hi, y);
        lo = std::min(lo, y - std::log(static_cast<double>(active)) / t.e);
    }

    // f(y) = log Σ k_j e^{e_j y} - log target, increasing and convex in y.
    auto eval = [&](double y, double& df) {
        double m = -std::numeric_limits<double>::infinity();
        for (const auto& t : terms)
            if (t.k > 0.0) m = std::max(m, std::log(t.k) + t.e * y);
        double s = 0.0, ds = 0.0;
        for (const auto& t : terms) {
            if (!(t.k > 0.0)) continue;
            const double v = std::exp(std::log(t.k) + t.e * y - m);
            s += v;
            ds += t.e * v;
        }
        df = ds / s;
        return m + std::log(s) - log_target;
    };

    PowerRoot out;
    double y = hi;
    if (lo == hi) {
        out.x = std::exp(y);
        return out;
    }
    for (int it = 1; it <= 200; ++it) {
        double df = 0.0;
        const double f = eval(y, df);
        out.iters = it;
        if (f == 0.0) break;
        if (f > 0.0) hi = y;
        else lo = y;
        double next = y - f / df;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - y);
        y = next;
        if (step <= 1e-15 * std::max(1.0, std::abs(y))) break;
    }
    out.x = std::exp(y);
    return out;
}

namespace {

std::string num(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

bool equal_exponents(const DerivedExponents& e) { return std::abs(e.s_r - e.s_q) <= 1e-12 * e.sigma; }

}  // namespace

FiberResult solve_tc(double c, double I, double G, const DerivedExponents& e) {
    if (!(c > 0.0)) throw NoRootError("N_c nonempty iff c>0 (got c=" + num(c) + ")");
    if (!(I > 0.0) && !(G > 0.0)) throw NoRootError("N_c: I(u) and G(u) both vanish");
    FiberResult res;
    res.phi_at_tc = std::numeric_limits<double>::quiet_NaN();
    double H_at_t;
    if (equal_exponents(e)) {
        if (!(G > 0.0)) throw NoRootError("N_c: G(u) vanishes with r=q");
        res.t_c = std::pow(e.s_q * c / ((e.s_2star - e.s_q) * G), 1.0 / e.s_2star);
        H_at_t = (e.s_2star - e.s_r) * std::pow(res.t_c, e.s_2star) * G;
    } else {
        const std::array<PowerTerm, 2> terms{{{(e.s_r - e.s_q) * I, e.s_q}, {(e.s_2star - e.s_r) * G, e.s_2star}}};
        const auto root = power_sum_root(terms, e.s_r * c);
        res.t_c = root.x;
        res.newton_iters = root.iters;
        H_at_t = terms[0].k * std::pow(res.t_c, e.s_q) + terms[1].k * std::pow(res.t_c, e.s_2star);
    }
    res.residual = std::abs(H_at_t - e.s_r * c) / (e.s_r * c);
    return res;
}

FiberResult solve_tc(double c, const FunctionalRecord& rec, const DerivedExponents& e) {
    auto res = solve_tc(c, rec.I, rec.G, e);
    res.phi_at_tc = phi(c, rec, e, res.t_c);
    return res;
}

double Lambda_tilde(double c, const FunctionalRecord& rec, const DerivedExponents& e) {
    return solve_tc(c, rec, e).phi_at_tc;
}

FunctionalRecord dilate_record(const FunctionalRecord& rec, double t, const Problem& pb) {
    const auto& e = pb.exps;
    const double p = pb.params.p;
    FunctionalRecord s;
    const double tq = std::pow(t, e.s_q);
    s.dirichlet = tq * rec.dirichlet;
    s.coulomb = tq * rec.coulomb;
    s.lp_r = std::pow(t, e.s_r) * rec.lp_r;
    s.lp_2star = std::pow(t, e.s_2star) * rec.lp_2star;
    s.I = tq * rec.I;
    s.F = std::pow(t, e.s_r) * rec.F;
    s.G = std::pow(t, e.s_2star) * rec.G;
    s.e_norm = std::sqrt(s.dirichlet + std::pow(std::max(s.coulomb, 0.0), 1.0 / p));
    return s;
}

double amplitude_for_I(const FunctionalRecord& rec, const Problem& pb, double target) {
    const double p = pb.params.p;
    const std::array<PowerTerm, 2> terms{{{rec.dirichlet / 2.0, 2.0}, {rec.coulomb / (2.0 * p), 2.0 * p}}};
    return power_sum_root(terms, target).x;
}

double amplitude_for_Nc(const FunctionalRecord& rec, const Problem& pb, double c) {
    if (!(c > 0.0)) throw NoRootError("N_c nonempty iff c>0 (got c=" + num(c) + ")");
    const auto& e = pb.exps;
    const double p = pb.params.p;
    const double dq = equal_exponents(e) ? 0.0 : e.s_r - e.s_q;
    const std::array<PowerTerm, 3> terms{{{dq * rec.dirichlet / 2.0, 2.0},
                                          {dq * rec.coulomb / (2.0 * p), 2.0 * p},
                                          {(e.s_2star - e.s_r) * rec.G, e.two_star}}};
    if (!(terms[0].k > 0.0) && !(terms[1].k > 0.0) && !(terms[2].k > 0.0))
        throw NoRootError("N_c: H(u) vanishes identically along the amplitude ray");
    return power_sum_root(terms, e.s_r * c).x;
}

namespace {

Projection finish_projection(DilationResult d, double t, const RieszKernel& kernel, const Problem& pb,
                             double (*amp)(const FunctionalRecord&, const Problem&, double), double level) {
    Projection out;
    out.t = t;
    out.truncation_loss = d.truncation_loss;
    out.truncation_warning = d.truncation_warning;
    const auto rec = evaluate(d.u, kernel, pb);
    const double a = amp(rec, pb, level);
    for (auto& v : d.u.values) v *= a;
    if (d.u.closed_form) {
        auto f = d.u.closed_form;
        d.u.closed_form = [f, a](double r) { return a * f(r); };
    }
    out.u = std::move(d.u);
    out.amplitude = a;
    out.rec = scale_amplitude(rec, a, pb);
    return out;
}

}  // namespace

Projection project_to_M(const RadialFunction& u, const RieszKernel& kernel, const Problem& pb) {
    const auto rec = evaluate(u, kernel, pb);
    if (!(rec.I > 0.0)) throw std::invalid_argument("project_to_M: I(u) vanishes");
    const double t = std::pow(rec.I, -1.0 / pb.exps.s_q);
    return finish_projection(resample_dilation(u, t, pb.exps.sigma), t, kernel, pb, amplitude_for_I, 1.0);
}

Projection project_to_Nc(const RadialFunction& u, const RieszKernel& kernel, const Problem& pb, double c) {
    const auto rec = evaluate(u, kernel, pb);
    const auto fr = solve_tc(c, rec.I, rec.G, pb.exps);
    return finish_projection(resample_dilation(u, fr.t_c, pb.exps.sigma), fr.t_c, kernel, pb, amplitude_for_Nc,
                             c);
}

double z_u(double t, const DerivedExponents& e, double S, double L) {
    return S / 2.0 * std::pow(L, 2.0 / e.two_star) * std::pow(t, e.s_q) - L / e.two_star * std::pow(t, e.s_2star);
}

double c_star(const DerivedExponents& e, double S) {
    const double d = e.s_2star - e.s_q;
    return 0.5 * d / e.s_2star * std::pow(e.two_star / 2.0 * e.s_q / e.s_2star, e.s_q / d) *
           std::pow(S, e.s_2star / d);
}

CriticalConstants t0_and_cstar(int N, const DerivedExponents& e, double S, double L) {
    if (!(S > 0.0)) throw std::invalid_argument("t0_and_cstar: S must be positive");
    if (!(L > 0.0)) throw std::invalid_argument("t0_and_cstar: the L^{2*} integral must be positive");
    CriticalConstants cc;
    cc.S = S;
    cc.c_star = c_star(e, S);
    cc.t_0 = std::pow(e.two_star / 2.0 * e.s_q / e.s_2star * S / std::pow(L, 2.0 / N), 1.0 / (e.s_2star - e.s_q));
    cc.z_at_t0 = z_u(cc.t_0, e, S, L);
    cc.t_0_formula_check = std::abs(cc.z_at_t0 - cc.c_star) / cc.c_star;
    return cc;
}

double sobolev_constant_exact(int N) {
    const double n = N;
    return std::numbers::pi * n * (n - 2.0) * std::exp(2.0 / n * (std::lgamma(n / 2.0) - std::lgamma(n)));
}

}  // namespace sps
