#include "sps/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace sps {

namespace {

// |x|^{e-2} x, with value 0 at x = 0 for every e.
double signed_pow(double x, double e) {
    if (x == 0.0) return 0.0;
    const double a = std::abs(x);
    return std::copysign(std::pow(a, e - 1.0), x);
}

struct Pieces {
    FunctionalRecord rec;
    std::vector<double> pot;  // I_α ⋆ |u|^p at the nodes
};

Pieces evaluate_with_potential(std::span<const double> u, const RieszKernel& kernel, const Problem& pb) {
    const RadialGrid& g = *kernel.grid;
    if (u.size() != g.size()) throw std::invalid_argument("evaluate: function does not live on the kernel grid");
    const double p = pb.params.p, r = pb.params.r, ts = pb.exps.two_star;

    Pieces out;
    std::vector<double> f(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) f[i] = std::pow(std::abs(u[i]), p);
    out.pot.resize(u.size());
    potential_values(kernel, f, out.pot);

    FunctionalRecord& rec = out.rec;
    double coul = 0.0, lr = 0.0, l2s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double w = g.quad_weights[i];
        const double a = std::abs(u[i]);
        coul += w * f[i] * out.pot[i];
        lr += w * std::pow(a, r);
        l2s += w * std::pow(a, ts);
    }
    rec.dirichlet = dirichlet_energy(g, u);
    rec.coulomb = coul;
    rec.lp_r = lr;
    rec.lp_2star = l2s;
    rec.I = rec.dirichlet / 2.0 + rec.coulomb / (2.0 * p);
    rec.F = lr / r;
    rec.G = l2s / ts;
    rec.e_norm = std::sqrt(rec.dirichlet + std::pow(std::max(rec.coulomb, 0.0), 1.0 / p));
    return out;
}

}  // namespace

FunctionalRecord evaluate(std::span<const double> u, const RieszKernel& kernel, const Problem& pb) {
    return evaluate_with_potential(u, kernel, pb).rec;
}

FunctionalRecord evaluate(const RadialFunction& u, const RieszKernel& kernel, const Problem& pb) {
    if (u.grid != kernel.grid) throw std::invalid_argument("evaluate: grid mismatch");
    return evaluate(std::span<const double>(u.values), kernel, pb);
}

FunctionalRecord scale_amplitude(const FunctionalRecord& rec, double a, const Problem& pb) {
    const double p = pb.params.p, r = pb.params.r, ts = pb.exps.two_star;
    const double aa = std::abs(a);
    FunctionalRecord s;
    s.dirichlet = a * a * rec.dirichlet;
    s.coulomb = std::pow(aa, 2.0 * p) * rec.coulomb;
    s.lp_r = std::pow(aa, r) * rec.lp_r;
    s.lp_2star = std::pow(aa, ts) * rec.lp_2star;
    s.I = s.dirichlet / 2.0 + s.coulomb / (2.0 * p);
    s.F = s.lp_r / r;
    s.G = s.lp_2star / ts;
    s.e_norm = std::sqrt(s.dirichlet + std::pow(std::max(s.coulomb, 0.0), 1.0 / p));
    return s;
}

double lambda_c(const FunctionalRecord& rec, double c) {
    if (!(rec.F >= 1e-300)) throw std::domain_error("lambda_c: F(u) vanishes (u = 0?)");
    return (rec.I - rec.G - c) / rec.F;
}

double phi_lambda(const FunctionalRecord& rec, double lambda) { return rec.I - lambda * rec.F - rec.G; }

double nehari_H(const FunctionalRecord& rec, const DerivedExponents& e) {
    return (e.s_r - e.s_q) * rec.I + (e.s_2star - e.s_r) * rec.G;
}

double membership_residual(const FunctionalRecord& rec, const DerivedExponents& e, double c) {
    return std::abs(nehari_H(rec, e) - e.s_r * c) / (e.s_r * c);
}

PohozaevValues pohozaev(const FunctionalRecord& rec, double lambda, const Problem& pb) {
    const double N = pb.params.N, a = pb.params.alpha, p = pb.params.p, r = pb.params.r;
    const auto& e = pb.exps;
    PohozaevValues v;
    v.P = (N - 2.0) / 2.0 * rec.dirichlet + (N + a) / (2.0 * p) * rec.coulomb - N * lambda / r * rec.lp_r -
          N / e.two_star * rec.lp_2star;
    v.P_scaled = e.s_q / 2.0 * rec.dirichlet + e.s_q / (2.0 * p) * rec.coulomb - e.s_r * lambda * rec.F -
                 e.s_2star * rec.G;
    return v;
}

double lambda_nehari(const FunctionalRecord& rec) {
    if (!(rec.lp_r >= 1e-300)) throw std::domain_error("lambda_nehari: ∫|u|^r vanishes");
    return (rec.dirichlet + rec.coulomb - rec.lp_2star) / rec.lp_r;
}

double pohozaev_relative(const FunctionalRecord& rec, const Problem& pb) {
    const auto v = pohozaev(rec, lambda_nehari(rec), pb);
    return std::abs(v.P_scaled) / (pb.exps.s_q * rec.I);
}

GradientRecord gradients(std::span<const double> u, const RieszKernel& kernel, const Problem& pb, double c) {
    const RadialGrid& g = *kernel.grid;
    const double p = pb.params.p, r = pb.params.r, ts = pb.exps.two_star;
    auto pieces = evaluate_with_potential(u, kernel, pb);

    GradientRecord out;
    out.rec = pieces.rec;
    const std::size_t M = u.size();
    out.gI = dirichlet_gradient(g, u);
    out.gF.resize(M);
    out.gG.resize(M);
    for (std::size_t i = 0; i < M; ++i) {
        const double w = g.quad_weights[i];
        out.gI[i] = 0.5 * out.gI[i] + w * pieces.pot[i] * signed_pow(u[i], p);
        out.gF[i] = w * signed_pow(u[i], r);
        out.gG[i] = w * signed_pow(u[i], ts);
    }
    out.gI[M - 1] = out.gF[M - 1] = out.gG[M - 1] = 0.0;

    out.lambda_c = lambda_c(out.rec, c);
    out.g_lambda_c.resize(M);
    for (std::size_t i = 0; i < M; ++i)
        out.g_lambda_c[i] = (out.gI[i] - out.gG[i] - out.lambda_c * out.gF[i]) / out.rec.F;
    return out;
}

GradientRecord gradients(const RadialFunction& u, const RieszKernel& kernel, const Problem& pb, double c) {
    if (u.grid != kernel.grid) throw std::invalid_argument("gradients: grid mismatch");
    return gradients(std::span<const double>(u.values), kernel, pb, c);
}

}  // namespace sps
