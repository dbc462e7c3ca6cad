#pragma once

#include <span>
#include <vector>

#include "sps/grid.hpp"
#include "sps/params.hpp"
#include "sps/riesz.hpp"

namespace sps {

/// I = D/2 + C/(2p), F = (1/r)∫|u|^r, G = (1/2*)∫|u|^{2*} with D = ∫|∇u|² and
/// C = ∫|I_{α/2}⋆|u|^p|².
struct FunctionalRecord {
    double I = 0;
    double F = 0;
    double G = 0;
    double dirichlet = 0;
    double coulomb = 0;
    double e_norm = 0;
    double lp_r = 0;      ///< ∫|u|^r
    double lp_2star = 0;  ///< ∫|u|^{2*}
};

/// Weak-form derivatives as covectors (quadrature weights folded in). The
/// entry of the pinned outer node is zero.
struct GradientRecord {
    FunctionalRecord rec;
    double lambda_c = 0;
    std::vector<double> gI, gF, gG, g_lambda_c;
};

FunctionalRecord evaluate(const RadialFunction& u, const RieszKernel& kernel, const Problem& pb);
FunctionalRecord evaluate(std::span<const double> u, const RieszKernel& kernel, const Problem& pb);

/// Record of a·u computed from the record of u (exact homogeneity).
FunctionalRecord scale_amplitude(const FunctionalRecord& rec, double a, const Problem& pb);

/// (I - G - c)/F. Throws std::domain_error when F < 1e-300.
double lambda_c(const FunctionalRecord& rec, double c);

/// Φ_λ(u) = I - λF - G.
double phi_lambda(const FunctionalRecord& rec, double lambda);

/// (s_r - s_q) I + (s_{2*} - s_r) G.
double nehari_H(const FunctionalRecord& rec, const DerivedExponents& exps);

/// |H - s_r c| / (s_r c).
double membership_residual(const FunctionalRecord& rec, const DerivedExponents& exps, double c);

struct PohozaevValues {
    double P = 0;
    double P_scaled = 0;
};

/// P = (N-2)/2 D + (N+α)/(2p) C - Nλ/r ∫|u|^r - N/2* ∫|u|^{2*} and
/// P_scaled = (s_q/2) D + (s_q/2p) C - s_r λ F - s_{2*} G.
PohozaevValues pohozaev(const FunctionalRecord& rec, double lambda, const Problem& pb);

/// The coupling obtained by testing the equation against u itself:
/// (D + C - ∫|u|^{2*}) / ∫|u|^r.
double lambda_nehari(const FunctionalRecord& rec);

/// |P_scaled| / (s_q I), evaluated with the Nehari coupling. For an exact
/// solution both identities hold, so this vanishes; on a fiber maximum with
/// λ = λ_c(u) the scaled identity alone would be automatic.
double pohozaev_relative(const FunctionalRecord& rec, const Problem& pb);

GradientRecord gradients(std::span<const double> u, const RieszKernel& kernel, const Problem& pb, double c);
GradientRecord gradients(const RadialFunction& u, const RieszKernel& kernel, const Problem& pb, double c);

}  // namespace sps
