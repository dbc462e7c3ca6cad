#pragma once

#include <span>
#include <stdexcept>

#include "sps/functionals.hpp"

namespace sps {

/// Raised when N_c is empty: c <= 0, or both I and G vanish.
class NoRootError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct FiberResult {
    double t_c = 0;
    double phi_at_tc = 0;  ///< NaN unless F was supplied
    int newton_iters = 0;
    double residual = 0;   ///< |H(u_{t_c}) - s_r c| / (s_r c)
};

/// φ_{c,u}(t) = (t^{s_q-s_r} I - t^{s_{2*}-s_r} G - t^{-s_r} c) / F.
double phi(double c, const FunctionalRecord& rec, const DerivedExponents& exps, double t);

/// dφ_{c,u}/dt.
double phi_prime(double c, const FunctionalRecord& rec, const DerivedExponents& exps, double t);

/// Positive root x of Σ k_j x^{e_j} = target with k_j >= 0 (not all zero),
/// e_j > 0 and target > 0. The left side is increasing, so the root is unique;
/// found by Newton in log x, safeguarded by bisection on a bracket built from
/// the single-term roots.
struct PowerTerm {
    double k = 0;
    double e = 1;
};
struct PowerRoot {
    double x = 0;
    int iters = 0;
};
PowerRoot power_sum_root(std::span<const PowerTerm> terms, double target);

/// Unique t > 0 with (s_r - s_q) t^{s_q} I + (s_{2*} - s_r) t^{s_{2*}} G = s_r c.
FiberResult solve_tc(double c, double I, double G, const DerivedExponents& exps);
/// Same, also filling phi_at_tc = Λ̃_c(u).
FiberResult solve_tc(double c, const FunctionalRecord& rec, const DerivedExponents& exps);

/// Λ̃_c(u) = φ_{c,u}(t_c(u)).
double Lambda_tilde(double c, const FunctionalRecord& rec, const DerivedExponents& exps);

/// Record of the dilation u_t, from exact homogeneity.
FunctionalRecord dilate_record(const FunctionalRecord& rec, double t, const Problem& pb);

struct Projection {
    RadialFunction u;
    FunctionalRecord rec;
    double t = 1;          ///< dilation applied
    double amplitude = 1;  ///< amplitude correction applied after resampling
    double truncation_loss = 0;
    bool truncation_warning = false;
};

/// u_t with t = I(u)^{-1/s_q}, resampled on the grid and then rescaled in
/// amplitude so that I = 1 to round-off.
Projection project_to_M(const RadialFunction& u, const RieszKernel& kernel, const Problem& pb);

/// u_{t_c(u)}, resampled and amplitude-corrected so that H = s_r c to round-off.
Projection project_to_Nc(const RadialFunction& u, const RieszKernel& kernel, const Problem& pb, double c);

/// Amplitude a > 0 with I(a u) = target.
double amplitude_for_I(const FunctionalRecord& rec, const Problem& pb, double target);
/// Amplitude a > 0 with H(a u) = s_r c.
double amplitude_for_Nc(const FunctionalRecord& rec, const Problem& pb, double c);

struct CriticalConstants {
    double S = 0;
    double c_star = 0;
    double t_0 = 0;                  ///< closed form for the supplied ∫|u|^{2*}
    double z_at_t0 = 0;              ///< z_u(t_0), equals c_star
    double t_0_formula_check = 0;    ///< |z_u(t_0) - c*| / c*
};

/// z_u(t) = (S/2)(∫|u|^{2*})^{2/2*} t^{s_q} - (1/2*)(∫|u|^{2*}) t^{s_{2*}}.
double z_u(double t, const DerivedExponents& exps, double S, double L2star_integral);

/// c* = ½ (s_{2*}-s_q)/s_{2*} ((2*/2)(s_q/s_{2*}))^{s_q/(s_{2*}-s_q)} S^{s_{2*}/(s_{2*}-s_q)}.
double c_star(const DerivedExponents& exps, double S);

CriticalConstants t0_and_cstar(int N, const DerivedExponents& exps, double S, double L2star_integral);

/// Best Sobolev constant πN(N-2)(Γ(N/2)/Γ(N))^{2/N}.
double sobolev_constant_exact(int N);

}  // namespace sps
