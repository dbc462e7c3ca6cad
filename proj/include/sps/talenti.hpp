#pragma once

#include <string>
#include <vector>

#include "sps/fiber.hpp"

namespace sps {

/// Cutoff Talenti bubble θ(r) ε^{(N-2)/2} / (ε² + r²)^{(N-2)/2}; θ is the
/// quintic smoothstep with θ = 1 on [0, ρ/2] and θ = 0 beyond ρ.
struct TalentiParams {
    double eps = 0.1;
    double rho = 1.0;
};

double smoothstep_cutoff(double r, double rho);

struct TalentiFunction {
    RadialFunction v;         ///< v_ε = u_ε / ‖u_ε‖_{2*}
    double norm_2star = 0;    ///< ‖u_ε‖_{2*} on the grid
    bool eps_too_small = false;  ///< fewer than 8 nodes inside r < ε
};

/// Throws std::invalid_argument for ε <= 0 or ρ outside (0, R_max].
TalentiFunction make_v_eps(const TalentiParams& tp, const GridPtr& grid);

/// Geometric list of n values from hi down to lo.
std::vector<double> geometric_eps(double hi, double lo, int n);

/// Grid used for ε-sweeps: geometric nodes on [1e-10 ρ, 4ρ]. Its relative
/// spacing is the same at every ε, so the discretization error of ∫|∇v_ε|²
/// does not drift along the sweep.
GridPtr talenti_grid(int N, double rho = 1.0, int M = 2048);

struct SlopeReport {
    std::string quantity;
    std::string branch;
    std::vector<double> eps;     ///< descending
    std::vector<double> values;
    double slope = 0;            ///< least-squares fit after discarding
    double expected = 0;
    double rel_error = 0;        ///< |slope - expected| / expected
    bool log_corrected = false;  ///< values divided by |log ε|^k before fitting
    double log_power = 0;
    bool monotone = true;        ///< values decrease with ε
    int discarded = 2;
};

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Exponent and branch label of ‖v_ε‖_ℓ^ℓ.
struct Branch {
    std::string name;
    double exponent = 0;
    double log_power = 0;
};
Branch lp_branch(int N, double ell);
Branch coulomb_branch(int N, double alpha, double p);

/// Slope of ∫|∇v_ε|² - S_ref against ε (expected N-2).
SlopeReport gradient_deficit(const std::vector<double>& eps_list, const GridPtr& grid, double S_ref, double rho);

/// Slope of ‖v_ε‖_ℓ^ℓ; on the borderline ℓ = N/(N-2) the fit uses
/// ‖v_ε‖_ℓ^ℓ / |log ε| against ε^{N/2}.
SlopeReport norm_asymptotics(const std::vector<double>& eps_list, double ell, const GridPtr& grid, double rho);

/// Slope of ∫|I_{α/2}⋆|v_ε|^p|². The estimates are upper bounds, so callers
/// compare one-sidedly (slope >= expected up to a margin).
SlopeReport coulomb_asymptotics(const std::vector<double>& eps_list, const RieszKernel& kernel, double p,
                                double rho);

struct SobolevEstimate {
    double S_extrapolated = 0;  ///< Richardson over the 3 smallest ε in {1, ε^{N-2}, ε^{2(N-2)}}
    double S_exact = 0;
    double rel_diff = 0;
    std::vector<double> eps;
    std::vector<double> grad_sq;
};

SobolevEstimate estimate_sobolev(const std::vector<double>& eps_list, const GridPtr& grid, double rho);

/// Closed-form best constant πN(N-2)(Γ(N/2)/Γ(N))^{2/N}.
double best_sobolev_constant(int N);

struct ProbeRow {
    double eps = 0;
    double grad_sq = 0;
    double coulomb = 0;
    double F = 0;
    double t_c = 0;
    double Lambda = 0;       ///< Λ_c((v_ε)_{t_c(v_ε)}) = Λ̃_c(v_ε)
    double lower_bound = 0;  ///< t_0^{-s_r}(c* - c)/F(v_ε)
};

struct ProbeReport {
    double c = 0;
    double c_star = 0;
    std::vector<ProbeRow> rows;
    double min_Lambda = 0;
    double first_Lambda = 0;
    double t_min = 0, t_max = 0;
    bool all_positive = false;
    bool any_negative = false;
    bool above_lower_bound = false;
};

/// Λ̃_c along the ε-sweep; c* enters only through the reported lower bound.
ProbeReport lambda_sign_probe(double c, const std::vector<double>& eps_list, const RieszKernel& kernel,
                              const Problem& pb, double S, double rho, int jobs = 1);

struct TalentiRow {
    double eps = 0;
    double grad_sq = 0;
    std::vector<double> lp;  ///< ‖v_ε‖_ℓ^ℓ per requested ℓ
    double coulomb = 0;
    double t_c = 0;
    double Lambda_c = 0;
};

std::vector<TalentiRow> talenti_sweep(const std::vector<double>& eps_list, const std::vector<double>& ells,
                                      const RieszKernel& kernel, const Problem& pb, double c, double rho,
                                      int jobs = 1);

}  // namespace sps
