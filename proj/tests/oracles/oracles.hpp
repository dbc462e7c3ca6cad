#pragma once

// Brute-force references for the test suite. Nothing here calls the
// quadrature, root-finding or kernel code it is compared against.

#include <functional>
#include <string>

#include "sps/grid.hpp"
#include "sps/params.hpp"

namespace sps::oracles {

struct OracleReport {
    std::string name;
    double reference_value = 0;
    double artifact_value = 0;
    double rel_error = 0;
    double tolerance = 0;
    bool pass = false;
};

/// rel_error = |artifact - reference| / |reference| (absolute when reference is 0).
OracleReport compare(std::string name, double reference, double artifact, double tolerance);

/// ∫∫ f(x) f(y) I_α(x - y) dx dy by uniform trapezoid in r and s on [0, R_max]
/// (4M intervals) and uniform midpoint sampling in θ (4M samples). f is read
/// from closed_form when present, otherwise linearly interpolated.
/// Throws std::invalid_argument for M > 256.
double coulomb_bruteforce(const RadialFunction& f, int N, double alpha);

/// Root of (s_r - s_q) t^{s_q} I + (s_{2*} - s_r) t^{s_{2*}} G = s_r c by
/// plain bisection in log t, to relative width 1e-12 or better.
double tc_bisection(double c, double I, double G, const DerivedExponents& exps);

/// Golden-section search for the maximizer of a unimodal f on [a, b].
double golden_section_max(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

/// argmax over t of (S/2) L^{2/2*} t^{s_q} - (1/2*) L t^{s_{2*}}, searched in log t.
double zu_argmax(const DerivedExponents& exps, double S, double L);

/// I_2 ⋆ 1_{B_1} in R^3: (3 - r²)/6 inside, 1/(3r) outside.
double newtonian_ball_potential(double r);
/// ∫ 1_B (I_2 ⋆ 1_B) = 8π/15.
double newtonian_ball_energy();

/// u = e^{-a r²} in R^N.
double gaussian_dirichlet(int N, double a);
double gaussian_lp(int N, double a, double ell);  ///< ∫ u^ℓ
/// ∫ f (I_α ⋆ f) for f = e^{-b r²}: the self-convolution is again Gaussian.
double gaussian_coulomb(int N, double alpha, double b);

/// Rayleigh quotient ∫|∇U|² / (∫U^{2*})^{2/2*} of U = (1 + r²)^{-(N-2)/2},
/// by adaptive quadrature on the half line.
double talenti_sobolev(int N);

}  // namespace sps::oracles
