#pragma once

#include <string>
#include <vector>

#include "sps/fiber.hpp"

namespace sps {

enum class InitKind { gaussian, talenti, file, profile };

struct InitSpec {
    InitKind kind = InitKind::gaussian;
    double eps = 0.5;            ///< talenti width
    std::string path;            ///< file: r,u CSV
    std::vector<double> values;  ///< profile: values on the solve grid
};

/// Parses "gaussian", "talenti", "talenti:<eps>" or "file:<path>".
InitSpec parse_init(const std::string& s);
std::string to_string(const InitSpec& init);

struct SolveConfig {
    int max_iters = 4000;
    double grad_tol = 1e-6;  ///< on the relative tangent gradient norm
    double armijo_step = 1.0;
    double armijo_backtrack = 0.5;
    double armijo_c1 = 1e-4;
    int armijo_max_backtracks = 40;
    bool precondition = true;
    InitSpec init;
    /// Known c*; enables the near-threshold iteration cap and concentration
    /// report. Zero disables both.
    double c_star = 0;
    int near_cstar_max_iters = 600;
};

struct SolveResult {
    RadialFunction u_star;
    FunctionalRecord rec;
    double c = 0;
    double lambda_star = 0;
    double grad_norm = 0;         ///< relative tangent gradient norm at exit
    double unconstrained_grad = 0;  ///< ‖λ_c'(u)‖ relative, without projection
    double pohozaev_rel = 0;
    double H_residual = 0;
    int iterations = 0;
    bool converged = false;
    bool possible_concentration = false;
    bool collapsed = false;       ///< F(u) → 0 along the iteration
    double t_c_at_min = 0;        ///< t_c of the M-projection of u*, = I(u*)^{1/s_q}
    double F_at_min = 0;          ///< F of the M-projection of u*
    std::string message;
};

/// Initial profile on `grid` (before projection onto N_c).
RadialFunction initial_profile(const InitSpec& init, const GridPtr& grid);

/// Minimizes λ_c over N_c = {H = s_r c}. Each step moves along the
/// Riemannian gradient of λ_c in the H¹ metric (the gradient minus its
/// component normal to the level set of H) and retracts to N_c by rescaling
/// the amplitude. Throws NoRootError for c <= 0.
SolveResult minimize_Lambda_c(double c, const Problem& pb, const RieszKernel& kernel, const SolveConfig& cfg);

struct VerifyReport {
    double energy_rel = 0;      ///< |Φ_λ(u) - c| / c
    double weak_residual = 0;   ///< max over test directions
    double pohozaev_rel = 0;
    double H_residual = 0;
    bool energy_ok = false, weak_ok = false, pohozaev_ok = false, membership_ok = false;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/// Checks Φ_λ(u) = c (1e-6), the weak form of the equation against 20 fixed
/// pseudo-random smooth directions (1e-4), the Pohozaev residual (1e-3) and
/// N_c membership (1e-8).
VerifyReport verify_solution(const RadialFunction& u, double lambda, double c, const Problem& pb,
                             const RieszKernel& kernel);
VerifyReport verify_solution(const SolveResult& res, const Problem& pb, const RieszKernel& kernel);

/// Smooth test directions used by verify_solution and the gradient checks.
std::vector<std::vector<double>> smooth_directions(const RadialGrid& grid, int count, unsigned seed);

struct EigenResult {
    double lambda_1 = 0;
    RadialFunction u;
    FunctionalRecord rec;
    double eigen_residual = 0;  ///< ‖I'(u) - λ₁F'(u)‖ / ‖I'(u)‖ in the dual H¹ norm
    double grad_norm = 0;
    int iterations = 0;
    bool converged = false;
};

/// Minimizes 1/F over M = {I = 1}; requires r = q and α > 1.
EigenResult eigen_lambda1(const Problem& pb, const RieszKernel& kernel, const SolveConfig& cfg);

}  // namespace sps
