#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace sps {

/// Surface area of the unit sphere S^{n} in R^{n+1}: 2π^{(n+1)/2}/Γ((n+1)/2).
double sphere_area(int n);

/// Radial grid with quadrature weights
/// for ∫_{R^N} f = ω_{N-1} ∫_0^{R_max} f(r) r^{N-1} dr.
///
/// Weights come from integrating the piecewise-linear interpolant of f against
/// r^{N-1} exactly on every cell [r_i, r_{i+1}]; the innermost cell [0, r_1]
/// carries f(r_1). The origin is never a node.
///
/// Two node families: graded r_i = R_max (i/M)^γ, i = 1..M, and geometric
/// r_i = r_min (R_max/r_min)^{(i-1)/(M-1)} (r_min > 0 marks the latter). The
/// geometric family has the same relative spacing at every scale.
struct RadialGrid {
    int N = 3;
    double R_max = 0;
    int M = 0;
    double gamma = 1;
    double r_min = 0;
    double omega = 0;                  ///< ω_{N-1}
    std::vector<double> nodes;         ///< r_1 < ... < r_M = R_max
    std::vector<double> quad_weights;  ///< w_i > 0
    std::vector<double> shell_measure; ///< ω_{N-1}∫_{r_i}^{r_{i+1}} r^{N-1} dr, size M-1

    std::size_t size() const { return nodes.size(); }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Throws std::invalid_argument on R_max <= 0, M < 16, γ < 1 or N < 1.
GridPtr make_grid(int N, double R_max, int M, double gamma);

/// Geometric nodes from r_min to R_max. Throws std::invalid_argument unless
/// 0 < r_min < R_max and M >= 16.
GridPtr make_geometric_grid(int N, double R_max, int M, double r_min);

/// Sampled radial profile. `closed_form`, when set, evaluates the same profile
/// exactly at any radius and is carried through dilations.
struct RadialFunction {
    GridPtr grid;
    std::vector<double> values;
    bool decays_to_zero = true;
    std::function<double(double)> closed_form;

    std::size_t size() const { return values.size(); }
};

/// Samples `f` on the grid; pins u(R_max) = 0 and keeps `f` as closed form.
RadialFunction sample(const GridPtr& grid, std::function<double(double)> f);

/// Wraps raw values; pins the last value to zero.
RadialFunction from_values(const GridPtr& grid, std::vector<double> values);

/// Σ w_i f_i.
double integrate(const RadialGrid& grid, std::span<const double> f);

/// ∫|∇u|², from midpoint difference quotients on every cell weighted by the
/// exact shell measure. u'(0) = 0 on the innermost cell.
double dirichlet_energy(const RadialFunction& u);
double dirichlet_energy(const RadialGrid& grid, std::span<const double> u);

/// d/du_i of dirichlet_energy; returns the covector 2·A·u.
std::vector<double> dirichlet_gradient(const RadialGrid& grid, std::span<const double> u);

/// ∫|u|^ℓ (ℓ >= 1).
double lp_norm_pow(const RadialFunction& u, double ell);
double lp_norm_pow(const RadialGrid& grid, std::span<const double> u, double ell);

struct DilationResult {
    RadialFunction u;
    /// Fraction of ∫u² of the input lying in [t·R_max, R_max], i.e. pushed
    /// beyond the truncation radius; zero for t >= 1.
    double truncation_loss = 0;
    bool truncation_warning = false;
};

inline constexpr double kTruncationWarnLevel = 1e-6;

/// Samples t^σ u(t r_i). Uses the closed form when present, otherwise
/// monotone cubic (PCHIP) interpolation with u = u(r_1) below r_1 and u = 0
/// beyond R_max. Throws std::invalid_argument for t <= 0.
DilationResult resample_dilation(const RadialFunction& u, double t, double sigma);

/// Tridiagonal operator P = A + κW (discrete -Δ + κ in the weak form with
/// lumped mass), with the last node pinned. `solve` maps a covector g to the
/// Sobolev-gradient representative P^{-1} g.
class H1Preconditioner {
public:
    explicit H1Preconditioner(const RadialGrid& grid, bool use_stiffness = true, double mass_scale = 1.0);
    std::vector<double> solve(std::span<const double> covector) const;
    /// sqrt(gᵀ P^{-1} g).
    double dual_norm(std::span<const double> covector) const;

private:
    std::vector<double> lower_, diag_, upper_;
};

}  // namespace sps
