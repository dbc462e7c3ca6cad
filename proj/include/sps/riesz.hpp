#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sps/grid.hpp"

namespace sps {

class KernelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Spherically averaged Riesz kernel on a radial grid:
///   K[i][j] = A_α ω_{N-2} ∫_0^π (r_i² + r_j² - 2 r_i r_j cosθ)^{(α-N)/2} sin^{N-2}θ dθ,
/// so that (I_α ⋆ f)(r_i) = Σ_j K[i][j] f_j w_j / ω_{N-1}.
///
/// Stored dense and symmetric (M² doubles).
struct RieszKernel {
    GridPtr grid;
    int N = 3;
    double alpha = 2.0;
    double A_alpha = 0;
    std::vector<double> K;  ///< row-major M×M

    std::size_t size() const { return grid ? grid->size() : 0; }
    double operator()(std::size_t i, std::size_t j) const { return K[i * size() + j]; }
};

/// J(ρ) = ∫_0^π (1 + ρ² - 2ρ cosθ)^{(α-N)/2} sin^{N-2}θ dθ for ρ in [0, 1].
/// ρ = 1 requires α > 1 (the integrand behaves like θ^{α-2}).
double angular_integral(int N, double alpha, double rho);

/// Pointwise kernel value K(r, s) for r, s > 0 and r ≠ s (or α > 1).
double kernel_value(int N, double alpha, double r, double s);

/// Builds the dense kernel. Rows are distributed over `jobs` threads; the
/// result does not depend on `jobs`. Diagonal entries: the angular integral
/// at coincidence when α > 1, otherwise the average of K(r_i, ·) over the
/// node's dual cell (the coincident value is infinite).
/// Throws std::invalid_argument for α ∉ (0, N) and KernelError when an entry
/// comes out non-finite or non-positive.
RieszKernel build_kernel(const GridPtr& grid, double alpha, int jobs = 1);

/// (I_α ⋆ f)(r_i) on the same grid. Throws std::invalid_argument on grid mismatch.
RadialFunction potential(const RieszKernel& kernel, const RadialFunction& f);
void potential_values(const RieszKernel& kernel, std::span<const double> f, std::span<double> out);

/// ∫ f (I_α ⋆ f) = ∫|I_{α/2} ⋆ f|², via the semigroup identity.
double coulomb_energy(const RieszKernel& kernel, const RadialFunction& f);
double coulomb_energy(const RieszKernel& kernel, std::span<const double> f);

/// Cache key for (N, α, M, R_max, γ, r_min).
std::string kernel_cache_key(const RadialGrid& grid, double alpha);

/// Binary kernel dump. `load_kernel` returns nullopt when the file is absent
/// or was written for a different key; it throws std::runtime_error on a
/// corrupt file.
void save_kernel(const RieszKernel& kernel, const std::filesystem::path& path);
std::optional<RieszKernel> load_kernel(const GridPtr& grid, double alpha,
                                       const std::filesystem::path& path);

/// Loads from `cache` when it matches, otherwise builds and (if a path is
/// given) writes it.
RieszKernel build_or_load_kernel(const GridPtr& grid, double alpha, int jobs,
                                 const std::optional<std::filesystem::path>& cache);

}  // namespace sps
