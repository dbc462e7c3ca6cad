#include "sps/riesz.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "sps/parallel.hpp"
#include "sps/params.hpp"

namespace sps {

namespace {

constexpr int kGaussOrder = 16;
constexpr double kPi = std::numbers::pi;
// Width of the coincidence panel handled by the singular substitution.
constexpr double kCoincidencePanel = 1e-3 * kPi;

struct GaussRule {
    std::array<double, kGaussOrder> x{};  // on [0, 1]
    std::array<double, kGaussOrder> w{};
};

const GaussRule& gauss_rule() {
    static const GaussRule rule = [] {
        using G = boost::math::quadrature::gauss<double, kGaussOrder>;
        GaussRule r;
        const auto& a = G::abscissa();
        const auto& wt = G::weights();
        const int half = kGaussOrder / 2;
        for (int k = 0; k < half; ++k) {
            r.x[half - 1 - k] = 0.5 * (1.0 - a[k]);
            r.x[half + k] = 0.5 * (1.0 + a[k]);
            r.w[half - 1 - k] = 0.5 * wt[k];
            r.w[half + k] = 0.5 * wt[k];
        }
        return r;
    }();
    return rule;
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= x;
    return r;
}

class AngularIntegrand {
public:
    AngularIntegrand(int N, double alpha, double rho)
        : n_(N - 2), lam_((N - alpha) / 2.0), rho_(rho), gap2_((1.0 - rho) * (1.0 - rho)) {}

    double operator()(double theta) const {
        const double s = std::sin(0.5 * theta);
        const double c = std::cos(0.5 * theta);
        // 1 + ρ² - 2ρcosθ = (1-ρ)² + 4ρ sin²(θ/2)
        const double base = gap2_ + 4.0 * rho_ * s * s;
        return neg_pow(base) * ipow(2.0 * s * c, n_);
    }

private:
    double neg_pow(double base) const {
        if (lam_ == 0.5) return 1.0 / std::sqrt(base);
        if (lam_ == 1.0) return 1.0 / base;
        return std::exp(-lam_ * std::log(base));
    }

    int n_;
    double lam_, rho_, gap2_;
};

template <class F>
double gauss_panel(const F& f, double a, double b) {
    const auto& g = gauss_rule();
    const double h = b - a;
    double s = 0.0;
    for (int k = 0; k < kGaussOrder; ++k) s += g.w[k] * f(a + h * g.x[k]);
    return s * h;
}

// Panels [e, 2e], [2e, 4e], ... up to π.
template <class F>
double geometric_panels(const F& f, double start) {
    double s = 0.0;
    double a = start;
    while (a < kPi) {
        const double b = std::min(2.0 * a, kPi);
        s += gauss_panel(f, a, b);
        a = b;
    }
    return s;
}

}  // namespace

double angular_integral(int N, double alpha, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("angular_integral: rho must lie in [0, 1]");
    const AngularIntegrand f(N, alpha, rho);
    const double gap = 1.0 - rho;
    if (gap > 0.0) {
        const double first = std::min(gap, 1.0);
        return gauss_panel(f, 0.0, first) + geometric_panels(f, first);
    }
    if (!(alpha > 1.0))
        throw std::domain_error("angular_integral: coincident radii need alpha > 1");
    // Near θ = 0 the integrand is θ^{α-2}·(smooth); θ = δ v^{1/(α-1)} removes
    // the algebraic factor.
    const double delta = kCoincidencePanel;
    const double k = 1.0 / (alpha - 1.0);
    const auto& g = gauss_rule();
    double head = 0.0;
    for (int i = 0; i < kGaussOrder; ++i) {
        const double v = g.x[i];
        const double theta = delta * std::pow(v, k);
        head += g.w[i] * f(theta) * delta * k * std::pow(v, k - 1.0);
    }
    return head + geometric_panels(f, delta);
}

double kernel_value(int N, double alpha, double r, double s) {
    const double A = riesz_constant(N, alpha);
    const double big = std::max(r, s);
    const double rho = std::min(r, s) / big;
    return A * sphere_area(N - 2) * std::pow(big, alpha - N) * angular_integral(N, alpha, rho);
}

namespace {

// Hat-weighted average of K(r_i, ·) over the support of node i's hat function;
// used on the diagonal when α <= 1.
double diagonal_average(const RadialGrid& g, std::size_t i, double alpha, double A, double omega2) {
    const int N = g.N;
    const double ri = g.nodes[i];
    const auto& gr = gauss_rule();
    const double k = 1.0 / alpha;  // |s - r_i| = ℓ v^{1/α} smooths |s-r|^{α-1}
    double num = 0.0, den = 0.0;
    auto side = [&](double ell, double sign) {
        for (int q = 0; q < kGaussOrder; ++q) {
            const double v = gr.x[q];
            const double d = ell * std::pow(v, k);
            const double jac = ell * k * std::pow(v, k - 1.0);
            const double s = ri + sign * d;
            if (s <= 0.0) continue;
            const double hat = 1.0 - d / ell;
            const double big = std::max(ri, s);
            const double rho = std::min(ri, s) / big;
            const double kv = A * omega2 * std::pow(big, alpha - N) * angular_integral(N, alpha, rho);
            const double m = gr.w[q] * jac * hat * std::pow(s, N - 1);
            num += m * kv;
            den += m;
        }
    };
    const double left = i > 0 ? ri - g.nodes[i - 1] : ri;
    side(left, -1.0);
    if (i + 1 < g.size()) side(g.nodes[i + 1] - ri, +1.0);
    return num / den;
}

}  // namespace

RieszKernel build_kernel(const GridPtr& grid, double alpha, int jobs) {
    const int N = grid->N;
    if (!(alpha > 0.0 && alpha < N)) throw std::invalid_argument("build_kernel: alpha must lie in (0, N)");
    RieszKernel ker;
    ker.grid = grid;
    ker.N = N;
    ker.alpha = alpha;
    ker.A_alpha = riesz_constant(N, alpha);
    const std::size_t M = grid->size();
    ker.K.assign(M * M, 0.0);
    const double pref = ker.A_alpha * sphere_area(N - 2);
    const auto& r = grid->nodes;

    auto fill_row = [&](std::size_t i) {
        for (std::size_t j = i; j < M; ++j) {
            double v;
            if (j == i) {
                v = alpha > 1.0 ? pref * std::pow(r[i], alpha - N) * angular_integral(N, alpha, 1.0)
                                : diagonal_average(*grid, i, alpha, ker.A_alpha, sphere_area(N - 2));
            } else {
                v = pref * std::pow(r[j], alpha - N) * angular_integral(N, alpha, r[i] / r[j]);
            }
            ker.K[i * M + j] = v;
        }
    };

    parallel_for(M, jobs, fill_row);

    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = i; j < M; ++j) {
            const double v = ker.K[i * M + j];
            if (!std::isfinite(v) || !(v > 0.0)) {
                std::ostringstream os;
                os << "angular quadrature failed at (i=" << i << ", j=" << j << ", alpha=" << alpha
                   << "): value " << v;
                throw KernelError(os.str());
            }
            ker.K[j * M + i] = v;
        }
    }
    return ker;
}

void potential_values(const RieszKernel& kernel, std::span<const double> f, std::span<double> out) {
    const RadialGrid& g = *kernel.grid;
    const std::size_t M = g.size();
    if (f.size() != M || out.size() != M)
        throw std::invalid_argument("potential: function does not live on the kernel grid");
    std::vector<double> wf(M);
    for (std::size_t j = 0; j < M; ++j) wf[j] = g.quad_weights[j] * f[j] / g.omega;
    for (std::size_t i = 0; i < M; ++i) {
        const double* row = kernel.K.data() + i * M;
        double s = 0.0;
        for (std::size_t j = 0; j < M; ++j) s += row[j] * wf[j];
        out[i] = s;
    }
}

RadialFunction potential(const RieszKernel& kernel, const RadialFunction& f) {
    if (f.grid != kernel.grid) throw std::invalid_argument("potential: grid mismatch");
    RadialFunction out;
    out.grid = f.grid;
    out.decays_to_zero = false;
    out.values.resize(f.size());
    potential_values(kernel, f.values, out.values);
    return out;
}

double coulomb_energy(const RieszKernel& kernel, std::span<const double> f) {
    std::vector<double> pot(f.size());
    potential_values(kernel, f, pot);
    for (std::size_t i = 0; i < f.size(); ++i) pot[i] *= f[i];
    return integrate(*kernel.grid, pot);
}

double coulomb_energy(const RieszKernel& kernel, const RadialFunction& f) {
    if (f.grid != kernel.grid) throw std::invalid_argument("coulomb_energy: grid mismatch");
    return coulomb_energy(kernel, std::span<const double>(f.values));
}

std::string kernel_cache_key(const RadialGrid& grid, double alpha) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "N=%d;alpha=%.17g;M=%d;R_max=%.17g;gamma=%.17g;r_min=%.17g", grid.N, alpha,
                  grid.M, grid.R_max, grid.gamma, grid.r_min);
    return buf;
}

namespace {

constexpr char kMagic[8] = {'S', 'P', 'S', 'K', 'E', 'R', 'N', '1'};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

void save_kernel(const RieszKernel& kernel, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write kernel cache " + path.string());
    const std::string key = kernel_cache_key(*kernel.grid, kernel.alpha);
    const std::uint64_t hash = fnv1a(key);
    const std::uint64_t len = key.size();
    const std::uint64_t count = kernel.K.size();
    os.write(kMagic, sizeof kMagic);
    os.write(reinterpret_cast<const char*>(&hash), sizeof hash);
    os.write(reinterpret_cast<const char*>(&len), sizeof len);
    os.write(key.data(), static_cast<std::streamsize>(len));
    os.write(reinterpret_cast<const char*>(&count), sizeof count);
    os.write(reinterpret_cast<const char*>(kernel.K.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (!os) throw std::runtime_error("failed writing kernel cache " + path.string());
}

std::optional<RieszKernel> load_kernel(const GridPtr& grid, double alpha, const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[sizeof kMagic];
    std::uint64_t hash = 0, len = 0, count = 0;
    is.read(magic, sizeof magic);
    is.read(reinterpret_cast<char*>(&hash), sizeof hash);
    is.read(reinterpret_cast<char*>(&len), sizeof len);
    if (!is || !std::equal(magic, magic + sizeof magic, kMagic) || len > 4096)
        throw std::runtime_error("corrupt kernel cache " + path.string());
    std::string key(len, '\0');
    is.read(key.data(), static_cast<std::streamsize>(len));
    const std::string want = kernel_cache_key(*grid, alpha);
    if (key != want || hash != fnv1a(want)) return std::nullopt;
    is.read(reinterpret_cast<char*>(&count), sizeof count);
    if (!is || count != grid->size() * grid->size()) throw std::runtime_error("corrupt kernel cache " + path.string());
    RieszKernel ker;
    ker.grid = grid;
    ker.N = grid->N;
    ker.alpha = alpha;
    ker.A_alpha = riesz_constant(grid->N, alpha);
    ker.K.resize(count);
    is.read(reinterpret_cast<char*>(ker.K.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (!is) throw std::runtime_error("truncated kernel cache " + path.string());
    return ker;
}

RieszKernel build_or_load_kernel(const GridPtr& grid, double alpha, int jobs,
                                 const std::optional<std::filesystem::path>& cache) {
    if (cache) {
        if (auto k = load_kernel(grid, alpha, *cache)) return std::move(*k);
    }
    RieszKernel k = build_kernel(grid, alpha, jobs);
    if (cache) save_kernel(k, *cache);
    return k;
}

}  // namespace sps
