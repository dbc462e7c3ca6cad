#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace sps {

/// Raised when a parameter violates an admissibility hypothesis. The message
/// names the violated inequality.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Tolerance used for all strict/equality comparisons on exponents.
inline constexpr double kExponentTol = 1e-12;

/// Input parameters of
///   -Δu + (I_α ⋆ |u|^p)|u|^{p-2}u = λ|u|^{r-2}u + |u|^{2*-2}u   in R^N.
struct ProblemParams {
    int N = 3;
    double alpha = 2.0;
    double p = 2.0;
    double r = 4.0;
    /// Coupling; never needed as input since prescribed-energy runs produce it.
    std::optional<double> lambda;
};

struct DerivedExponents {
    double sigma = 0;     ///< dilation weight in u_t(x) = t^σ u(tx)
    double q = 0;         ///< lower embedding exponent
    double two_star = 0;  ///< 2N/(N-2)
    double s_q = 0;       ///< homogeneity degree of I under u_t
    double s_r = 0;       ///< homogeneity degree of F
    double s_2star = 0;   ///< homogeneity degree of G
    double A_alpha = 0;   ///< Riesz normalization constant
};

/// The five parameter chains under which the limit of the first energy curve
/// at the threshold vanishes. `none` is 0 so the enum serializes as 0..5.
enum class RegimeCase : int { none = 0, case1 = 1, case2 = 2, case3 = 3, case4 = 4, case5 = 5 };

struct RegimeInfo {
    RegimeCase case_id = RegimeCase::none;
    bool lambda_tilde1_zero = false;
    /// Number of branches whose full inequality chain holds; 0 or 1 for any
    /// valid input.
    int matching_branches = 0;
};

/// Throws InvalidParameter naming the first violated condition.
void validate(const ProblemParams& params);

/// Closed-form exponents; validates first.
DerivedExponents derive_exponents(const ProblemParams& params);

/// A_α = Γ((N-α)/2) / (Γ(α/2) π^{N/2} 2^α), via log-Gamma.
double riesz_constant(int N, double alpha);

RegimeInfo classify_regime(const ProblemParams& params);

/// True when r coincides with q up to kExponentTol.
bool is_critical_r(const ProblemParams& params, const DerivedExponents& exps);

/// Params bundled with their exponents; what most of the library consumes.
struct Problem {
    ProblemParams params;
    DerivedExponents exps;
    bool r_equals_q = false;

    static Problem make(const ProblemParams& params);
};

}  // namespace sps
