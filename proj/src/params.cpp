#include "sps/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace sps {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

bool gt(double a, double b) { return a - b > kExponentTol; }
bool near(double a, double b) { return std::abs(a - b) <= kExponentTol; }

}  // namespace

void validate(const ProblemParams& pp) {
    const double N = pp.N;
    if (pp.N < 3)
        throw InvalidParameter("N >= 3 required (got N=" + std::to_string(pp.N) + ")");
    if (!(gt(pp.alpha, 0.0) && gt(N, pp.alpha)))
        throw InvalidParameter("0 < alpha < N required (got alpha=" + fmt(pp.alpha) + ")");
    const double p_max = (N + pp.alpha) / (N - 2.0);
    if (!(gt(pp.p, 1.0) && gt(p_max, pp.p)))
        throw InvalidParameter("1 < p < (N+alpha)/(N-2) = " + fmt(p_max) +
                               " required (got p=" + fmt(pp.p) + ")");
    if (!std::isfinite(pp.r))
        throw InvalidParameter("(H1): r must be finite");
    const double q = 2.0 * (2.0 * pp.p + pp.alpha) / (2.0 + pp.alpha);
    const double two_star = 2.0 * N / (N - 2.0);
    if (pp.r < q - kExponentTol)
        throw InvalidParameter("(H1): r in [q, 2*) required, r=" + fmt(pp.r) + " < q=" + fmt(q));
    if (!gt(two_star, pp.r))
        throw InvalidParameter("(H1): r in [q, 2*) required, r=" + fmt(pp.r) +
                               " >= 2*=" + fmt(two_star));
    if (near(pp.r, q) && !gt(pp.alpha, 1.0))
        throw InvalidParameter("(H1): r=q requires alpha>1 (got alpha=" + fmt(pp.alpha) + ")");
}

double riesz_constant(int N, double alpha) {
    if (!(alpha > 0.0 && alpha < N))
        throw std::domain_error("riesz_constant: alpha must lie in (0, N)");
    const double logA = std::lgamma((N - alpha) / 2.0) - std::lgamma(alpha / 2.0) -
                        (N / 2.0) * std::log(std::numbers::pi) - alpha * std::numbers::ln2;
    return std::exp(logA);
}

DerivedExponents derive_exponents(const ProblemParams& pp) {
    validate(pp);
    const double N = pp.N;
    DerivedExponents e;
    e.sigma = (2.0 + pp.alpha) / (2.0 * (pp.p - 1.0));
    e.q = 2.0 * (2.0 * pp.p + pp.alpha) / (2.0 + pp.alpha);
    e.two_star = 2.0 * N / (N - 2.0);
    e.s_q = (pp.p * (2.0 - N) + pp.alpha + N) / (pp.p - 1.0);
    e.s_r = e.sigma * pp.r - N;
    e.s_2star = e.sigma * e.two_star - N;
    e.A_alpha = riesz_constant(pp.N, pp.alpha);
    return e;
}

bool is_critical_r(const ProblemParams& pp, const DerivedExponents& exps) {
    return near(pp.r, exps.q);
}

RegimeInfo classify_regime(const ProblemParams& pp) {
    const double N = pp.N, a = pp.alpha, p = pp.p, r = pp.r;
    const double lhs = 2.0 * N * p / (N + a);
    const double rhs = N / (N - 2.0);

    // Top-level comparison partitions into >, =, <.
    const bool above = gt(lhs, rhs);
    const bool equal = near(lhs, rhs);
    const bool below = gt(rhs, lhs);

    const double k1 = N + a - (N - 2.0) * (p + 1.0);
    const double k3 = 4.0 + a - N;
    const bool chain[5] = {
        above && k1 >= -kExponentTol && gt((N - 2.0) * r - 4.0, 0.0),
        above && k1 < -kExponentTol && gt(2.0 * a + (N - 2.0) * (r - 2.0 * p), 0.0),
        equal && gt(k3, 0.0) && gt((N - 2.0) * r - 4.0, 0.0),
        equal && !gt(k3, 0.0) && gt(a - N + (N - 2.0) * r, 0.0),
        below && gt((N - 2.0) * r - 4.0, 0.0),
    };

    RegimeInfo info;
    for (int i = 0; i < 5; ++i) {
        if (!chain[i]) continue;
        ++info.matching_branches;
        if (info.case_id == RegimeCase::none) info.case_id = static_cast<RegimeCase>(i + 1);
    }
    info.lambda_tilde1_zero = info.case_id != RegimeCase::none;
    return info;
}

Problem Problem::make(const ProblemParams& params) {
    Problem pr;
    pr.params = params;
    pr.exps = derive_exponents(params);
    pr.r_equals_q = is_critical_r(params, pr.exps);
    if (pr.r_equals_q) {
        // Snap so s_r == s_q exactly; downstream closed forms branch on it.
        pr.params.r = pr.exps.q;
        pr.exps.s_r = pr.exps.s_q;
    }
    return pr;
}

}  // namespace sps
