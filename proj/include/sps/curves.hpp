#pragma once

#include <string>
#include <vector>

#include "sps/solver.hpp"

namespace sps {

struct CurvePoint {
    double c = 0;
    double lambda = 0;
    bool converged = false;
    double grad_norm = 0;
    double pohozaev_rel = 0;
    double t_c_at_min = 0;
    double F_at_min = 0;
    int iterations = 0;
};

CurvePoint to_curve_point(const SolveResult& res);

struct EnvelopeCheck {
    double c = 0;
    double fd_slope = 0;  ///< (λ(c(1+h)) - λ(c(1-h))) / (2hc)
    double analytic = 0;  ///< -t_c^{-s_r}/F at the minimizer
    double rel_err = 0;
};

struct ChordCheck {
    double a = 0, b = 0;
    double slope = 0;
    double C = 0;  ///< bound from the recorded F values
    bool within = false;
};

struct CurveReport {
    std::vector<CurvePoint> points;
    bool monotone = false;  ///< strictly decreasing over converged points
    std::vector<ChordCheck> chords;
    std::vector<EnvelopeCheck> envelope;
    double max_envelope_err = 0;
    std::vector<SolveResult> solutions;  ///< kept only when requested
};

struct TraceOptions {
    bool warm_start = true;
    int jobs = 1;                   ///< used for cold starts only
    bool envelope = false;          ///< paired solves at c(1 ± h)
    double envelope_h = 0.01;
    bool keep_solutions = false;
};

/// Solves at each c of `c_grid` (ascending). Warm mode starts every solve
/// from the previous minimizer; non-converged points are recorded and the
/// trace continues.
CurveReport trace_curve(const std::vector<double>& c_grid, const Problem& pb, const RieszKernel& kernel,
                        const SolveConfig& cfg, const TraceOptions& opt = {});

/// n log-spaced points in [lo, hi]·c*.
std::vector<double> default_c_grid(double c_star, int n = 24, double lo = 0.02, double hi = 0.98);

struct LimitZeroReport {
    std::string branch;  ///< "r>q" or "r=q"
    std::vector<double> c;  ///< descending: 0.1, 0.01, 0.001 times c*
    std::vector<double> lambda;
    std::vector<double> t_c;
    std::vector<bool> converged;
    std::vector<double> ratios;  ///< λ(c_{k+1}) / λ(c_k)
    double lambda_1 = 0;         ///< r=q only
    double rel_to_lambda1 = 0;   ///< r=q only
    bool pass = false;
};

/// r>q: λ_{c,1} must at least double per decade. r=q: the smallest-c value
/// must be within 5% of λ₁ from eigen_lambda1.
LimitZeroReport limit_c_to_zero(const Problem& pb, const RieszKernel& kernel, const SolveConfig& cfg,
                                double c_star, const std::vector<double>& fractions = {1e-1, 1e-2, 1e-3});

struct LimitCstarReport {
    std::vector<double> c;
    std::vector<double> lambda;
    std::vector<bool> converged;
    std::vector<bool> concentration;
    double lambda_half = 0;         ///< λ at 0.5 c*
    double extrapolate = 0;         ///< quadratic through the three points, evaluated at c*
    bool monotone = false;
    bool zero_expected = false;     ///< parameters fall in one of the five regimes
    bool pass = false;              ///< extrapolate < 10% of lambda_half (only when zero_expected)
};

LimitCstarReport limit_c_to_cstar(const Problem& pb, const RieszKernel& kernel, const SolveConfig& cfg,
                                  double c_star, const std::vector<double>& fractions = {0.9, 0.95, 0.99});

struct MultiStartReport {
    std::vector<std::string> inits;
    std::vector<double> lambda;
    std::vector<bool> converged;
    double best = 0;
    double spread = 0;  ///< (max - min) / min over converged starts
};

MultiStartReport multi_start(double c, const Problem& pb, const RieszKernel& kernel, const SolveConfig& cfg,
                             const std::vector<InitSpec>& inits, int jobs = 1);

std::vector<InitSpec> default_inits();

}  // namespace sps
