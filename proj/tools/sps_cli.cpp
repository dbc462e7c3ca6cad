// Command-line driver: exponents, sobolev, fiber, solve, eigen, talenti, curve.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sps/curves.hpp"
#include "sps/io.hpp"
#include "sps/talenti.hpp"

using nlohmann::ordered_json;
using namespace sps;

namespace {

constexpr const char* kVersion = "sps 0.1.0 (spec 1.0)";

enum Exit { kOk = 0, kInvalid = 1, kNoConvergence = 2, kIo = 3 };

struct RunConfig {
    std::string subcommand;
    int N = 3;
    double alpha = 2.0;
    double p = 2.0;
    std::string r = "q";
    std::optional<double> c;
    std::optional<double> c_frac;
    int gridM = 2048;
    double Rmax = 40.0;
    double gamma = 2.0;
    std::string init = "gaussian";
    double tol = 1e-6;
    int max_iters = 4000;
    bool no_precondition = false;
    std::string S = "extrapolated";
    int jobs = 1;
    std::string kernel_cache;
    std::string out;
    bool quiet = false;
    // fiber
    double t_min = 1e-3, t_max = 1e3;
    int n_t = 400;
    // talenti
    double rho = 1.0;
    double eps_max = 0.25, eps_min = 1e-6;
    int n_eps = 21;
    std::vector<double> ells{2.5, 4.0};
    int talentiM = 2048;
    // curve
    int n_points = 24;
    double c_min_frac = 0.02, c_max_frac = 0.98;
    bool cold = false;
    bool envelope = false;
};

// Flat key/value view of the effective configuration, used both for the JSON
// echo and the rerunnable .cfg file.
ordered_json effective(const RunConfig& rc) {
    ordered_json j;
    j["subcommand"] = rc.subcommand;
    j["N"] = rc.N;
    j["alpha"] = rc.alpha;
    j["p"] = rc.p;
    j["r"] = rc.r;
    if (rc.c) j["c"] = *rc.c;
    if (rc.c_frac) j["c-frac"] = *rc.c_frac;
    j["gridM"] = rc.gridM;
    j["Rmax"] = rc.Rmax;
    j["gamma"] = rc.gamma;
    j["init"] = rc.init;
    j["tol"] = rc.tol;
    j["max-iters"] = rc.max_iters;
    j["no-precondition"] = rc.no_precondition;
    j["S"] = rc.S;
    j["jobs"] = rc.jobs;
    if (!rc.kernel_cache.empty()) j["kernel-cache"] = rc.kernel_cache;
    if (!rc.out.empty()) j["out"] = rc.out;
    j["t-min"] = rc.t_min;
    j["t-max"] = rc.t_max;
    j["n-t"] = rc.n_t;
    j["rho"] = rc.rho;
    j["eps-max"] = rc.eps_max;
    j["eps-min"] = rc.eps_min;
    j["n-eps"] = rc.n_eps;
    j["ells"] = rc.ells;
    j["talentiM"] = rc.talentiM;
    j["n-points"] = rc.n_points;
    j["c-min-frac"] = rc.c_min_frac;
    j["c-max-frac"] = rc.c_max_frac;
    j["cold"] = rc.cold;
    j["envelope"] = rc.envelope;
    return j;
}

std::string cfg_value(const ordered_json& v) {
    if (v.is_string()) return '"' + v.get<std::string>() + '"';
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    if (v.is_array()) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + cfg_value(v[i]);
        return s + "]";
    }
    return v.dump();
}

void write_cfg(const std::filesystem::path& path, const ordered_json& eff) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path.string());
    os << "# " << kVersion << "; rerun with: sps " << eff["subcommand"].get<std::string>() << " --config "
       << path.filename().string() << '\n';
    for (const auto& [k, v] : eff.items()) {
        if (k == "subcommand") continue;
        os << k << " = " << cfg_value(v) << '\n';
    }
}

std::filesystem::path out_path(const RunConfig& rc, const std::string& suffix) { return rc.out + suffix; }

Problem make_problem(const RunConfig& rc) {
    ProblemParams pp;
    pp.N = rc.N;
    pp.alpha = rc.alpha;
    pp.p = rc.p;
    if (rc.r == "q") {
        pp.r = 2.0 * (2.0 * rc.p + rc.alpha) / (2.0 + rc.alpha);
    } else {
        try {
            std::size_t pos = 0;
            pp.r = std::stod(rc.r, &pos);
            if (pos != rc.r.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw InvalidParameter("--r expects a number or 'q' (got '" + rc.r + "')");
        }
    }
    return Problem::make(pp);
}

struct Context {
    Problem pb;
    GridPtr grid;
    std::optional<RieszKernel> kernel;
    double S = 0;
    double c_star = 0;
};

double sobolev_for(const RunConfig& rc) {
    if (rc.S == "exact") return best_sobolev_constant(rc.N);
    if (rc.S != "extrapolated") throw InvalidParameter("--S expects 'extrapolated' or 'exact'");
    const auto g = talenti_grid(rc.N, 1.0, rc.talentiM);
    return estimate_sobolev(geometric_eps(0.25, 1e-6, 21), g, 1.0).S_extrapolated;
}

Context make_context(const RunConfig& rc, bool need_kernel) {
    Context ctx{make_problem(rc), nullptr, std::nullopt, 0, 0};
    ctx.S = sobolev_for(rc);
    ctx.c_star = c_star(ctx.pb.exps, ctx.S);
    if (need_kernel) {
        ctx.grid = make_grid(rc.N, rc.Rmax, rc.gridM, rc.gamma);
        if (rc.alpha <= 1.0)
            std::cerr << "warning: alpha <= 1, diagonal kernel entries use a cell average and accuracy degrades\n";
        std::optional<std::filesystem::path> cache;
        if (!rc.kernel_cache.empty()) cache = rc.kernel_cache;
        ctx.kernel = build_or_load_kernel(ctx.grid, rc.alpha, rc.jobs, cache);
    }
    return ctx;
}

double energy_level(const RunConfig& rc, const Context& ctx) {
    if (rc.c && rc.c_frac) throw InvalidParameter("give either --c or --c-frac, not both");
    if (rc.c) return *rc.c;
    return rc.c_frac.value_or(0.5) * ctx.c_star;
}

SolveConfig solve_config(const RunConfig& rc, const Context& ctx) {
    SolveConfig cfg;
    cfg.max_iters = rc.max_iters;
    cfg.grad_tol = rc.tol;
    cfg.precondition = !rc.no_precondition;
    cfg.init = parse_init(rc.init);
    cfg.c_star = ctx.c_star;
    return cfg;
}

void emit(const RunConfig& rc, const ordered_json& result, const std::string& suffix) {
    if (!rc.out.empty()) write_json(out_path(rc, suffix), result);
    std::cout << result.dump(2) << '\n';
}

ordered_json solve_json(const SolveResult& res, const VerifyReport& vr) {
    ordered_json j;
    j["c"] = res.c;
    j["lambda"] = res.lambda_star;
    j["converged"] = res.converged;
    j["iterations"] = res.iterations;
    j["grad_norm"] = res.grad_norm;
    j["unconstrained_grad"] = res.unconstrained_grad;
    j["pohozaev_rel"] = res.pohozaev_rel;
    j["H_residual"] = res.H_residual;
    j["t_c"] = res.t_c_at_min;
    j["F_at_min"] = res.F_at_min;
    j["possible_concentration"] = res.possible_concentration;
    j["message"] = res.message;
    j["functionals"] = to_json(res.rec);
    j["verify"] = {{"energy_rel", vr.energy_rel},
                   {"weak_residual", vr.weak_residual},
                   {"pohozaev_rel", vr.pohozaev_rel},
                   {"H_residual", vr.H_residual},
                   {"failures", vr.failures}};
    return j;
}

int cmd_exponents(const RunConfig& rc) {
    emit(rc, to_json(make_problem(rc)), ".json");
    return kOk;
}

int cmd_sobolev(const RunConfig& rc) {
    const auto pb = make_problem(rc);
    const auto g = talenti_grid(rc.N, rc.rho, rc.talentiM);
    const auto est = estimate_sobolev(geometric_eps(rc.eps_max * rc.rho, rc.eps_min * rc.rho, rc.n_eps), g, rc.rho);
    const double S = rc.S == "exact" ? est.S_exact : est.S_extrapolated;
    // ∫|v_ε|^{2*} = 1 for the normalized bubble, so t_0 refers to that profile.
    const auto cc = t0_and_cstar(rc.N, pb.exps, S, 1.0);
    ordered_json j;
    j["S_extrapolated"] = est.S_extrapolated;
    j["S_exact"] = est.S_exact;
    j["rel_diff"] = est.rel_diff;
    j["critical"] = to_json(cc);
    emit(rc, j, ".json");
    return kOk;
}

int cmd_fiber(const RunConfig& rc) {
    const auto ctx = make_context(rc, true);
    const double c = energy_level(rc, ctx);
    const auto u = initial_profile(parse_init(rc.init), ctx.grid);
    const auto rec = evaluate(u, *ctx.kernel, ctx.pb);
    const auto fr = solve_tc(c, rec, ctx.pb.exps);
    if (!rc.out.empty()) {
        std::vector<std::vector<double>> rows;
        for (int k = 0; k < rc.n_t; ++k) {
            const double t = rc.t_min * std::pow(rc.t_max / rc.t_min, k / (rc.n_t - 1.0));
            rows.push_back({t, phi(c, rec, ctx.pb.exps, t)});
        }
        write_csv(out_path(rc, "_fiber.csv"), {"t", "phi_c_u_t"}, rows);
    }
    ordered_json j = to_json(fr);
    j["c"] = c;
    j["c_star"] = ctx.c_star;
    j["functionals"] = to_json(rec);
    emit(rc, j, "_fiber.json");
    return kOk;
}

int cmd_solve(const RunConfig& rc) {
    auto ctx = make_context(rc, true);
    const double c = energy_level(rc, ctx);
    const auto res = minimize_Lambda_c(c, ctx.pb, *ctx.kernel, solve_config(rc, ctx));
    const auto vr = verify_solution(res, ctx.pb, *ctx.kernel);
    auto j = solve_json(res, vr);
    j["c_star"] = ctx.c_star;
    if (!rc.out.empty()) {
        auto meta = grid_metadata(*ctx.grid);
        meta["c"] = format_double(c);
        meta["lambda"] = format_double(res.lambda_star);
        write_radial_csv(out_path(rc, "_u.csv"), res.u_star, meta);
    }
    emit(rc, j, "_result.json");
    if (!res.converged) {
        std::cerr << "solve: not converged (" << res.message << ")\n";
        return kNoConvergence;
    }
    return kOk;
}

int cmd_eigen(const RunConfig& rc) {
    auto ctx = make_context(rc, true);
    const auto er = eigen_lambda1(ctx.pb, *ctx.kernel, solve_config(rc, ctx));
    ordered_json j;
    j["lambda_1"] = er.lambda_1;
    j["eigen_residual"] = er.eigen_residual;
    j["grad_norm"] = er.grad_norm;
    j["iterations"] = er.iterations;
    j["converged"] = er.converged;
    j["functionals"] = to_json(er.rec);
    if (!rc.out.empty()) write_radial_csv(out_path(rc, "_u.csv"), er.u, grid_metadata(*ctx.grid));
    emit(rc, j, "_eigen.json");
    if (!er.converged) {
        std::cerr << "eigen: not converged\n";
        return kNoConvergence;
    }
    return kOk;
}

ordered_json slope_json(const SlopeReport& s) {
    return {{"quantity", s.quantity},  {"branch", s.branch},       {"slope", s.slope},
            {"expected", s.expected},  {"rel_error", s.rel_error}, {"log_corrected", s.log_corrected},
            {"monotone", s.monotone}, {"discarded", s.discarded}};
}

int cmd_talenti(const RunConfig& rc) {
    const auto pb = make_problem(rc);
    const auto grid = talenti_grid(rc.N, rc.rho, rc.talentiM);
    std::optional<std::filesystem::path> cache;
    if (!rc.kernel_cache.empty()) cache = rc.kernel_cache;
    const auto kernel = build_or_load_kernel(grid, rc.alpha, rc.jobs, cache);
    const auto eps = geometric_eps(rc.eps_max * rc.rho, rc.eps_min * rc.rho, rc.n_eps);
    const auto est = estimate_sobolev(eps, grid, rc.rho);
    const double S = rc.S == "exact" ? est.S_exact : est.S_extrapolated;
    const double cs = c_star(pb.exps, S);
    const double c = rc.c ? *rc.c : rc.c_frac.value_or(1.0) * cs;
    const auto rows = talenti_sweep(eps, rc.ells, kernel, pb, c, rc.rho, rc.jobs);

    if (!rc.out.empty()) {
        std::vector<std::string> header{"eps", "grad_sq"};
        for (double l : rc.ells) header.push_back("lp_" + format_double(l));
        for (const char* h : {"coulomb", "t_c", "Lambda_c"}) header.emplace_back(h);
        std::vector<std::vector<double>> table;
        for (const auto& r : rows) {
            std::vector<double> line{r.eps, r.grad_sq};
            line.insert(line.end(), r.lp.begin(), r.lp.end());
            line.insert(line.end(), {r.coulomb, r.t_c, r.Lambda_c});
            table.push_back(std::move(line));
        }
        write_csv(out_path(rc, "_talenti.csv"), header, table, grid_metadata(*grid));
    }

    ordered_json j;
    j["S_extrapolated"] = est.S_extrapolated;
    j["S_exact"] = est.S_exact;
    j["c"] = c;
    j["c_star"] = cs;
    j["slopes"] = ordered_json::array();
    j["slopes"].push_back(slope_json(gradient_deficit(eps, grid, est.S_extrapolated, rc.rho)));
    for (double l : rc.ells) j["slopes"].push_back(slope_json(norm_asymptotics(eps, l, grid, rc.rho)));
    j["slopes"].push_back(slope_json(coulomb_asymptotics(eps, kernel, rc.p, rc.rho)));
    double lmin = rows.front().Lambda_c;
    for (const auto& r : rows) lmin = std::min(lmin, r.Lambda_c);
    j["Lambda_first"] = rows.front().Lambda_c;
    j["Lambda_min"] = lmin;
    emit(rc, j, "_talenti.json");
    return kOk;
}

int cmd_curve(const RunConfig& rc) {
    auto ctx = make_context(rc, true);
    const auto cgrid = default_c_grid(ctx.c_star, rc.n_points, rc.c_min_frac, rc.c_max_frac);
    TraceOptions opt;
    opt.warm_start = !rc.cold;
    opt.jobs = rc.jobs;
    opt.envelope = rc.envelope;
    const auto rep = trace_curve(cgrid, ctx.pb, *ctx.kernel, solve_config(rc, ctx), opt);

    if (!rc.out.empty()) {
        std::vector<std::vector<double>> rows;
        for (const auto& p : rep.points)
            rows.push_back({p.c, p.lambda, p.converged ? 1.0 : 0.0, p.grad_norm, p.pohozaev_rel, p.t_c_at_min,
                            p.F_at_min});
        auto meta = grid_metadata(*ctx.grid);
        meta["c_star"] = format_double(ctx.c_star);
        write_csv(out_path(rc, "_curve.csv"),
                  {"c", "lambda", "converged", "grad_norm", "pohozaev_res", "t_c", "F_at_min"}, rows, meta);
    }

    ordered_json j;
    j["c_star"] = ctx.c_star;
    j["regime"] = to_json(ctx.pb);
    j["monotone"] = rep.monotone;
    int bad = 0;
    std::vector<std::size_t> ok;
    for (std::size_t k = 0; k < rep.points.size(); ++k) {
        if (rep.points[k].converged) ok.push_back(k);
        else ++bad;
    }
    j["converged_points"] = ok.size();
    if (ok.size() >= 3) {
        // Quadratic through the three largest converged c, evaluated at c*.
        const auto& a = rep.points[ok[ok.size() - 3]];
        const auto& b = rep.points[ok[ok.size() - 2]];
        const auto& d = rep.points[ok[ok.size() - 1]];
        const double x = ctx.c_star;
        j["lambda_tilde1_extrapolate"] = a.lambda * (x - b.c) * (x - d.c) / ((a.c - b.c) * (a.c - d.c)) +
                                         b.lambda * (x - a.c) * (x - d.c) / ((b.c - a.c) * (b.c - d.c)) +
                                         d.lambda * (x - a.c) * (x - b.c) / ((d.c - a.c) * (d.c - b.c));
    }
    if (rc.envelope) j["max_envelope_err"] = rep.max_envelope_err;
    emit(rc, j, "_curve.json");
    if (bad > 0) {
        std::cerr << "curve: " << bad << " point(s) did not converge\n";
        return kNoConvergence;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig rc;
    CLI::App app{"Radial solver for the Schrodinger-Poisson-Slater equation with critical exponent"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "flat 'key = value' file; keys are long flag names");
    app.require_subcommand(1);

    app.add_option("--N", rc.N, "dimension (>= 3)");
    app.add_option("--alpha", rc.alpha, "Riesz order in (0, N)");
    app.add_option("--p", rc.p, "Coulomb power in (1, (N+alpha)/(N-2))");
    app.add_option("--r", rc.r, "exponent in [q, 2*), or 'q'");
    app.add_option("--c", rc.c, "energy level");
    app.add_option("--c-frac", rc.c_frac, "energy level as a fraction of c*");
    app.add_option("--gridM", rc.gridM, "grid nodes");
    app.add_option("--Rmax", rc.Rmax, "truncation radius");
    app.add_option("--gamma", rc.gamma, "grid grading exponent");
    app.add_option("--init", rc.init, "gaussian | talenti[:eps] | file:<csv>");
    app.add_option("--tol", rc.tol, "relative gradient tolerance");
    app.add_option("--max-iters", rc.max_iters, "iteration limit");
    app.add_flag("--no-precondition", rc.no_precondition, "plain L2 gradients");
    app.add_option("--S", rc.S, "Sobolev constant used for c*: extrapolated | exact");
    app.add_option("--jobs", rc.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--kernel-cache", rc.kernel_cache, "kernel cache file");
    app.add_option("--out", rc.out, "output prefix");
    app.add_flag("--quiet", rc.quiet, "do not echo the effective configuration");
    app.add_option("--t-min", rc.t_min, "fiber: smallest t");
    app.add_option("--t-max", rc.t_max, "fiber: largest t");
    app.add_option("--n-t", rc.n_t, "fiber: samples")->check(CLI::Range(2, 1000000));
    app.add_option("--rho", rc.rho, "talenti: cutoff radius");
    app.add_option("--eps-max", rc.eps_max, "talenti: largest eps / rho");
    app.add_option("--eps-min", rc.eps_min, "talenti: smallest eps / rho");
    app.add_option("--n-eps", rc.n_eps, "talenti: number of eps values")->check(CLI::Range(5, 10000));
    app.add_option("--ells", rc.ells, "talenti: exponents for the L^l norms");
    app.add_option("--talentiM", rc.talentiM, "talenti: grid nodes");
    app.add_option("--n-points", rc.n_points, "curve: number of c values")->check(CLI::Range(2, 10000));
    app.add_option("--c-min-frac", rc.c_min_frac, "curve: smallest c / c*");
    app.add_option("--c-max-frac", rc.c_max_frac, "curve: largest c / c*");
    app.add_flag("--cold", rc.cold, "curve: cold starts (parallel over --jobs)");
    app.add_flag("--envelope", rc.envelope, "curve: check dlambda/dc against -1/F by paired solves");

    const std::pair<const char*, const char*> subs[] = {
        {"exponents", "derived exponents and regime"},
        {"sobolev", "Sobolev constant and c*"},
        {"fiber", "fiber map and t_c for an initial profile"},
        {"solve", "minimize Lambda_c on N_c"},
        {"eigen", "first scaled eigenvalue (r = q)"},
        {"talenti", "Talenti sweep and asymptotic slopes"},
        {"curve", "trace c -> lambda_{c,1}"},
    };
    for (const auto& [name, help] : subs) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }
    rc.subcommand = app.get_subcommands().front()->get_name();

    try {
        const auto eff = effective(rc);
        if (!rc.quiet) std::cout << eff.dump(2) << '\n';
        if (!rc.out.empty()) {
            const std::filesystem::path prefix(rc.out);
            if (prefix.has_parent_path()) std::filesystem::create_directories(prefix.parent_path());
            write_cfg(out_path(rc, ".cfg"), eff);
        }
        if (rc.subcommand == "exponents") return cmd_exponents(rc);
        if (rc.subcommand == "sobolev") return cmd_sobolev(rc);
        if (rc.subcommand == "fiber") return cmd_fiber(rc);
        if (rc.subcommand == "solve") return cmd_solve(rc);
        if (rc.subcommand == "eigen") return cmd_eigen(rc);
        if (rc.subcommand == "talenti") return cmd_talenti(rc);
        if (rc.subcommand == "curve") return cmd_curve(rc);
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const InvalidParameter& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kInvalid;
    } catch (const NoRootError& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    return kInvalid;
}
