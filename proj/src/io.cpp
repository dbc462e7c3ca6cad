#include "sps/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

// pchip.hpp in Boost 1.74 calls isnan unqualified.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

namespace sps {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    return os;
}

void write_meta(std::ostream& os, const Metadata& meta) {
    for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
}

}  // namespace

void write_radial_csv(const std::filesystem::path& path, const RadialFunction& u, const Metadata& meta) {
    auto os = open_out(path);
    write_meta(os, meta);
    os << "r,u\n";
    for (std::size_t i = 0; i < u.size(); ++i)
        os << format_double(u.grid->nodes[i]) << ',' << format_double(u.values[i]) << '\n';
    if (!os) throw IoError("failed writing " + path.string());
}

RadialTable read_radial_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path.string());
    RadialTable t;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                auto key = line.substr(1, eq - 1);
                key.erase(0, key.find_first_not_of(' '));
                t.meta[key] = line.substr(eq + 1);
            }
            continue;
        }
        if (!header) {
            if (line.rfind("r,u", 0) != 0) throw IoError(path.string() + ": expected header r,u");
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError(path.string() + ": malformed row '" + line + "'");
        try {
            t.r.push_back(std::stod(line.substr(0, comma)));
            t.u.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw IoError(path.string() + ": malformed row '" + line + "'");
        }
    }
    if (t.r.size() < 2) throw IoError(path.string() + ": fewer than two rows");
    for (std::size_t i = 1; i < t.r.size(); ++i)
        if (!(t.r[i] > t.r[i - 1])) throw IoError(path.string() + ": radii not increasing");
    return t;
}

RadialFunction resample_onto(const GridPtr& grid, const RadialTable& table) {
    std::vector<double> x = table.r, y = table.u;
    const double x0 = x.front(), x1 = x.back(), y0 = y.front();
    boost::math::interpolators::pchip<std::vector<double>> spline(std::move(x), std::move(y));
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = grid->nodes[i];
        v[i] = r <= x0 ? y0 : (r >= x1 ? 0.0 : spline(r));
    }
    return from_values(grid, std::move(v));
}

Metadata grid_metadata(const RadialGrid& g) {
    return {{"N", std::to_string(g.N)},
            {"M", std::to_string(g.M)},
            {"R_max", format_double(g.R_max)},
            {"gamma", format_double(g.gamma)},
            {"r_min", format_double(g.r_min)}};
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, const Metadata& meta) {
    auto os = open_out(path);
    write_meta(os, meta);
    for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_double(row[k]);
        os << '\n';
    }
    if (!os) throw IoError("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    auto os = open_out(path);
    os << j.dump(2) << '\n';
    if (!os) throw IoError("failed writing " + path.string());
}

nlohmann::ordered_json to_json(const Problem& pb) {
    const auto reg = classify_regime(pb.params);
    nlohmann::ordered_json j;
    j["N"] = pb.params.N;
    j["alpha"] = pb.params.alpha;
    j["p"] = pb.params.p;
    j["r"] = pb.params.r;
    j["sigma"] = pb.exps.sigma;
    j["q"] = pb.exps.q;
    j["two_star"] = pb.exps.two_star;
    j["s_q"] = pb.exps.s_q;
    j["s_r"] = pb.exps.s_r;
    j["s_2star"] = pb.exps.s_2star;
    j["A_alpha"] = pb.exps.A_alpha;
    j["regime_case"] = static_cast<int>(reg.case_id);
    j["lambda_tilde1_zero"] = reg.lambda_tilde1_zero;
    return j;
}

nlohmann::ordered_json to_json(const FunctionalRecord& rec) {
    return {{"I", rec.I},
            {"F", rec.F},
            {"G", rec.G},
            {"dirichlet", rec.dirichlet},
            {"coulomb", rec.coulomb},
            {"e_norm", rec.e_norm}};
}

nlohmann::ordered_json to_json(const FiberResult& fr) {
    return {{"t_c", fr.t_c}, {"phi_at_tc", fr.phi_at_tc}, {"residual", fr.residual}, {"newton_iters", fr.newton_iters}};
}

nlohmann::ordered_json to_json(const CriticalConstants& cc) {
    return {{"S", cc.S},
            {"c_star", cc.c_star},
            {"t_0", cc.t_0},
            {"z_at_t0", cc.z_at_t0},
            {"t_0_formula_check", cc.t_0_formula_check}};
}

}  // namespace sps
