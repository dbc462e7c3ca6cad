#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args, const std::string& log = "cli_log.txt") {
    const std::string cmd = std::string(SPS_CLI_PATH) + " " + args + " > " + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("version") {
    CHECK(run("--version") == 0);
    CHECK(slurp("cli_log.txt").find("sps 0.1.0") != std::string::npos);
}

TEST_CASE("exponents subcommand") {
    REQUIRE(run("exponents --N 3 --alpha 2 --p 2 --r 3 --quiet --out cli_exp") == 0);
    const auto j = nlohmann::json::parse(slurp("cli_exp.json"));
    CHECK(j["s_q"].get<double>() == doctest::Approx(3.0));
    CHECK(j["s_r"].get<double>() == doctest::Approx(3.0));
    CHECK(j["s_2star"].get<double>() == doctest::Approx(9.0));
    CHECK(j.contains("regime_case"));
}

TEST_CASE("invalid input exits 1") {
    CHECK(run("solve --c 0 --gridM 64 --quiet") == 1);
    CHECK(slurp("cli_log.txt").find("N_c nonempty iff c>0") != std::string::npos);
    CHECK(run("curve --r 3 --alpha 0.5 --quiet") == 1);
    CHECK(slurp("cli_log.txt").find("(H1)") != std::string::npos);
    CHECK(run("solve --p 9 --quiet") == 1);
    CHECK(run("solve --r banana --quiet") == 1);
    CHECK(run("--N 3") == 1);
    CHECK(run("solve --no-such-flag") == 1);
    CHECK(run("solve --init nonsense --gridM 64 --quiet") == 1);
}

TEST_CASE("non-convergence exits 2") {
    CHECK(run("solve --r 4 --gridM 256 --max-iters 2 --S exact --quiet") == 2);
}

TEST_CASE("I/O failure exits 3") {
    CHECK(run("exponents --quiet --out /proc/sps_no_such/x") == 3);
    CHECK(run("solve --r 4 --gridM 64 --S exact --init file:/nonexistent.csv --quiet") == 3);
}

TEST_CASE("rerun from the written config is bit-identical") {
    fs::remove_all("cli_rt");
    REQUIRE(run("solve --r 4 --c-frac 0.5 --gridM 384 --S exact --quiet --out cli_rt/a") == 0);
    REQUIRE(fs::exists("cli_rt/a.cfg"));
    REQUIRE(run("solve --config cli_rt/a.cfg --out cli_rt/b") == 0);
    CHECK(slurp("cli_rt/a_u.csv") == slurp("cli_rt/b_u.csv"));
    CHECK(slurp("cli_rt/a_result.json") == slurp("cli_rt/b_result.json"));
    const auto j = nlohmann::json::parse(slurp("cli_rt/a_result.json"));
    CHECK(j["converged"].get<bool>());
    // The solution file is a valid warm start.
    CHECK(run("solve --config cli_rt/a.cfg --init file:cli_rt/a_u.csv --out cli_rt/c --quiet") == 0);
    const auto k = nlohmann::json::parse(slurp("cli_rt/c_result.json"));
    CHECK(k["lambda"].get<double>() == doctest::Approx(j["lambda"].get<double>()).epsilon(1e-6));
}

TEST_CASE("fiber and talenti outputs") {
    REQUIRE(run("fiber --r 4 --gridM 256 --S exact --n-t 50 --quiet --out cli_f") == 0);
    const auto csv = slurp("cli_f_fiber.csv");
    CHECK(csv.find("t,phi_c_u_t") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp("cli_f_fiber.json"));
    CHECK(j["t_c"].get<double>() > 0);
    REQUIRE(run("talenti --r 4 --talentiM 512 --n-eps 8 --eps-min 1e-3 --S exact --quiet --out cli_t") == 0);
    CHECK(slurp("cli_t_talenti.csv").find("eps,grad_sq,lp_2.5,lp_4,coulomb,t_c,Lambda_c") != std::string::npos);
    const auto t = nlohmann::json::parse(slurp("cli_t_talenti.json"));
    CHECK(t["slopes"].size() == 4);
}
