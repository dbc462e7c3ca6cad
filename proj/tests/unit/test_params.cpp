#include <doctest.h>

#include <cmath>
#include <random>

#include "sps/params.hpp"

using namespace sps;

namespace {

ProblemParams random_params(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dn(3, 8);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    ProblemParams pp;
    pp.N = dn(rng);
    pp.alpha = u(rng) * pp.N;
    const double p_max = (pp.N + pp.alpha) / (pp.N - 2.0);
    pp.p = 1.0 + u(rng) * (p_max - 1.0);
    const double q = 2.0 * (2.0 * pp.p + pp.alpha) / (2.0 + pp.alpha);
    const double two_star = 2.0 * pp.N / (pp.N - 2.0);
    pp.r = q + u(rng) * (two_star - q);
    return pp;
}

}  // namespace

TEST_CASE("exponents for N=3 alpha=2 p=2") {
    ProblemParams pp{3, 2.0, 2.0, 3.0, {}};
    const auto e = derive_exponents(pp);
    CHECK(e.sigma == doctest::Approx(2.0));
    CHECK(e.q == doctest::Approx(3.0));
    CHECK(e.two_star == doctest::Approx(6.0));
    CHECK(e.s_q == doctest::Approx(3.0));
    CHECK(e.s_r == doctest::Approx(3.0));
    CHECK(e.s_2star == doctest::Approx(9.0));
    CHECK(e.A_alpha == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-14));
}

TEST_CASE("exponent identities on random parameters") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 1000; ++k) {
        const auto pp = random_params(rng);
        const auto e = derive_exponents(pp);
        CHECK(std::abs(e.s_q - (e.sigma * e.q - pp.N)) < 1e-12 * std::max(1.0, std::abs(e.s_q)));
        CHECK(std::abs(e.s_2star - (e.sigma * e.two_star - pp.N)) < 1e-12 * std::max(1.0, e.s_2star));
        // Ordering s_q <= s_r < s_{2*} follows from q <= r < 2*.
        CHECK(e.s_q <= e.s_r + 1e-12);
        CHECK(e.s_r < e.s_2star);
        CHECK(e.s_q > 0);
        const auto info = classify_regime(pp);
        CHECK(info.matching_branches <= 1);
        CHECK(info.lambda_tilde1_zero == (info.case_id != RegimeCase::none));
    }
}

TEST_CASE("Riesz constant") {
    CHECK(riesz_constant(3, 2.0) == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-14));
    // N=4, alpha=2: Γ(1)/(Γ(1) π² 4).
    CHECK(riesz_constant(4, 2.0) == doctest::Approx(1.0 / (4.0 * M_PI * M_PI)).epsilon(1e-14));
    CHECK_THROWS_AS(riesz_constant(3, 3.0), std::domain_error);
}

TEST_CASE("hypothesis violations") {
    CHECK_THROWS_AS(validate({2, 1.0, 2.0, 3.0, {}}), InvalidParameter);
    CHECK_THROWS_AS(validate({3, 3.0, 2.0, 3.0, {}}), InvalidParameter);
    CHECK_THROWS_AS(validate({3, 2.0, 1.0, 3.0, {}}), InvalidParameter);
    CHECK_THROWS_AS(validate({3, 2.0, 5.0, 3.0, {}}), InvalidParameter);
    CHECK_THROWS_AS(validate({3, 2.0, 2.0, 2.9, {}}), InvalidParameter);
    CHECK_THROWS_AS(validate({3, 2.0, 2.0, 6.0, {}}), InvalidParameter);
    CHECK_THROWS_AS(validate({3, 2.0, 2.0, NAN, {}}), InvalidParameter);
    try {
        // alpha = 0.5, p = 1.5: q = 2(3.5)/2.5 = 2.8.
        validate({3, 0.5, 1.5, 2.8, {}});
        FAIL("expected InvalidParameter");
    } catch (const InvalidParameter& e) {
        CHECK(std::string(e.what()).find("(H1)") != std::string::npos);
        CHECK(std::string(e.what()).find("alpha>1") != std::string::npos);
    }
    CHECK_NOTHROW(validate({3, 2.0, 2.0, 3.0, {}}));
}

TEST_CASE("regime classification") {
    // 2Np/(N+alpha) = 2.4 < 3 = N/(N-2): case 5 needs r > 4.
    CHECK(classify_regime({3, 2.0, 2.0, 4.5, {}}).case_id == RegimeCase::case5);
    CHECK(classify_regime({3, 2.0, 2.0, 4.0, {}}).case_id == RegimeCase::none);
    CHECK_FALSE(classify_regime({3, 2.0, 2.0, 3.5, {}}).lambda_tilde1_zero);
    // 2Np/(N+alpha) = 6·2.5/5 = 3: the equality branch with 4+alpha-N = 3 > 0.
    CHECK(classify_regime({3, 2.0, 2.5, 4.5, {}}).case_id == RegimeCase::case3);
    // Above the threshold: p = 2.8, k1 = 5 - 3.8 > 0, case 1 when r > 4.
    CHECK(classify_regime({3, 2.0, 2.8, 4.5, {}}).case_id == RegimeCase::case1);
}

TEST_CASE("Problem::make snaps r to q") {
    const auto pb = Problem::make({3, 2.0, 2.0, 3.0 + 1e-13, {}});
    CHECK(pb.r_equals_q);
    CHECK(pb.params.r == pb.exps.q);
    CHECK(pb.exps.s_r == pb.exps.s_q);
    CHECK_FALSE(Problem::make({3, 2.0, 2.0, 4.0, {}}).r_equals_q);
}
