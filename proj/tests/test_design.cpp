#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace netcontest;
using Catch::Approx;

namespace {

bool check_passed(const VerificationReport& rep, const std::string& name) {
    for (const auto& c : rep.checks)
        if (c.name == name) return c.passed;
    return false;
}

}  // namespace

TEST_CASE("equal-value effort design: complete network for the costly player") {
    const auto d = design_max_effort_equal(1.0, 2.0, 3, 1.0);
    CHECK(d.target == DesignTarget::MaxEffortEqual);
    CHECK(d.rho1.isZero(0.0));
    CHECK(d.rho2(0, 1) == Approx(0.5));
    CHECK(d.rho2(2, 0) == Approx(0.5));
    CHECK(d.rho2.diagonal().isZero(0.0));
    CHECK(d.handicap == Approx(3.0));
    CHECK(d.handicap == Approx(handicap(d.rho1, d.rho2)));

    const auto g = make_game(1.0, 1.0, 2.0, Vec::Ones(3), d.rho1, d.rho2);
    const auto rep = solve(g);
    for (int k = 0; k < 3; ++k) {
        CHECK(rep.efforts.e1[k] == Approx(0.25).margin(1e-10));
        CHECK(rep.efforts.e2[k] == Approx(0.125).margin(1e-10));
        CHECK(rep.probabilities.p1[k] == Approx(0.5).margin(1e-10));
    }
    CHECK(rep.total1 == Approx(0.75).margin(1e-10));
    CHECK(rep.total2 == Approx(0.375).margin(1e-10));

    const auto ver = verify_design(d, 1.0, 2.0, 1.0, Vec::Ones(3));
    CHECK(ver.ok());
}

TEST_CASE("equal-value effort design verifies across battlefield counts") {
    for (int m : {2, 3, 5, 8}) {
        const auto d = design_max_effort_equal(1.0, 2.0, m, 1.0);
        CHECK(d.handicap == Approx(static_cast<double>(m)));
        const auto ver = verify_design(d, 1.0, 2.0, 1.0, Vec::Ones(m));
        INFO("m = " << m << "\n" << ver.to_string());
        CHECK(ver.ok());
    }
}

TEST_CASE("unit-weight continuum variant keeps the outcomes") {
    const int m = 3;
    const auto d = design_max_effort_equal(1.0, 2.0, m, 1.0, 1.0);
    CHECK(d.handicap == Approx(m * (1.0 + (m - 1))));
    CHECK_FALSE(d.note.empty());

    const auto g = make_game(1.0, 1.0, 2.0, Vec::Ones(m), d.rho1, d.rho2);
    const auto rep = solve(g);
    CHECK(rep.multiplicity);
    for (int k = 0; k < m; ++k) CHECK(rep.probabilities.p1[k] == Approx(0.5).margin(1e-8));
    CHECK(rep.total1 == Approx(m / 4.0).margin(1e-8));
    CHECK(rep.total2 == Approx(m / 8.0).margin(1e-8));
}

TEST_CASE("equal-value design rejects unequal values and inverted costs") {
    Vec v(3);
    v << 1.0, 1.0, 2.0;
    CHECK_THROWS_WITH(design_max_effort_equal(1.0, 2.0, v),
                      Catch::Matchers::ContainsSubstring("general"));
    CHECK_THROWS_AS(design_max_effort_equal(2.0, 1.0, 3, 1.0), std::invalid_argument);
}

TEST_CASE("welfare design drives the combined total below epsilon") {
    for (double eps : {0.1, 0.01}) {
        const auto d = design_max_welfare(1.0, 2.0, 4, 1.0, 1.0, eps);
        CHECK(d.target == DesignTarget::MaxWelfare);
        CHECK(d.rho1.isZero(0.0));

        const auto g = make_game(1.0, 1.0, 2.0, Vec::Ones(4), d.rho1, d.rho2);
        const auto rep = solve(g);
        const double combined = rep.total1 + rep.total2;
        INFO("epsilon " << eps << " lambda " << d.parameters.at("lambda_epsilon"));
        CHECK(combined < eps);
        CHECK(combined == Approx(d.parameters.at("predicted_combined_total")).margin(1e-8));

        const auto ver = verify_design(d, 1.0, 2.0, 1.0, Vec::Ones(4));
        CHECK(ver.ok());
    }
}

TEST_CASE("welfare design with a slack target needs no spillovers") {
    const auto d = design_max_welfare(1.0, 2.0, 4, 1.0, 1.0, 10.0);
    CHECK(d.parameters.at("lambda_epsilon") == Approx(0.0));
    CHECK_FALSE(d.note.empty());
}

TEST_CASE("general design pairs battlefields and picks the branch by cost ratio") {
    Vec v(2);
    v << 1.0, 2.0;

    SECTION("low cost ratio keeps a bounded window") {
        const auto d = design_max_effort_general(1.0, 1.2, v);
        CHECK(d.parameters.at("lambda1_1") == Approx(0.125));
        CHECK(d.parameters.at("lambda2_1") == Approx(1.2 * 0.125 + 0.2));
        CHECK(d.rho1(0, 1) == Approx(0.125));
        CHECK(d.rho1(1, 0) == Approx(0.125));
        CHECK(verify_design(d, 1.0, 1.2, 1.0, v).ok());
        CHECK_THROWS_AS(design_max_effort_general(1.0, 1.2, v, {0.3}), std::invalid_argument);
    }

    SECTION("high cost ratio uses the open window above the value ratio") {
        const auto d = design_max_effort_general(1.0, 2.0, v);
        CHECK(d.parameters.at("lambda1_1") == Approx(3.0));
        CHECK(d.parameters.at("lambda2_1") == Approx(7.0));
        CHECK(verify_design(d, 1.0, 2.0, 1.0, v).ok());
        CHECK_THROWS_AS(design_max_effort_general(1.0, 2.0, v, {1.5}), std::invalid_argument);
    }
}

TEST_CASE("general design triple shape at high cost ratio") {
    Vec v(3);
    v << 1.0, 1.0, 4.0;
    const auto d = design_max_effort_general(1.0, 2.0, v);
    const double lam = d.parameters.at("lambda1_1");
    CHECK(lam == Approx(1.5));
    CHECK(d.rho1(0, 1) == Approx(lam));
    CHECK(d.rho1(1, 0) == Approx(lam));
    CHECK(d.rho1(2, 0) == Approx(lam / 2));
    CHECK(d.rho1(2, 1) == Approx(lam / 2));
    CHECK(d.rho1(0, 2) == Approx(0.0));
    CHECK(d.rho1(1, 2) == Approx(0.0));
}

TEST_CASE("general design with five ascending values and equal costs verifies") {
    Vec v(5);
    v << 1.0, 1.0, 2.0, 3.0, 5.0;
    const auto d = design_max_effort_general(1.0, 1.0, v);
    // one pair of the two unit battlefields plus a triple of the rest
    CHECK(d.parameters.count("lambda1_1") == 1);
    CHECK(d.parameters.count("lambda1_2") == 1);
    const auto ver = verify_design(d, 1.0, 1.0, 1.0, v);
    INFO(ver.to_string());
    CHECK(ver.ok());

    const auto g = make_game(1.0, 1.0, 1.0, v, d.rho1, d.rho2);
    const auto rep = solve(g);
    CHECK(rep.total1 == Approx(v.sum() / 4.0).margin(1e-8));
    CHECK(rep.mu2.isApprox(rep.mu1, 1e-9));
}

TEST_CASE("general design triple at high cost ratio fails verification") {
    // the outward-spilling triple admits no interior equilibrium once the
    // admissible lambda2 exceeds the positivity window, so verification
    // must report the failure rather than mask it
    Vec v(5);
    v << 1.0, 1.0, 2.0, 3.0, 5.0;
    const auto d = design_max_effort_general(1.0, 2.0, v);
    const auto ver = verify_design(d, 1.0, 2.0, 1.0, v);
    CHECK_FALSE(ver.ok());
    CHECK_FALSE(check_passed(ver, "interior equilibrium"));
}

TEST_CASE("mu vectors of a verified design are proportional across players") {
    const auto d = design_max_effort_equal(1.0, 2.0, 4, 1.0, 0.25);
    const auto g = make_game(1.0, 1.0, 2.0, Vec::Ones(4), d.rho1, d.rho2);
    const auto rep = solve(g);
    for (int k = 0; k < 4; ++k)
        CHECK(rep.mu2[k] == Approx(0.5 * rep.mu1[k]).margin(1e-10));
}
