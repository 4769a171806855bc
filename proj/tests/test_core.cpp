#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace netcontest;
using Catch::Approx;

namespace {

bool any_mentions(const std::vector<std::string>& msgs, const std::string& needle) {
    for (const auto& s : msgs)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("validation rejects nonzero spillover diagonal") {
    Mat rho1 = Mat::Zero(2, 2);
    rho1(0, 0) = 0.5;
    const auto g = make_game(1.0, 1.0, 1.0, Vec::Ones(2), rho1, Mat::Zero(2, 2));
    const auto rep = validate_game(g);
    REQUIRE_FALSE(rep.ok());
    CHECK(any_mentions(rep.violations, "diagonal"));
}

TEST_CASE("validation rejects bad scalars and negative weights") {
    auto base = make_game(1.0, 1.0, 2.0, Vec::Ones(2));

    auto g = base;
    g.gamma = 0.0;
    CHECK_FALSE(validate_game(g).ok());
    g.gamma = 1.5;
    CHECK_FALSE(validate_game(g).ok());

    g = base;
    g.cost2 = 0.0;
    CHECK_FALSE(validate_game(g).ok());

    g = base;
    g.values[1] = -1.0;
    CHECK_FALSE(validate_game(g).ok());

    g = base;
    g.rho1(0, 1) = -0.2;
    const auto rep = validate_game(g);
    REQUIRE_FALSE(rep.ok());
    CHECK(any_mentions(rep.violations, "rho1"));
}

TEST_CASE("validation accepts the three-battlefield asymmetric network") {
    const auto g = multiple_eq_game();
    const auto rep = validate_game(g);
    CHECK(rep.ok());
    CHECK(rep.submatrix_scan_exhaustive);
    CHECK(rep.warnings.empty());
}

TEST_CASE("validation warns about singular cycle of length divisible by three") {
    const auto g = star_cycle_game(6);
    const auto rep = validate_game(g);
    CHECK(rep.ok());  // singularity is a warning, not a violation
    REQUIRE_FALSE(rep.warnings.empty());
    CHECK(any_mentions(rep.warnings, "singular"));
}

TEST_CASE("effective efforts add inbound spillovers only") {
    const double lambda = 0.7, a = 1.3, b = 0.4;
    const auto g = two_node_game(1.0, 2.0, lambda);
    EffortProfile e{Vec(2), Vec(2)};
    e.e1 << 0.2, 0.9;
    e.e2 << a, b;

    const auto y = effective_efforts(g, e);
    CHECK(y.y1[0] == Approx(0.2).margin(1e-15));
    CHECK(y.y1[1] == Approx(0.9).margin(1e-15));
    CHECK(y.y2[0] == Approx(a).margin(1e-15));
    CHECK(y.y2[1] == Approx(lambda * a + b).margin(1e-15));
}

TEST_CASE("out-star hub with unit weights broadcasts hub effort everywhere") {
    const int m = 4;
    Mat rho1 = Mat::Zero(m, m);
    for (int l = 1; l < m; ++l) rho1(0, l) = 1.0;
    const auto g = make_game(1.0, 1.0, 1.0, Vec::Ones(m), rho1, Mat::Zero(m, m));

    const double E = 0.8;
    EffortProfile e{Vec::Zero(m), Vec::Zero(m)};
    e.e1[0] = E;

    const auto y = effective_efforts(g, e);
    for (int k = 0; k < m; ++k) CHECK(y.y1[k] == Approx(E).margin(1e-15));
}

TEST_CASE("win probabilities: symmetry, shutout, and closed-form star-cycle point") {
    const auto g_sym = make_game(0.7, 1.0, 1.0, Vec::Ones(3));
    EffortProfile e{Vec::Constant(3, 0.4), Vec::Constant(3, 0.4)};
    const auto p_sym = win_probabilities(g_sym, e);
    for (int k = 0; k < 3; ++k) {
        CHECK(p_sym.p1[k] == Approx(0.5).margin(1e-15));
        CHECK(p_sym.p2[k] == Approx(0.5).margin(1e-15));
    }

    e.e2.setZero();
    const auto p_shut = win_probabilities(g_sym, e);
    for (int k = 0; k < 3; ++k) CHECK(p_shut.p1[k] == Approx(1.0).margin(1e-15));
    CHECK(p_shut.ties.empty());

    const auto pc = case_star_cycle(7);
    EffortProfile eq{*pc.e1, *pc.e2};
    const auto p = win_probabilities(pc.game, eq);
    for (int k = 0; k < 7; ++k) CHECK(p.p1[k] == Approx(0.7).margin(1e-12));
}

TEST_CASE("zero-zero battlefield splits the prize or throws by policy") {
    const auto g = make_game(1.0, 1.0, 2.0, Vec{{1.0, 3.0}});
    EffortProfile e{Vec::Zero(2), Vec::Zero(2)};

    const auto p = win_probabilities(g, e, TiePolicy::SplitEvenly);
    REQUIRE(p.ties.size() == 2);
    CHECK(p.p1[0] == Approx(0.5));
    CHECK(p.p2[1] == Approx(0.5));

    const auto [pi1, pi2] = payoffs(g, e);
    CHECK(pi1 == Approx(2.0));  // half of the total prize mass, no cost
    CHECK(pi2 == Approx(2.0));

    CHECK_THROWS_AS(win_probabilities(g, e, TiePolicy::Error), std::domain_error);
}

TEST_CASE("payoffs reproduce the closed-form star-line and star-cycle values") {
    const auto line = case_star_line();
    const auto [l1, l2] = payoffs(line.game, EffortProfile{*line.e1, *line.e2});
    CHECK(l1 == Approx(73.0 / 36.0).margin(1e-12));
    CHECK(l2 == Approx(25.0 / 36.0).margin(1e-12));

    const auto cyc = case_star_cycle(7);
    const auto [c1, c2] = payoffs(cyc.game, EffortProfile{*cyc.e1, *cyc.e2});
    CHECK(c1 == Approx(343.0 / 100.0).margin(1e-12));
    CHECK(c2 == Approx(63.0 / 100.0).margin(1e-12));
}

TEST_CASE("win probabilities always sum to one off ties") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 60; ++trial) {
        const auto g = nctest::random_game(rng);
        const auto e = nctest::random_profile(rng, g.size());
        const auto p = win_probabilities(g, e);
        for (int k = 0; k < g.size(); ++k)
            CHECK(p.p1[k] + p.p2[k] == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("effective efforts are linear in the effort profile") {
    std::mt19937 rng(7);
    const auto g = nctest::random_game(rng);
    const int m = g.size();
    const auto e = nctest::random_profile(rng, m);
    const auto f = nctest::random_profile(rng, m);
    const double a = 0.6, b = 1.7;

    EffortProfile mix{a * e.e1 + b * f.e1, a * e.e2 + b * f.e2};
    const auto ye = effective_efforts(g, e);
    const auto yf = effective_efforts(g, f);
    const auto ym = effective_efforts(g, mix);
    for (int k = 0; k < m; ++k) {
        CHECK(ym.y1[k] == Approx(a * ye.y1[k] + b * yf.y1[k]).margin(1e-12));
        CHECK(ym.y2[k] == Approx(a * ye.y2[k] + b * yf.y2[k]).margin(1e-12));
    }
}

TEST_CASE("payoffs obey the constant-sum identity") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = nctest::random_game(rng);
        const auto e = nctest::random_profile(rng, g.size());
        const auto [pi1, pi2] = payoffs(g, e);
        const double expected = g.values.sum() - g.cost1 * e.e1.sum() - g.cost2 * e.e2.sum();
        CHECK(pi1 + pi2 == Approx(expected).margin(1e-10));
    }
}

TEST_CASE("analytic payoff gradient matches central finite differences") {
    std::mt19937 rng(424242);
    for (int trial = 0; trial < 25; ++trial) {
        const auto g = nctest::random_game(rng);
        const int m = g.size();
        const auto e = nctest::random_profile(rng, m, 0.2, 1.2);

        for (int player = 1; player <= 2; ++player) {
            const Vec grad = payoff_gradient(g, e, player);
            for (int k = 0; k < m; ++k) {
                const double h = 1e-6 * std::max(1.0, std::abs(e.of(player)[k]));
                auto shifted = e;
                shifted.of(player)[k] += h;
                const auto up = payoffs(g, shifted);
                shifted.of(player)[k] -= 2 * h;
                const auto dn = payoffs(g, shifted);
                const double fd = ((player == 1 ? up.first : up.second) -
                                   (player == 1 ? dn.first : dn.second)) /
                                  (2 * h);
                CHECK(grad[k] == Approx(fd).margin(1e-6 * std::max(1.0, std::abs(grad[k]))));
            }
        }
    }
}
