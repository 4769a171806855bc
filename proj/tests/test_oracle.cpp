#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace netcontest;
using Catch::Approx;

TEST_CASE("single-battlefield best response matches the closed form") {
    const auto g = make_game(1.0, 1.0, 1.0, Vec::Ones(1));
    const double cap = g.values.sum() / g.cost1;

    Vec opp(1);
    opp << 0.16;  // best response is sqrt(q) - q = 0.24
    const Vec br = best_response(g, 1, opp, 0.0, cap);
    CHECK(br[0] == Approx(0.24).margin(1e-8));

    opp << 2.0;  // sqrt(q) - q < 0, so the box clips to zero
    const Vec clipped = best_response(g, 1, opp, 0.0, cap);
    CHECK(clipped[0] == Approx(0.0).margin(1e-9));
}

TEST_CASE("best response against the star-line equilibrium keeps the hub") {
    const auto pc = case_star_line();
    const double cap = pc.game.values.sum() / pc.game.cost1;
    const Vec br = best_response(pc.game, 1, *pc.e2, 0.0, cap);
    CHECK(br[0] == Approx(41.0 / 36.0).margin(1e-6));
    for (int k = 1; k < 5; ++k) CHECK(br[k] == Approx(0.0).margin(1e-6));
}

TEST_CASE("best response against a silent opponent sits on the lower box bound") {
    const auto g = make_game(1.0, 1.0, 1.0, Vec::Ones(3));
    const double eps = 1e-6;
    const Vec br = best_response(g, 2, Vec::Zero(3), eps, 10.0);
    for (int k = 0; k < 3; ++k) CHECK(br[k] == Approx(eps).margin(1e-9));
}

TEST_CASE("best-response dynamics converge on benchmark games") {
    SECTION("symmetric game") {
        const auto g = make_game(1.0, 1.0, 1.0, Vec::Ones(2));
        const auto res = br_dynamics(g);
        REQUIRE(res.converged);
        CHECK_FALSE(res.cap_binding);
        for (int k = 0; k < 2; ++k) {
            CHECK(res.profile.e1[k] == Approx(0.25).margin(1e-6));
            CHECK(res.profile.e2[k] == Approx(0.25).margin(1e-6));
        }
    }

    SECTION("star versus cycle totals") {
        const int m = 4;
        const auto res = br_dynamics(star_cycle_game(m));
        REQUIRE(res.converged);
        const double expected = 3.0 * m * m / ((m + 3.0) * (m + 3.0));
        CHECK(res.profile.e1.sum() == Approx(expected).margin(1e-4));
        CHECK(res.profile.e2.sum() == Approx(expected).margin(1e-4));
    }

    SECTION("two-node game above the first threshold abandons battlefield 2") {
        const auto res = br_dynamics(two_node_game(1.0, 2.0, 2.0));
        REQUIRE(res.converged);
        CHECK(res.profile.e2[1] <= 1e-4);
    }
}

TEST_CASE("accepted best responses never lower the responder's payoff") {
    std::mt19937 rng(2718);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = nctest::random_game(rng);
        const auto e = nctest::random_profile(rng, g.size());
        for (int player : {1, 2}) {
            const double cap = g.values.sum() / g.cost(player);
            const Vec br = best_response(g, player, e.of(3 - player), 0.0, cap);
            auto improved = e;
            improved.of(player) = br;
            const auto before = payoffs(g, e);
            const auto after = payoffs(g, improved);
            const double b = player == 1 ? before.first : before.second;
            const double a = player == 1 ? after.first : after.second;
            CHECK(a >= b - 1e-9);
        }
    }
}

TEST_CASE("cross validation agrees with the certified solver") {
    SECTION("star versus line") {
        const auto g = star_line_game();
        const auto rep = solve(g);
        const auto agree = cross_validate(g, rep, 1e-4);
        CHECK(agree.verdict == Verdict::Agree);
        CHECK(agree.total_diff <= 1e-4);
        CHECK(agree.contested_y_diff <= 1e-4);
        CHECK(std::abs(agree.oracle.profile.e1.sum() - 41.0 / 36.0) <= 1e-4);
    }

    SECTION("multiple equilibria: aggregates agree even if efforts differ") {
        const auto g = multiple_eq_game();
        const auto rep = solve(g);
        const auto agree = cross_validate(g, rep, 1e-4);
        CHECK(agree.verdict == Verdict::Agree);
    }

    SECTION("random games") {
        std::mt19937 rng(1009);
        int checked = 0;
        for (int trial = 0; trial < 10 && checked < 6; ++trial) {
            nctest::RandomGameOptions opt;
            opt.min_m = 2;
            opt.max_m = 4;
            const auto g = nctest::random_game(rng, opt);
            const auto rep = solve(g);
            const auto agree = cross_validate(g, rep, 1e-4);
            CHECK(agree.verdict != Verdict::Disagree);
            if (agree.verdict == Verdict::Agree) ++checked;
        }
        CHECK(checked >= 6);
    }
}

TEST_CASE("the effort cap never binds along the dynamics") {
    std::mt19937 rng(54321);
    for (int trial = 0; trial < 8; ++trial) {
        nctest::RandomGameOptions opt;
        opt.max_m = 4;
        const auto g = nctest::random_game(rng, opt);
        const auto res = br_dynamics(g);
        CHECK_FALSE(res.cap_binding);
        CHECK(res.profile.e1.maxCoeff() < g.values.sum() / g.cost1);
        CHECK(res.profile.e2.maxCoeff() < g.values.sum() / g.cost2);
    }
}

TEST_CASE("dynamics trace records epsilon rounds and totals") {
    const auto res = br_dynamics(make_game(1.0, 1.0, 1.0, Vec::Ones(2)));
    REQUIRE_FALSE(res.trace.empty());
    CHECK(res.trace.front().epsilon > res.trace.back().epsilon);
    CHECK(res.trace.back().total1 == Approx(0.5).margin(1e-4));
}
