#pragma once

// When players pick their own spillovers (costless, capped at 1), every
// equilibrium collapses the m battlefields into one big contest over the sum
// of the values: each player carries an out-star of weight 1 and every
// battlefield sees the player's entire budget. aggregate_contest gives the
// closed forms of that one-shot contest; verify_endogenous checks a proposed
// profile against the characterization.

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "netcontest/oracle.hpp"
#include "netcontest/verification.hpp"

namespace netcontest {

struct AggregateContest {
    double effort1 = 0, effort2 = 0;
    double p1 = 0, p2 = 0;

    double effort(int player) const { return player == 1 ? effort1 : effort2; }
};

inline AggregateContest aggregate_contest(double c1, double c2, double gamma, double V) {
    if (!(c1 > 0.0) || !(c2 > 0.0))
        throw std::invalid_argument("aggregate_contest: costs must be positive");
    if (!(gamma > 0.0) || gamma > 1.0)
        throw std::invalid_argument("aggregate_contest: gamma must be in (0, 1]");
    if (V < 0.0) throw std::invalid_argument("aggregate_contest: value must be nonnegative");
    double a1 = std::pow(c1, gamma), a2 = std::pow(c2, gamma);
    AggregateContest agg;
    agg.p1 = a2 / (a1 + a2);
    agg.p2 = a1 / (a1 + a2);
    agg.effort1 = (gamma / c1) * agg.p1 * agg.p2 * V;
    agg.effort2 = (gamma / c2) * agg.p1 * agg.p2 * V;
    return agg;
}

inline double endogenous_payoff(double c1, double c2, double gamma, double V, int player) {
    double a1 = std::pow(c1, gamma), a2 = std::pow(c2, gamma);
    double opp = player == 1 ? a2 : a1;
    double s = a1 + a2;
    return (opp / s - gamma * a1 * a2 / (s * s)) * V;
}

struct EndogenousProfile {
    Vec e1, e2;
    Mat rho1, rho2;
    int hub1 = 0, hub2 = 0;  // battlefield indices carrying the out-stars

    const Vec& effort(int player) const { return player == 1 ? e1 : e2; }
    const Mat& rho(int player) const { return player == 1 ? rho1 : rho2; }
    int hub(int player) const { return player == 1 ? hub1 : hub2; }
};

inline EndogenousProfile endogenous_equilibrium(const Vec& values, double c1, double c2,
                                                double gamma, int hub1, int hub2) {
    int m = static_cast<int>(values.size());
    if (m < 1) throw std::invalid_argument("endogenous_equilibrium: no battlefields");
    if (hub1 < 0 || hub1 >= m || hub2 < 0 || hub2 >= m)
        throw std::invalid_argument("endogenous_equilibrium: hub out of range");
    AggregateContest agg = aggregate_contest(c1, c2, gamma, values.sum());

    EndogenousProfile prof;
    prof.hub1 = hub1;
    prof.hub2 = hub2;
    prof.rho1 = Mat::Zero(m, m);
    prof.rho2 = Mat::Zero(m, m);
    for (int l = 0; l < m; ++l) {
        if (l != hub1) prof.rho1(hub1, l) = 1.0;
        if (l != hub2) prof.rho2(hub2, l) = 1.0;
    }
    prof.e1 = Vec::Zero(m);
    prof.e2 = Vec::Zero(m);
    prof.e1[hub1] = agg.effort1;
    prof.e2[hub2] = agg.effort2;
    return prof;
}

// Certify a proposed profile of the efforts-and-links game: universal access,
// the aggregate closed forms, and no profitable one-sided deviation in either
// efforts (via the oracle best response) or single link weights / single
// effort coordinates (on a grid).
inline VerificationReport verify_endogenous(const EndogenousProfile& prof, const Vec& values,
                                            double c1, double c2, double gamma) {
    int m = static_cast<int>(values.size());
    double V = values.sum();
    AggregateContest agg = aggregate_contest(c1, c2, gamma, V);
    ContestGame g = make_game(gamma, c1, c2, values, prof.rho1, prof.rho2);
    EffortProfile efforts{prof.e1, prof.e2};

    VerificationReport out;

    EffectiveEfforts y = effective_efforts(g, efforts);
    double worst_access = 0.0;
    for (int i : {1, 2}) {
        double total = efforts.of(i).sum();
        for (int k = 0; k < m; ++k)
            worst_access = std::max(worst_access, std::abs(y.of(i)[k] - total));
    }
    {
        std::ostringstream det;
        det << "max |y - total| = " << worst_access;
        out.add("universal access", worst_access <= 1e-12, det.str());
    }

    double agg_err = std::max(std::abs(prof.e1.sum() - agg.effort1),
                              std::abs(prof.e2.sum() - agg.effort2));
    {
        std::ostringstream det;
        det << "max total mismatch = " << agg_err;
        out.add("totals match the aggregate contest", agg_err <= 1e-12, det.str());
    }

    auto [pay1, pay2] = payoffs(g, efforts);
    double base_pay[3] = {0.0, pay1, pay2};

    double worst_br_gap = 0.0;
    for (int i : {1, 2}) {
        double cap = values.sum() / g.cost(i);
        Vec br = best_response(g, i, efforts.of(3 - i), 0.0, cap);
        EffortProfile dev = efforts;
        (i == 1 ? dev.e1 : dev.e2) = br;
        auto [d1, d2] = payoffs(g, dev);
        worst_br_gap = std::max(worst_br_gap, std::abs((i == 1 ? d1 : d2) - base_pay[i]));
    }
    {
        std::ostringstream det;
        det << "max |best-response payoff - profile payoff| = " << worst_br_gap;
        out.add("no profitable effort deviation", worst_br_gap <= 1e-6, det.str());
    }

    // grid deviations: single link weights and single effort coordinates;
    // anything the profile allows to move must be weakly unprofitable
    bool star_at_cap = true;
    for (int i : {1, 2})
        for (int l = 0; l < m; ++l)
            if (l != prof.hub(i) && prof.rho(i)(prof.hub(i), l) != 1.0) star_at_cap = false;

    double worst_gain = 0.0;
    for (int i : {1, 2}) {
        for (double step : {0.1, 0.01}) {
            for (int k = 0; k < m; ++k) {
                for (int l = 0; l < m; ++l) {
                    if (k == l) continue;
                    for (double dir : {1.0, -1.0}) {
                        double w = prof.rho(i)(k, l) + dir * step;
                        if (w < 0.0 || w > 1.0) continue;
                        ContestGame gd = g;
                        gd.rho(i)(k, l) = w;
                        auto [q1, q2] = payoffs(gd, efforts);
                        worst_gain = std::max(worst_gain, (i == 1 ? q1 : q2) - base_pay[i]);
                    }
                }
                for (double dir : {1.0, -1.0}) {
                    double e = efforts.of(i)[k] + dir * step;
                    if (e < 0.0) continue;
                    EffortProfile dev = efforts;
                    (i == 1 ? dev.e1 : dev.e2)[k] = e;
                    auto [q1, q2] = payoffs(g, dev);
                    worst_gain = std::max(worst_gain, (i == 1 ? q1 : q2) - base_pay[i]);
                }
            }
        }
    }
    {
        std::ostringstream det;
        det << "out-star at cap: " << (star_at_cap ? "yes" : "no") << ", best grid gain = "
            << worst_gain;
        out.add("no profitable link deviation", star_at_cap && worst_gain <= 1e-9, det.str());
    }

    double pay_err = std::max(std::abs(pay1 - endogenous_payoff(c1, c2, gamma, V, 1)),
                              std::abs(pay2 - endogenous_payoff(c1, c2, gamma, V, 2)));
    {
        std::ostringstream det;
        det << "max payoff mismatch = " << pay_err;
        out.add("payoffs match the closed form", pay_err <= 1e-12, det.str());
    }
    return out;
}

}  // namespace netcontest
