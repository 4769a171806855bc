#pragma once

// Derivative-free-of-theory check on the solver: best responses computed by
// projected gradient ascent, iterated on a shrinking lower-bound schedule.
// The epsilon floor keeps every effective effort positive, which makes the
// payoff smooth and the best response single-valued; shrinking it recovers
// the limit equilibrium of the unconstrained game.

#include <cmath>
#include <string>
#include <vector>

#include "netcontest/game.hpp"

namespace netcontest {

struct BrOptions {
    std::vector<double> epsilons = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    int max_rounds = 400;         // best-response alternations per epsilon
    double damping = 1.0;         // fraction of the best response blended in per round
    double movement_tol = 1e-8;   // profile movement that counts as converged
    double pg_tol = 1e-10;        // projected-gradient fixed-point tolerance
    int pg_max_iter = 50000;
};

struct BrTraceRow {
    double epsilon;
    int round;
    double movement;
    double total1, total2;
};

struct BrResult {
    EffortProfile profile;
    bool converged = false;
    bool cap_binding = false;  // the effort cap sum(v)/c_i should never bind
    std::vector<BrTraceRow> trace;
};

namespace detail {

inline double br_payoff(const ContestGame& g, int player, const Vec& own, const Vec& opp_y) {
    const Vec y = own + g.rho(player).transpose() * own;
    double total = 0.0;
    for (int k = 0; k < g.size(); ++k) {
        const double a = std::pow(y(k), g.gamma);
        const double b = std::pow(opp_y(k), g.gamma);
        total += (a + b > 0.0 ? a / (a + b) : 0.5) * g.values(k);
    }
    return total - g.cost(player) * own.sum();
}

inline Vec br_gradient(const ContestGame& g, int player, const Vec& own, const Vec& opp_y) {
    EffectiveEfforts y;
    y.y1 = player == 1 ? Vec(own + g.rho1.transpose() * own) : opp_y;
    y.y2 = player == 2 ? Vec(own + g.rho2.transpose() * own) : opp_y;
    Vec w = effective_marginals(g, y, player);
    for (int k = 0; k < w.size(); ++k)
        if (!std::isfinite(w(k))) w(k) = 1e12;  // diverging marginal: push hard off zero
    return w + g.rho(player) * w - Vec::Constant(g.size(), g.cost(player));
}

}  // namespace detail

// Maximize player i's payoff over the box [lo, hi]^m with the opponent's
// efforts frozen. Projected gradient ascent, Barzilai-Borwein step proposal,
// Armijo backtracking so accepted steps never lower the payoff.
inline Vec best_response(const ContestGame& g, int player, const Vec& opponent_efforts,
                         double lo, double hi, const BrOptions& opt = {},
                         const Vec* warm_start = nullptr) {
    if (!(lo >= 0.0) || !(hi > lo)) throw std::invalid_argument("need 0 <= lo < hi");
    const int m = g.size();
    const int j = 3 - player;
    const Vec opp_y = opponent_efforts + g.rho(j).transpose() * opponent_efforts;
    auto clamp = [&](Vec e) {
        for (int k = 0; k < m; ++k) e(k) = std::min(std::max(e(k), lo), hi);
        return e;
    };

    Vec e = clamp(warm_start ? *warm_start : Vec::Constant(m, std::min(hi, std::max(lo, 0.25))));
    double f = detail::br_payoff(g, player, e, opp_y);
    Vec grad = detail::br_gradient(g, player, e, opp_y);
    double step = 1.0 / std::max(1.0, grad.lpNorm<Eigen::Infinity>());

    for (int it = 0; it < opt.pg_max_iter; ++it) {
        if ((clamp(e + grad) - e).lpNorm<Eigen::Infinity>() <= opt.pg_tol) break;
        double t = step;
        Vec e_new;
        double f_new = -std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            e_new = clamp(e + t * grad);
            const Vec d = e_new - e;
            if (d.lpNorm<Eigen::Infinity>() == 0.0) break;
            f_new = detail::br_payoff(g, player, e_new, opp_y);
            if (f_new >= f + 1e-4 * grad.dot(d)) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
        const Vec grad_new = detail::br_gradient(g, player, e_new, opp_y);
        const Vec de = e_new - e;
        const Vec dg = grad_new - grad;
        const double denom = std::abs(de.dot(dg));
        step = denom > 1e-300 ? std::min(std::max(de.squaredNorm() / denom, 1e-12), 1e9)
                              : 2.0 * t;
        e = e_new;
        f = f_new;
        grad = grad_new;
    }
    return e;
}

// Alternating best responses over the epsilon schedule, warm-started from one
// epsilon to the next. The effort cap sum(v)/c_i can never bind at a best
// response, so hitting it is reported as a red flag rather than an error.
inline BrResult br_dynamics(const ContestGame& g, const BrOptions& opt = {}) {
    const int m = g.size();
    BrResult out;
    const double cap1 = g.values.sum() / g.cost1;
    const double cap2 = g.values.sum() / g.cost2;
    out.profile.e1 = Vec::Constant(m, 0.0);
    out.profile.e2 = Vec::Constant(m, 0.0);
    for (int k = 0; k < m; ++k) {
        out.profile.e1(k) = g.gamma * g.values(k) / (4.0 * g.cost1);
        out.profile.e2(k) = g.gamma * g.values(k) / (4.0 * g.cost2);
    }
    out.converged = true;
    for (const double eps : opt.epsilons) {
        bool settled = false;
        for (int round = 0; round < opt.max_rounds; ++round) {
            const Vec b1 = best_response(g, 1, out.profile.e2, eps, cap1, opt, &out.profile.e1);
            const Vec e1 = opt.damping * b1 + (1.0 - opt.damping) * out.profile.e1;
            const double move1 = (e1 - out.profile.e1).lpNorm<Eigen::Infinity>();
            out.profile.e1 = e1;
            const Vec b2 = best_response(g, 2, out.profile.e1, eps, cap2, opt, &out.profile.e2);
            const Vec e2 = opt.damping * b2 + (1.0 - opt.damping) * out.profile.e2;
            const double move = std::max(move1, (e2 - out.profile.e2).lpNorm<Eigen::Infinity>());
            out.profile.e2 = e2;
            out.trace.push_back({eps, round, move, out.profile.e1.sum(), out.profile.e2.sum()});
            if (move < opt.movement_tol) {
                settled = true;
                break;
            }
        }
        out.converged = out.converged && settled;
    }
    out.cap_binding = out.profile.e1.maxCoeff() > cap1 - 1e-6 * cap1 ||
                      out.profile.e2.maxCoeff() > cap2 - 1e-6 * cap2;
    return out;
}

// ---------------------------------------------------------------------------
// Agreement between a certified equilibrium and the dynamics. Only
// equilibrium-invariant quantities are compared everywhere: totals,
// probabilities, payoffs, and effective efforts on contested battlefields.
// Raw efforts can differ across equilibria, so they are never compared.

enum class Verdict { Agree, Disagree, Inconclusive };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Agree: return "agree";
        case Verdict::Disagree: return "disagree";
        default: return "inconclusive";
    }
}

struct AgreementReport {
    Verdict verdict = Verdict::Inconclusive;
    double total_diff = 0, payoff_diff = 0, prob_diff = 0, contested_y_diff = 0;
    BrResult oracle;
};

template <typename Report>
inline AgreementReport cross_validate(const ContestGame& g, const Report& rep, double tol = 1e-4,
                                      const BrOptions& opt = {}) {
    AgreementReport out;
    out.oracle = br_dynamics(g, opt);
    const EffectiveEfforts y = effective_efforts(g, out.oracle.profile);
    const WinProbabilities p = win_probabilities(g, y);
    const auto [pi1, pi2] = payoffs(g, out.oracle.profile);

    out.total_diff = std::max(std::abs(out.oracle.profile.e1.sum() - rep.total1),
                              std::abs(out.oracle.profile.e2.sum() - rep.total2));
    out.payoff_diff = std::max(std::abs(pi1 - rep.payoff1), std::abs(pi2 - rep.payoff2));
    out.prob_diff = std::max((p.p1 - rep.probabilities.p1).template lpNorm<Eigen::Infinity>(),
                             (p.p2 - rep.probabilities.p2).template lpNorm<Eigen::Infinity>());
    for (int k : rep.partition.contested) {
        out.contested_y_diff = std::max(out.contested_y_diff, std::abs(y.y1(k) - rep.effective.y1(k)));
        out.contested_y_diff = std::max(out.contested_y_diff, std::abs(y.y2(k) - rep.effective.y2(k)));
    }

    const bool close = out.total_diff <= tol && out.payoff_diff <= tol && out.prob_diff <= tol &&
                       out.contested_y_diff <= tol;
    if (!out.oracle.converged) out.verdict = Verdict::Inconclusive;
    else out.verdict = close ? Verdict::Agree : Verdict::Disagree;
    return out;
}

}  // namespace netcontest
