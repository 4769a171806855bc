#pragma once

// Planner-side constructions. Total effort is the sum of gamma/c_i * p1*p2*v
// over battlefields, so it peaks when every battlefield is a coin flip and
// vanishes as the contests become lopsided. The builders below pick spillover
// networks that force either extreme; verify_design certifies the outcome by
// actually solving the game.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netcontest/solver.hpp"
#include "netcontest/verification.hpp"

namespace netcontest {

enum class DesignTarget { MaxEffortEqual, MaxEffortGeneral, MaxWelfare };

inline std::string to_string(DesignTarget t) {
    switch (t) {
        case DesignTarget::MaxEffortEqual: return "max-effort-equal";
        case DesignTarget::MaxEffortGeneral: return "max-effort-general";
        case DesignTarget::MaxWelfare: return "max-welfare";
    }
    return "?";
}

struct DesignedNetworks {
    DesignTarget target = DesignTarget::MaxEffortEqual;
    Mat rho1, rho2;
    std::map<std::string, double> parameters;
    double handicap = 0.0;
    std::string note;
};

inline double handicap(const Mat& rho1, const Mat& rho2) {
    if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols())
        throw std::invalid_argument("handicap: networks have different dimensions");
    return (rho2 - rho1).sum();
}

namespace detail {

inline Mat complete_network(int m, double weight) {
    Mat r = Mat::Constant(m, m, weight);
    r.diagonal().setZero();
    return r;
}

inline void require_design_costs(double c1, double c2) {
    if (!(c1 > 0.0) || !(c2 > 0.0))
        throw std::invalid_argument("design: costs must be positive");
    if (c2 < c1)
        throw std::invalid_argument("design: requires c2 >= c1; swap the players first");
}

}  // namespace detail

// Equal battlefield values: player 1 gets a complete network of weight
// lambda1 (empty at the default 0) and player 2 a complete network whose
// weight tops it up so that both centrality profiles match through the cost
// ratio. Every member of the lambda1 family yields p = 1/2 everywhere and
// per-player totals m*gamma*v/(4 c_i).
inline DesignedNetworks design_max_effort_equal(double c1, double c2, int m, double v,
                                                double lambda1 = 0.0) {
    detail::require_design_costs(c1, c2);
    if (m < 2) throw std::invalid_argument("design_max_effort_equal: needs m >= 2");
    if (!(v > 0.0)) throw std::invalid_argument("design_max_effort_equal: value must be positive");
    if (lambda1 < 0.0) throw std::invalid_argument("design_max_effort_equal: lambda1 must be >= 0");

    double lambda2 = (c2 / c1) * lambda1 + (c2 - c1) / ((m - 1) * c1);
    DesignedNetworks d;
    d.target = DesignTarget::MaxEffortEqual;
    d.rho1 = detail::complete_network(m, lambda1);
    d.rho2 = detail::complete_network(m, lambda2);
    d.parameters["lambda1"] = lambda1;
    d.parameters["lambda2"] = lambda2;
    d.handicap = m * ((c2 - c1) / c1) * (1.0 + (m - 1) * lambda1);
    if (std::abs(1.0 - lambda1) < 1e-12 || std::abs(1.0 - lambda2) < 1e-12)
        d.note = "a complete network of weight 1 is singular: efforts form a continuum, "
                 "but probabilities, totals, and payoffs are unaffected";
    return d;
}

inline DesignedNetworks design_max_effort_equal(double c1, double c2, const Vec& values,
                                                double lambda1 = 0.0) {
    if (values.size() < 1) throw std::invalid_argument("design_max_effort_equal: no battlefields");
    for (int k = 1; k < values.size(); ++k)
        if (values[k] != values[0])
            throw std::invalid_argument(
                "design_max_effort_equal: battlefield values differ; use design_max_effort_general");
    return design_max_effort_equal(c1, c2, static_cast<int>(values.size()), values[0], lambda1);
}

// Welfare (sum of payoffs) rises as total effort falls, so the planner makes
// the contest maximally uneven: player 1 empty, player 2 complete with a
// weight large enough that the combined total drops below epsilon.
inline DesignedNetworks design_max_welfare(double c1, double c2, int m, double gamma, double v,
                                           double epsilon) {
    if (!(c1 > 0.0) || !(c2 > 0.0))
        throw std::invalid_argument("design_max_welfare: costs must be positive");
    if (m < 1) throw std::invalid_argument("design_max_welfare: needs m >= 1");
    if (!(gamma > 0.0) || gamma > 1.0)
        throw std::invalid_argument("design_max_welfare: gamma must be in (0, 1]");
    if (!(v > 0.0)) throw std::invalid_argument("design_max_welfare: value must be positive");
    if (!(epsilon > 0.0)) throw std::invalid_argument("design_max_welfare: epsilon must be positive");

    auto q_of = [&](double lambda) {
        double t = (1.0 + (m - 1) * lambda) * c1 / c2;
        return 1.0 / (std::pow(t, gamma) + std::pow(t, -gamma) + 2.0);
    };
    auto combined = [&](double lambda) {
        return gamma * m * v * q_of(lambda) * (1.0 / c1 + 1.0 / c2);
    };

    DesignedNetworks d;
    d.target = DesignTarget::MaxWelfare;
    d.parameters["epsilon"] = epsilon;

    double lambda = 0.0;
    if (combined(0.0) < epsilon) {
        d.note = "epsilon already met without spillovers";
    } else {
        // combined() is decreasing once (1+(m-1)lambda) c1 >= c2; bracket the
        // crossing on that branch and bisect.
        double lo = std::max(0.0, (c2 / c1 - 1.0) / std::max(1, m - 1));
        double hi = std::max(1.0, 2.0 * lo);
        int guard = 0;
        while (combined(hi) >= epsilon && guard++ < 200) hi *= 2.0;
        if (combined(hi) >= epsilon)
            throw std::runtime_error("design_max_welfare: failed to bracket the target total");
        while (hi - lo > 1e-12) {
            double mid = 0.5 * (lo + hi);
            if (combined(mid) < epsilon)
                hi = mid;
            else
                lo = mid;
        }
        lambda = hi;
        // weight exactly 1 would make I + rho2 singular; step past it
        if (std::abs(lambda - 1.0) < 1e-9) lambda += 1e-6;
    }

    d.rho1 = Mat::Zero(m, m);
    d.rho2 = detail::complete_network(m, lambda);
    d.parameters["lambda_epsilon"] = lambda;
    d.parameters["q"] = q_of(lambda);
    d.parameters["predicted_combined_total"] = combined(lambda);
    d.handicap = handicap(d.rho1, d.rho2);
    return d;
}

namespace detail {

struct DesignGroup {
    std::vector<int> sorted_pos;  // positions within the ascending value order
    bool triple = false;
    bool low_cost_ratio = false;  // which construction branch applies
    double range_lo = 0.0;        // admissible lambda1 interval
    double range_hi = std::numeric_limits<double>::infinity();
    bool lo_open = false;         // (lo, inf) when true, [lo, hi) otherwise
    double default_lambda1 = 0.0;
};

inline DesignGroup pair_group(int a, int b, double va, double vb, double c1, double c2) {
    DesignGroup g;
    g.sorted_pos = {a, b};
    double thresh = (va + vb) / vb;
    if (c2 / c1 < thresh) {
        g.low_cost_ratio = true;
        g.range_hi = thresh * c1 / c2 - 1.0;
        g.default_lambda1 = 0.5 * g.range_hi;
    } else {
        g.lo_open = true;
        g.range_lo = vb / va;
        g.default_lambda1 = 1.5 * g.range_lo;
    }
    return g;
}

inline DesignGroup triple_group(int a, int b, int c, double va, double vb, double vc, double c1,
                                double c2) {
    DesignGroup g;
    g.sorted_pos = {a, b, c};
    g.triple = true;
    double thresh = (vc + vb + va) / (vc + vb - va);
    if (c2 / c1 < thresh) {
        g.low_cost_ratio = true;
        g.range_hi = thresh * c1 / c2 - 1.0;
        g.default_lambda1 = 0.5 * g.range_hi;
    } else {
        g.lo_open = true;
        g.range_lo = vb / va;
        g.default_lambda1 = 1.5 * g.range_lo;
    }
    return g;
}

inline void check_lambda1_in_range(const DesignGroup& g, double lambda1, int group_index) {
    bool ok = g.lo_open ? lambda1 > g.range_lo
                        : lambda1 >= g.range_lo && lambda1 < g.range_hi;
    if (!ok) {
        std::ostringstream msg;
        msg << "design_max_effort_general: lambda1 for group " << group_index + 1 << " must lie in ";
        if (g.lo_open)
            msg << "(" << g.range_lo << ", inf)";
        else
            msg << "[" << g.range_lo << ", " << g.range_hi << ")";
        msg << ", got " << lambda1;
        throw std::invalid_argument(msg.str());
    }
}

// scatter one group's block into rho for both players, mapping sorted
// positions back to original battlefield indices through perm
inline void place_group(const DesignGroup& g, double lam, Mat& rho,
                        const std::vector<int>& perm) {
    if (!g.triple) {
        int a = perm[g.sorted_pos[0]], b = perm[g.sorted_pos[1]];
        rho(a, b) = rho(b, a) = lam;
        return;
    }
    int a = perm[g.sorted_pos[0]], b = perm[g.sorted_pos[1]], c = perm[g.sorted_pos[2]];
    if (g.low_cost_ratio) {
        rho(a, b) = rho(b, a) = lam / 2.0;
        rho(a, c) = rho(c, a) = lam / 2.0;
        rho(b, c) = rho(c, b) = lam / 2.0;
    } else {
        // the two smaller battlefields form a pair; the largest one only
        // spills outward, splitting its weight between them
        rho(a, b) = rho(b, a) = lam;
        rho(c, a) = rho(c, b) = lam / 2.0;
    }
}

}  // namespace detail

// Unequal battlefield values: complete networks can push some effort negative,
// so battlefields are paired off by ascending value (one triple when m is odd)
// and each group gets its own symmetric weight. Per group, the cost ratio
// selects one of two admissible lambda1 ranges; lambda2 tops lambda1 up
// through the cost ratio just like the equal-value construction.
inline DesignedNetworks design_max_effort_general(double c1, double c2, const Vec& values,
                                                  const std::vector<double>& lambda1_choices = {}) {
    detail::require_design_costs(c1, c2);
    int m = static_cast<int>(values.size());
    if (m < 2) throw std::invalid_argument("design_max_effort_general: needs m >= 2");
    for (int k = 0; k < m; ++k)
        if (!(values[k] > 0.0))
            throw std::invalid_argument("design_max_effort_general: values must be positive");

    std::vector<int> perm(m);
    for (int k = 0; k < m; ++k) perm[k] = k;
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int a, int b) { return values[a] < values[b]; });
    Vec sorted(m);
    for (int j = 0; j < m; ++j) sorted[j] = values[perm[j]];

    int r = m / 2;
    std::vector<detail::DesignGroup> groups;
    for (int l = 0; l < r; ++l) {
        bool last = l == r - 1;
        if (last && m % 2 == 1)
            groups.push_back(detail::triple_group(m - 3, m - 2, m - 1, sorted[m - 3], sorted[m - 2],
                                                  sorted[m - 1], c1, c2));
        else
            groups.push_back(
                detail::pair_group(2 * l, 2 * l + 1, sorted[2 * l], sorted[2 * l + 1], c1, c2));
    }

    std::vector<double> lam1(r);
    if (lambda1_choices.empty()) {
        for (int l = 0; l < r; ++l) lam1[l] = groups[l].default_lambda1;
    } else if (lambda1_choices.size() == 1) {
        for (int l = 0; l < r; ++l) lam1[l] = lambda1_choices[0];
    } else if (static_cast<int>(lambda1_choices.size()) == r) {
        lam1 = lambda1_choices;
    } else {
        throw std::invalid_argument(
            "design_max_effort_general: lambda1_choices must be empty, a single value, or one per group");
    }
    for (int l = 0; l < r; ++l) detail::check_lambda1_in_range(groups[l], lam1[l], l);

    DesignedNetworks d;
    d.target = DesignTarget::MaxEffortGeneral;
    d.rho1 = Mat::Zero(m, m);
    d.rho2 = Mat::Zero(m, m);
    for (int l = 0; l < r; ++l) {
        double lam2 = (c2 / c1) * lam1[l] + (c2 - c1) / c1;
        detail::place_group(groups[l], lam1[l], d.rho1, perm);
        detail::place_group(groups[l], lam2, d.rho2, perm);
        std::string suffix = "_" + std::to_string(l + 1);
        d.parameters["lambda1" + suffix] = lam1[l];
        d.parameters["lambda2" + suffix] = lam2;
    }
    d.handicap = handicap(d.rho1, d.rho2);
    return d;
}

// Solve the designed game and certify the claimed optimum.
inline VerificationReport verify_design(const DesignedNetworks& nets, double c1, double c2,
                                        double gamma, const Vec& values,
                                        const SolveOptions& opt = {}) {
    ContestGame g = make_game(gamma, c1, c2, values, nets.rho1, nets.rho2);
    EquilibriumReport rep = solve(g, opt);
    int m = g.size();

    VerificationReport out;
    bool interior = static_cast<int>(rep.partition.contested.size()) == m &&
                    static_cast<int>(rep.supports.s1.size()) == m &&
                    static_cast<int>(rep.supports.s2.size()) == m;

    if (nets.target == DesignTarget::MaxWelfare) {
        double eps = nets.parameters.count("epsilon") ? nets.parameters.at("epsilon")
                                                      : std::numeric_limits<double>::infinity();
        double total = rep.total1 + rep.total2;
        std::ostringstream det;
        det << "combined total " << total << " vs epsilon " << eps;
        out.add("combined total below epsilon", total < eps, det.str());
        out.add("interior equilibrium", interior);
        return out;
    }

    double tol = 1e-8;
    double worst_p = 0.0;
    for (int k = 0; k < m; ++k)
        worst_p = std::max(worst_p, std::abs(rep.probabilities.p1[k] - 0.5));
    {
        std::ostringstream det;
        det << "max |p - 1/2| = " << worst_p;
        out.add("win probabilities one half", worst_p <= tol, det.str());
    }
    double bound1 = gamma * values.sum() / (4.0 * c1);
    double bound2 = gamma * values.sum() / (4.0 * c2);
    {
        std::ostringstream det;
        det << "totals (" << rep.total1 << ", " << rep.total2 << ") vs bound (" << bound1 << ", "
            << bound2 << ")";
        out.add("totals attain the maximum",
                std::abs(rep.total1 - bound1) <= tol && std::abs(rep.total2 - bound2) <= tol,
                det.str());
    }
    out.add("interior equilibrium", interior);
    return out;
}

}  // namespace netcontest
