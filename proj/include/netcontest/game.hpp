#pragma once

// Two players fight over m battlefields. Player i spends effort e_i^k >= 0 on
// battlefield k at unit cost c_i; a directed weighted network rho_i lets that
// effort spill over, so the effective effort is y_i = (I + rho_i^T) e_i.
// Battlefield k is won with Tullock probability y_i^gamma / (y_1^gamma + y_2^gamma)
// and pays v^k to the winner.

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "netcontest/linalg.hpp"

namespace netcontest {

struct ContestGame {
    double gamma = 1.0;
    double cost1 = 1.0;
    double cost2 = 1.0;
    Vec values;
    Mat rho1, rho2;

    int size() const { return static_cast<int>(values.size()); }

    double cost(int player) const { return player == 1 ? cost1 : cost2; }
    const Mat& rho(int player) const { return player == 1 ? rho1 : rho2; }
    Mat& rho(int player) { return player == 1 ? rho1 : rho2; }
};

inline ContestGame make_game(double gamma, double c1, double c2, Vec values, Mat rho1, Mat rho2) {
    ContestGame g;
    g.gamma = gamma;
    g.cost1 = c1;
    g.cost2 = c2;
    g.values = std::move(values);
    g.rho1 = std::move(rho1);
    g.rho2 = std::move(rho2);
    return g;
}

// Convenience for games without spillovers.
inline ContestGame make_game(double gamma, double c1, double c2, Vec values) {
    const int m = static_cast<int>(values.size());
    return make_game(gamma, c1, c2, std::move(values), Mat::Zero(m, m), Mat::Zero(m, m));
}

struct EffortProfile {
    Vec e1, e2;
    const Vec& of(int player) const { return player == 1 ? e1 : e2; }
    Vec& of(int player) { return player == 1 ? e1 : e2; }
};

struct EffectiveEfforts {
    Vec y1, y2;
    const Vec& of(int player) const { return player == 1 ? y1 : y2; }
};

enum class TiePolicy { SplitEvenly, Error };

struct WinProbabilities {
    Vec p1, p2;
    std::vector<int> ties;  // battlefields (0-based) where both effective efforts are zero
    const Vec& of(int player) const { return player == 1 ? p1 : p2; }
};

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;
    bool submatrix_scan_exhaustive = true;
    bool ok() const { return violations.empty(); }

    std::string to_string() const {
        std::ostringstream os;
        if (ok()) os << "valid";
        else os << violations.size() << " violation(s)";
        for (const auto& v : violations) os << "\n  violation: " << v;
        for (const auto& w : warnings) os << "\n  warning: " << w;
        if (!submatrix_scan_exhaustive) os << "\n  note: submatrix singularity scan was partial (m > 12)";
        return os.str();
    }
};

namespace detail {

inline void scan_spillover_matrix(const Mat& rho, int m, const std::string& name,
                                  ValidationReport& rep) {
    if (rho.rows() != m || rho.cols() != m) {
        rep.violations.push_back(name + " must be " + std::to_string(m) + "x" + std::to_string(m));
        return;
    }
    for (int k = 0; k < m; ++k) {
        if (rho(k, k) != 0.0)
            rep.violations.push_back(name + " has nonzero diagonal at battlefield " + std::to_string(k + 1));
        for (int l = 0; l < m; ++l) {
            if (!std::isfinite(rho(k, l)) || rho(k, l) < 0.0) {
                rep.violations.push_back(name + " entry (" + std::to_string(k + 1) + "," +
                                         std::to_string(l + 1) + ") must be finite and >= 0");
            }
        }
    }
}

// Near-singular I + rho (or a principal submatrix of it) does not invalidate a
// game, but it means equilibrium efforts may form a continuum; warn.
inline void scan_singularity(const Mat& rho, int m, const std::string& name, ValidationReport& rep,
                             double rcond_floor = 1e-10) {
    const Mat a = Mat::Identity(m, m) + rho;
    if (rcond(a) < rcond_floor) {
        rep.warnings.push_back("I + " + name + " is numerically singular");
        return;  // every superset warning would be noise; the full-matrix one suffices
    }
    auto check_subset = [&](const std::vector<int>& idx) {
        if (static_cast<int>(idx.size()) == m || idx.empty()) return;
        if (rcond(submatrix(a, idx)) < rcond_floor) {
            std::string s;
            for (int k : idx) s += (s.empty() ? "" : ",") + std::to_string(k + 1);
            rep.warnings.push_back("I + " + name + " restricted to {" + s + "} is numerically singular");
        }
    };
    if (m <= 12) {
        for (unsigned mask = 1; mask + 1 < (1u << m); ++mask) {
            std::vector<int> idx;
            for (int k = 0; k < m; ++k)
                if (mask & (1u << k)) idx.push_back(k);
            check_subset(idx);
        }
    } else {
        rep.submatrix_scan_exhaustive = false;
        for (int k = 0; k < m; ++k) check_subset({k});
        for (int drop = 0; drop < m; ++drop) {
            std::vector<int> idx;
            for (int k = 0; k < m; ++k)
                if (k != drop) idx.push_back(k);
            check_subset(idx);
        }
        for (int lead = 2; lead < m; ++lead) {
            std::vector<int> idx(lead);
            for (int k = 0; k < lead; ++k) idx[k] = k;
            check_subset(idx);
        }
    }
}

}  // namespace detail

inline ValidationReport validate_game(const ContestGame& g) {
    ValidationReport rep;
    const int m = g.size();
    if (m < 1) rep.violations.push_back("at least one battlefield required");
    if (!(g.gamma > 0.0) || g.gamma > 1.0 || !std::isfinite(g.gamma))
        rep.violations.push_back("gamma must lie in (0, 1]");
    if (!(g.cost1 > 0.0) || !std::isfinite(g.cost1)) rep.violations.push_back("cost1 must be > 0");
    if (!(g.cost2 > 0.0) || !std::isfinite(g.cost2)) rep.violations.push_back("cost2 must be > 0");
    for (int k = 0; k < m; ++k)
        if (!(g.values(k) > 0.0) || !std::isfinite(g.values(k)))
            rep.violations.push_back("value of battlefield " + std::to_string(k + 1) + " must be > 0");
    detail::scan_spillover_matrix(g.rho1, m, "rho1", rep);
    detail::scan_spillover_matrix(g.rho2, m, "rho2", rep);
    if (rep.ok()) {
        detail::scan_singularity(g.rho1, m, "rho1", rep);
        detail::scan_singularity(g.rho2, m, "rho2", rep);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Outcome evaluation

inline EffectiveEfforts effective_efforts(const ContestGame& g, const EffortProfile& e) {
    EffectiveEfforts y;
    y.y1 = e.e1 + g.rho1.transpose() * e.e1;
    y.y2 = e.e2 + g.rho2.transpose() * e.e2;
    return y;
}

inline WinProbabilities win_probabilities(const ContestGame& g, const EffectiveEfforts& y,
                                          TiePolicy policy = TiePolicy::SplitEvenly) {
    const int m = g.size();
    WinProbabilities p;
    p.p1 = Vec(m);
    p.p2 = Vec(m);
    for (int k = 0; k < m; ++k) {
        const double a = std::pow(y.y1(k), g.gamma);
        const double b = std::pow(y.y2(k), g.gamma);
        if (a + b <= 0.0) {
            if (policy == TiePolicy::Error)
                throw std::domain_error("battlefield " + std::to_string(k + 1) +
                                        " has zero effective effort from both players");
            p.ties.push_back(k);
            p.p1(k) = 0.5;
            p.p2(k) = 0.5;
        } else {
            p.p1(k) = a / (a + b);
            p.p2(k) = b / (a + b);
        }
    }
    return p;
}

inline WinProbabilities win_probabilities(const ContestGame& g, const EffortProfile& e,
                                          TiePolicy policy = TiePolicy::SplitEvenly) {
    return win_probabilities(g, effective_efforts(g, e), policy);
}

inline std::pair<double, double> payoffs(const ContestGame& g, const EffortProfile& e,
                                         TiePolicy policy = TiePolicy::SplitEvenly) {
    const WinProbabilities p = win_probabilities(g, e, policy);
    const double pi1 = g.values.dot(p.p1) - g.cost1 * e.e1.sum();
    const double pi2 = g.values.dot(p.p2) - g.cost2 * e.e2.sum();
    return {pi1, pi2};
}

// Marginal value of one more unit of *effective* effort on each battlefield:
//   w_i^k = gamma * p_i^k (1 - p_i^k) v^k / y_i^k
//         = gamma * y_i^{gamma-1} y_j^gamma v^k / (y_i^gamma + y_j^gamma)^2.
// For gamma = 1 this reduces to v^k y_j / (y_i + y_j)^2, which stays finite at
// y_i = 0; for gamma < 1 the marginal blows up as y_i -> 0 and we report inf.
inline Vec effective_marginals(const ContestGame& g, const EffectiveEfforts& y, int player) {
    const Vec& yi = y.of(player);
    const Vec& yj = y.of(3 - player);
    const int m = g.size();
    Vec w(m);
    for (int k = 0; k < m; ++k) {
        if (yi(k) == 0.0 && yj(k) == 0.0) {
            w(k) = std::numeric_limits<double>::infinity();
        } else if (g.gamma == 1.0) {
            const double s = yi(k) + yj(k);
            w(k) = g.values(k) * yj(k) / (s * s);
        } else if (yi(k) == 0.0) {
            w(k) = std::numeric_limits<double>::infinity();
        } else {
            const double a = std::pow(yi(k), g.gamma);
            const double b = std::pow(yj(k), g.gamma);
            w(k) = g.gamma * std::pow(yi(k), g.gamma - 1.0) * b * g.values(k) / ((a + b) * (a + b));
        }
    }
    return w;
}

// Gradient of player i's payoff in their own efforts. Effort on k raises the
// effective effort of k and, through the outgoing spillovers rho_i^{k,l}, of
// every l, so  dPi_i/de_i = (I + rho_i) w_i - c_i * 1.
inline Vec payoff_gradient(const ContestGame& g, const EffortProfile& e, int player) {
    const EffectiveEfforts y = effective_efforts(g, e);
    const Vec w = effective_marginals(g, y, player);
    return w + g.rho(player) * w - Vec::Constant(g.size(), g.cost(player));
}

}  // namespace netcontest
