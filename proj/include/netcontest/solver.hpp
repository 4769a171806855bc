#pragma once

// Equilibrium computation. In equilibrium the normalized marginal value of
// effective effort, mu_i^k = gamma p_1^k p_2^k v^k / (y_i^k c_i), satisfies
//   (I + rho_i) mu_i = 1   on player i's support P_i (stationarity),
//   (I + rho_i) mu_i <= 1  off the support (no profitable entry),
// and off-support battlefields must have their effective effort supplied
// entirely by spillovers from P_i. Probabilities follow from the multipliers:
//   p_i^k = (mu_j^k c_j)^gamma / ((mu_1^k c_1)^gamma + (mu_2^k c_2)^gamma).
// The solver works in (mu_1, mu_2) space and reconstructs efforts at the end.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "netcontest/game.hpp"
#include "netcontest/oracle.hpp"

namespace netcontest {

struct SupportPair {
    std::vector<int> s1, s2;  // 0-based battlefield indices, sorted
    const std::vector<int>& of(int player) const { return player == 1 ? s1 : s2; }
    bool operator==(const SupportPair&) const = default;
    bool operator<(const SupportPair& o) const { return std::tie(s1, s2) < std::tie(o.s1, o.s2); }
};

struct Partition {
    std::vector<int> contested;  // both effective efforts positive
    std::vector<int> only1;      // player 1 uncontested
    std::vector<int> only2;
};

enum class SolveMethod { Interior, SupportSearch, OracleRefined };

inline std::string to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::Interior: return "interior";
        case SolveMethod::SupportSearch: return "support-search";
        default: return "oracle-refined";
    }
}

struct EquilibriumReport {
    EffortProfile efforts;
    EffectiveEfforts effective;
    Vec mu1, mu2;
    Vec slack1, slack2;  // 1 - (I + rho_i) mu_i; zero on the support
    SupportPair supports;
    WinProbabilities probabilities;
    Partition partition;
    double total1 = 0, total2 = 0;
    double payoff1 = 0, payoff2 = 0;
    double kkt = std::numeric_limits<double>::infinity();
    SolveMethod method = SolveMethod::Interior;
    bool multiplicity = false;

    double total(int player) const { return player == 1 ? total1 : total2; }
    double payoff(int player) const { return player == 1 ? payoff1 : payoff2; }
    const Vec& mu(int player) const { return player == 1 ? mu1 : mu2; }
};

struct SolveOptions {
    double cert_tol = 0.0;  // 0 = pick by gamma: 1e-9 when gamma == 1, else 1e-7
    double pos_tol = 1e-11;
    double newton_tol = 1e-12;
    int newton_max_iter = 200;
    int support_enum_limit = 10;
    bool use_oracle_seed = true;

    double certification_tol(double gamma) const {
        if (cert_tol > 0.0) return cert_tol;
        return gamma == 1.0 ? 1e-9 : 1e-7;
    }
};

struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// KKT residual of an arbitrary profile: stationarity violation on battlefields
// with positive effort, profitable-entry margin elsewhere. Infinite when a
// gamma < 1 marginal diverges or some battlefield has no effective effort.

inline double kkt_residual(const ContestGame& g, const EffortProfile& e, double pos_tol = 1e-11) {
    double res = 0.0;
    for (int i : {1, 2}) {
        const Vec grad = payoff_gradient(g, e, i);
        for (int k = 0; k < g.size(); ++k) {
            const double r = e.of(i)(k) > pos_tol ? std::abs(grad(k)) : std::max(0.0, grad(k));
            if (std::isnan(r)) return std::numeric_limits<double>::infinity();
            res = std::max(res, r);
        }
    }
    return res;
}

inline Partition equilibrium_partition(const EffectiveEfforts& y, double pos_tol = 1e-11) {
    Partition part;
    for (int k = 0; k < y.y1.size(); ++k) {
        const bool a = y.y1(k) > pos_tol, b = y.y2(k) > pos_tol;
        if (a && b) part.contested.push_back(k);
        else if (a) part.only1.push_back(k);
        else if (b) part.only2.push_back(k);
        else
            throw std::domain_error("battlefield " + std::to_string(k + 1) +
                                    " has zero effective effort from both players");
    }
    return part;
}

// Aggregate identities that hold at any equilibrium: total effort is
// (gamma/c_i) sum_k p_1 p_2 v and payoffs are sum_k p_i (1 - gamma p_j) v.
struct ClosedFormTotals {
    double total1, total2, payoff1, payoff2;
};

inline ClosedFormTotals closed_form_totals(const ContestGame& g, const WinProbabilities& p) {
    ClosedFormTotals out{};
    const double s = (p.p1.array() * p.p2.array() * g.values.array()).sum();
    out.total1 = g.gamma / g.cost1 * s;
    out.total2 = g.gamma / g.cost2 * s;
    out.payoff1 = ((p.p1.array() * (1.0 - g.gamma * p.p2.array())) * g.values.array()).sum();
    out.payoff2 = ((p.p2.array() * (1.0 - g.gamma * p.p1.array())) * g.values.array()).sum();
    return out;
}

namespace detail {

inline std::vector<int> complement(const std::vector<int>& s, int m) {
    std::vector<int> out;
    std::vector<char> in(m, 0);
    for (int k : s) in[k] = 1;
    for (int k = 0; k < m; ++k)
        if (!in[k]) out.push_back(k);
    return out;
}

inline std::vector<int> positive_indices(const Vec& v, double tol) {
    std::vector<int> out;
    for (int k = 0; k < v.size(); ++k)
        if (v(k) > tol) out.push_back(k);
    return out;
}

// Effective effort each player must field on every battlefield if the
// multipliers are (mu_1, mu_2):
//   y_i^k = gamma (mu_i c_i)^{gamma-1} (mu_j c_j)^gamma v^k / ((mu_1 c_1)^gamma + (mu_2 c_2)^gamma)^2.
// The gamma = 1 branch is written division-safe so mu_i = 0 (an abandoned
// battlefield) evaluates cleanly to v mu_j c_j / (mu_i c_i + mu_j c_j)^2.
inline double mu_implied_y(double gamma, double v, double mui_ci, double muj_cj) {
    constexpr double kHuge = 1e30;
    if (gamma == 1.0) {
        const double denom = mui_ci + muj_cj;
        if (denom <= 0.0) return kHuge;
        return v * muj_cj / (denom * denom);
    }
    const double ai = std::pow(std::max(mui_ci, 1e-30), gamma);
    const double aj = std::pow(std::max(muj_cj, 0.0), gamma);
    const double denom = ai + aj;
    if (denom <= 0.0) return kHuge;
    return gamma * std::pow(std::max(mui_ci, 1e-30), gamma - 1.0) * aj * v / (denom * denom);
}

// Support-restricted KKT system in x = [mu_1; mu_2]. Rows on P_i demand
// stationarity, rows off P_i demand that spillovers from P_i supply exactly
// the effective effort the multipliers imply. Degenerate off-support rows
// (opponent multiplier zero, so both sides vanish identically) can be pinned
// to zero slack to select one representative of an equilibrium continuum.
struct MuSystem {
    const ContestGame* g;
    SupportPair sup;
    std::vector<int> off1, off2;
    std::vector<char> pin1, pin2;  // indexed by position in off1/off2
    Mat a1, a2;                    // I + rho_i
    Eigen::CompleteOrthogonalDecomposition<Mat> rec1, rec2;  // (I + rho_i^{PP})^T
    bool rec_rank_deficient = false;

    MuSystem(const ContestGame& game, SupportPair supports) : g(&game), sup(std::move(supports)) {
        const int m = g->size();
        off1 = complement(sup.s1, m);
        off2 = complement(sup.s2, m);
        pin1.assign(off1.size(), 0);
        pin2.assign(off2.size(), 0);
        a1 = Mat::Identity(m, m) + g->rho1;
        a2 = Mat::Identity(m, m) + g->rho2;
        const Mat b1 = block(a1, sup.s1, sup.s1).transpose();
        const Mat b2 = block(a2, sup.s2, sup.s2).transpose();
        rec1.compute(b1);
        rec2.compute(b2);
        const auto full = [](const Eigen::CompleteOrthogonalDecomposition<Mat>& d, const Mat& b) {
            return d.rank() == b.rows();
        };
        rec_rank_deficient = !full(rec1, b1) || !full(rec2, b2);
    }

    const std::vector<int>& support(int i) const { return i == 1 ? sup.s1 : sup.s2; }
    const std::vector<int>& off(int i) const { return i == 1 ? off1 : off2; }
    std::vector<char>& pins(int i) { return i == 1 ? pin1 : pin2; }
    const std::vector<char>& pins(int i) const { return i == 1 ? pin1 : pin2; }
    const Mat& a(int i) const { return i == 1 ? a1 : a2; }

    Vec mu_of(const Vec& x, int i) const {
        const int m = g->size();
        return i == 1 ? x.head(m) : x.tail(m);
    }

    Vec implied_y(const Vec& x, int i) const {
        const int m = g->size();
        const Vec mi = mu_of(x, i), mj = mu_of(x, 3 - i);
        const double ci = g->cost(i), cj = g->cost(3 - i);
        Vec y(m);
        for (int k = 0; k < m; ++k)
            y(k) = mu_implied_y(g->gamma, g->values(k), mi(k) * ci, mj(k) * cj);
        return y;
    }

    // Efforts on the support that produce the implied effective efforts there.
    Vec support_efforts(const Vec& x, int i) const {
        const Vec y = implied_y(x, i);
        return (i == 1 ? rec1 : rec2).solve(gather(y, support(i)));
    }

    Vec residual(const Vec& x) const {
        const int m = g->size();
        Vec f(2 * m);
        int row = 0;
        for (int i : {1, 2}) {
            const Vec mu = mu_of(x, i);
            const Vec h = a(i) * mu;
            const Vec y = implied_y(x, i);
            const Vec ep = (i == 1 ? rec1 : rec2).solve(gather(y, support(i)));
            for (int k : support(i)) f(row++) = h(k) - 1.0;
            const auto& offs = off(i);
            const auto& pn = pins(i);
            for (size_t t = 0; t < offs.size(); ++t) {
                const int k = offs[t];
                if (pn[t]) {
                    f(row++) = h(k) - 1.0;
                    continue;
                }
                double spill = 0.0;
                for (size_t l = 0; l < support(i).size(); ++l)
                    spill += g->rho(i)(support(i)[l], k) * ep(l);
                f(row++) = y(k) - spill;
            }
        }
        return f;
    }
};

struct NewtonOutcome {
    Vec x;
    bool converged = false;
    bool rank_deficient = false;  // Jacobian rank at the final point
};

inline Mat fd_jacobian(const MuSystem& sys, const Vec& x, const Vec& f) {
    const int n = static_cast<int>(x.size());
    Mat jac(n, n);
    for (int j = 0; j < n; ++j) {
        const double h = 1e-7 * std::max(1.0, std::abs(x(j)));
        Vec xp = x;
        xp(j) += h;
        jac.col(j) = (sys.residual(xp) - f) / h;
    }
    return jac;
}

inline NewtonOutcome damped_newton(const MuSystem& sys, Vec x, const SolveOptions& opt) {
    NewtonOutcome out;
    const int n = static_cast<int>(x.size());
    Vec f = sys.residual(x);
    const bool positive_mu = sys.g->gamma < 1.0;
    for (int it = 0; it < opt.newton_max_iter; ++it) {
        const double fn = f.lpNorm<Eigen::Infinity>();
        if (!std::isfinite(fn)) break;
        if (fn <= opt.newton_tol) {
            out.converged = true;
            break;
        }
        const Mat jac = fd_jacobian(sys, x, f);
        Eigen::FullPivLU<Mat> lu(jac);
        lu.setThreshold(1e-10);
        Vec step = lu.rank() < n ? Vec(jac.completeOrthogonalDecomposition().solve(-f))
                                 : Vec(lu.solve(-f));
        if (!step.allFinite()) break;
        double alpha = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            Vec xn = x + alpha * step;
            if (positive_mu) xn = xn.cwiseMax(1e-14);
            const Vec fnew = sys.residual(xn);
            if (fnew.allFinite() && fnew.lpNorm<Eigen::Infinity>() < fn) {
                x = xn;
                f = fnew;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
        if (alpha * step.lpNorm<Eigen::Infinity>() <= opt.newton_tol &&
            f.lpNorm<Eigen::Infinity>() <= std::sqrt(opt.newton_tol)) {
            out.converged = f.lpNorm<Eigen::Infinity>() <= 1e-8;
            break;
        }
    }
    if (!out.converged && f.lpNorm<Eigen::Infinity>() <= opt.newton_tol) out.converged = true;
    if (out.converged) {
        Eigen::FullPivLU<Mat> lu(fd_jacobian(sys, x, f));
        lu.setThreshold(1e-8);
        out.rank_deficient = lu.rank() < n;
    }
    out.x = x;
    return out;
}

// Damped sweep fallback: probabilities from the current multipliers, then
// stationarity re-solved linearly on the support and balance rows inverted
// directly off it.
inline NewtonOutcome fixed_point(const MuSystem& sys, Vec x, const SolveOptions& opt) {
    NewtonOutcome out;
    const ContestGame& g = *sys.g;
    const int m = g.size();
    for (int it = 0; it < 2000; ++it) {
        Vec xn = x;
        for (int i : {1, 2}) {
            const Vec mu = sys.mu_of(x, i);
            const auto& supp = sys.support(i);
            const auto& offs = sys.off(i);
            Vec mu_new = mu;
            // stationarity block: (I+rho)^{PP} mu^P = 1 - rho^{P,off} mu^{off}
            Vec rhs = Vec::Ones(supp.size());
            for (size_t r = 0; r < supp.size(); ++r)
                for (int k : offs) rhs(r) -= g.rho(i)(supp[r], k) * mu(k);
            const auto ls = solve_linear(block(sys.a(i), supp, supp), rhs);
            scatter(mu_new, supp, ls.x);
            // balance block: mu_i^k = implied-by-spillover off the support
            const Vec ep = sys.support_efforts(x, i);
            const Vec mi = sys.mu_of(x, i), mj = sys.mu_of(x, 3 - i);
            for (size_t t = 0; t < offs.size(); ++t) {
                const int k = offs[t];
                double spill = 0.0;
                for (size_t l = 0; l < supp.size(); ++l) spill += g.rho(i)(supp[l], k) * ep(l);
                if (sys.pins(i)[t] || spill <= 0.0) {
                    double pinned = 1.0;
                    for (int l = 0; l < m; ++l)
                        if (l != k) pinned -= g.rho(i)(k, l) * mu_new(l);
                    mu_new(k) = std::max(pinned, 0.0);
                    continue;
                }
                // y_i^k = spill pins mu through the Tullock share at k
                const double cj = g.cost(3 - i), ci = g.cost(i);
                const double aj = std::pow(std::max(mj(k), 0.0) * cj, g.gamma);
                const double yk = spill;
                // invert y_i^k = gamma (mu c)^{g-1} aj v / ((mu c)^g + aj)^2 by bisection
                double lo = 0.0, hi = std::max(1.0, 10.0 * mi(k));
                auto val = [&](double mu_try) {
                    return mu_implied_y(g.gamma, g.values(k), mu_try * ci, mj(k) * cj);
                };
                while (val(hi) > yk && hi < 1e12) hi *= 2.0;  // y decreases in own mu
                for (int b = 0; b < 200; ++b) {
                    const double mid = 0.5 * (lo + hi);
                    (val(mid) > yk ? lo : hi) = mid;
                }
                (void)aj;
                mu_new(k) = 0.5 * (lo + hi);
            }
            if (i == 1) xn.head(m) = 0.5 * (sys.mu_of(x, 1) + mu_new);
            else xn.tail(m) = 0.5 * (sys.mu_of(x, 2) + mu_new);
        }
        const double move = (xn - x).lpNorm<Eigen::Infinity>();
        x = xn;
        if (move < opt.newton_tol) break;
    }
    out.x = x;
    out.converged = sys.residual(x).lpNorm<Eigen::Infinity>() <= 1e-8;
    return out;
}

struct CandidateResult {
    std::optional<EquilibriumReport> report;  // set when certified
    bool converged = false;
    EffortProfile efforts;  // reconstructed profile, even if rejected
    Vec slack_excess1, slack_excess2;
    std::string why;
};

inline Vec initial_mu(const ContestGame& g) {
    const int m = g.size();
    Vec x(2 * m);
    for (int i : {1, 2}) {
        const auto ls = solve_linear(Mat::Identity(m, m) + g.rho(i), Vec::Ones(m));
        Vec mu = ls.x.cwiseMax(0.0);
        for (int k = 0; k < m; ++k)
            if (mu(k) == 0.0) mu(k) = 1e-3;
        if (i == 1) x.head(m) = mu;
        else x.tail(m) = mu;
    }
    return x;
}

// Multipliers an effort profile implies through mu_i = gamma p_1 p_2 v / (c_i y_i),
// with the abandoned-battlefield limit gamma v / (c_i y_j). A near-equilibrium
// profile (from best-response dynamics) seeds Newton inside its basin.
inline Vec profile_multipliers(const ContestGame& g, const EffortProfile& e) {
    const int m = g.size();
    const auto y = effective_efforts(g, e);
    const auto p = win_probabilities(g, y);
    Vec x(2 * m);
    for (int i : {1, 2}) {
        const Vec& yi = y.of(i);
        const Vec& yj = y.of(3 - i);
        for (int k = 0; k < m; ++k) {
            double mu = 1e-3;
            if (yi(k) > 1e-12)
                mu = g.gamma * p.p1(k) * p.p2(k) * g.values(k) / (g.cost(i) * yi(k));
            else if (yj(k) > 1e-12)
                mu = g.gamma * g.values(k) / (g.cost(i) * yj(k));
            x((i - 1) * m + k) = std::max(mu, 1e-14);
        }
    }
    return x;
}

// A certified profile sits on an equilibrium continuum when some player can
// slide effort between battlefields without disturbing anything payoff
// relevant: effective efforts are pinned wherever a battlefield is contested
// (uniqueness) or surrendered to this player's opponent (must stay zero), and
// total spend is pinned by stationarity. Movement is available on coordinates
// with positive effort or with an exactly binding zero-effort margin. A null
// direction of the pinned map over those coordinates means a continuum.
inline bool effort_continuum(const ContestGame& g, const EffortProfile& e,
                             const EffectiveEfforts& y, double pos_tol) {
    const int m = g.size();
    for (int i : {1, 2}) {
        const Vec grad = payoff_gradient(g, e, i);
        const Vec& yi = y.of(i);
        const Vec& yj = y.of(3 - i);
        std::vector<int> moveable;
        for (int k = 0; k < m; ++k)
            if (e.of(i)(k) > pos_tol || std::abs(grad(k)) <= 1e-7) moveable.push_back(k);
        std::vector<int> pinned;
        for (int k = 0; k < m; ++k)
            if (yj(k) > pos_tol || yi(k) <= pos_tol) pinned.push_back(k);
        if (moveable.empty()) continue;
        Mat map(pinned.size() + 1, moveable.size());
        const Mat at = Mat(Mat::Identity(m, m) + g.rho(i)).transpose();
        for (size_t r = 0; r < pinned.size(); ++r)
            for (size_t c = 0; c < moveable.size(); ++c) map(r, c) = at(pinned[r], moveable[c]);
        map.row(pinned.size()).setOnes();
        Eigen::CompleteOrthogonalDecomposition<Mat> cod(map);
        cod.setThreshold(1e-8);
        if (cod.rank() < static_cast<Eigen::Index>(moveable.size())) return true;
    }
    return false;
}

inline EquilibriumReport assemble_report(const ContestGame& g, const EffortProfile& e,
                                         const Vec& mu1, const Vec& mu2, SupportPair sup,
                                         SolveMethod method, bool multiplicity, double pos_tol) {
    EquilibriumReport rep;
    rep.efforts = e;
    rep.effective = effective_efforts(g, e);
    rep.mu1 = mu1;
    rep.mu2 = mu2;
    rep.slack1 = Vec::Ones(g.size()) - (mu1 + g.rho1 * mu1);
    rep.slack2 = Vec::Ones(g.size()) - (mu2 + g.rho2 * mu2);
    rep.supports = std::move(sup);
    rep.probabilities = win_probabilities(g, rep.effective);
    rep.partition = equilibrium_partition(rep.effective, pos_tol);
    rep.total1 = e.e1.sum();
    rep.total2 = e.e2.sum();
    std::tie(rep.payoff1, rep.payoff2) = payoffs(g, e);
    rep.kkt = kkt_residual(g, e, pos_tol);
    rep.method = method;
    rep.multiplicity = multiplicity || effort_continuum(g, e, rep.effective, pos_tol);
    return rep;
}

// Check a converged multiplier vector: positive multipliers, strictly positive
// support efforts, no profitable entry off the support, full coverage, and
// finally the profile-level KKT residual. Fills diagnostics either way.
inline bool candidate_checks(const ContestGame& g, const MuSystem& sys, const Vec& x,
                             const SolveOptions& opt, SolveMethod method, bool multiplicity,
                             CandidateResult& res) {
    const int m = g.size();
    const Vec mu1 = sys.mu_of(x, 1), mu2 = sys.mu_of(x, 2);

    EffortProfile e;
    e.e1 = Vec::Zero(m);
    e.e2 = Vec::Zero(m);
    for (int i : {1, 2}) {
        const Vec ep = sys.support_efforts(x, i);
        const auto& supp = sys.support(i);
        for (size_t l = 0; l < supp.size(); ++l) e.of(i)(supp[l]) = ep(l);
    }
    res.efforts = e;
    // Slack excess (how far (I+rho)mu pokes above 1 off the support) guides the
    // greedy search even when the candidate is rejected.
    res.slack_excess1 = (mu1 + g.rho1 * mu1 - Vec::Ones(m)).cwiseMax(0.0);
    res.slack_excess2 = (mu2 + g.rho2 * mu2 - Vec::Ones(m)).cwiseMax(0.0);

    if (mu1.minCoeff() < -1e-9 || mu2.minCoeff() < -1e-9) {
        res.why = "negative multiplier";
        return false;
    }
    for (int i : {1, 2}) {
        for (int k : sys.support(i))
            if (!(e.of(i)(k) > opt.pos_tol)) {
                res.why = "non-positive support effort";
                return false;
            }
        const Vec& excess = i == 1 ? res.slack_excess1 : res.slack_excess2;
        for (int k : sys.off(i))
            if (excess(k) > 1e-9) {
                res.why = "profitable entry off support";
                return false;
            }
    }
    const EffectiveEfforts y = effective_efforts(g, e);
    for (int k = 0; k < m; ++k)
        if (y.y1(k) <= opt.pos_tol && y.y2(k) <= opt.pos_tol) {
            res.why = "uncovered battlefield";
            return false;
        }

    EquilibriumReport rep = assemble_report(g, e, mu1, mu2, sys.sup, method, multiplicity, opt.pos_tol);
    if (rep.kkt > opt.certification_tol(g.gamma)) {
        res.why = "kkt residual " + std::to_string(rep.kkt);
        return false;
    }
    res.report = std::move(rep);
    return true;
}

inline CandidateResult evaluate_candidate(const ContestGame& g, MuSystem& sys,
                                          const SolveOptions& opt, SolveMethod method,
                                          const Vec* warm_start = nullptr) {
    CandidateResult res;

    NewtonOutcome nw;
    if (warm_start) nw = damped_newton(sys, *warm_start, opt);
    if (!nw.converged) {
        const NewtonOutcome in = damped_newton(sys, initial_mu(g), opt);
        if (in.converged) nw = in;
    }
    if (!nw.converged) {
        const NewtonOutcome fp = fixed_point(sys, initial_mu(g), opt);
        if (fp.converged) nw = fp;
    }
    if (!nw.converged) {
        res.why = "no convergence";
        return res;
    }
    res.converged = true;

    const bool multiplicity = sys.rec_rank_deficient || nw.rank_deficient;
    if (candidate_checks(g, sys, nw.x, opt, method, multiplicity, res)) return res;
    if (!multiplicity) return res;

    // Rescue path for equilibrium continua: a multiplier mu_i^k is genuinely
    // free when its whole Jacobian column vanishes (its balance row reads
    // 0 = 0 and no equation of either player feels it). Pin those rows to zero
    // slack, which selects the boundary representative, and re-solve.
    CandidateResult first = res;
    const Vec f0 = sys.residual(nw.x);
    bool pinned_any = false;
    for (int i : {1, 2}) {
        const Vec mj = sys.mu_of(nw.x, 3 - i);
        const auto& offs = sys.off(i);
        for (size_t t = 0; t < offs.size(); ++t) {
            const int k = offs[t];
            if (sys.pins(i)[t] || mj(k) > 1e-6) continue;
            const int col = (i - 1) * g.size() + k;
            const double h = 1e-7 * std::max(1.0, std::abs(nw.x(col)));
            Vec xp = nw.x;
            xp(col) += h;
            if ((sys.residual(xp) - f0).lpNorm<Eigen::Infinity>() / h < 1e-6) {
                sys.pins(i)[t] = 1;
                pinned_any = true;
            }
        }
    }
    if (!pinned_any) return first;
    const NewtonOutcome pinned = damped_newton(sys, nw.x, opt);
    if (pinned.converged && candidate_checks(g, sys, pinned.x, opt, method, true, res)) return res;
    return first;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Interior equilibrium: full supports, multipliers straight from the linear
// stationarity system.

inline std::optional<EquilibriumReport> solve_interior(const ContestGame& g,
                                                       const SolveOptions& opt = {}) {
    const int m = g.size();
    bool multiplicity = false;
    Vec mu[3];
    for (int i : {1, 2}) {
        const auto ls = solve_linear(Mat::Identity(m, m) + g.rho(i), Vec::Ones(m));
        if (ls.residual > 1e-9) return std::nullopt;  // inconsistent singular system
        multiplicity = multiplicity || ls.rank_deficient;
        mu[i] = ls.x;
        if (mu[i].minCoeff() < -1e-12) return std::nullopt;
        mu[i] = mu[i].cwiseMax(0.0);
    }

    EffortProfile e;
    for (int i : {1, 2}) {
        Vec y(m);
        for (int k = 0; k < m; ++k)
            y(k) = detail::mu_implied_y(g.gamma, g.values(k), mu[i](k) * g.cost(i),
                                        mu[3 - i](k) * g.cost(3 - i));
        const auto ls = solve_linear((Mat::Identity(m, m) + g.rho(i)).transpose(), y);
        if (ls.residual > 1e-8 * std::max(1.0, y.lpNorm<Eigen::Infinity>())) return std::nullopt;
        multiplicity = multiplicity || ls.rank_deficient;
        e.of(i) = ls.x;
        if (e.of(i).minCoeff() <= opt.pos_tol) return std::nullopt;
    }

    std::vector<int> full(m);
    for (int k = 0; k < m; ++k) full[k] = k;
    EquilibriumReport rep = detail::assemble_report(g, e, mu[1], mu[2], SupportPair{full, full},
                                                    SolveMethod::Interior, multiplicity, opt.pos_tol);
    if (rep.kkt > opt.certification_tol(g.gamma)) return std::nullopt;
    return rep;
}

// ---------------------------------------------------------------------------
// Equilibrium with prescribed supports.

inline std::optional<EquilibriumReport> solve_support(const ContestGame& g, SupportPair supports,
                                                      const SolveOptions& opt = {}) {
    const int m = g.size();
    for (int i : {1, 2}) {
        auto& s = (i == 1 ? supports.s1 : supports.s2);
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        for (int k : s)
            if (k < 0 || k >= m) throw std::invalid_argument("support index out of range");
    }
    // Every battlefield must be reachable: owned or spilled into by someone.
    for (int k = 0; k < m; ++k) {
        bool covered = false;
        for (int i : {1, 2})
            for (int l : supports.of(i))
                if (l == k || g.rho(i)(l, k) > 0.0) covered = true;
        if (!covered) return std::nullopt;
    }
    detail::MuSystem sys(g, supports);
    auto cand = detail::evaluate_candidate(g, sys, opt, SolveMethod::SupportSearch);
    return std::move(cand.report);
}

// ---------------------------------------------------------------------------
// Full pipeline: interior, then greedy support shrink guided by sign
// violations, then an oracle-seeded support proposal, then exhaustive
// enumeration (lexicographically smallest certified pair) for small m.

inline EquilibriumReport solve(const ContestGame& g, const SolveOptions& opt = {}) {
    {
        const auto rep = validate_game(g);
        if (!rep.ok()) throw std::invalid_argument("invalid game: " + rep.violations.front());
    }
    const int m = g.size();
    if (auto rep = solve_interior(g, opt)) return *rep;

    std::vector<int> full(m);
    for (int k = 0; k < m; ++k) full[k] = k;

    std::set<SupportPair> visited;
    SupportPair cand{full, full};
    for (int round = 0; round < 3 * m; ++round) {
        if (!visited.insert(cand).second) break;
        detail::MuSystem sys(g, cand);
        auto res = detail::evaluate_candidate(g, sys, opt, SolveMethod::SupportSearch);
        if (res.report) return *res.report;
        if (!res.converged) break;
        // Worst violation decides the move: drop a battlefield whose
        // reconstructed effort went negative, else re-admit one whose
        // stationarity exceeds 1.
        int drop_player = 0, drop_k = -1;
        double worst = -opt.pos_tol;
        for (int i : {1, 2})
            for (int k : cand.of(i))
                if (res.efforts.of(i)(k) < worst) {
                    worst = res.efforts.of(i)(k);
                    drop_player = i;
                    drop_k = k;
                }
        if (drop_k >= 0) {
            auto& s = (drop_player == 1 ? cand.s1 : cand.s2);
            if (s.size() <= 1) break;
            s.erase(std::find(s.begin(), s.end(), drop_k));
            continue;
        }
        int add_player = 0, add_k = -1;
        double excess = 1e-9;
        for (int i : {1, 2}) {
            const Vec& ex = (i == 1 ? res.slack_excess1 : res.slack_excess2);
            for (int k : detail::complement(cand.of(i), m))
                if (ex(k) > excess) {
                    excess = ex(k);
                    add_player = i;
                    add_k = k;
                }
        }
        if (add_k < 0) break;
        auto& s = (add_player == 1 ? cand.s1 : cand.s2);
        s.insert(std::upper_bound(s.begin(), s.end(), add_k), add_k);
    }

    if (opt.use_oracle_seed) {
        // Short best-response run; its effort pattern proposes the supports.
        BrOptions bopt;
        bopt.epsilons = {1e-3, 1e-5, 1e-7};
        bopt.max_rounds = 120;
        BrResult br = br_dynamics(g, bopt);
        if (!br.converged) {
            // Plain alternation can orbit an equilibrium; a damped pass settles.
            bopt.damping = 0.5;
            bopt.epsilons = {1e-3, 1e-5, 1e-7, 1e-8};
            bopt.max_rounds = 400;
            const BrResult damped = br_dynamics(g, bopt);
            if (damped.converged) br = damped;
        }
        // Evaluate oracle proposals even when the greedy walk already tried the
        // pair cold: the warm start can converge where initial_mu did not.
        std::set<SupportPair> proposed;
        for (const double thresh : {1e-5, 1e-3, 1e-7}) {
            SupportPair sp;
            EffortProfile trimmed{Vec::Zero(m), Vec::Zero(m)};
            for (int i : {1, 2}) {
                const Vec& ei = br.profile.of(i);
                const double cut = std::max(thresh, 1e-6 * ei.maxCoeff());
                auto& s = (i == 1 ? sp.s1 : sp.s2);
                s = detail::positive_indices(ei, cut);
                if (s.empty()) s = detail::positive_indices(ei, 0.5 * ei.maxCoeff());
                for (int k : s) trimmed.of(i)(k) = ei(k);
            }
            if (!proposed.insert(sp).second) continue;
            visited.insert(sp);
            const Vec warm = detail::profile_multipliers(g, trimmed);
            detail::MuSystem sys(g, sp);
            auto res = detail::evaluate_candidate(g, sys, opt, SolveMethod::OracleRefined, &warm);
            if (res.report) return *res.report;
        }
    }

    if (m <= opt.support_enum_limit) {
        std::vector<std::vector<int>> subsets;
        for (unsigned mask = 1; mask < (1u << m); ++mask) {
            std::vector<int> s;
            for (int k = 0; k < m; ++k)
                if (mask & (1u << k)) s.push_back(k);
            subsets.push_back(std::move(s));
        }
        std::sort(subsets.begin(), subsets.end());
        for (const auto& s1 : subsets)
            for (const auto& s2 : subsets) {
                SupportPair sp{s1, s2};
                if (visited.count(sp)) continue;
                if (auto rep = solve_support(g, sp, opt)) return *rep;
            }
    }
    throw SolveError("no certified equilibrium found");
}

}  // namespace netcontest
