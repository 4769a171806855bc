#pragma once

// Worked examples with their exact expected outcomes, used as the regression
// corpus. Expected values are written as integer ratios or evaluated straight
// from the closed-form expressions, never as rounded decimals.

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netcontest/oracle.hpp"
#include "netcontest/solver.hpp"

namespace netcontest {

struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct RegimeInfo {
    int regime = 0;
    double l1 = 0.0;
    double l2 = 0.0;
    bool at_boundary = false;
};

struct ReferenceCase {
    std::string id;
    ContestGame game;
    std::optional<Vec> e1, e2;
    std::optional<Vec> p1;
    std::optional<Vec> mu1, mu2;
    std::optional<SupportPair> supports;
    double total1 = 0, total2 = 0;
    double payoff1 = 0, payoff2 = 0;
    std::optional<RegimeInfo> regime;
    bool multiplicity_expected = false;
    std::optional<EffortProfile> profile;  // explicit candidate for parameterized families
    std::string note;
};

// --------------------------------------------------------------------------
// game builders

inline ContestGame two_node_game(double c1, double c2, double lambda) {
    Mat rho1 = Mat::Zero(2, 2);
    Mat rho2 = Mat::Zero(2, 2);
    rho2(0, 1) = lambda;
    return make_game(1.0, c1, c2, Vec::Ones(2), rho1, rho2);
}

inline ContestGame star_cycle_game(int m) {
    Mat star = Mat::Zero(m, m);
    for (int k = 1; k < m; ++k) star(0, k) = star(k, 0) = 1.0;
    Mat cycle = Mat::Zero(m, m);
    for (int k = 0; k < m; ++k) {
        int next = (k + 1) % m;
        cycle(k, next) = cycle(next, k) = 1.0;
    }
    return make_game(1.0, 1.0, 1.0, Vec::Ones(m), star, cycle);
}

inline ContestGame star_line_game() {
    int m = 5;
    Mat star = Mat::Zero(m, m);
    for (int k = 1; k < m; ++k) star(0, k) = star(k, 0) = 1.0;
    Mat line = Mat::Zero(m, m);
    for (int k = 0; k + 1 < m; ++k) line(k, k + 1) = line(k + 1, k) = 1.0;
    return make_game(1.0, 1.0, 1.0, Vec::Ones(m), star, line);
}

inline ContestGame hub_spoke_game(int n, double lambda) {
    Mat rho1 = Mat::Zero(n, n);
    Mat rho2 = Mat::Zero(n, n);
    for (int l = 0; l < n; ++l) {
        if (l != 0) rho1(0, l) = lambda;
        if (l != 1) rho2(1, l) = lambda;
    }
    return make_game(1.0, 1.0, 1.0, Vec::Ones(n), rho1, rho2);
}

inline ContestGame multiple_eq_game() {
    Mat rho1(3, 3);
    rho1 << 0.0, 0.5, 3.0,
            0.0, 0.0, 0.0,
            2.0, 0.0, 0.0;
    return make_game(1.0, 1.0, 1.0, Vec::Ones(3), rho1, Mat::Zero(3, 3));
}

// --------------------------------------------------------------------------
// thresholds

inline double two_node_l1(double c1, double c2) {
    return (c1 + c2) * (c1 + 3.0 * c2 - std::sqrt((c1 + c2) * (c1 + 5.0 * c2))) / (2.0 * c2 * c2);
}

inline double two_node_l2(double c1, double c2) {
    double r = (c1 + c2) / c1;
    return r * r;
}

inline double hub_spoke_l1(int n) { return 1.0 / n; }

// positive root of (n-2) x^3 + (2n+3) x^2 + (n-4) x = 1
inline double hub_spoke_l2(int n) {
    auto f = [&](double x) {
        return ((n - 2) * x + (2 * n + 3)) * x * x + (n - 4) * x - 1.0;
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double hub_spoke_l2_trig(int n) {
    double a = static_cast<double>(n) * n + 30.0 * n - 15.0;
    double b = std::pow(static_cast<double>(n), 3) - 63.0 * n * n - 117.0 * n + 135.0;
    double pi = std::acos(-1.0);
    return 2.0 * std::sqrt(a) * std::sin(std::asin(b / std::pow(a, 1.5)) / 3.0 + pi / 3.0) /
               (3.0 * (n - 2)) -
           (2.0 * n + 3.0) / (3.0 * (n - 2));
}

// --------------------------------------------------------------------------
// cases

namespace detail {

inline void finish_case(ReferenceCase& pc) {
    // totals and payoffs follow from the pinned efforts and probabilities
    const Vec& v = pc.game.values;
    pc.total1 = pc.e1->sum();
    pc.total2 = pc.e2->sum();
    pc.payoff1 = (v.array() * pc.p1->array()).sum() - pc.game.cost1 * pc.total1;
    pc.payoff2 = (v.array() * (1.0 - pc.p1->array())).sum() - pc.game.cost2 * pc.total2;
}

}  // namespace detail

inline ReferenceCase case_two_node(double c1, double c2, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("case_two_node: lambda must be >= 0");
    ReferenceCase pc;
    {
        std::ostringstream id;
        id << "two-node-lam" << lambda;
        pc.id = id.str();
    }
    pc.game = two_node_game(c1, c2, lambda);
    double l1 = two_node_l1(c1, c2), l2 = two_node_l2(c1, c2);

    Vec e1(2), e2(2), mu1(2), mu2(2), p1(2);
    RegimeInfo info{0, l1, l2, false};
    if (lambda < l1) {
        info.regime = 1;
        double d1 = c1 + (1.0 - lambda) * c2;
        double d2 = c1 + c2;
        e1 << (1.0 - lambda) * c2 / (d1 * d1), c2 / (d2 * d2);
        e2 << c1 / (d1 * d1), c1 / (d2 * d2) - lambda * c1 / (d1 * d1);
        mu1 << 1.0, 1.0;
        mu2 << 1.0 - lambda, 1.0;
        p1 << (1.0 - lambda) * c2 / d1, c2 / d2;
        pc.supports = SupportPair{{0, 1}, {0, 1}};
    } else if (lambda < l2) {
        info.regime = 2;
        info.at_boundary = lambda == l1;
        double s = std::sqrt(lambda);
        double d = c1 * (1.0 + lambda) + c2;
        e1 << (c2 + s * (s - 1.0) * c1) * (1.0 + s) / (d * d),
              (c2 - (s - 1.0) * c1) * s * (1.0 + s) / (d * d);
        e2 << (1.0 + s) * (1.0 + s) * c1 / (d * d), 0.0;
        mu1 << 1.0, 1.0;
        mu2 << (c2 + s * (s - 1.0) * c1) / ((1.0 + s) * c2),
               (c2 - (s - 1.0) * c1) / (s * (1.0 + s) * c2);
        p1 << mu2[0] * c2 / (c1 + mu2[0] * c2), mu2[1] * c2 / (c1 + mu2[1] * c2);
        pc.supports = SupportPair{{0, 1}, {0}};
    } else {
        info.regime = 3;
        info.at_boundary = lambda == l2;
        double d = c1 + c2;
        e1 << c2 / (d * d), 0.0;
        e2 << c1 / (d * d), 0.0;
        mu1 << 1.0, l2 / lambda;
        mu2 << 1.0, 0.0;
        p1 << c2 / d, 0.0;
        pc.supports = SupportPair{{0}, {0}};
    }
    pc.e1 = e1;
    pc.e2 = e2;
    pc.mu1 = mu1;
    pc.mu2 = mu2;
    pc.p1 = p1;
    pc.regime = info;
    detail::finish_case(pc);
    return pc;
}

inline ReferenceCase case_star_cycle(int m) {
    if (m < 4) throw std::invalid_argument("case_star_cycle: needs m >= 4");
    ReferenceCase pc;
    pc.id = "star-cycle-m" + std::to_string(m);
    pc.game = star_cycle_game(m);
    pc.multiplicity_expected = m % 3 == 0;

    Rational prob{m, m + 3};
    Rational hub_effort{3LL * m * m, static_cast<long long>(m + 3) * (m + 3)};
    Rational cycle_effort{3LL * m, static_cast<long long>(m + 3) * (m + 3)};
    pc.p1 = Vec::Constant(m, prob.value());
    pc.mu1 = Vec::Constant(m, 1.0 / m);
    pc.mu2 = Vec::Constant(m, Rational{1, 3}.value());
    Vec e1 = Vec::Zero(m);
    e1[0] = hub_effort.value();
    pc.e1 = e1;
    pc.total1 = pc.total2 = hub_effort.value();
    pc.payoff1 = Rational{static_cast<long long>(m) * m * m,
                          static_cast<long long>(m + 3) * (m + 3)}.value();
    pc.payoff2 = Rational{9LL * m, static_cast<long long>(m + 3) * (m + 3)}.value();
    if (!pc.multiplicity_expected) {
        pc.e2 = Vec::Constant(m, cycle_effort.value());
        std::vector<int> all(m);
        for (int k = 0; k < m; ++k) all[k] = k;
        pc.supports = SupportPair{{0}, all};
    } else {
        pc.note = "cycle length divisible by 3: the cycle player's efforts form a continuum "
                  "with common effective efforts, totals, and payoffs";
    }
    return pc;
}

inline ReferenceCase case_star_line() {
    ReferenceCase pc;
    pc.id = "star-line";
    pc.game = star_line_game();
    Vec mu1(5), mu2(5), p1(5), e1(5), e2(5);
    mu1 << 8, 8, 9, 8, 8;
    mu1 /= 41.0;
    mu2 << 16, 16, 9, 16, 16;
    mu2 /= 41.0;
    double third = Rational{1, 3}.value();
    p1 << 2 * third, 2 * third, 0.5, 2 * third, 2 * third;
    e1 << Rational{41, 36}.value(), 0, 0, 0, 0;
    e2 << 0, Rational{41, 72}.value(), 0, Rational{41, 72}.value(), 0;
    pc.mu1 = mu1;
    pc.mu2 = mu2;
    pc.p1 = p1;
    pc.e1 = e1;
    pc.e2 = e2;
    pc.supports = SupportPair{{0}, {1, 3}};
    pc.total1 = pc.total2 = Rational{41, 36}.value();
    pc.payoff1 = Rational{73, 36}.value();
    pc.payoff2 = Rational{25, 36}.value();
    return pc;
}

inline ReferenceCase case_hub_spoke(int n, double lambda) {
    if (n < 3) throw std::invalid_argument("case_hub_spoke: needs n >= 3");
    if (lambda < 0.0) throw std::invalid_argument("case_hub_spoke: lambda must be >= 0");
    ReferenceCase pc;
    {
        std::ostringstream id;
        id << "hub-spoke-n" << n << "-lam" << lambda;
        pc.id = id.str();
    }
    pc.game = hub_spoke_game(n, lambda);
    double l1 = hub_spoke_l1(n), l2 = hub_spoke_l2(n);

    // own hub, other's hub, and a common spoke value per player; player 2's
    // efforts mirror player 1's with the hub battlefields swapped
    double own_hub, other_hub, spoke;
    double p_own, p_other;
    Vec mu1(n), mu2(n);
    RegimeInfo info{0, l1, l2, false};
    std::vector<int> all(n);
    for (int k = 0; k < n; ++k) all[k] = k;
    if (lambda < l1) {
        info.regime = 1;
        double d = 2.0 - (n - 1) * lambda;
        own_hub = 1.0 / (d * d);
        other_hub = (1.0 - n * lambda) / (d * d);
        spoke = 0.25 - lambda / (d * d);
        p_own = 1.0 / d;
        p_other = (1.0 - (n - 1) * lambda) / d;
        mu1.setOnes();
        mu2.setOnes();
        mu1[0] = mu2[1] = 1.0 - (n - 1) * lambda;
        pc.supports = SupportPair{all, all};
    } else if (lambda < l2) {
        info.regime = 2;
        info.at_boundary = lambda == l1;
        double d = (1.0 + lambda) * (1.0 + lambda) * (1.0 - (n - 2) * lambda);
        own_hub = 2.0 * lambda / d;
        other_hub = 0.0;
        spoke = 0.25 - 2.0 * lambda * lambda / d;
        p_own = 1.0 / (1.0 + lambda);
        p_other = lambda / (1.0 + lambda);
        mu1.setOnes();
        mu2.setOnes();
        mu1[0] = mu2[1] = (1.0 - (n - 2) * lambda) / 2.0;
        mu1[1] = mu2[0] = (1.0 - (n - 2) * lambda) / (2.0 * lambda);
        std::vector<int> no_hub2 = all, no_hub1 = all;
        no_hub2.erase(no_hub2.begin() + 1);
        no_hub1.erase(no_hub1.begin());
        pc.supports = SupportPair{no_hub2, no_hub1};
    } else {
        info.regime = 3;
        info.at_boundary = lambda == l2;
        double d = 2.0 * (n + 2) * lambda + (n - 2) * (1.0 + lambda * lambda);
        own_hub = (n - 2) / 4.0 + 2.0 * lambda / ((1.0 + lambda) * (1.0 + lambda));
        other_hub = 0.0;
        spoke = 0.0;
        p_own = 1.0 / (1.0 + lambda);
        p_other = lambda / (1.0 + lambda);
        mu1.setConstant((1.0 + lambda) * (1.0 + lambda) / (lambda * d));
        mu2 = mu1;
        mu1[0] = mu2[1] = 4.0 * lambda / d;
        mu1[1] = mu2[0] = 4.0 / d;
        pc.supports = SupportPair{{0}, {1}};
    }
    Vec e1 = Vec::Constant(n, spoke), e2 = Vec::Constant(n, spoke), p1 = Vec::Constant(n, 0.5);
    e1[0] = own_hub;
    e1[1] = other_hub;
    e2[1] = own_hub;
    e2[0] = other_hub;
    p1[0] = p_own;
    p1[1] = p_other;
    pc.e1 = e1;
    pc.e2 = e2;
    pc.mu1 = mu1;
    pc.mu2 = mu2;
    pc.p1 = p1;
    pc.regime = info;
    detail::finish_case(pc);
    return pc;
}

inline ReferenceCase case_multiple_eq(double mu_param) {
    if (!(mu_param > 0.75) || !(mu_param < 4.5))
        throw std::invalid_argument("case_multiple_eq: parameter must lie in (3/4, 9/2)");
    ReferenceCase pc;
    {
        std::ostringstream id;
        id << "multiple-eq-mu" << mu_param;
        pc.id = id.str();
    }
    pc.game = multiple_eq_game();
    pc.multiplicity_expected = true;

    double third = Rational{1, 3}.value();
    Vec p1(3), e2(3), mu1(3);
    p1 << 2 * third, 0.5, 1.0;
    e2 << Rational{2, 9}.value(), 0.25, 0.0;
    mu1 << 0.5, 1.0, 0.0;
    pc.p1 = p1;
    pc.e2 = e2;
    pc.mu1 = mu1;
    pc.total1 = pc.total2 = Rational{17, 36}.value();
    pc.payoff1 = Rational{61, 36}.value();
    pc.payoff2 = Rational{13, 36}.value();

    Vec e1(3);
    e1 << (18.0 - 4.0 * mu_param) / (45.0 * mu_param),
          (53.0 * mu_param - 36.0) / (180.0 * mu_param),
          (4.0 * mu_param - 3.0) / (15.0 * mu_param);
    pc.profile = EffortProfile{e1, e2};
    if (mu_param > 1.0)
        pc.note = "parameters above 1 satisfy the stationarity system but leave player 2 a "
                  "profitable entry on battlefield 3; only parameters up to 1 certify";
    return pc;
}

// --------------------------------------------------------------------------
// corpus

inline std::vector<ReferenceCase> default_corpus() {
    std::vector<ReferenceCase> cases;
    for (int m : {4, 5, 7, 8, 10}) cases.push_back(case_star_cycle(m));
    cases.push_back(case_star_line());
    for (double lam : {0.0, 0.2, 0.6, 2.0, 9.0, 12.0}) cases.push_back(case_two_node(1.0, 2.0, lam));
    for (double lam : {0.05, 0.113, 0.5}) cases.push_back(case_hub_spoke(10, lam));
    cases.push_back(case_multiple_eq(1.0));
    return cases;
}

struct QuantityCheck {
    std::string name;
    double expected = 0.0, actual = 0.0;
    bool passed = false;
};

struct CaseResult {
    std::string id;
    std::vector<QuantityCheck> checks;
    std::string method;
    std::string oracle_verdict = "skipped";
    bool regime_boundary = false;
    bool solver_failed = false;
    std::string error;

    bool passed() const {
        if (solver_failed) return false;
        if (oracle_verdict == "disagree") return false;
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    double worst_error() const {
        double w = 0.0;
        for (const auto& c : checks) w = std::max(w, std::abs(c.actual - c.expected));
        return w;
    }
};

struct CorpusReport {
    std::vector<CaseResult> results;
    double tolerance = 0.0;

    bool all_passed() const {
        for (const auto& r : results)
            if (!r.passed()) return false;
        return true;
    }

    std::string to_string() const {
        std::ostringstream out;
        for (const auto& r : results) {
            int bad = 0;
            for (const auto& c : r.checks)
                if (!c.passed) ++bad;
            out << (r.passed() ? "pass" : "FAIL") << "  " << r.id << "  method=" << r.method
                << "  oracle=" << r.oracle_verdict << "  checks=" << r.checks.size() - bad << "/"
                << r.checks.size() << "  worst=" << r.worst_error();
            if (r.regime_boundary) out << "  [regime boundary]";
            if (r.solver_failed) out << "  error: " << r.error;
            out << "\n";
            for (const auto& c : r.checks)
                if (!c.passed)
                    out << "      " << c.name << ": expected " << c.expected << " got " << c.actual
                        << "\n";
        }
        return out.str();
    }
};

namespace detail {

inline void check_value(CaseResult& res, const std::string& name, double expected, double actual,
                        double tol) {
    res.checks.push_back({name, expected, actual, std::abs(actual - expected) <= tol});
}

inline void check_vector(CaseResult& res, const std::string& name, const Vec& expected,
                         const Vec& actual, double tol) {
    for (int k = 0; k < expected.size(); ++k)
        check_value(res, name + "[" + std::to_string(k + 1) + "]", expected[k], actual[k], tol);
}

}  // namespace detail

inline CaseResult run_case(const ReferenceCase& pc, double tol = 1e-9, bool with_oracle = true) {
    CaseResult res;
    res.id = pc.id;
    res.regime_boundary = pc.regime && pc.regime->at_boundary;
    EquilibriumReport rep;
    try {
        rep = solve(pc.game);
    } catch (const std::exception& ex) {
        res.solver_failed = true;
        res.error = ex.what();
        return res;
    }
    res.method = to_string(rep.method);

    detail::check_value(res, "total1", pc.total1, rep.total1, tol);
    detail::check_value(res, "total2", pc.total2, rep.total2, tol);
    detail::check_value(res, "payoff1", pc.payoff1, rep.payoff1, tol);
    detail::check_value(res, "payoff2", pc.payoff2, rep.payoff2, tol);
    if (pc.p1) detail::check_vector(res, "p1", *pc.p1, rep.probabilities.p1, tol);
    if (pc.e1 && !pc.multiplicity_expected) detail::check_vector(res, "e1", *pc.e1, rep.efforts.e1, tol);
    if (pc.e2 && !pc.multiplicity_expected) detail::check_vector(res, "e2", *pc.e2, rep.efforts.e2, tol);
    if (pc.mu1 && !pc.multiplicity_expected) detail::check_vector(res, "mu1", *pc.mu1, rep.mu1, tol);
    if (pc.mu2 && !pc.multiplicity_expected) detail::check_vector(res, "mu2", *pc.mu2, rep.mu2, tol);
    if (pc.supports && !pc.multiplicity_expected) {
        bool same = rep.supports.s1 == pc.supports->s1 && rep.supports.s2 == pc.supports->s2;
        res.checks.push_back({"supports", 1.0, same ? 1.0 : 0.0, same});
    }
    if (pc.multiplicity_expected)
        res.checks.push_back({"multiplicity flag", 1.0, rep.multiplicity ? 1.0 : 0.0,
                              rep.multiplicity});

    if (with_oracle) {
        AgreementReport agree = cross_validate(pc.game, rep);
        res.oracle_verdict = to_string(agree.verdict);
    }
    return res;
}

inline CorpusReport run_all(double tol = 1e-9, bool with_oracle = true) {
    CorpusReport out;
    out.tolerance = tol;
    for (const auto& pc : default_corpus()) out.results.push_back(run_case(pc, tol, with_oracle));
    return out;
}

// Internal consistency of a transcribed case: totals from the probability
// form, payoffs from values and totals, and the constant-sum identity.
inline double self_consistency_error(const ReferenceCase& pc) {
    const ContestGame& g = pc.game;
    const Vec& p1 = *pc.p1;
    Vec pp = p1.array() * (1.0 - p1.array()) * g.values.array();
    double err = 0.0;
    err = std::max(err, std::abs(pc.total1 - g.gamma / g.cost1 * pp.sum()));
    err = std::max(err, std::abs(pc.total2 - g.gamma / g.cost2 * pp.sum()));
    err = std::max(err, std::abs(pc.payoff1 - ((g.values.array() * p1.array()).sum() -
                                               g.cost1 * pc.total1)));
    err = std::max(err, std::abs(pc.payoff2 - ((g.values.array() * (1.0 - p1.array())).sum() -
                                               g.cost2 * pc.total2)));
    err = std::max(err, std::abs(pc.payoff1 + pc.payoff2 + g.cost1 * pc.total1 +
                                 g.cost2 * pc.total2 - g.values.sum()));
    return err;
}

}  // namespace netcontest
