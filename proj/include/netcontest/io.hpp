#pragma once

// JSON game files, equilibrium report serialization, CSV tables.
//
// Game file format:
//   {"gamma": 1.0, "costs": [c1, c2], "values": [v1, ..., vm],
//    "rho1": [[...]], "rho2": [[...]]}
// Row k, column l of a spillover matrix is the weight of the link from
// battlefield k to battlefield l. Unknown keys are ignored; the endogenous
// extension adds "rho_bounds": 1.0. All indices in emitted JSON are 1-based.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "netcontest/design.hpp"
#include "netcontest/oracle.hpp"
#include "netcontest/repro.hpp"
#include "netcontest/solver.hpp"

namespace netcontest {

using ordered_json = nlohmann::ordered_json;

// --------------------------------------------------------------------------
// primitives

inline ordered_json vec_to_json(const Vec& v) {
    ordered_json a = ordered_json::array();
    for (int k = 0; k < v.size(); ++k) a.push_back(v[k]);
    return a;
}

inline Vec vec_from_json(const ordered_json& j, const std::string& field) {
    if (!j.is_array()) throw std::invalid_argument("field \"" + field + "\" must be an array");
    Vec v(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number())
            throw std::invalid_argument("field \"" + field + "\" entry " + std::to_string(k + 1) +
                                        " must be a number");
        v[static_cast<int>(k)] = j[k].get<double>();
    }
    return v;
}

inline ordered_json mat_to_json(const Mat& m) {
    ordered_json rows = ordered_json::array();
    for (int k = 0; k < m.rows(); ++k) {
        ordered_json row = ordered_json::array();
        for (int l = 0; l < m.cols(); ++l) row.push_back(m(k, l));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Mat mat_from_json(const ordered_json& j, const std::string& field) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("field \"" + field + "\" must be a non-empty array of rows");
    const std::size_t m = j.size();
    Mat out(m, m);
    for (std::size_t k = 0; k < m; ++k) {
        if (!j[k].is_array() || j[k].size() != m)
            throw std::invalid_argument("field \"" + field + "\" row " + std::to_string(k + 1) +
                                        " must have " + std::to_string(m) + " entries");
        for (std::size_t l = 0; l < m; ++l) {
            if (!j[k][l].is_number())
                throw std::invalid_argument("field \"" + field + "\" entry (" +
                                            std::to_string(k + 1) + "," + std::to_string(l + 1) +
                                            ") must be a number");
            out(static_cast<int>(k), static_cast<int>(l)) = j[k][l].get<double>();
        }
    }
    return out;
}

inline ordered_json indices_to_json(const std::vector<int>& idx) {
    ordered_json a = ordered_json::array();
    for (int k : idx) a.push_back(k + 1);
    return a;
}

inline std::vector<int> indices_from_json(const ordered_json& j, const std::string& field) {
    if (!j.is_array()) throw std::invalid_argument("field \"" + field + "\" must be an array");
    std::vector<int> out;
    for (const auto& x : j) out.push_back(x.get<int>() - 1);
    return out;
}

namespace detail {

inline const ordered_json& require_field(const ordered_json& j, const std::string& field) {
    auto it = j.find(field);
    if (it == j.end()) throw std::invalid_argument("missing field \"" + field + "\"");
    return *it;
}

inline double require_number(const ordered_json& j, const std::string& field) {
    const ordered_json& v = require_field(j, field);
    if (!v.is_number()) throw std::invalid_argument("field \"" + field + "\" must be a number");
    return v.get<double>();
}

}  // namespace detail

// --------------------------------------------------------------------------
// games

inline ordered_json game_to_json(const ContestGame& g) {
    ordered_json j;
    j["gamma"] = g.gamma;
    j["costs"] = ordered_json::array({g.cost1, g.cost2});
    j["values"] = vec_to_json(g.values);
    j["rho1"] = mat_to_json(g.rho1);
    j["rho2"] = mat_to_json(g.rho2);
    return j;
}

inline ContestGame game_from_json(const ordered_json& j) {
    if (!j.is_object()) throw std::invalid_argument("game file must contain a JSON object");
    const double gamma = detail::require_number(j, "gamma");
    const ordered_json& costs = detail::require_field(j, "costs");
    if (!costs.is_array() || costs.size() != 2 || !costs[0].is_number() || !costs[1].is_number())
        throw std::invalid_argument("field \"costs\" must be an array of two numbers");
    const Vec values = vec_from_json(detail::require_field(j, "values"), "values");
    Mat rho1 = mat_from_json(detail::require_field(j, "rho1"), "rho1");
    Mat rho2 = mat_from_json(detail::require_field(j, "rho2"), "rho2");
    if (rho1.rows() != values.size() || rho2.rows() != values.size())
        throw std::invalid_argument("spillover matrices must be m x m with m = values length");
    return make_game(gamma, costs[0].get<double>(), costs[1].get<double>(), values,
                     std::move(rho1), std::move(rho2));
}

inline std::optional<double> rho_bound_from_json(const ordered_json& j) {
    auto it = j.find("rho_bounds");
    if (it == j.end()) return std::nullopt;
    if (!it->is_number()) throw std::invalid_argument("field \"rho_bounds\" must be a number");
    return it->get<double>();
}

inline ordered_json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& ex) {
        throw std::invalid_argument(path + ": " + ex.what());
    }
}

inline ContestGame load_game(const std::string& path) {
    try {
        return game_from_json(parse_json_file(path));
    } catch (const std::invalid_argument& ex) {
        throw std::invalid_argument(path + ": " + ex.what());
    }
}

inline void write_json_file(const std::string& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
    out << j.dump(2) << "\n";
}

// --------------------------------------------------------------------------
// equilibrium reports

inline ordered_json report_to_json(const EquilibriumReport& rep) {
    ordered_json j;
    j["method"] = to_string(rep.method);
    j["efforts"] = {{"player1", vec_to_json(rep.efforts.e1)}, {"player2", vec_to_json(rep.efforts.e2)}};
    j["effective_efforts"] = {{"player1", vec_to_json(rep.effective.y1)},
                              {"player2", vec_to_json(rep.effective.y2)}};
    j["mu"] = {{"player1", vec_to_json(rep.mu1)}, {"player2", vec_to_json(rep.mu2)}};
    j["slacks"] = {{"player1", vec_to_json(rep.slack1)}, {"player2", vec_to_json(rep.slack2)}};
    j["supports"] = {{"player1", indices_to_json(rep.supports.s1)},
                     {"player2", indices_to_json(rep.supports.s2)}};
    j["probabilities"] = {{"player1", vec_to_json(rep.probabilities.p1)},
                          {"player2", vec_to_json(rep.probabilities.p2)}};
    j["partition"] = {{"contested", indices_to_json(rep.partition.contested)},
                      {"only_player1", indices_to_json(rep.partition.only1)},
                      {"only_player2", indices_to_json(rep.partition.only2)}};
    j["totals"] = {{"player1", rep.total1}, {"player2", rep.total2}};
    j["payoffs"] = {{"player1", rep.payoff1}, {"player2", rep.payoff2}};
    j["kkt_residual"] = rep.kkt;
    j["multiple_equilibria"] = rep.multiplicity;
    return j;
}

inline EquilibriumReport report_from_json(const ordered_json& j) {
    EquilibriumReport rep;
    const std::string method = detail::require_field(j, "method").get<std::string>();
    if (method == "interior") rep.method = SolveMethod::Interior;
    else if (method == "support-search") rep.method = SolveMethod::SupportSearch;
    else if (method == "oracle-refined") rep.method = SolveMethod::OracleRefined;
    else throw std::invalid_argument("unknown method tag: " + method);
    const auto& eff = detail::require_field(j, "efforts");
    rep.efforts.e1 = vec_from_json(detail::require_field(eff, "player1"), "efforts.player1");
    rep.efforts.e2 = vec_from_json(detail::require_field(eff, "player2"), "efforts.player2");
    const auto& y = detail::require_field(j, "effective_efforts");
    rep.effective.y1 = vec_from_json(detail::require_field(y, "player1"), "effective_efforts.player1");
    rep.effective.y2 = vec_from_json(detail::require_field(y, "player2"), "effective_efforts.player2");
    const auto& mu = detail::require_field(j, "mu");
    rep.mu1 = vec_from_json(detail::require_field(mu, "player1"), "mu.player1");
    rep.mu2 = vec_from_json(detail::require_field(mu, "player2"), "mu.player2");
    const auto& slacks = detail::require_field(j, "slacks");
    rep.slack1 = vec_from_json(detail::require_field(slacks, "player1"), "slacks.player1");
    rep.slack2 = vec_from_json(detail::require_field(slacks, "player2"), "slacks.player2");
    const auto& sup = detail::require_field(j, "supports");
    rep.supports.s1 = indices_from_json(detail::require_field(sup, "player1"), "supports.player1");
    rep.supports.s2 = indices_from_json(detail::require_field(sup, "player2"), "supports.player2");
    const auto& pr = detail::require_field(j, "probabilities");
    rep.probabilities.p1 = vec_from_json(detail::require_field(pr, "player1"), "probabilities.player1");
    rep.probabilities.p2 = vec_from_json(detail::require_field(pr, "player2"), "probabilities.player2");
    const auto& part = detail::require_field(j, "partition");
    rep.partition.contested = indices_from_json(detail::require_field(part, "contested"), "contested");
    rep.partition.only1 = indices_from_json(detail::require_field(part, "only_player1"), "only_player1");
    rep.partition.only2 = indices_from_json(detail::require_field(part, "only_player2"), "only_player2");
    const auto& totals = detail::require_field(j, "totals");
    rep.total1 = detail::require_number(totals, "player1");
    rep.total2 = detail::require_number(totals, "player2");
    const auto& payoffs = detail::require_field(j, "payoffs");
    rep.payoff1 = detail::require_number(payoffs, "player1");
    rep.payoff2 = detail::require_number(payoffs, "player2");
    rep.kkt = detail::require_number(j, "kkt_residual");
    rep.multiplicity = detail::require_field(j, "multiple_equilibria").get<bool>();
    return rep;
}

// --------------------------------------------------------------------------
// designed networks: a loadable game fragment plus design metadata

inline ordered_json designed_to_json(const DesignedNetworks& d, double c1, double c2, double gamma,
                                     const Vec& values) {
    ordered_json j;
    j["gamma"] = gamma;
    j["costs"] = ordered_json::array({c1, c2});
    j["values"] = vec_to_json(values);
    j["rho1"] = mat_to_json(d.rho1);
    j["rho2"] = mat_to_json(d.rho2);
    j["target"] = to_string(d.target);
    ordered_json params;
    for (const auto& [name, value] : d.parameters) params[name] = value;
    j["parameters"] = std::move(params);
    j["handicap"] = d.handicap;
    if (!d.note.empty()) j["note"] = d.note;
    return j;
}

inline ordered_json verification_to_json(const VerificationReport& rep) {
    ordered_json checks = ordered_json::array();
    for (const auto& c : rep.checks) {
        ordered_json item;
        item["name"] = c.name;
        item["passed"] = c.passed;
        if (!c.detail.empty()) item["detail"] = c.detail;
        checks.push_back(std::move(item));
    }
    ordered_json j;
    j["ok"] = rep.ok();
    j["checks"] = std::move(checks);
    return j;
}

inline ordered_json corpus_report_to_json(const CorpusReport& rep) {
    ordered_json results = ordered_json::array();
    for (const auto& r : rep.results) {
        ordered_json item;
        item["id"] = r.id;
        item["passed"] = r.passed();
        item["method"] = r.method;
        item["oracle"] = r.oracle_verdict;
        item["worst_error"] = r.worst_error();
        if (r.regime_boundary) item["regime_boundary"] = true;
        if (r.solver_failed) item["error"] = r.error;
        ordered_json checks = ordered_json::array();
        for (const auto& c : r.checks) {
            ordered_json cj;
            cj["name"] = c.name;
            cj["expected"] = c.expected;
            cj["actual"] = c.actual;
            cj["passed"] = c.passed;
            checks.push_back(std::move(cj));
        }
        item["checks"] = std::move(checks);
        results.push_back(std::move(item));
    }
    ordered_json j;
    j["tolerance"] = rep.tolerance;
    j["all_passed"] = rep.all_passed();
    j["results"] = std::move(results);
    return j;
}

// --------------------------------------------------------------------------
// CSV helpers: doubles printed with 17 significant digits round-trip exactly

inline std::string csv_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string csv_sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        rows.push_back(std::move(cells));
    }
    return rows;
}

inline std::string br_trace_to_csv(const BrResult& res) {
    std::ostringstream out;
    out << "epsilon,round,movement,total1,total2\n";
    for (const auto& row : res.trace)
        out << csv_double(row.epsilon) << "," << row.round << "," << csv_double(row.movement)
            << "," << csv_double(row.total1) << "," << csv_double(row.total2) << "\n";
    return out.str();
}

}  // namespace netcontest
