#pragma once

// Parameter sweeps: re-solve a base game along a grid of values for one
// scalar parameter and emit a CSV table (the data behind the effort-vs-
// spillover figures).

#include <atomic>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "netcontest/io.hpp"
#include "netcontest/solver.hpp"

namespace netcontest {

// Parameter paths: "gamma", "cost1", "cost2", "value[k]", "rho1[k,l]",
// "rho2[k,l]" with 1-based indices, or "rho1.weights" / "rho2.weights" /
// "rho.weights" which assign the value to every link that is nonzero in the
// base game (the base acts as a mask fixing the network shape).
struct SweepSpec {
    ContestGame base;
    std::string parameter_path;
    std::vector<double> grid;
    std::vector<std::string> outputs;  // empty = all columns
};

struct SweepRow {
    double parameter = 0.0;
    bool solved = false;
    bool support_change = false;
    std::string error;
    std::optional<EquilibriumReport> report;
};

struct SweepTable {
    SweepSpec spec;
    std::vector<SweepRow> rows;

    bool all_solved() const {
        for (const auto& r : rows)
            if (!r.solved) return false;
        return true;
    }
};

namespace detail {

struct ParsedPath {
    enum Kind { Gamma, Cost1, Cost2, Value, RhoEntry, RhoWeights } kind;
    int player = 0;  // for RhoEntry / RhoWeights; 0 = both (rho.weights)
    int row = -1, col = -1;
};

inline ParsedPath parse_parameter_path(const std::string& path, int m) {
    auto bad = [&](const std::string& why) {
        return std::invalid_argument("parameter path \"" + path + "\": " + why);
    };
    if (path == "gamma") return {ParsedPath::Gamma};
    if (path == "cost1") return {ParsedPath::Cost1};
    if (path == "cost2") return {ParsedPath::Cost2};
    if (path == "rho.weights") return {ParsedPath::RhoWeights, 0};
    if (path == "rho1.weights") return {ParsedPath::RhoWeights, 1};
    if (path == "rho2.weights") return {ParsedPath::RhoWeights, 2};
    auto parse_index = [&](const std::string& s) {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw bad("malformed index \"" + s + "\"");
        return v;
    };
    if (path.rfind("value[", 0) == 0 && path.back() == ']') {
        int k = parse_index(path.substr(6, path.size() - 7));
        if (k < 1 || k > m) throw bad("battlefield index out of range");
        return {ParsedPath::Value, 0, -1, k - 1};
    }
    for (int player : {1, 2}) {
        const std::string prefix = "rho" + std::to_string(player) + "[";
        if (path.rfind(prefix, 0) == 0 && path.back() == ']') {
            const std::string inner = path.substr(prefix.size(), path.size() - prefix.size() - 1);
            const auto comma = inner.find(',');
            if (comma == std::string::npos) throw bad("expected \"rho" +
                                                      std::to_string(player) + "[k,l]\"");
            int k = parse_index(inner.substr(0, comma));
            int l = parse_index(inner.substr(comma + 1));
            if (k < 1 || k > m || l < 1 || l > m) throw bad("battlefield index out of range");
            if (k == l) throw bad("diagonal entries must stay zero");
            return {ParsedPath::RhoEntry, player, k - 1, l - 1};
        }
    }
    throw bad("unknown parameter");
}

inline void set_masked_weights(Mat& rho, const Mat& base, double value) {
    for (int k = 0; k < base.rows(); ++k)
        for (int l = 0; l < base.cols(); ++l)
            if (base(k, l) != 0.0) rho(k, l) = value;
}

}  // namespace detail

inline ContestGame apply_parameter(const ContestGame& base, const std::string& path, double value) {
    const detail::ParsedPath p = detail::parse_parameter_path(path, base.size());
    ContestGame g = base;
    switch (p.kind) {
        case detail::ParsedPath::Gamma: g.gamma = value; break;
        case detail::ParsedPath::Cost1: g.cost1 = value; break;
        case detail::ParsedPath::Cost2: g.cost2 = value; break;
        case detail::ParsedPath::Value: g.values[p.col] = value; break;
        case detail::ParsedPath::RhoEntry: g.rho(p.player)(p.row, p.col) = value; break;
        case detail::ParsedPath::RhoWeights:
            if (p.player != 2) detail::set_masked_weights(g.rho1, base.rho1, value);
            if (p.player != 1) detail::set_masked_weights(g.rho2, base.rho2, value);
            break;
    }
    return g;
}

inline SweepTable run_sweep(const SweepSpec& spec, int jobs = 1, const SolveOptions& opt = {}) {
    if (spec.grid.empty()) throw std::invalid_argument("sweep grid must be non-empty");
    detail::parse_parameter_path(spec.parameter_path, spec.base.size());

    SweepTable table;
    table.spec = spec;
    table.rows.resize(spec.grid.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= spec.grid.size()) return;
            SweepRow& row = table.rows[i];
            row.parameter = spec.grid[i];
            try {
                const ContestGame g = apply_parameter(spec.base, spec.parameter_path, spec.grid[i]);
                row.report = solve(g, opt);
                row.solved = true;
            } catch (const std::exception& ex) {
                row.error = ex.what();
            }
        }
    };

    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(spec.grid.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // flag grid points where the support pair differs from the previous solved point
    const SweepRow* prev = nullptr;
    for (auto& row : table.rows) {
        if (!row.solved) continue;
        if (prev && !(prev->report->supports == row.report->supports)) row.support_change = true;
        prev = &row;
    }
    return table;
}

// --------------------------------------------------------------------------
// serialization

inline SweepSpec sweep_spec_from_json(const ordered_json& j) {
    SweepSpec spec;
    spec.base = game_from_json(detail::require_field(j, "base_game"));
    spec.parameter_path = detail::require_field(j, "parameter_path").get<std::string>();
    const ordered_json& grid = detail::require_field(j, "grid");
    if (!grid.is_array() || grid.empty())
        throw std::invalid_argument("field \"grid\" must be a non-empty array of numbers");
    for (const auto& x : grid) {
        if (!x.is_number()) throw std::invalid_argument("field \"grid\" entries must be numbers");
        spec.grid.push_back(x.get<double>());
    }
    if (auto it = j.find("outputs"); it != j.end())
        for (const auto& name : *it) spec.outputs.push_back(name.get<std::string>());
    detail::parse_parameter_path(spec.parameter_path, spec.base.size());
    return spec;
}

inline SweepSpec load_sweep_spec(const std::string& path) {
    try {
        return sweep_spec_from_json(parse_json_file(path));
    } catch (const std::invalid_argument& ex) {
        std::string what = ex.what();
        if (what.rfind(path, 0) == 0) throw;
        throw std::invalid_argument(path + ": " + what);
    }
}

namespace detail {

inline bool column_group_enabled(const std::vector<std::string>& outputs, const std::string& name) {
    if (outputs.empty()) return true;
    for (const auto& o : outputs)
        if (o == name) return true;
    return false;
}

}  // namespace detail

inline std::string sweep_table_to_csv(const SweepTable& table) {
    const int m = table.spec.base.size();
    const auto& outputs = table.spec.outputs;
    const bool efforts = detail::column_group_enabled(outputs, "efforts");
    const bool probs = detail::column_group_enabled(outputs, "probabilities");
    const bool totals = detail::column_group_enabled(outputs, "totals");
    const bool payoffs = detail::column_group_enabled(outputs, "payoffs");
    const bool diagnostics = detail::column_group_enabled(outputs, "diagnostics");

    std::ostringstream out;
    out << "parameter,status,support_change";
    if (efforts)
        for (int i : {1, 2})
            for (int k = 1; k <= m; ++k) out << ",e" << i << "_" << k;
    if (probs)
        for (int k = 1; k <= m; ++k) out << ",p1_" << k;
    if (totals) out << ",total1,total2,aggregate_total";
    if (payoffs) out << ",payoff1,payoff2";
    if (diagnostics) out << ",kkt_residual,method,multiple_equilibria";
    out << ",error\n";

    for (const auto& row : table.rows) {
        out << csv_double(row.parameter) << "," << (row.solved ? "ok" : "error") << ","
            << (row.support_change ? 1 : 0);
        auto emit_vec = [&](const Vec& v) {
            for (int k = 0; k < m; ++k) out << "," << csv_double(v[k]);
        };
        auto emit_empty = [&](int count) {
            for (int k = 0; k < count; ++k) out << ",";
        };
        if (row.solved) {
            const EquilibriumReport& rep = *row.report;
            if (efforts) {
                emit_vec(rep.efforts.e1);
                emit_vec(rep.efforts.e2);
            }
            if (probs) emit_vec(rep.probabilities.p1);
            if (totals)
                out << "," << csv_double(rep.total1) << "," << csv_double(rep.total2) << ","
                    << csv_double(rep.total1 + rep.total2);
            if (payoffs) out << "," << csv_double(rep.payoff1) << "," << csv_double(rep.payoff2);
            if (diagnostics)
                out << "," << csv_double(rep.kkt) << "," << to_string(rep.method) << ","
                    << (rep.multiplicity ? 1 : 0);
            out << ",";
        } else {
            if (efforts) emit_empty(2 * m);
            if (probs) emit_empty(m);
            if (totals) emit_empty(3);
            if (payoffs) emit_empty(2);
            if (diagnostics) emit_empty(3);
            out << "," << csv_sanitize(row.error);
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace netcontest
