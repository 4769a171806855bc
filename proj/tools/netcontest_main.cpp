// Command-line front end: validate and solve game files, build designed
// networks, check endogenous-network equilibria, run the regression corpus,
// and sweep a parameter over a grid.
//
// Exit codes: 0 success, 1 validation or input failure, 2 solver failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netcontest/netcontest.hpp"

namespace nc = netcontest;

namespace {

std::optional<double> env_tolerance() {
    const char* env = std::getenv("NETCONTEST_TOL");
    if (!env || !*env) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0))
        throw std::invalid_argument("NETCONTEST_TOL must be a positive number");
    return v;
}

void print_vector(std::ostream& out, const char* label, const nc::Vec& v) {
    out << label;
    for (int k = 0; k < v.size(); ++k) out << " " << v[k];
    out << "\n";
}

void print_indices(std::ostream& out, const std::vector<int>& idx) {
    out << "{";
    for (std::size_t i = 0; i < idx.size(); ++i) out << (i ? "," : "") << idx[i] + 1;
    out << "}";
}

void print_report(std::ostream& out, const nc::EquilibriumReport& rep) {
    out << "method: " << nc::to_string(rep.method) << "\n";
    print_vector(out, "efforts player 1:", rep.efforts.e1);
    print_vector(out, "efforts player 2:", rep.efforts.e2);
    print_vector(out, "win probabilities player 1:", rep.probabilities.p1);
    out << "supports: player 1 ";
    print_indices(out, rep.supports.s1);
    out << ", player 2 ";
    print_indices(out, rep.supports.s2);
    out << "\n";
    out << "totals: " << rep.total1 << " " << rep.total2 << "\n";
    out << "payoffs: " << rep.payoff1 << " " << rep.payoff2 << "\n";
    out << "kkt residual: " << rep.kkt << "\n";
    if (rep.multiplicity)
        out << "note: multiple equilibria (reported efforts are one representative)\n";
}

int cmd_validate(const std::string& path) {
    const nc::ContestGame g = nc::load_game(path);
    const nc::ValidationReport rep = nc::validate_game(g);
    std::cout << rep.to_string() << "\n";
    return rep.ok() ? 0 : 1;
}

int cmd_solve(const std::string& path, bool with_oracle, std::optional<double> tol,
              const std::string& out_path) {
    const nc::ContestGame g = nc::load_game(path);
    const nc::ValidationReport vrep = nc::validate_game(g);
    if (!vrep.ok()) {
        std::cout << vrep.to_string() << "\n";
        return 1;
    }
    for (const auto& w : vrep.warnings) std::cout << "warning: " << w << "\n";

    nc::SolveOptions opt;
    if (tol) opt.cert_tol = *tol;
    const nc::EquilibriumReport rep = nc::solve(g, opt);
    print_report(std::cout, rep);

    if (!out_path.empty()) nc::write_json_file(out_path, nc::report_to_json(rep));

    if (with_oracle) {
        const nc::AgreementReport agree = nc::cross_validate(g, rep);
        std::cout << "oracle: " << nc::to_string(agree.verdict)
                  << " (totals diff " << agree.total_diff << ", payoffs diff " << agree.payoff_diff
                  << ", probabilities diff " << agree.prob_diff << ")\n";
        if (agree.verdict == nc::Verdict::Disagree) {
            std::cerr << "error: best-response oracle disagrees with the certified equilibrium\n";
            return 2;
        }
        if (agree.verdict == nc::Verdict::Inconclusive)
            std::cout << "warning: oracle dynamics did not converge; solver result stands\n";
    }
    return 0;
}

int finish_design(const nc::DesignedNetworks& nets, double c1, double c2, double gamma,
                  const nc::Vec& values, const std::string& out_path) {
    std::cout << "target: " << nc::to_string(nets.target) << "\n";
    for (const auto& [name, value] : nets.parameters) std::cout << name << " = " << value << "\n";
    std::cout << "handicap: " << nets.handicap << "\n";
    if (!nets.note.empty()) std::cout << "note: " << nets.note << "\n";

    const nc::VerificationReport rep = nc::verify_design(nets, c1, c2, gamma, values);
    std::cout << rep.to_string();
    if (!out_path.empty()) nc::write_json_file(out_path, nc::designed_to_json(nets, c1, c2, gamma, values));
    return rep.ok() ? 0 : 2;
}

int cmd_endogenous(const std::string& path, int hub1, int hub2, const std::string& out_path) {
    const nc::ordered_json j = nc::parse_json_file(path);
    const nc::ContestGame g = nc::game_from_json(j);
    const auto bound = nc::rho_bound_from_json(j);
    if (!bound)
        throw std::invalid_argument(
            "the endogenous command needs \"rho_bounds\" in the game file (the link-weight cap)");
    if (*bound != 1.0) throw std::invalid_argument("only rho_bounds = 1 is supported");
    const int m = g.size();
    if (hub1 < 1 || hub1 > m || hub2 < 1 || hub2 > m)
        throw std::invalid_argument("hub indices must lie in 1.." + std::to_string(m));

    const nc::EndogenousProfile prof =
        nc::endogenous_equilibrium(g.values, g.cost1, g.cost2, g.gamma, hub1 - 1, hub2 - 1);
    const nc::VerificationReport rep = nc::verify_endogenous(prof, g.values, g.cost1, g.cost2, g.gamma);
    const nc::AggregateContest agg = nc::aggregate_contest(g.cost1, g.cost2, g.gamma, g.values.sum());
    std::cout << "aggregate contest: totals " << agg.effort1 << " " << agg.effort2
              << ", win probability of player 1 = " << agg.p1 << "\n";
    std::cout << rep.to_string();

    if (!out_path.empty()) {
        nc::ordered_json out;
        out["hubs"] = {{"player1", hub1}, {"player2", hub2}};
        out["efforts"] = {{"player1", nc::vec_to_json(prof.e1)}, {"player2", nc::vec_to_json(prof.e2)}};
        out["rho1"] = nc::mat_to_json(prof.rho1);
        out["rho2"] = nc::mat_to_json(prof.rho2);
        out["verification"] = nc::verification_to_json(rep);
        nc::write_json_file(out_path, out);
    }
    return rep.ok() ? 0 : 2;
}

int cmd_repro(const std::string& case_filter, std::optional<double> tol, const std::string& out_path) {
    const double tolerance = tol.value_or(1e-9);
    nc::CorpusReport report;
    report.tolerance = tolerance;
    for (const auto& pc : nc::default_corpus()) {
        if (!case_filter.empty() && pc.id.find(case_filter) == std::string::npos) continue;
        report.results.push_back(nc::run_case(pc, tolerance));
    }
    if (report.results.empty()) {
        std::cerr << "error: no corpus case matches \"" << case_filter << "\"\n";
        return 1;
    }
    std::cout << report.to_string();
    std::cout << (report.all_passed() ? "all cases passed" : "FAILURES present") << " (tolerance "
              << tolerance << ")\n";
    if (!out_path.empty()) nc::write_json_file(out_path, nc::corpus_report_to_json(report));
    return report.all_passed() ? 0 : 2;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_path, int jobs) {
    const nc::SweepSpec spec = nc::load_sweep_spec(spec_path);
    const nc::SweepTable table = nc::run_sweep(spec, jobs);

    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + out_path);
    out << nc::sweep_table_to_csv(table);

    int solved = 0;
    for (const auto& row : table.rows) {
        if (row.solved) ++solved;
        if (row.support_change)
            std::cout << "support change at " << spec.parameter_path << " = " << row.parameter << "\n";
    }
    std::cout << "solved " << solved << "/" << table.rows.size() << " grid points, table written to "
              << out_path << "\n";
    return solved > 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equilibrium solver for two-player contests with spillover networks"};
    app.require_subcommand(1);

    std::string game_path, out_path, case_filter, spec_path;
    double tol_arg = 0.0;
    bool with_oracle = false;
    int hub1 = 1, hub2 = 1, jobs = 1;

    auto* validate = app.add_subcommand("validate", "Check a game file against the model rules");
    validate->add_option("game", game_path, "game JSON file")->required();

    auto* solve = app.add_subcommand("solve", "Compute and certify the equilibrium of a game file");
    solve->add_option("game", game_path, "game JSON file")->required();
    auto* solve_tol = solve->add_option("--tol", tol_arg, "certification tolerance");
    solve->add_flag("--oracle", with_oracle, "cross-validate with best-response dynamics");
    solve->add_option("--out", out_path, "write the equilibrium report as JSON");

    auto* design = app.add_subcommand("design", "Build spillover networks with prescribed outcomes");
    design->require_subcommand(1);
    double c1 = 1.0, c2 = 1.0, value = 1.0, gamma = 1.0, epsilon = 0.1, lambda1_scalar = 0.0;
    int m = 2;
    std::vector<double> values_arg, lambda1_arg;

    auto* deq = design->add_subcommand("max-effort",
                                       "equal battlefield values; totals reach the upper bound");
    deq->add_option("--c1", c1, "cost of player 1")->required();
    deq->add_option("--c2", c2, "cost of player 2 (>= c1)")->required();
    deq->add_option("--m", m, "number of battlefields")->required()->check(CLI::PositiveNumber);
    deq->add_option("--v", value, "common battlefield value")->required();
    deq->add_option("--gamma", gamma, "Tullock exponent in (0,1]");
    deq->add_option("--lambda1", lambda1_scalar, "spillover weight for player 1");
    deq->add_option("--out", out_path, "write the designed game as JSON");

    auto* dwf = design->add_subcommand("max-welfare",
                                       "push the combined total effort below epsilon");
    dwf->add_option("--c1", c1, "cost of player 1")->required();
    dwf->add_option("--c2", c2, "cost of player 2 (>= c1)")->required();
    dwf->add_option("--m", m, "number of battlefields")->required()->check(CLI::PositiveNumber);
    dwf->add_option("--v", value, "common battlefield value")->required();
    dwf->add_option("--gamma", gamma, "Tullock exponent in (0,1]");
    dwf->add_option("--epsilon", epsilon, "target bound on combined total effort")->required();
    dwf->add_option("--out", out_path, "write the designed game as JSON");

    auto* dgen = design->add_subcommand("general",
                                        "unequal battlefield values via paired groups");
    dgen->add_option("--c1", c1, "cost of player 1")->required();
    dgen->add_option("--c2", c2, "cost of player 2 (>= c1)")->required();
    dgen->add_option("--values", values_arg, "battlefield values")->required()->delimiter(',');
    dgen->add_option("--lambda1", lambda1_arg, "per-group spillover weights for player 1")
        ->delimiter(',');
    dgen->add_option("--gamma", gamma, "Tullock exponent in (0,1]");
    dgen->add_option("--out", out_path, "write the designed game as JSON");

    auto* endo = app.add_subcommand("endogenous", "Check the endogenous-network equilibrium");
    endo->add_option("game", game_path, "game JSON file (values, costs, gamma; rho_bounds = 1)")
        ->required();
    endo->add_option("--hub1", hub1, "hub battlefield of player 1 (1-based)")->required();
    endo->add_option("--hub2", hub2, "hub battlefield of player 2 (1-based)")->required();
    endo->add_option("--out", out_path, "write the profile and checks as JSON");

    auto* repro = app.add_subcommand("repro", "Run the worked-example regression corpus");
    repro->add_option("--case", case_filter, "only cases whose id contains this substring");
    auto* repro_tol = repro->add_option("--tol", tol_arg, "comparison tolerance");
    repro->add_option("--out", out_path, "write the corpus report as JSON");

    auto* sweep = app.add_subcommand("sweep", "Solve a game along a parameter grid, emit CSV");
    sweep->add_option("spec", spec_path, "sweep spec JSON file")->required();
    sweep->add_option("--out", out_path, "output CSV file")->required();
    sweep->add_option("--jobs", jobs, "parallel solves")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const std::optional<double> env_tol = env_tolerance();
        if (validate->parsed()) return cmd_validate(game_path);
        if (solve->parsed()) {
            std::optional<double> tol = env_tol;
            if (solve_tol->count() > 0) tol = tol_arg;
            return cmd_solve(game_path, with_oracle, tol, out_path);
        }
        if (design->parsed()) {
            if (deq->parsed()) {
                const auto nets = nc::design_max_effort_equal(c1, c2, m, value, lambda1_scalar);
                return finish_design(nets, c1, c2, gamma, nc::Vec::Constant(m, value), out_path);
            }
            if (dwf->parsed()) {
                const auto nets = nc::design_max_welfare(c1, c2, m, gamma, value, epsilon);
                return finish_design(nets, c1, c2, gamma, nc::Vec::Constant(m, value), out_path);
            }
            nc::Vec values(static_cast<int>(values_arg.size()));
            for (std::size_t k = 0; k < values_arg.size(); ++k)
                values[static_cast<int>(k)] = values_arg[k];
            const auto nets = nc::design_max_effort_general(c1, c2, values, lambda1_arg);
            return finish_design(nets, c1, c2, gamma, values, out_path);
        }
        if (endo->parsed()) return cmd_endogenous(game_path, hub1, hub2, out_path);
        if (repro->parsed()) {
            std::optional<double> tol = env_tol;
            if (repro_tol->count() > 0) tol = tol_arg;
            return cmd_repro(case_filter, tol, out_path);
        }
        if (sweep->parsed()) return cmd_sweep(spec_path, out_path, jobs);
    } catch (const nc::SolveError& ex) {
        std::cerr << "solver error: " << ex.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::domain_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
