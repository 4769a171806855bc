#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "test_util.hpp"

using namespace netcontest;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

const fs::path kData = DATA_DIR;

fs::path temp_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "netcontest_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd =
        env + (env.empty() ? "" : " ") + NETCONTEST_BIN + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string run_cli_capture(const std::string& args, int& code) {
    const fs::path log = temp_dir() / "cli_output.txt";
    const std::string cmd =
        std::string(NETCONTEST_BIN) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    code = WEXITSTATUS(status);
    std::ifstream in(log);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

fs::path write_game(const std::string& name, const ContestGame& g) {
    const fs::path path = temp_dir() / name;
    write_json_file(path.string(), game_to_json(g));
    return path;
}

}  // namespace

TEST_CASE("validate accepts shipped games and rejects bad ones") {
    CHECK(run_cli("validate " + (kData / "games/star_line.json").string()) == 0);
    CHECK(run_cli("validate " + (kData / "games/two_node.json").string()) == 0);

    auto bad = star_line_game();
    bad.rho1(0, 1) = -1.0;
    const auto path = write_game("bad_rho.json", bad);
    int code = 0;
    const std::string text = run_cli_capture("validate " + path.string(), code);
    CHECK(code == 1);
    CHECK(text.find("rho1") != std::string::npos);
}

TEST_CASE("solve writes a certified report") {
    const fs::path out = temp_dir() / "star_line_report.json";
    const std::string game = (kData / "games/star_line.json").string();
    CHECK(run_cli("solve " + game + " --out " + out.string()) == 0);

    const auto rep = report_from_json(parse_json_file(out.string()));
    CHECK(rep.total1 == Approx(41.0 / 36.0).margin(1e-9));
    CHECK(rep.supports.s1 == std::vector<int>{0});
    CHECK(rep.supports.s2 == std::vector<int>{1, 3});

    CHECK(run_cli("solve " + game + " --oracle") == 0);
    CHECK(run_cli("solve " + game + " --tol 1e-10") == 0);
}

TEST_CASE("solve surfaces input problems as exit 1") {
    const fs::path broken = temp_dir() / "broken.json";
    std::ofstream(broken) << "{ \"gamma\": ";
    CHECK(run_cli("solve " + broken.string()) == 1);

    auto invalid = star_line_game();
    invalid.gamma = 1.7;
    CHECK(run_cli("solve " + write_game("invalid_gamma.json", invalid).string()) == 1);

    CHECK(run_cli("solve " + (kData / "games/star_line.json").string() + " --tol abc") == 1);
    CHECK(run_cli("solve " + (kData / "games/star_line.json").string(), "NETCONTEST_TOL=abc") == 1);
    CHECK(run_cli("solve " + (temp_dir() / "does_not_exist.json").string()) == 1);
}

TEST_CASE("design subcommands certify their networks") {
    const fs::path out = temp_dir() / "designed.json";
    CHECK(run_cli("design max-effort --c1 1 --c2 2 --m 3 --v 1 --out " + out.string()) == 0);

    const auto j = parse_json_file(out.string());
    CHECK(j["handicap"].get<double>() == Approx(3.0));
    const auto g = game_from_json(j);
    CHECK(solve(g).total1 == Approx(0.75).margin(1e-9));

    CHECK(run_cli("design max-welfare --c1 1 --c2 2 --m 4 --v 1 --epsilon 0.1") == 0);
    CHECK(run_cli("design general --c1 1 --c2 2 --values 1,2") == 0);
    CHECK(run_cli("design general --c1 1 --c2 1 --values 1,1,2,3,5") == 0);
}

TEST_CASE("design reports an unattainable construction as exit 2") {
    int code = 0;
    const std::string text =
        run_cli_capture("design general --c1 1 --c2 2 --values 1,1,2,3,5", code);
    CHECK(code == 2);
    CHECK(text.find("FAIL") != std::string::npos);
}

TEST_CASE("design rejects out-of-range parameters as exit 1") {
    CHECK(run_cli("design max-effort --c1 2 --c2 1 --m 3 --v 1") == 1);
    CHECK(run_cli("design general --c1 1 --c2 1.2 --values 1,2 --lambda1 0.3") == 1);
}

TEST_CASE("endogenous verifies the out-star profile from a game file") {
    const std::string game = (kData / "games/endogenous8.json").string();
    const fs::path out = temp_dir() / "endogenous.json";
    CHECK(run_cli("endogenous " + game + " --hub1 1 --hub2 2 --out " + out.string()) == 0);

    const auto j = parse_json_file(out.string());
    CHECK(j["verification"]["checks"].size() == 5);

    CHECK(run_cli("endogenous " + game + " --hub1 9 --hub2 1") == 1);

    // rho_bounds is required for the endogenous game
    CHECK(run_cli("endogenous " + (kData / "games/star_line.json").string() +
                  " --hub1 1 --hub2 1") == 1);
}

TEST_CASE("repro runs the corpus or a filtered slice") {
    int code = 0;
    const std::string text = run_cli_capture("repro --case star-line", code);
    CHECK(code == 0);
    CHECK(text.find("star-line") != std::string::npos);
    CHECK(text.find("pass") != std::string::npos);

    CHECK(run_cli("repro") == 0);
    CHECK(run_cli("repro --case does-not-exist") == 1);

    const fs::path out = temp_dir() / "corpus.json";
    CHECK(run_cli("repro --case two-node --out " + out.string()) == 0);
    const auto j = parse_json_file(out.string());
    CHECK(j["results"].size() == 6);
    CHECK(j["all_passed"].get<bool>());
}

TEST_CASE("sweep emits a parsable CSV with support flags") {
    const fs::path out = temp_dir() / "two_node.csv";
    CHECK(run_cli("sweep " + (kData / "sweeps/two_node_lambda.json").string() + " --out " +
                  out.string() + " --jobs 2") == 0);

    std::ifstream in(out);
    std::ostringstream text;
    text << in.rdbuf();
    const auto table = parse_csv(text.str());
    REQUIRE(table.size() == 26);
    CHECK(table[0][0] == "parameter");
    CHECK(table[0][2] == "support_change");

    int flags = 0;
    for (size_t r = 1; r < table.size(); ++r)
        if (table[r][2] == "1") ++flags;
    CHECK(flags == 1);

    CHECK(run_cli("sweep " + (temp_dir() / "missing.json").string() + " --out " +
                  out.string()) == 1);
}

TEST_CASE("help is exit zero and a missing subcommand is an error") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("") == 1);
    CHECK(run_cli("frobnicate") == 1);
}
