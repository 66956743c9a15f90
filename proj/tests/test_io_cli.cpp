#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "feo/cli.hpp"
#include "feo/scenario_io.hpp"
#include "feo/verify.hpp"

using namespace feo;
using Catch::Approx;

namespace {

std::string scenario_dir() { return FEO_SCENARIO_DIR; }

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/feo_test_") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("scenario round trip preserves every field") {
    std::mt19937_64 gen(99);
    Scenario sc = random_scenario(gen, 4, 0.25, 2, 0.45);
    sc.seed = 1234567;
    json doc = scenario_to_json(sc);
    Scenario back = scenario_from_json(doc);
    REQUIRE(back.n() == sc.n());
    CHECK(back.total_bandwidth == sc.total_bandwidth);
    CHECK(back.alpha == sc.alpha);
    CHECK(back.p == sc.p);
    CHECK(back.delta == sc.delta);
    CHECK(back.seed == sc.seed);
    for (int i = 0; i < sc.n(); ++i) {
        CHECK(back.users[i].tau == sc.users[i].tau);
        CHECK(back.users[i].nu == sc.users[i].nu);
        CHECK(back.users[i].t_pri == sc.users[i].t_pri);
        CHECK(back.users[i].xi_lo == sc.users[i].xi_lo);
        CHECK(back.users[i].xi_hi == sc.users[i].xi_hi);
    }
}

TEST_CASE("loading the reference scenario files") {
    Scenario pair = load_scenario(scenario_dir() + "/two_user_tradeoff.json");
    REQUIRE(pair.n() == 2);
    CHECK(pair.users[0].tau == 1.0);
    CHECK(pair.users[1].tau == 2.0);
    CHECK(pair.users[0].t_pri == 0.5);
    CHECK(pair.total_bandwidth == 1.0);
    CHECK_NOTHROW(pair.validate());

    Scenario table = load_scenario(scenario_dir() + "/table1_n5.json");
    REQUIRE(table.n() == 5);
    CHECK_NOTHROW(table.validate());
    // channel gains are sampled from the seed: deterministic across loads
    Scenario again = load_scenario(scenario_dir() + "/table1_n5.json");
    for (int i = 0; i < 5; ++i) {
        CHECK(table.users[i].tau == again.users[i].tau);
        CHECK(table.users[i].nu == again.users[i].nu);
        // gains lie in (0.5, 1), so tau sits inside that band around the
        // unit-gain value
        CHECK(table.users[i].tau > 0.5 * 577.698427719214);
        CHECK(table.users[i].tau < 577.698427719215);
    }
    // user count override regenerates from the defaults
    Scenario three = load_scenario(scenario_dir() + "/table1_n5.json", 3);
    REQUIRE(three.n() == 3);
    CHECK(three.users[0].tau == table.users[0].tau);
}

TEST_CASE("parse diagnostics name the offending field") {
    auto path = write_temp("missing_b.json", R"({"system": {"alpha": 1.0},
        "users": [{"tau": 1, "nu": 1, "t_pri": 0.5, "xi_lo": 1, "xi_hi": 2}]})");
    try {
        load_scenario(path);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find("'B'") != std::string::npos);
    }

    auto bad_field = write_temp("unknown_field.json", R"({"system": {"B": 2.0},
        "users": [{"tau": 1, "nu": 1, "t_pri": 0.5, "xi_lo": 1, "xi_hi": 2, "taus": 3}]})");
    try {
        load_scenario(bad_field);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find("'taus'") != std::string::npos);
    }

    auto empty_users = write_temp("empty_users.json", R"({"system": {"B": 2.0}, "users": []})");
    CHECK_THROWS_AS(load_scenario(empty_users), parse_error);

    auto syntax = write_temp("syntax.json", "{ not json");
    CHECK_THROWS_AS(load_scenario(syntax), parse_error);
}

TEST_CASE("cli solve prints a report and honors overrides") {
    std::ostringstream out, err;
    int rc = run_cli({"solve", scenario_dir() + "/two_user_tradeoff.json", "--solver", "fptas",
                      "--alpha", "1", "--p", "1"},
                     out, err);
    CHECK(rc == 0);
    std::string text = out.str();
    CHECK(text.find("solver: fptas") != std::string::npos);
    CHECK(text.find("f_total:") != std::string::npos);
    CHECK(text.find("phi:") != std::string::npos);

    // objective value printed for the efficiency-only solve
    double f_total = 0.0;
    std::istringstream scan(text.substr(text.find("f_total:") + 8));
    scan >> f_total;
    CHECK(f_total >= 0.9 * 3.15681614391123);
    CHECK(f_total <= 3.157);
}

TEST_CASE("cli solve supports greedy and oracle") {
    std::ostringstream out, err;
    CHECK(run_cli({"solve", scenario_dir() + "/two_user_tradeoff.json", "--solver", "greedy"},
                  out, err) == 0);
    CHECK(out.str().find("solver: greedy") != std::string::npos);

    std::ostringstream out2, err2;
    CHECK(run_cli({"solve", scenario_dir() + "/two_user_tradeoff.json", "--solver", "oracle"},
                  out2, err2) == 0);
    CHECK(out2.str().find("solver: oracle") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    std::ostringstream out, err;
    auto malformed = write_temp("cli_malformed.json", "{ nope");
    CHECK(run_cli({"solve", malformed}, out, err) == 1);

    auto infeasible = write_temp("cli_infeasible.json", R"({"system": {"B": 0.5},
        "users": [{"tau": 1, "nu": 1, "t_pri": 0.5, "xi_lo": 1, "xi_hi": 2}]})");
    CHECK(run_cli({"solve", infeasible}, out, err) == 2);

    CHECK(run_cli({"solve", scenario_dir() + "/two_user_tradeoff.json", "--solver", "nope"}, out,
                  err) == 1);

    CHECK(run_cli({"sweep", scenario_dir() + "/two_user_tradeoff.json", "--axis", "alpha",
                   "--values", "0,1", "--out", "/nonexistent_dir/x.csv"},
                  out, err) == 3);

    CHECK(run_cli({"bogus"}, out, err) == 1);
}

TEST_CASE("alpha sweep emits reference-anchored trade-off columns") {
    std::string csv_path = "/tmp/feo_test_sweep_alpha.csv";
    std::ostringstream out, err;
    int rc = run_cli({"sweep", scenario_dir() + "/two_user_tradeoff.json", "--axis", "alpha",
                      "--values", "0,0.5,1", "--solver", "fptas,greedy", "--out", csv_path},
                     out, err);
    REQUIRE(rc == 0);
    std::string csv = read_file(csv_path);
    CHECK(csv.rfind("axis_value,solver,f_p,f_min,f_total,pof,poe,wall_time_s,n_users,seed\n", 0) ==
          0);
    int lines = 0;
    for (char c : csv) lines += c == '\n' ? 1 : 0;
    CHECK(lines == 7);  // header + 3 alpha values x 2 solvers

    // pof is exactly zero on the alpha=1 row, poe on the alpha=0 row
    std::istringstream ss(csv);
    std::string line;
    std::getline(ss, line);
    while (std::getline(ss, line)) {
        std::stringstream fields(line);
        std::string axis, solver, fp, fmin, ftot, pof, poe;
        std::getline(fields, axis, ',');
        std::getline(fields, solver, ',');
        std::getline(fields, fp, ',');
        std::getline(fields, fmin, ',');
        std::getline(fields, ftot, ',');
        std::getline(fields, pof, ',');
        std::getline(fields, poe, ',');
        if (axis == "1") CHECK(std::stod(pof) == 0.0);
        if (axis == "0") CHECK(std::stod(poe) == 0.0);
        REQUIRE(!pof.empty());
        REQUIRE(!poe.empty());
        // approximate solvers may beat a reference solve by at most delta
        CHECK(std::stod(pof) >= -0.3);
        CHECK(std::stod(poe) >= -0.3);
        CHECK(std::stod(pof) < 1.0);
        CHECK(std::stod(poe) < 1.0);
    }
}

TEST_CASE("sweep rows are reproducible outside the timing column") {
    auto run_once = [&](const std::string& path) {
        std::ostringstream out, err;
        REQUIRE(run_cli({"sweep", scenario_dir() + "/table1_n5.json", "--axis", "bandwidth",
                         "--values", "5e6,1e7", "--solver", "greedy", "--out", path},
                        out, err) == 0);
        return read_file(path);
    };
    std::string a = run_once("/tmp/feo_test_sweep_a.csv");
    std::string b = run_once("/tmp/feo_test_sweep_b.csv");
    auto strip_time = [](const std::string& csv) {
        std::istringstream ss(csv);
        std::string line, out;
        while (std::getline(ss, line)) {
            int commas = 0;
            std::string kept;
            for (char c : line) {
                if (c == ',') ++commas;
                if (commas == 7 && c != '\n') continue;  // drop wall_time_s
                kept += c;
            }
            out += kept + "\n";
        }
        return out;
    };
    CHECK(strip_time(a) == strip_time(b));
}

TEST_CASE("bandwidth sweep objectives increase with capacity") {
    std::string csv_path = "/tmp/feo_test_sweep_bw.csv";
    std::ostringstream out, err;
    REQUIRE(run_cli({"sweep", scenario_dir() + "/two_user_tradeoff.json", "--axis", "bandwidth",
                     "--values", "0.6,1.0", "--solver", "fptas", "--out", csv_path},
                    out, err) == 0);
    std::istringstream ss(read_file(csv_path));
    std::string line;
    std::getline(ss, line);
    double prev = -1.0;
    while (std::getline(ss, line)) {
        auto pos = line.find(',');
        pos = line.find(',', pos + 1);
        pos = line.find(',', pos + 1);
        pos = line.find(',', pos + 1);
        double f_total = std::stod(line.substr(pos + 1));
        CHECK(f_total > prev);
        prev = f_total;
    }
}

TEST_CASE("epsilon sweep drives the solver accuracy directly") {
    std::string csv_path = "/tmp/feo_test_sweep_eps.csv";
    std::ostringstream out, err;
    REQUIRE(run_cli({"sweep", scenario_dir() + "/table1_n5.json", "--axis", "epsilon",
                     "--values", "0.5,0.25,0.1", "--solver", "fptas", "--out", csv_path},
                    out, err) == 0);
    std::istringstream ss(read_file(csv_path));
    std::string line;
    std::getline(ss, line);
    int rows = 0;
    double prev = -1.0;
    while (std::getline(ss, line)) {
        ++rows;
        auto pos = line.find(',');
        for (int skip = 0; skip < 3; ++skip) pos = line.find(',', pos + 1);
        double f_total = std::stod(line.substr(pos + 1));
        // objective improves as the accuracy parameter tightens
        CHECK(f_total >= prev * (1.0 - 1e-6));
        prev = f_total;
    }
    CHECK(rows == 3);
}

TEST_CASE("n_users sweep with the oracle enforces the size guard") {
    std::ostringstream out, err;
    CHECK(run_cli({"sweep", scenario_dir() + "/table1_n5.json", "--axis", "n_users", "--values",
                   "2,5", "--solver", "oracle", "--out", "/tmp/feo_test_guard.csv"},
                  out, err) == 1);
    std::ostringstream out2, err2;
    CHECK(run_cli({"sweep", scenario_dir() + "/table1_n5.json", "--axis", "n_users", "--values",
                   "1,2", "--solver", "greedy", "--out", "/tmp/feo_test_n.csv"},
                  out2, err2) == 0);
    std::string csv = read_file("/tmp/feo_test_n.csv");
    CHECK(csv.find(",1,") != std::string::npos);
    CHECK(csv.find(",2,") != std::string::npos);
}

TEST_CASE("verify subcommand passes on the default suites") {
    std::ostringstream out, err;
    int rc = run_cli({"verify", "--seed", "7", "--cases", "40"}, out, err);
    CHECK(rc == 0);
    CHECK(out.str().find("verification passed") != std::string::npos);
}

TEST_CASE("verification flags a corrupted solver result") {
    auto tamper = [](DpSolution sol) {
        sol.scaled_profit += 1;  // claim more than the optimum
        return sol;
    };
    VerifyReport rep = verify_dp_vs_enumeration(7, 25, tamper);
    CHECK_FALSE(rep.ok());
    REQUIRE(!rep.failures.empty());
    CHECK(rep.failures.front().find("seed=7") != std::string::npos);
}
