#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "feo/scenario_io.hpp"
#include "feo/sweep.hpp"
#include "feo/verify.hpp"

namespace feo {

// Exit codes: 0 ok, 1 parse error, 2 infeasible scenario, 3 I/O error,
// 4 verification failure.
enum ExitCode { kOk = 0, kParseError = 1, kInfeasible = 2, kIoError = 3, kVerifyFailed = 4 };

namespace detail {

inline std::vector<double> parse_value_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw parse_error("--values: not a number: '" + item + "'");
        }
    }
    return out;
}

inline std::vector<SolverKind> parse_solver_list(const std::string& csv) {
    std::vector<SolverKind> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto s = solver_from_string(item);
        if (!s) throw parse_error("--solver: unknown solver '" + item + "'");
        out.push_back(*s);
    }
    return out;
}

inline void print_report(std::ostream& os, const std::string& solver, const Scenario& sc,
                         const ObjectiveBreakdown& b, double wall_time_s,
                         const SolveReport* fptas_report, const std::vector<double>& x) {
    os << "solver: " << solver << "\n";
    os << "n_users: " << sc.n() << "\n";
    os << "allocation_hz:";
    for (double v : x) os << ' ' << csv_number(v);
    os << "\n";
    os << "f_p: " << csv_number(b.f_p) << "\n";
    os << "f_min: " << csv_number(b.f_min) << "\n";
    os << "f_total: " << csv_number(b.f_total) << "\n";
    if (fptas_report) {
        if (fptas_report->phi_selected)
            os << "phi: " << csv_number(*fptas_report->phi_selected) << "\n";
        os << "epsilon: " << csv_number(fptas_report->epsilon_used) << "\n";
        os << "phi_grid_size: " << fptas_report->phi_grid_size << "\n";
    }
    os << "wall_time_s: " << csv_number(wall_time_s) << "\n";
}

inline int write_rows(const std::string& path, const std::vector<SweepRow>& rows,
                      std::ostream& err) {
    std::ofstream out(path);
    if (!out) {
        err << "error: cannot open output file: " << path << "\n";
        return kIoError;
    }
    write_csv(out, rows);
    if (!out.good()) {
        err << "error: failed writing: " << path << "\n";
        return kIoError;
    }
    return kOk;
}

} // namespace detail

/// Entry point behind the executable; parses argv-style arguments so tests
/// can drive it in-process.
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"Bandwidth allocation solver for joint sensing and communication nodes"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, axis_str = "alpha", values_str, solver_str = "fptas";
    double alpha_flag = -1.0, delta_flag = -1.0;
    int p_flag = 0;
    std::uint64_t seed_flag = 0;
    bool seed_given = false;
    int cases = 200;

    auto* solve_cmd = app.add_subcommand("solve", "solve one scenario and print the result");
    solve_cmd->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
    solve_cmd->add_option("--solver", solver_str, "fptas|greedy|oracle");
    solve_cmd->add_option("--alpha", alpha_flag, "override the efficiency weight");
    solve_cmd->add_option("--p", p_flag, "override the norm order");
    solve_cmd->add_option("--delta", delta_flag, "override the accuracy target");
    solve_cmd->add_option("--seed", seed_flag, "override the channel seed")
        ->each([&](const std::string&) { seed_given = true; });
    solve_cmd->add_option("--out", out_path, "also append the result as a CSV file");

    auto* sweep_cmd = app.add_subcommand("sweep", "run solvers over one swept axis, emit CSV");
    sweep_cmd->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
    sweep_cmd->add_option("--axis", axis_str, "alpha|epsilon|n_users|bandwidth");
    sweep_cmd->add_option("--values", values_str, "comma-separated axis values")->required();
    sweep_cmd->add_option("--solver", solver_str, "comma-separated solver subset");
    sweep_cmd->add_option("--out", out_path, "CSV output path")->required();
    sweep_cmd->add_option("--seed", seed_flag, "override the channel seed")
        ->each([&](const std::string&) { seed_given = true; });

    auto* verify_cmd = app.add_subcommand("verify", "run the randomized self-checks");
    verify_cmd->add_option("--seed", seed_flag, "fuzz seed")
        ->each([&](const std::string&) { seed_given = true; });
    verify_cmd->add_option("--cases", cases, "number of fuzz cases");

    std::vector<const char*> argv;
    argv.push_back("feo");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kParseError;
    }

    try {
        if (app.got_subcommand(verify_cmd)) {
            if (!seed_given) seed_flag = 42;
            VerifyReport rep = run_all_verifications(seed_flag, cases);
            out << "checks: " << rep.checks << "\n";
            for (const auto& f : rep.failures) out << "failure: " << f << "\n";
            out << (rep.ok() ? "verification passed" : "verification FAILED") << "\n";
            return rep.ok() ? kOk : kVerifyFailed;
        }

        json doc = load_json_file(scenario_path);
        if (seed_given) doc["system"]["seed"] = seed_flag;

        if (app.got_subcommand(solve_cmd)) {
            auto kind = solver_from_string(solver_str);
            if (!kind) throw parse_error("--solver: unknown solver '" + solver_str + "'");
            Scenario sc = scenario_from_json(doc);
            if (alpha_flag >= 0.0) sc.alpha = alpha_flag;
            if (p_flag > 0) sc.p = p_flag;
            if (delta_flag > 0.0) sc.delta = delta_flag;
            sc.validate();

            SweepRow row;
            row.axis_value = sc.alpha;
            row.solver = *kind;
            row.n_users = sc.n();
            row.seed = sc.seed;
            if (*kind == SolverKind::oracle) {
                auto outc = detail::run_solver(*kind, sc);
                detail::print_report(out, solver_str, sc, outc.objective, outc.wall_time_s,
                                     nullptr, [&] {
                                         GridOracleSpec spec;
                                         spec.scenario = sc;
                                         return grid_optimum(spec).x;
                                     }());
                row.f_p = outc.objective.f_p;
                row.f_min = outc.objective.f_min;
                row.f_total = outc.objective.f_total;
                row.wall_time_s = outc.wall_time_s;
            } else {
                SolveReport r = *kind == SolverKind::fptas ? fptas(sc) : greedy(sc);
                detail::print_report(out, solver_str, sc, r.objective, r.wall_time_s,
                                     *kind == SolverKind::fptas ? &r : nullptr, r.allocation.x);
                row.f_p = r.objective.f_p;
                row.f_min = r.objective.f_min;
                row.f_total = r.objective.f_total;
                row.wall_time_s = r.wall_time_s;
            }
            if (!out_path.empty()) return detail::write_rows(out_path, {row}, err);
            return kOk;
        }

        // sweep
        SweepSpec spec;
        auto axis = axis_from_string(axis_str);
        if (!axis) throw parse_error("--axis: unknown axis '" + axis_str + "'");
        spec.axis = *axis;
        spec.values = detail::parse_value_list(values_str);
        spec.solvers = detail::parse_solver_list(solver_str);
        auto rows = run_sweep(doc, spec);
        int rc = detail::write_rows(out_path, rows, err);
        if (rc == kOk) out << "wrote " << rows.size() << " rows to " << out_path << "\n";
        return rc;
    } catch (const parse_error& e) {
        err << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const infeasible_error& e) {
        err << "error: infeasible scenario: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    }
}

} // namespace feo
