#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "feo/oracle.hpp"
#include "feo/scenario_io.hpp"
#include "feo/solve.hpp"

namespace feo {

enum class SweepAxis { alpha, epsilon, n_users, bandwidth };
enum class SolverKind { fptas, greedy, oracle };

inline std::string to_string(SolverKind s) {
    switch (s) {
        case SolverKind::fptas: return "fptas";
        case SolverKind::greedy: return "greedy";
        case SolverKind::oracle: return "oracle";
    }
    return "?";
}

inline std::optional<SweepAxis> axis_from_string(const std::string& s) {
    if (s == "alpha") return SweepAxis::alpha;
    if (s == "epsilon") return SweepAxis::epsilon;
    if (s == "n_users") return SweepAxis::n_users;
    if (s == "bandwidth") return SweepAxis::bandwidth;
    return {};
}

inline std::optional<SolverKind> solver_from_string(const std::string& s) {
    if (s == "fptas") return SolverKind::fptas;
    if (s == "greedy") return SolverKind::greedy;
    if (s == "oracle") return SolverKind::oracle;
    return {};
}

struct SweepSpec {
    SweepAxis axis = SweepAxis::alpha;
    std::vector<double> values;
    std::vector<SolverKind> solvers = {SolverKind::fptas, SolverKind::greedy};
};

struct SweepRow {
    double axis_value = 0.0;
    SolverKind solver = SolverKind::fptas;
    double f_p = 0.0, f_min = 0.0, f_total = 0.0;
    std::optional<double> pof, poe;
    double wall_time_s = 0.0;
    int n_users = 0;
    std::uint64_t seed = 0;
};

namespace detail {

struct SolveOutcome {
    ObjectiveBreakdown objective;
    double wall_time_s = 0.0;
};

inline SolveOutcome run_solver(SolverKind kind, const Scenario& sc,
                               std::optional<double> eps_override = {}) {
    SolveOutcome out;
    if (kind == SolverKind::oracle) {
        double t0 = now_seconds();
        GridOracleSpec spec;
        spec.scenario = sc;
        auto opt = grid_optimum(spec);
        Allocation a;
        a.x = opt.x;
        out.objective = feo_objective(a, sc);
        out.wall_time_s = now_seconds() - t0;
        return out;
    }
    SolveReport r = kind == SolverKind::fptas ? fptas(sc, eps_override) : greedy(sc);
    out.objective = r.objective;
    out.wall_time_s = r.wall_time_s;
    return out;
}

} // namespace detail

inline void validate_sweep(const SweepSpec& spec, const Scenario& base) {
    if (spec.values.empty()) throw std::invalid_argument("sweep: values must not be empty");
    if (spec.solvers.empty()) throw std::invalid_argument("sweep: solvers must not be empty");
    bool with_oracle = false;
    for (auto s : spec.solvers) with_oracle |= (s == SolverKind::oracle);
    if (!with_oracle) return;
    if (spec.axis == SweepAxis::n_users) {
        for (double v : spec.values)
            if (v > 3)
                throw std::invalid_argument("sweep: oracle solver limited to 3 users");
    } else if (base.n() > 3) {
        throw std::invalid_argument("sweep: oracle solver limited to 3 users");
    }
}

/// Runs the requested solvers over one axis. Alpha sweeps automatically add
/// the alpha = 1 and alpha = 0 reference solves per solver and fill the
/// trade-off columns from them.
inline std::vector<SweepRow> run_sweep(const json& doc, const SweepSpec& spec) {
    Scenario base = scenario_from_json(doc);
    base.validate();
    validate_sweep(spec, base);

    std::vector<SweepRow> rows;
    for (SolverKind solver : spec.solvers) {
        std::optional<detail::SolveOutcome> ref_eff, ref_fair;
        if (spec.axis == SweepAxis::alpha) {
            Scenario s1 = base;
            s1.alpha = 1.0;
            Scenario s0 = base;
            s0.alpha = 0.0;
            ref_eff = detail::run_solver(solver, s1);
            ref_fair = detail::run_solver(solver, s0);
        }
        for (double v : spec.values) {
            Scenario sc = base;
            std::optional<double> eps_override;
            switch (spec.axis) {
                case SweepAxis::alpha: sc.alpha = v; break;
                case SweepAxis::epsilon: eps_override = v; break;
                case SweepAxis::n_users:
                    sc = scenario_from_json(doc, static_cast<int>(v));
                    break;
                case SweepAxis::bandwidth: sc.total_bandwidth = v; break;
            }
            detail::SolveOutcome out;
            if (spec.axis == SweepAxis::alpha && v == 1.0)
                out = *ref_eff;
            else if (spec.axis == SweepAxis::alpha && v == 0.0)
                out = *ref_fair;
            else
                out = detail::run_solver(solver, sc, eps_override);

            SweepRow row;
            row.axis_value = v;
            row.solver = solver;
            row.f_p = out.objective.f_p;
            row.f_min = out.objective.f_min;
            row.f_total = out.objective.f_total;
            row.wall_time_s = out.wall_time_s;
            row.n_users = sc.n();
            row.seed = sc.seed;
            if (ref_eff) row.pof = price_of_fairness(ref_eff->objective.f_p, out.objective.f_p);
            if (ref_fair)
                row.poe = price_of_efficiency(ref_fair->objective.f_min, out.objective.f_min);
            rows.push_back(row);
        }
    }
    return rows;
}

inline std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "axis_value,solver,f_p,f_min,f_total,pof,poe,wall_time_s,n_users,seed\n";
    for (const auto& r : rows) {
        out << csv_number(r.axis_value) << ',' << to_string(r.solver) << ',' << csv_number(r.f_p)
            << ',' << csv_number(r.f_min) << ',' << csv_number(r.f_total) << ','
            << (r.pof ? csv_number(*r.pof) : std::string()) << ','
            << (r.poe ? csv_number(*r.poe) : std::string()) << ',' << csv_number(r.wall_time_s)
            << ',' << r.n_users << ',' << r.seed << "\n";
    }
}

} // namespace feo
