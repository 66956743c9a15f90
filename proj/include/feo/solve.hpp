#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "feo/discretize.hpp"
#include "feo/maxmin.hpp"
#include "feo/mckp.hpp"
#include "feo/model.hpp"
#include "feo/objective.hpp"

namespace feo {

struct PhiLogEntry {
    double phi = 0.0;
    bool solved = false;
    double objective = 0.0;  // meaningful only when solved
};

struct SolveReport {
    Allocation allocation;
    ObjectiveBreakdown objective;
    std::optional<double> phi_selected;  // empty for the greedy solver
    double epsilon_used = 0.0;
    double delta_target = 0.0;
    double wall_time_s = 0.0;
    int phi_grid_size = 0;
    std::vector<PhiLogEntry> per_phi_log;
};

namespace detail {

inline double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

} // namespace detail

/// Approximation scheme for the blended objective. Parameterizes the
/// fairness term by a threshold phi, solves the thresholded problem on a
/// geometric phi grid through the knapsack discretization, and keeps the
/// allocation with the best true objective. With eps = delta/6 the result is
/// within a factor (1 - delta) of the optimum.
///
/// epsilon_override bypasses the scenario's delta-derived accuracy; it is
/// used by accuracy sweeps that probe eps beyond delta's (0,1) range.
inline SolveReport fptas(const Scenario& sc, std::optional<double> epsilon_override = {}) {
    sc.validate();
    double t0 = detail::now_seconds();
    const double eps = epsilon_override.value_or(sc.epsilon());
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("fptas: accuracy must lie in (0,1)");
    const int n = sc.n();

    const double L = lp_norm_at_lower_bounds(sc);
    std::vector<BreakpointSet> bps;
    bps.reserve(n);
    for (int i = 0; i < n; ++i) bps.push_back(breakpoints(sc.users[i], i, eps, L, n, sc.p));

    const double phi_lo = phi_lower(sc);
    const double phi_bar = max_min_value(sc, eps * phi_lo);
    PhiGrid grid = build_phi_grid(phi_bar, eps);

    SolveReport report;
    report.epsilon_used = eps;
    report.delta_target = 6.0 * eps;
    report.phi_grid_size = static_cast<int>(grid.points.size());

    bool have_best = false;
    for (double phi : grid.points) {
        PhiLogEntry entry;
        entry.phi = phi;

        MckpInstance inst;
        inst.capacity = sc.total_bandwidth;
        inst.phi = phi;
        inst.classes.reserve(n);
        bool reachable = true;
        for (int i = 0; i < n; ++i) {
            inst.classes.push_back(demand_set(bps[i], sc.users[i], phi, sc.p));
            if (inst.classes.back().demands.empty()) reachable = false;
        }
        if (!reachable || inst.min_demand_total() > sc.total_bandwidth) {
            report.per_phi_log.push_back(entry);
            continue;
        }

        double z = lp_relaxation_value(inst);
        ScaledInstance scaled = scale(inst, eps, z);
        DpSolution sol = dp_solve(scaled, inst);

        Allocation alloc;
        alloc.x.resize(n);
        for (int i = 0; i < n; ++i) alloc.x[i] = inst.classes[i].demands[sol.choice[i]];
        ObjectiveBreakdown breakdown = feo_objective(alloc, sc);

        entry.solved = true;
        entry.objective = breakdown.f_total;
        report.per_phi_log.push_back(entry);

        if (!have_best || breakdown.f_total > report.objective.f_total) {
            have_best = true;
            report.allocation = std::move(alloc);
            report.objective = std::move(breakdown);
            report.phi_selected = phi;
        }
    }
    if (!have_best)
        throw infeasible_error("fptas: no phi in the grid admits a feasible assignment");
    report.wall_time_s = detail::now_seconds() - t0;
    return report;
}

/// Shares of the spare bandwidth proportional to the utility-gain ratios,
/// capped at each user's remaining headroom.
inline std::vector<double> greedy_allocation(const std::vector<double>& gain_ratios,
                                             const std::vector<double>& lo,
                                             const std::vector<double>& hi, double capacity) {
    const std::size_t n = gain_ratios.size();
    double sum_ratio = 0.0, sum_lo = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_ratio += gain_ratios[i];
        sum_lo += lo[i];
    }
    double spare = capacity - sum_lo;
    std::vector<double> x(lo);
    if (spare > 0.0 && sum_ratio > 0.0) {
        for (std::size_t i = 0; i < n; ++i)
            x[i] = lo[i] + std::min(hi[i] - lo[i], gain_ratios[i] / sum_ratio * spare);
    }
    return x;
}

/// Single-pass heuristic: lower bounds first, then the spare bandwidth split
/// proportionally to each user's average utility gain over its box. O(N).
inline SolveReport greedy(const Scenario& sc) {
    sc.validate();
    double t0 = detail::now_seconds();
    const int n = sc.n();
    std::vector<double> ratios(n), lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        const auto& u = sc.users[i];
        ratios[i] = (utility(u.xi_hi, u) - utility(u.xi_lo, u)) / (u.xi_hi - u.xi_lo);
        lo[i] = u.xi_lo;
        hi[i] = u.xi_hi;
    }
    SolveReport report;
    report.allocation.x = greedy_allocation(ratios, lo, hi, sc.total_bandwidth);
    report.objective = feo_objective(report.allocation, sc);
    report.epsilon_used = 0.0;
    report.delta_target = 0.0;
    report.wall_time_s = detail::now_seconds() - t0;
    return report;
}

/// The two reference solves feeding the trade-off metrics: full efficiency
/// (alpha = 1) and full fairness (alpha = 0).
inline std::pair<SolveReport, SolveReport> solve_reference_pair(const Scenario& sc) {
    Scenario eff = sc;
    eff.alpha = 1.0;
    Scenario fair = sc;
    fair.alpha = 0.0;
    return {fptas(eff), fptas(fair)};
}

} // namespace feo
