#pragma once

#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "feo/oracle.hpp"
#include "feo/rng.hpp"
#include "feo/solve.hpp"

namespace feo {

struct VerifyReport {
    int checks = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/// Random scenario in the small desk-scale regime: tau, nu in [0.5, 5],
/// t_pri in [0.1, 0.5], bounds chosen so that the normalization
/// utility(xi_lo) >= 1 and the capacity assumptions hold by construction.
inline Scenario random_scenario(std::mt19937_64& gen, int n, double alpha, int p, double delta) {
    Scenario sc;
    sc.alpha = alpha;
    sc.p = p;
    sc.delta = delta;
    double sum_lo = 0.0, sum_hi = 0.0;
    for (int i = 0; i < n; ++i) {
        UserModel u;
        u.tau = uniform(gen, 0.5, 5.0);
        u.nu = uniform(gen, 0.5, 5.0);
        u.t_pri = uniform(gen, 0.1, 0.5);
        u.xi_lo = uniform(gen, 0.8, 1.5);
        u.xi_hi = u.xi_lo + uniform(gen, 1.0, 4.0);
        sc.users.push_back(u);
        sum_lo += u.xi_lo;
        sum_hi += u.xi_hi;
    }
    sc.total_bandwidth = sum_lo + uniform(gen, 0.3, 0.95) * (sum_hi - sum_lo);
    return sc;
}

/// Random small knapsack instance with per-class profits increasing in
/// demand, the shape the discretizer produces.
inline MckpInstance random_mckp_instance(std::mt19937_64& gen) {
    MckpInstance inst;
    int n_classes = uniform_int(gen, 1, 3);
    for (int c = 0; c < n_classes; ++c) {
        int n_items = uniform_int(gen, 1, 4);
        std::vector<double> d(n_items), u(n_items);
        for (int k = 0; k < n_items; ++k) {
            d[k] = uniform(gen, 0.2, 3.0);
            u[k] = uniform(gen, 0.5, 10.0);
        }
        std::sort(d.begin(), d.end());
        std::sort(u.begin(), u.end());
        DemandSet ds;
        ds.user_index = c;
        ds.demands = d;
        ds.profits = u;
        inst.classes.push_back(ds);
    }
    double min_w = inst.min_demand_total();
    double max_w = 0.0;
    for (const auto& c : inst.classes) max_w += c.demands.back();
    inst.capacity = min_w + uniform01(gen) * (max_w - min_w + 1.0);
    return inst;
}

/// The profit-scaled dynamic program against exhaustive enumeration:
/// identical scaled optima, and unscaled value within the scaling loss.
/// The tamper hook lets tests confirm that a wrong solver output is caught.
inline VerifyReport verify_dp_vs_enumeration(
    std::uint64_t seed, int cases,
    const std::function<DpSolution(DpSolution)>& tamper = {}) {
    VerifyReport rep;
    std::mt19937_64 gen(seed);
    for (int i = 0; i < cases; ++i) {
        MckpInstance inst = random_mckp_instance(gen);
        double eps = uniform01(gen) < 0.5 ? 0.1 : 0.25;
        double z = lp_relaxation_value(inst);
        ScaledInstance scaled = scale(inst, eps, z);
        DpSolution sol = dp_solve(scaled, inst);
        if (tamper) sol = tamper(sol);
        auto scaled_best = mckp_enumerate_scaled(scaled, inst);
        auto unscaled_best = mckp_enumerate(inst);
        ++rep.checks;
        std::ostringstream tag;
        tag << "dp-vs-enum seed=" << seed << " case=" << i;
        if (!scaled_best || !unscaled_best) {
            rep.failures.push_back(tag.str() + ": enumeration found no feasible choice");
            continue;
        }
        if (sol.scaled_profit != *scaled_best)
            rep.failures.push_back(tag.str() + ": scaled profit mismatch");
        if (sol.unscaled_profit < (1.0 - eps) * unscaled_best->profit)
            rep.failures.push_back(tag.str() + ": unscaled profit below (1-eps) bound");
        if (sol.total_bandwidth > inst.capacity)
            rep.failures.push_back(tag.str() + ": capacity violated");
    }
    return rep;
}

/// The approximation scheme against the dense grid oracle on oracle-sized
/// scenarios.
inline VerifyReport verify_fptas_vs_oracle(std::uint64_t seed, int cases, int resolution = 500) {
    VerifyReport rep;
    std::mt19937_64 gen(seed);
    const double alphas[] = {0.0, 0.5, 1.0};
    const int ps[] = {1, 2};
    const double deltas[] = {0.3, 0.6};
    for (int i = 0; i < cases; ++i) {
        Scenario sc = random_scenario(gen, uniform_int(gen, 1, 3), alphas[i % 3], ps[i % 2],
                                      deltas[(i / 2) % 2]);
        ++rep.checks;
        std::ostringstream tag;
        tag << "fptas-vs-oracle seed=" << seed << " case=" << i;
        GridOracleSpec spec;
        spec.resolution = resolution;
        spec.scenario = sc;
        auto opt = grid_optimum(spec);
        SolveReport r = fptas(sc);
        if (!is_feasible(r.allocation, sc))
            rep.failures.push_back(tag.str() + ": infeasible allocation");
        if (r.objective.f_total < (1.0 - sc.delta) * opt.objective)
            rep.failures.push_back(tag.str() + ": objective below the (1-delta) bound");
    }
    return rep;
}

/// Structural invariants: utility monotonicity, breakpoint level accuracy
/// and count, threshold-grid size, greedy feasibility.
inline VerifyReport verify_invariants(std::uint64_t seed, int cases) {
    VerifyReport rep;
    std::mt19937_64 gen(seed);
    for (int i = 0; i < cases; ++i) {
        Scenario sc = random_scenario(gen, uniform_int(gen, 1, 4), 0.5, uniform_int(gen, 1, 2),
                                      0.6);
        ++rep.checks;
        std::ostringstream tag;
        tag << "invariants seed=" << seed << " case=" << i;

        const UserModel& u = sc.users.front();
        double a = uniform(gen, 0.0, u.xi_hi), b = uniform(gen, 0.0, u.xi_hi);
        if (a > b) std::swap(a, b);
        if (a < b && !(utility(a, u) < utility(b, u)))
            rep.failures.push_back(tag.str() + ": utility not strictly increasing");

        double eps = uniform01(gen) < 0.5 ? 0.1 : 0.25;
        double L = lower_bound_L(sc);
        for (int k = 0; k < sc.n(); ++k) {
            BreakpointSet bs = breakpoints(sc.users[k], k, eps, L, sc.n(), sc.p);
            if (bs.k_levels != breakpoint_level_count(sc.users[k], eps, L, sc.n(), sc.p))
                rep.failures.push_back(tag.str() + ": level count formula mismatch");
            for (std::size_t j = 0; j < bs.roots.size(); ++j) {
                double err = std::abs(utility(bs.roots[j], sc.users[k]) - bs.levels[j]);
                if (err > eps * bs.levels[j])
                    rep.failures.push_back(tag.str() + ": breakpoint level error exceeds bound");
                if (j > 0 && !(bs.roots[j] > bs.roots[j - 1]))
                    rep.failures.push_back(tag.str() + ": roots not strictly increasing");
            }
        }

        double phi_bar = max_min_value(sc, sc.epsilon() * phi_lower(sc));
        PhiGrid grid = build_phi_grid(phi_bar, sc.epsilon());
        double max_log = 0.0;
        for (const auto& us : sc.users)
            max_log = std::max(max_log, std::log2(utility(us.xi_hi, us)));
        if (static_cast<double>(grid.points.size()) > max_log / sc.epsilon() + 2.0)
            rep.failures.push_back(tag.str() + ": phi grid larger than its bound");

        SolveReport g = greedy(sc);
        if (!is_feasible(g.allocation, sc))
            rep.failures.push_back(tag.str() + ": greedy allocation infeasible");
    }
    return rep;
}

inline VerifyReport run_all_verifications(std::uint64_t seed, int cases) {
    VerifyReport all;
    for (const VerifyReport& r :
         {verify_dp_vs_enumeration(seed, cases), verify_fptas_vs_oracle(seed, std::max(1, cases / 10)),
          verify_invariants(seed, std::max(1, cases / 10))}) {
        all.checks += r.checks;
        all.failures.insert(all.failures.end(), r.failures.begin(), r.failures.end());
    }
    return all;
}

} // namespace feo
