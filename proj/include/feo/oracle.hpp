#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "feo/maxmin.hpp"
#include "feo/mckp.hpp"
#include "feo/model.hpp"
#include "feo/objective.hpp"

namespace feo {

/// Dense-grid verifier for small instances. The evaluation cost is
/// resolution^(N-1), so the guard rejects N > 3.
struct GridOracleSpec {
    int resolution = 2000;
    Scenario scenario;
};

struct GridOptimum {
    std::vector<double> x;
    double objective = 0.0;
};

/// Exhaustive search over the product grid of the first N-1 users, with the
/// last user taking all remaining bandwidth up to its cap. Since the
/// objective only improves when any single utility grows, fixing the prefix
/// makes that completion optimal, and every evaluated point is feasible, so
/// the result is a lower bound on the true optimum that tightens with the
/// resolution.
inline GridOptimum grid_optimum(std::span<const BoundedUtility> users, double capacity,
                                double alpha, int p, int resolution) {
    const int n = static_cast<int>(users.size());
    if (n < 1 || n > 3) throw std::invalid_argument("grid_optimum: supports 1 <= N <= 3 only");
    if (resolution < 100) throw std::invalid_argument("grid_optimum: resolution must be >= 100");

    double sum_lo = 0.0;
    for (const auto& u : users) sum_lo += u.lo;
    if (sum_lo > capacity) throw infeasible_error("grid_optimum: lower bounds exceed capacity");

    auto grid_point = [&](int i, int k) {
        return users[i].lo + (users[i].hi - users[i].lo) * static_cast<double>(k) /
                                 static_cast<double>(resolution - 1);
    };
    auto objective_of = [&](const std::vector<double>& us_vals) {
        double s = 0.0, mn = us_vals.front();
        for (double v : us_vals) {
            s += ipow(v, p);
            mn = std::min(mn, v);
        }
        return alpha * iroot(s, p) + (1.0 - alpha) * mn;
    };

    GridOptimum best;
    best.objective = -std::numeric_limits<double>::infinity();
    std::vector<double> x(n), uv(n);

    auto complete_last = [&](double used) -> bool {
        double rest = std::min(users[n - 1].hi, capacity - used);
        if (rest < users[n - 1].lo) return false;
        x[n - 1] = rest;
        uv[n - 1] = users[n - 1].value(rest);
        return true;
    };

    if (n == 1) {
        if (complete_last(0.0)) {
            double obj = objective_of(uv);
            best.objective = obj;
            best.x = x;
        }
    } else if (n == 2) {
        for (int k = 0; k < resolution; ++k) {
            x[0] = grid_point(0, k);
            uv[0] = users[0].value(x[0]);
            if (!complete_last(x[0])) continue;
            double obj = objective_of(uv);
            if (obj > best.objective) {
                best.objective = obj;
                best.x = x;
            }
        }
    } else {
        std::vector<double> u0(resolution), u1(resolution);
        for (int k = 0; k < resolution; ++k) {
            u0[k] = users[0].value(grid_point(0, k));
            u1[k] = users[1].value(grid_point(1, k));
        }
        for (int k0 = 0; k0 < resolution; ++k0) {
            x[0] = grid_point(0, k0);
            uv[0] = u0[k0];
            for (int k1 = 0; k1 < resolution; ++k1) {
                x[1] = grid_point(1, k1);
                if (x[0] + x[1] + users[2].lo > capacity) break;  // x[1] grid is increasing
                uv[1] = u1[k1];
                if (!complete_last(x[0] + x[1])) continue;
                double obj = objective_of(uv);
                if (obj > best.objective) {
                    best.objective = obj;
                    best.x = x;
                }
            }
        }
    }
    if (best.x.empty()) throw infeasible_error("grid_optimum: no feasible grid point");
    return best;
}

inline GridOptimum grid_optimum(const GridOracleSpec& spec) {
    auto us = bounded_utilities(spec.scenario);
    return grid_optimum(std::span<const BoundedUtility>(us), spec.scenario.total_bandwidth,
                        spec.scenario.alpha, spec.scenario.p, spec.resolution);
}

/// Exact integer MCKP optimum by full enumeration; infeasible instances
/// yield an empty optional.
struct EnumResult {
    std::vector<int> choice;
    double profit = 0.0;
    double weight = 0.0;
};

inline std::optional<EnumResult> mckp_enumerate(const MckpInstance& inst) {
    if (!inst.all_classes_nonempty()) throw std::invalid_argument("mckp_enumerate: empty class");
    double combos = 1.0;
    for (const auto& c : inst.classes) combos *= static_cast<double>(c.demands.size());
    if (combos > 1e6) throw std::invalid_argument("mckp_enumerate: instance too large");

    const int n = static_cast<int>(inst.classes.size());
    std::vector<int> idx(n, 0);
    std::optional<EnumResult> best;
    for (;;) {
        double w = 0.0, u = 0.0;
        for (int i = 0; i < n; ++i) {
            w += inst.classes[i].demands[idx[i]];
            u += inst.classes[i].profits[idx[i]];
        }
        if (w <= inst.capacity && (!best || u > best->profit)) best = EnumResult{idx, u, w};
        int i = n - 1;
        while (i >= 0 && ++idx[i] == static_cast<int>(inst.classes[i].demands.size())) {
            idx[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return best;
}

/// Same enumeration over the scaled profits; used to cross-check dp_solve.
inline std::optional<long long> mckp_enumerate_scaled(const ScaledInstance& s,
                                                      const MckpInstance& inst) {
    const int n = static_cast<int>(inst.classes.size());
    std::vector<int> idx(n, 0);
    std::optional<long long> best;
    for (;;) {
        double w = 0.0;
        long long sp = 0;
        for (int i = 0; i < n; ++i) {
            w += inst.classes[i].demands[idx[i]];
            sp += s.scaled_profits[i][idx[i]];
        }
        if (w <= inst.capacity && (!best || sp > *best)) best = sp;
        int i = n - 1;
        while (i >= 0 && ++idx[i] == static_cast<int>(inst.classes[i].demands.size())) {
            idx[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return best;
}

} // namespace feo
