#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "feo/discretize.hpp"
#include "feo/errors.hpp"

namespace feo {

/// One multiple-choice knapsack instance: pick exactly one demand per class,
/// total demand at most capacity, maximize total profit.
struct MckpInstance {
    std::vector<DemandSet> classes;
    double capacity = 0.0;
    double phi = 0.0;  // the threshold this instance encodes

    bool all_classes_nonempty() const {
        for (const auto& c : classes)
            if (c.demands.empty()) return false;
        return !classes.empty();
    }
    double min_demand_total() const {
        double s = 0.0;
        for (const auto& c : classes) s += c.demands.front();
        return s;
    }
};

namespace detail {

struct HullPoint {
    double d, u;
};

// Per-class dominance filter plus upper convex hull in the (demand, profit)
// plane. Incremental profit/demand ratios along the hull are strictly
// decreasing, which makes the global greedy exchange argument exact for the
// LP relaxation.
inline std::vector<HullPoint> lp_hull(const DemandSet& cls) {
    std::vector<HullPoint> pts;
    pts.reserve(cls.demands.size());
    for (std::size_t k = 0; k < cls.demands.size(); ++k) {
        double d = cls.demands[k], u = cls.profits[k];
        if (!pts.empty() && u <= pts.back().u) continue;  // dominated: dearer, not better
        while (!pts.empty() && pts.back().d == d) pts.pop_back();
        while (pts.size() >= 2) {
            const auto& a = pts[pts.size() - 2];
            const auto& b = pts.back();
            if ((u - b.u) * (b.d - a.d) >= (b.u - a.u) * (d - b.d))
                pts.pop_back();
            else
                break;
        }
        pts.push_back({d, u});
    }
    return pts;
}

} // namespace detail

/// Optimal value of the continuous relaxation. Starts from the cheapest
/// demand in every class and repeatedly applies the best remaining hull
/// upgrade, taking the last one fractionally when the capacity binds. Always
/// an upper bound on the integer optimum.
inline double lp_relaxation_value(const MckpInstance& inst) {
    if (!inst.all_classes_nonempty())
        throw std::invalid_argument("lp_relaxation_value: empty class");

    struct Upgrade {
        double ratio, dd, du;
        int cls, idx;
    };
    double weight = 0.0, profit = 0.0;
    std::vector<Upgrade> upgrades;
    for (int c = 0; c < static_cast<int>(inst.classes.size()); ++c) {
        auto hull = detail::lp_hull(inst.classes[c]);
        weight += hull.front().d;
        profit += hull.front().u;
        for (std::size_t k = 1; k < hull.size(); ++k) {
            double dd = hull[k].d - hull[k - 1].d;
            double du = hull[k].u - hull[k - 1].u;
            upgrades.push_back({du / dd, dd, du, c, static_cast<int>(k)});
        }
    }
    if (weight > inst.capacity)
        throw infeasible_error("lp_relaxation_value: cheapest demands exceed capacity");

    // Hull ratios decrease within a class, so a global descending-ratio sweep
    // never takes an upgrade before its in-class predecessor.
    std::sort(upgrades.begin(), upgrades.end(), [](const Upgrade& a, const Upgrade& b) {
        if (a.ratio != b.ratio) return a.ratio > b.ratio;
        if (a.cls != b.cls) return a.cls < b.cls;
        return a.idx < b.idx;
    });
    double room = inst.capacity - weight;
    for (const auto& up : upgrades) {
        if (up.dd <= room) {
            room -= up.dd;
            profit += up.du;
        } else {
            profit += up.ratio * room;
            break;
        }
    }
    return profit;
}

/// Integer profits floor(U / theta) with theta = eps Z / N; the achievable
/// scaled total is then bounded by N' = ceil(N / eps).
struct ScaledInstance {
    double theta = 0.0;
    long long n_prime = 0;
    std::vector<std::vector<long long>> scaled_profits;  // parallel to instance classes
};

inline ScaledInstance scale(const MckpInstance& inst, double epsilon, double z) {
    if (!(z > 0.0)) throw std::invalid_argument("scale: requires Z > 0");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("scale: epsilon must be positive");
    ScaledInstance s;
    const double n = static_cast<double>(inst.classes.size());
    s.theta = epsilon * z / n;
    s.n_prime = static_cast<long long>(std::ceil(n / epsilon - 1e-12));
    s.scaled_profits.resize(inst.classes.size());
    for (std::size_t c = 0; c < inst.classes.size(); ++c) {
        s.scaled_profits[c].reserve(inst.classes[c].profits.size());
        for (double u : inst.classes[c].profits)
            s.scaled_profits[c].push_back(static_cast<long long>(std::floor(u / s.theta)));
    }
    return s;
}

/// Profit-indexed table of minimal bandwidths. zeta[i][a] is the least total
/// bandwidth over choices from the first i classes whose scaled profit is
/// exactly a; the sentinel capacity+1 marks unreachable profits.
struct DpTable {
    int n_classes = 0;
    long long n_prime = 0;
    double sentinel = 0.0;
    std::vector<std::vector<double>> zeta;      // (n+1) x (n_prime+1)
    std::vector<std::vector<int>> choice;       // demand index per (class, profit)
};

struct DpSolution {
    std::vector<int> choice;       // chosen demand index per class
    long long scaled_profit = 0;   // equals the DP's t
    double total_bandwidth = 0.0;
    double unscaled_profit = 0.0;
    double min_bandwidth_at_t = 0.0;  // zeta_N(t)
};

namespace detail {

inline DpTable fill_dp_table(const ScaledInstance& s, const MckpInstance& inst) {
    DpTable t;
    t.n_classes = static_cast<int>(inst.classes.size());
    t.n_prime = s.n_prime;
    t.sentinel = inst.capacity + 1.0;
    t.zeta.assign(t.n_classes + 1, std::vector<double>(t.n_prime + 1, t.sentinel));
    t.choice.assign(t.n_classes + 1, std::vector<int>(t.n_prime + 1, -1));
    t.zeta[0][0] = 0.0;

    for (int i = 1; i <= t.n_classes; ++i) {
        const auto& demands = inst.classes[i - 1].demands;
        const auto& scaled = s.scaled_profits[i - 1];
        for (long long a = 0; a <= t.n_prime; ++a) {
            double best = t.sentinel;
            int best_k = -1;
            for (int k = 0; k < static_cast<int>(demands.size()); ++k) {
                if (scaled[k] > a) continue;
                double prev = t.zeta[i - 1][a - scaled[k]];
                if (prev >= t.sentinel) continue;
                double cand = prev + demands[k];
                if (cand > inst.capacity) cand = t.sentinel;  // cannot lead to a feasible solution
                if (cand < best || (cand == best && best_k >= 0 && demands[k] < demands[best_k])) {
                    best = cand;
                    best_k = k;
                }
            }
            t.zeta[i][a] = best;
            t.choice[i][a] = best >= t.sentinel ? -1 : best_k;
        }
    }
    return t;
}

// Exhaustively maximizes the unscaled profit among choices with scaled profit
// exactly t and total demand within capacity. Only used when the product of
// class sizes is small.
inline bool exact_reconstruction(const ScaledInstance& s, const MckpInstance& inst,
                                 long long target, DpSolution& out) {
    int n = static_cast<int>(inst.classes.size());
    std::vector<int> best;
    double best_u = -1.0, best_w = 0.0;
    std::vector<int> idx(n, 0);
    for (;;) {
        double w = 0.0, u = 0.0;
        long long sp = 0;
        for (int i = 0; i < n; ++i) {
            w += inst.classes[i].demands[idx[i]];
            u += inst.classes[i].profits[idx[i]];
            sp += s.scaled_profits[i][idx[i]];
        }
        if (sp == target && w <= inst.capacity &&
            (u > best_u || (u == best_u && w < best_w))) {
            best_u = u;
            best_w = w;
            best = idx;
        }
        int i = n - 1;
        while (i >= 0 && ++idx[i] == static_cast<int>(inst.classes[i].demands.size())) {
            idx[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    if (best.empty()) return false;
    out.choice = best;
    out.scaled_profit = target;
    out.total_bandwidth = best_w;
    out.unscaled_profit = best_u;
    return true;
}

} // namespace detail

/// Exact optimizer of the scaled instance. Among choice vectors achieving the
/// maximal scaled profit t within capacity, the reconstruction prefers the
/// one with the largest unscaled profit when the instance is small enough to
/// enumerate; otherwise it follows the table backpointers (minimal
/// bandwidth, then smaller demand on ties).
inline DpSolution dp_solve(const ScaledInstance& s, const MckpInstance& inst) {
    if (!inst.all_classes_nonempty()) throw std::invalid_argument("dp_solve: empty class");
    DpTable table = detail::fill_dp_table(s, inst);

    long long t = -1;
    for (long long a = table.n_prime; a >= 0; --a) {
        if (table.zeta[table.n_classes][a] <= inst.capacity) {
            t = a;
            break;
        }
    }
    if (t < 0)
        throw infeasible_error("dp_solve: no choice fits the capacity");

    DpSolution sol;
    sol.min_bandwidth_at_t = table.zeta[table.n_classes][t];

    double combos = 1.0;
    for (const auto& c : inst.classes) combos *= static_cast<double>(c.demands.size());
    if (combos <= 1e5 && detail::exact_reconstruction(s, inst, t, sol)) return sol;

    sol.choice.assign(inst.classes.size(), -1);
    long long a = t;
    for (int i = table.n_classes; i >= 1; --i) {
        int k = table.choice[i][a];
        sol.choice[i - 1] = k;
        a -= s.scaled_profits[i - 1][k];
    }
    sol.scaled_profit = t;
    sol.total_bandwidth = 0.0;
    sol.unscaled_profit = 0.0;
    for (int i = 0; i < table.n_classes; ++i) {
        sol.total_bandwidth += inst.classes[i].demands[sol.choice[i]];
        sol.unscaled_profit += inst.classes[i].profits[sol.choice[i]];
    }

    // Recover part of the flooring loss: within the leftover capacity, move
    // classes to dearer demands of equal scaled profit. A feasible move to a
    // strictly higher scaled profit cannot exist (it would contradict the
    // maximality of t), so the scaled optimum is preserved while the
    // unscaled profit strictly improves.
    double leftover = inst.capacity - sol.total_bandwidth;
    for (;;) {
        int best_i = -1, best_k = -1;
        double best_gain = 0.0, best_dd = 0.0;
        for (int i = 0; i < table.n_classes; ++i) {
            const auto& demands = inst.classes[i].demands;
            const auto& profits = inst.classes[i].profits;
            const auto& scaled = s.scaled_profits[i];
            int cur = sol.choice[i];
            for (int k = cur + 1; k < static_cast<int>(demands.size()); ++k) {
                double dd = demands[k] - demands[cur];
                if (dd > leftover) break;
                if (scaled[k] != scaled[cur]) continue;
                double gain = profits[k] - profits[cur];
                if (gain > best_gain ||
                    (gain == best_gain && best_i >= 0 && dd < best_dd)) {
                    best_gain = gain;
                    best_dd = dd;
                    best_i = i;
                    best_k = k;
                }
            }
        }
        if (best_i < 0) break;
        leftover -= best_dd;
        sol.total_bandwidth += best_dd;
        sol.unscaled_profit += best_gain;
        sol.choice[best_i] = best_k;
    }
    return sol;
}

} // namespace feo
