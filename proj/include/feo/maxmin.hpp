#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "feo/errors.hpp"
#include "feo/model.hpp"
#include "feo/rootfind.hpp"

namespace feo {

/// A strictly increasing utility together with its bandwidth box. The solvers
/// below are written against this interface so that arbitrary utility shapes
/// can be driven through them, not only UserModel.
struct BoundedUtility {
    double lo = 0.0;
    double hi = 0.0;
    std::function<double(double)> value;
};

inline std::vector<BoundedUtility> bounded_utilities(const Scenario& sc) {
    std::vector<BoundedUtility> out;
    out.reserve(sc.users.size());
    for (const auto& u : sc.users)
        out.push_back({u.xi_lo, u.xi_hi, [u](double x) { return utility(x, u); }});
    return out;
}

/// Cheapest bandwidth at which user i reaches utility phi, clamped to its
/// lower bound. Returns the upper end of the final bisection bracket so the
/// reached utility is not below phi.
inline double bandwidth_for_utility(const BoundedUtility& u, double phi, double arg_tol) {
    if (u.value(u.lo) >= phi) return u.lo;
    double lo = u.lo, hi = u.hi;
    double v_hi = u.value(hi);
    if (v_hi < phi) throw bracket_error("bandwidth_for_utility: phi above utility(xi_hi)");
    while (hi - lo > arg_tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (u.value(mid) < phi)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

/// Lowest per-user utility when everyone sits at the lower bound; the bottom
/// of the max-min search range.
inline double phi_lower(std::span<const BoundedUtility> users) {
    double m = users.front().value(users.front().lo);
    for (const auto& u : users) m = std::min(m, u.value(u.lo));
    return m;
}

inline double phi_lower(const Scenario& sc) {
    auto us = bounded_utilities(sc);
    return phi_lower(us);
}

/// Approximate max-min fair value: the largest phi such that giving every
/// user the cheapest bandwidth reaching phi fits in the capacity. The
/// feasibility predicate is monotone in phi, so plain bisection on the value
/// axis converges; the returned value is feasible and within tol_value of the
/// true optimum from below.
inline double max_min_value(std::span<const BoundedUtility> users, double capacity,
                            double tol_value) {
    if (users.empty()) throw std::invalid_argument("max_min_value: no users");
    if (!(tol_value > 0.0)) throw std::invalid_argument("max_min_value: tolerance must be positive");

    double sum_lo = 0.0;
    for (const auto& u : users) sum_lo += u.lo;
    if (sum_lo > capacity)
        throw infeasible_error("max_min_value: lower bounds alone exceed capacity");

    auto feasible = [&](double phi) {
        double total = 0.0;
        for (const auto& u : users) {
            if (u.value(u.hi) < phi) return false;
            double arg_tol = std::max((u.hi - u.lo) * 1e-13, 1e-300);
            total += bandwidth_for_utility(u, phi, arg_tol);
            if (total > capacity) return false;
        }
        return true;
    };

    double lo = phi_lower(users);  // always feasible: costs at most sum of lower bounds
    double hi = users.front().value(users.front().hi);
    for (const auto& u : users) hi = std::min(hi, u.value(u.hi));
    if (hi <= lo) return lo;
    if (feasible(hi)) return hi;

    while (hi - lo > tol_value) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (feasible(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

/// Scenario wrapper; tol_value plays the role of the accuracy delta' of the
/// value-axis bisection.
inline double max_min_value(const Scenario& sc, double tol_value) {
    auto us = bounded_utilities(sc);
    return max_min_value(std::span<const BoundedUtility>(us), sc.total_bandwidth, tol_value);
}

/// Geometric grid over [1, phi_bar] with ratio (1+eps), plus phi_bar itself.
struct PhiGrid {
    double phi_bar = 1.0;
    double epsilon = 0.0;
    std::vector<double> points;  // strictly increasing, points[0] == 1
};

inline PhiGrid build_phi_grid(double phi_bar, double epsilon) {
    if (!(phi_bar >= 1.0))
        throw std::invalid_argument("build_phi_grid: phi_bar < 1 violates the u(xi_lo) >= 1 normalization");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("build_phi_grid: epsilon must be positive");
    PhiGrid g;
    g.phi_bar = phi_bar;
    g.epsilon = epsilon;
    double step = std::log1p(epsilon);
    long long h_max = static_cast<long long>(std::floor(std::log(phi_bar) / step));
    for (long long h = 0; h <= h_max; ++h) {
        double pt = std::exp(static_cast<double>(h) * step);
        if (pt > phi_bar) break;  // guards the floor computation against log rounding
        g.points.push_back(pt);
    }
    if (g.points.empty() || g.points.back() < phi_bar) g.points.push_back(phi_bar);
    return g;
}

} // namespace feo
