#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "feo/model.hpp"
#include "feo/objective.hpp"
#include "feo/rootfind.hpp"

namespace feo {

/// lp-norm of the utilities at the lower bounds; a positive lower bound on
/// the optimal efficiency. Valid for any scenario; the solver uses it even
/// when the u(xi_lo) >= 1 normalization is relaxed.
inline double lp_norm_at_lower_bounds(const Scenario& sc) {
    double s = 0.0;
    for (const auto& u : sc.users) s += ipow(utility(u.xi_lo, u), sc.p);
    return iroot(s, sc.p);
}

/// Same value under the normalization that makes it at least N^(1/p).
inline double lower_bound_L(const Scenario& sc) {
    for (const auto& u : sc.users)
        if (utility(u.xi_lo, u) < 1.0)
            throw std::invalid_argument("lower_bound_L: utility(xi_lo) >= 1 violated");
    return lp_norm_at_lower_bounds(sc);
}

inline double lipschitz_c(double tau, double epsilon) {
    return std::max(2.0, 2.0 * std::log2(tau / epsilon));
}

/// Argument-space accuracy for the level roots of one user. The denominator
/// is a slope proxy over the working bracket; stiffer utilities (larger nu or
/// tau) get a tighter tolerance.
inline double lipschitz_tolerance(const UserModel& u, double epsilon, double L, int n, int p,
                                  double c) {
    double root_n = std::pow(static_cast<double>(n), 1.0 / p);
    double numer = epsilon * epsilon * L / root_n;
    double denom = u.nu / (2.0 * u.t_pri) + u.tau * c * root_n / (epsilon * L);
    return numer / denom;
}

inline double lipschitz_tolerance(const UserModel& u, double epsilon, double L, int n, int p) {
    return lipschitz_tolerance(u, epsilon, L, n, p, lipschitz_c(u.tau, epsilon));
}

/// Approximate roots of utility(x) = level for the geometric level ladder
/// level_j = (eps L / N^(1/p)) (1+eps)^j, j = 0..K.
struct BreakpointSet {
    int user_index = 0;
    long long k_levels = 0;          // K from the ceiling formula
    std::vector<double> levels;      // retained target utilities, increasing
    std::vector<double> roots;       // matching approximate roots, strictly increasing
};

inline long long breakpoint_level_count(const UserModel& u, double epsilon, double L, int n,
                                        int p) {
    double root_n = std::pow(static_cast<double>(n), 1.0 / p);
    double ratio = root_n * utility(u.xi_hi, u) / (epsilon * L);
    return static_cast<long long>(std::ceil(std::log(ratio) / std::log1p(epsilon)));
}

/// Positive floor of the root bracket: half the smaller of the two bandwidths
/// at which the communication part resp. the estimation part stay below half
/// the base level, then halved further until utility(y0) is strictly below
/// the base level.
inline double breakpoint_bracket_floor(const UserModel& u, double epsilon, double L, int n,
                                       int p, double base_level) {
    double root_n = std::pow(static_cast<double>(n), 1.0 / p);
    double c = lipschitz_c(u.tau, epsilon);
    double y1 = epsilon * L / (2.0 * c * root_n);
    double y2 = std::expm1(2.0 * u.t_pri * epsilon * L / root_n * kLn2) / u.nu;
    double y0 = 0.5 * std::min(y1, y2);
    y0 = std::min(y0, 0.5 * u.xi_hi);
    while (utility(y0, u) >= base_level && y0 > 1e-300) y0 *= 0.5;
    return y0;
}

/// Computes the level ladder and its roots for one user. Roots are bisected
/// to the lipschitz_tolerance argument accuracy and then refined until the
/// reached utility is within eps * level of the target level. Levels above
/// utility(xi_hi) are skipped.
inline BreakpointSet breakpoints(const UserModel& u, int user_index, double epsilon, double L,
                                 int n, int p) {
    u.validate();
    BreakpointSet bs;
    bs.user_index = user_index;
    bs.k_levels = breakpoint_level_count(u, epsilon, L, n, p);

    double root_n = std::pow(static_cast<double>(n), 1.0 / p);
    double base = epsilon * L / root_n;
    double u_max = utility(u.xi_hi, u);
    if (bs.k_levels < 0) return bs;

    double y0 = breakpoint_bracket_floor(u, epsilon, L, n, p, base);
    double tol0 = lipschitz_tolerance(u, epsilon, L, n, p);
    double log_ratio = std::log1p(epsilon);

    for (long long j = 0; j <= bs.k_levels; ++j) {
        double level = base * std::exp(static_cast<double>(j) * log_ratio);
        if (level > u_max) break;
        double tol = tol0;
        double root = 0.0;
        for (;;) {
            BisectionSpec spec{y0, u.xi_hi, tol,
                               BisectionSpec::required_iterations(y0, u.xi_hi, tol) + 2};
            root = bisect_increasing([&](double x) { return utility(x, u); }, level, spec);
            if (std::abs(utility(root, u) - level) <= 0.9 * epsilon * level || tol < 1e-300) break;
            tol *= 0.125;
        }
        // Keep roots strictly increasing: a root colliding with its
        // predecessor replaces it (the higher level wins).
        while (!bs.roots.empty() && root <= bs.roots.back()) {
            bs.roots.pop_back();
            bs.levels.pop_back();
        }
        bs.levels.push_back(level);
        bs.roots.push_back(root);
    }
    return bs;
}

/// Discrete bandwidth choices for one user at threshold phi: the breakpoint
/// roots and both bounds, clamped to [xi_lo, xi_hi] and filtered to
/// utility(d) >= phi. Empty means the threshold is out of reach for this
/// user.
struct DemandSet {
    int user_index = 0;
    std::vector<double> demands;  // sorted, deduplicated
    std::vector<double> profits;  // utility(d)^p per demand
};

inline DemandSet demand_set(const BreakpointSet& bs, const UserModel& u, double phi, int p) {
    DemandSet ds;
    ds.user_index = bs.user_index;
    std::vector<double> cand;
    cand.reserve(bs.roots.size() + 2);
    for (double r : bs.roots)
        if (r >= u.xi_lo && r <= u.xi_hi) cand.push_back(r);
    cand.push_back(u.xi_lo);
    cand.push_back(u.xi_hi);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (double d : cand) {
        double ud = utility(d, u);
        if (ud >= phi) {
            ds.demands.push_back(d);
            ds.profits.push_back(ipow(ud, p));
        }
    }
    return ds;
}

} // namespace feo
