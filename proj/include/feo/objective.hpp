#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "feo/model.hpp"

namespace feo {

struct Allocation {
    std::vector<double> x;  // bandwidth per user, Hz
};

// x^p for small integer p, by repeated multiplication (exact for p = 1).
inline double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

inline double iroot(double s, int p) {
    if (p == 1) return s;
    if (p == 2) return std::sqrt(s);
    return std::pow(s, 1.0 / static_cast<double>(p));
}

/// Feasibility of an allocation: capacity and per-user box constraints.
/// The capacity comparison carries a 1e-12 relative slack for accumulated
/// floating point error in sums of shares.
inline bool is_feasible(const Allocation& a, const Scenario& sc) {
    if (a.x.size() != sc.users.size()) return false;
    double total = 0.0;
    for (int i = 0; i < sc.n(); ++i) {
        const auto& u = sc.users[i];
        if (!(a.x[i] >= u.xi_lo && a.x[i] <= u.xi_hi)) return false;
        total += a.x[i];
    }
    return total <= sc.total_bandwidth * (1.0 + 1e-12);
}

inline std::vector<double> per_user_utilities(const Allocation& a, const Scenario& sc) {
    if (a.x.size() != sc.users.size())
        throw std::invalid_argument("allocation length does not match scenario");
    std::vector<double> out(a.x.size());
    for (std::size_t i = 0; i < a.x.size(); ++i) out[i] = utility(a.x[i], sc.users[i]);
    return out;
}

/// lp-norm of the utility vector, the efficiency metric.
inline double f_p_norm(const Allocation& a, const Scenario& sc) {
    auto us = per_user_utilities(a, sc);
    double s = 0.0;
    for (double u : us) s += ipow(u, sc.p);
    return iroot(s, sc.p);
}

/// Minimum utility, the fairness (egalitarian welfare) metric.
inline double f_min(const Allocation& a, const Scenario& sc) {
    auto us = per_user_utilities(a, sc);
    if (us.empty()) throw std::invalid_argument("f_min: empty allocation");
    return *std::min_element(us.begin(), us.end());
}

struct ObjectiveBreakdown {
    double f_p = 0.0;
    double f_min = 0.0;
    double f_total = 0.0;  // alpha * f_p + (1 - alpha) * f_min
    std::vector<double> per_user_utilities;
};

inline ObjectiveBreakdown feo_objective(const Allocation& a, const Scenario& sc) {
    ObjectiveBreakdown b;
    b.per_user_utilities = per_user_utilities(a, sc);
    double s = 0.0;
    double mn = b.per_user_utilities.front();
    for (double u : b.per_user_utilities) {
        s += ipow(u, sc.p);
        mn = std::min(mn, u);
    }
    b.f_p = iroot(s, sc.p);
    b.f_min = mn;
    b.f_total = sc.alpha * b.f_p + (1.0 - sc.alpha) * b.f_min;
    return b;
}

/// Relative efficiency loss of an allocation against the full-efficiency one.
inline double price_of_fairness(double eff_at_alpha1, double eff_at_alpha) {
    if (!(eff_at_alpha1 > 0.0))
        throw std::domain_error("price_of_fairness: reference efficiency must be positive");
    return (eff_at_alpha1 - eff_at_alpha) / eff_at_alpha1;
}

/// Relative fairness loss of an allocation against the max-min fair one.
inline double price_of_efficiency(double fair_at_alpha0, double fair_at_alpha) {
    if (!(fair_at_alpha0 > 0.0))
        throw std::domain_error("price_of_efficiency: reference fairness must be positive");
    return (fair_at_alpha0 - fair_at_alpha) / fair_at_alpha0;
}

} // namespace feo
