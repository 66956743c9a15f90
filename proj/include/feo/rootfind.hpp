#pragma once

#include <cmath>
#include <concepts>
#include <stdexcept>

#include "feo/errors.hpp"

namespace feo {

/// Bisection parameters. The tolerance is on the *argument*: the returned
/// point is within tol_abs of the true root.
struct BisectionSpec {
    double lo = 0.0;
    double hi = 1.0;
    double tol_abs = 1e-9;
    int max_iter = 200;

    static int required_iterations(double lo, double hi, double tol_abs) {
        double w = hi - lo;
        if (w <= tol_abs) return 0;
        return static_cast<int>(std::ceil(std::log2(w / tol_abs)));
    }

    void validate() const {
        if (!(lo < hi)) throw std::invalid_argument("BisectionSpec: requires lo < hi");
        if (!(tol_abs > 0.0)) throw std::invalid_argument("BisectionSpec: requires tol_abs > 0");
        if (max_iter < required_iterations(lo, hi, tol_abs))
            throw std::invalid_argument("BisectionSpec: max_iter below the bisection requirement");
    }
};

/// Finds x with h(x) = target for strictly increasing h on [lo, hi].
/// Maintains h(lo) <= target <= h(hi) every iteration; returns the midpoint of
/// the final bracket, so the argument error is at most tol_abs. Exact hits
/// return early.
template <std::invocable<double> H>
double bisect_increasing(H&& h, double target, const BisectionSpec& spec) {
    spec.validate();
    double lo = spec.lo, hi = spec.hi;
    double h_lo = h(lo), h_hi = h(hi);
    if (h_lo == h_hi) throw bracket_error("bisect_increasing: flat bracket");
    if (!(h_lo <= target && target <= h_hi))
        throw bracket_error("bisect_increasing: target outside [h(lo), h(hi)]");

    int iter = 0;
    while (hi - lo > spec.tol_abs) {
        if (iter >= spec.max_iter)
            throw iteration_error("bisect_increasing: iteration cap reached before tolerance");
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at floating point resolution
        double h_mid = h(mid);
        if (h_mid == target) return mid;
        if (h_mid < target)
            lo = mid;
        else
            hi = mid;
        ++iter;
    }
    return 0.5 * (lo + hi);
}

} // namespace feo
