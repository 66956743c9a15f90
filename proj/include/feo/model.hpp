#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "feo/errors.hpp"

namespace feo {

inline constexpr double kLn2 = 0.69314718055994530942;

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Link-budget inputs for one node. Powers and gains are kept in the units
/// they are normally quoted in (dBm, dB/dBi, W); conversion to linear scale
/// happens once, in derive_user().
struct PhysicalParams {
    double comm_tx_power_dBm = 43.0;
    double comm_antenna_gain_dB = 19.0;  // transmit antenna of the node
    double bs_antenna_gain_dB = 19.0;    // receive antenna of the base station
    double comm_distance_m = 1.0e2;
    double radar_tx_power_W = 1.0e5;
    double radar_antenna_gain_dBi = 30.0;
    double target_distance_m = 5.0e3;
    double target_cross_section_m2 = 10.0;
    double sigma_proc_m = 1.0e2;        // std-dev of the range process noise
    double carrier_freq_Hz = 1.0e8;
    double boltzmann_J_per_K = 1.38e-23;
    double temperature_K = 1.0e3;
    double pulse_repetition_interval_s = 1.0e-5;
    double comm_channel_gain = 1.0;     // |h_C|^2, linear
    double radar_channel_gain = 1.0;    // |h_R|^2, linear

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument(std::string("PhysicalParams: ") + name +
                                            " must be strictly positive");
        };
        positive(comm_distance_m, "comm_distance_m");
        positive(radar_tx_power_W, "radar_tx_power_W");
        positive(target_distance_m, "target_distance_m");
        positive(target_cross_section_m2, "target_cross_section_m2");
        positive(sigma_proc_m, "sigma_proc_m");
        positive(carrier_freq_Hz, "carrier_freq_Hz");
        positive(boltzmann_J_per_K, "boltzmann_J_per_K");
        positive(temperature_K, "temperature_K");
        positive(pulse_repetition_interval_s, "pulse_repetition_interval_s");
        positive(comm_channel_gain, "comm_channel_gain");
        positive(radar_channel_gain, "radar_channel_gain");
    }
};

/// Per-user utility parameters, all linear scale.
///   communication rate  g(x) = x * log2(1 + tau/x)
///   estimation rate     f(x) = 1/(2 t_pri) * log2(1 + nu x)
struct UserModel {
    double tau = 1.0;     // received comm SNR times bandwidth, Hz
    double nu = 1.0;      // radar SNR density, 1/Hz
    double t_pri = 0.5;   // pulse repetition interval, s
    double xi_lo = 0.0;   // lower bandwidth bound, Hz
    double xi_hi = 0.0;   // upper bandwidth bound, Hz

    void validate() const {
        if (!(tau > 0.0) || !(nu > 0.0) || !(t_pri > 0.0))
            throw std::invalid_argument("UserModel: tau, nu, t_pri must be positive");
        if (!(0.0 < xi_lo && xi_lo < xi_hi))
            throw std::invalid_argument("UserModel: bounds must satisfy 0 < xi_lo < xi_hi");
    }
};

inline double comm_rate(double x, const UserModel& u) {
    if (x < 0.0) throw std::domain_error("comm_rate: negative bandwidth");
    if (x == 0.0) return 0.0;  // continuity limit of x*log2(1+tau/x)
    return x * std::log2(1.0 + u.tau / x);
}

inline double est_rate(double x, const UserModel& u) {
    if (x < 0.0) throw std::domain_error("est_rate: negative bandwidth");
    return std::log2(1.0 + u.nu * x) / (2.0 * u.t_pri);
}

inline double utility(double x, const UserModel& u) { return est_rate(x, u) + comm_rate(x, u); }

/// Closed-form u'(x), with every term expressed in log2 units so that it is
/// the exact derivative of utility().
inline double utility_derivative(double x, const UserModel& u) {
    if (!(x > 0.0)) throw std::domain_error("utility_derivative: requires x > 0");
    double f_term = u.nu / (2.0 * u.t_pri * kLn2 * (1.0 + u.nu * x));
    double g_term = std::log2((u.tau + x) / x) - u.tau / ((u.tau + x) * kLn2);
    return f_term + g_term;
}

/// Builds the abstract utility parameters from the link budget.
/// Received powers follow the standard one-way and two-way budgets:
///   P_rC = P_C G_T G_B / ((4 pi)^2 d_C^2 f_c^2)
///   P_rR = P_R G_R^2 sigma_cross / ((4 pi)^3 d_R^4 f_c^2)
/// and kappa = 8 pi^2 sigma_proc^2 gamma^2 with gamma^2 = (2 pi)^2 / 12.
inline UserModel derive_user(const PhysicalParams& ph, double xi_lo, double xi_hi) {
    ph.validate();
    const double pi = 3.14159265358979323846;
    double p_comm = dbm_to_watts(ph.comm_tx_power_dBm);
    double g_tx = db_to_linear(ph.comm_antenna_gain_dB);
    double g_bs = db_to_linear(ph.bs_antenna_gain_dB);
    double g_radar = db_to_linear(ph.radar_antenna_gain_dBi);
    double fc2 = ph.carrier_freq_Hz * ph.carrier_freq_Hz;

    double p_rc = p_comm * g_tx * g_bs /
                  (std::pow(4.0 * pi, 2) * ph.comm_distance_m * ph.comm_distance_m * fc2);
    double p_rr = ph.radar_tx_power_W * g_radar * g_radar * ph.target_cross_section_m2 /
                  (std::pow(4.0 * pi, 3) * std::pow(ph.target_distance_m, 4) * fc2);

    double gamma2 = std::pow(2.0 * pi, 2) / 12.0;
    double kappa = 8.0 * pi * pi * ph.sigma_proc_m * ph.sigma_proc_m * gamma2;
    double noise = ph.boltzmann_J_per_K * ph.temperature_K;

    UserModel u;
    u.tau = ph.comm_channel_gain * p_rc / noise;
    u.nu = kappa * ph.radar_channel_gain * p_rr / noise;
    u.t_pri = ph.pulse_repetition_interval_s;
    u.xi_lo = xi_lo;
    u.xi_hi = xi_hi;
    if (!(u.tau > 0.0) || !(u.nu > 0.0))
        throw std::invalid_argument("derive_user: derived tau/nu not positive");
    u.validate();
    return u;
}

/// A complete problem instance.
struct Scenario {
    std::vector<UserModel> users;
    double total_bandwidth = 0.0;  // B, Hz
    double alpha = 1.0;            // efficiency weight in [0,1]
    int p = 1;                     // norm order, integer >= 1
    double delta = 0.3;            // target accuracy; the solver uses eps = delta/6
    std::uint64_t seed = 0;        // channel-sampling seed, carried for reporting

    int n() const { return static_cast<int>(users.size()); }
    double epsilon() const { return delta / 6.0; }

    void validate() const {
        if (users.empty()) throw std::invalid_argument("Scenario: needs at least one user");
        if (!(total_bandwidth > 0.0)) throw std::invalid_argument("Scenario: B must be positive");
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw std::invalid_argument("Scenario: alpha must lie in [0,1]");
        if (p < 1) throw std::invalid_argument("Scenario: p must be an integer >= 1");
        if (!(delta > 0.0 && delta < 1.0))
            throw std::invalid_argument("Scenario: delta must lie in (0,1)");
        double sum_lo = 0.0;
        for (const auto& u : users) {
            u.validate();
            sum_lo += u.xi_lo;
        }
        if (sum_lo > total_bandwidth)
            throw infeasible_error("Scenario: sum of lower bounds exceeds B");
    }
};

} // namespace feo
