#pragma once

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "feo/errors.hpp"
#include "feo/model.hpp"
#include "feo/rng.hpp"

namespace feo {

using nlohmann::json;

namespace detail {

inline const std::vector<std::string>& physical_keys() {
    static const std::vector<std::string> keys = {
        "comm_tx_power_dBm",     "comm_antenna_gain_dB", "bs_antenna_gain_dB",
        "comm_distance_m",       "radar_tx_power_W",     "radar_antenna_gain_dBi",
        "target_distance_m",     "target_cross_section_m2", "sigma_proc_m",
        "carrier_freq_Hz",       "boltzmann_J_per_K",    "temperature_K",
        "pulse_repetition_interval_s", "comm_channel_gain", "radar_channel_gain"};
    return keys;
}

inline double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw parse_error(where + ": missing field '" + key + "'");
    if (!obj[key].is_number()) throw parse_error(where + ": field '" + key + "' must be a number");
    return obj[key].get<double>();
}

inline void check_keys(const json& obj, const std::vector<std::string>& allowed,
                       const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok) throw parse_error(where + ": unknown field '" + it.key() + "'");
    }
}

inline void apply_physical_field(PhysicalParams& ph, const std::string& key, double v) {
    if (key == "comm_tx_power_dBm") ph.comm_tx_power_dBm = v;
    else if (key == "comm_antenna_gain_dB") ph.comm_antenna_gain_dB = v;
    else if (key == "bs_antenna_gain_dB") ph.bs_antenna_gain_dB = v;
    else if (key == "comm_distance_m") ph.comm_distance_m = v;
    else if (key == "radar_tx_power_W") ph.radar_tx_power_W = v;
    else if (key == "radar_antenna_gain_dBi") ph.radar_antenna_gain_dBi = v;
    else if (key == "target_distance_m") ph.target_distance_m = v;
    else if (key == "target_cross_section_m2") ph.target_cross_section_m2 = v;
    else if (key == "sigma_proc_m") ph.sigma_proc_m = v;
    else if (key == "carrier_freq_Hz") ph.carrier_freq_Hz = v;
    else if (key == "boltzmann_J_per_K") ph.boltzmann_J_per_K = v;
    else if (key == "temperature_K") ph.temperature_K = v;
    else if (key == "pulse_repetition_interval_s") ph.pulse_repetition_interval_s = v;
    else if (key == "comm_channel_gain") ph.comm_channel_gain = v;
    else if (key == "radar_channel_gain") ph.radar_channel_gain = v;
}

} // namespace detail

/// Reads a scenario document. Layout:
///   system   : B, alpha, p, delta, seed
///   defaults : Table-style physical parameters plus xi_lo / xi_hi
///   users    : list; each entry either overrides physical parameters or
///              gives tau / nu / t_pri directly. Channel gains left
///              unspecified are sampled uniformly from (0.5, 1) using the
///              system seed, in user order.
inline Scenario scenario_from_json(const json& doc, int n_users_override = -1) {
    if (!doc.is_object()) throw parse_error("scenario: top level must be an object");
    detail::check_keys(doc, {"system", "defaults", "users"}, "scenario");
    if (!doc.contains("system")) throw parse_error("scenario: missing 'system' section");

    const json& system = doc["system"];
    detail::check_keys(system, {"B", "alpha", "p", "delta", "seed"}, "system");
    Scenario sc;
    sc.total_bandwidth = detail::require_number(system, "B", "system");
    if (system.contains("alpha")) sc.alpha = detail::require_number(system, "alpha", "system");
    if (system.contains("p")) {
        if (!system["p"].is_number_integer()) throw parse_error("system: field 'p' must be an integer");
        sc.p = system["p"].get<int>();
    }
    if (system.contains("delta")) sc.delta = detail::require_number(system, "delta", "system");
    if (system.contains("seed")) sc.seed = system["seed"].get<std::uint64_t>();

    json defaults = doc.contains("defaults") ? doc["defaults"] : json::object();
    {
        auto allowed = detail::physical_keys();
        allowed.push_back("xi_lo");
        allowed.push_back("xi_hi");
        detail::check_keys(defaults, allowed, "defaults");
    }

    json users = doc.contains("users") ? doc["users"] : json::array();
    if (!users.is_array()) throw parse_error("users: must be a list");
    if (n_users_override >= 0) {
        users = json::array();
        for (int i = 0; i < n_users_override; ++i) users.push_back(json::object());
    }
    if (users.empty()) throw parse_error("users: list must not be empty");

    std::mt19937_64 gen(sc.seed);
    int index = 0;
    for (const auto& entry : users) {
        std::string where = "users[" + std::to_string(index) + "]";
        if (!entry.is_object()) throw parse_error(where + ": must be an object");
        bool direct = entry.contains("tau") || entry.contains("nu") || entry.contains("t_pri");
        UserModel u;
        if (direct) {
            detail::check_keys(entry, {"tau", "nu", "t_pri", "xi_lo", "xi_hi"}, where);
            u.tau = detail::require_number(entry, "tau", where);
            u.nu = detail::require_number(entry, "nu", where);
            u.t_pri = detail::require_number(entry, "t_pri", where);
        } else {
            auto allowed = detail::physical_keys();
            allowed.push_back("xi_lo");
            allowed.push_back("xi_hi");
            detail::check_keys(entry, allowed, where);
            PhysicalParams ph;
            for (const auto& key : detail::physical_keys()) {
                if (defaults.contains(key))
                    detail::apply_physical_field(ph, key, detail::require_number(defaults, key, "defaults"));
                if (entry.contains(key))
                    detail::apply_physical_field(ph, key, detail::require_number(entry, key, where));
            }
            if (!entry.contains("comm_channel_gain") && !defaults.contains("comm_channel_gain"))
                ph.comm_channel_gain = uniform(gen, 0.5, 1.0);
            if (!entry.contains("radar_channel_gain") && !defaults.contains("radar_channel_gain"))
                ph.radar_channel_gain = uniform(gen, 0.5, 1.0);
            double xi_lo = entry.contains("xi_lo") ? detail::require_number(entry, "xi_lo", where)
                                                   : detail::require_number(defaults, "xi_lo", "defaults");
            double xi_hi = entry.contains("xi_hi") ? detail::require_number(entry, "xi_hi", where)
                                                   : detail::require_number(defaults, "xi_hi", "defaults");
            try {
                sc.users.push_back(derive_user(ph, xi_lo, xi_hi));
                ++index;
                continue;
            } catch (const std::invalid_argument& e) {
                throw parse_error(where + ": " + e.what());
            }
        }
        u.xi_lo = entry.contains("xi_lo") ? detail::require_number(entry, "xi_lo", where)
                                          : detail::require_number(defaults, "xi_lo", "defaults");
        u.xi_hi = entry.contains("xi_hi") ? detail::require_number(entry, "xi_hi", where)
                                          : detail::require_number(defaults, "xi_hi", "defaults");
        try {
            u.validate();
        } catch (const std::invalid_argument& e) {
            throw parse_error(where + ": " + e.what());
        }
        sc.users.push_back(u);
        ++index;
    }
    return sc;
}

/// Serializes a resolved scenario; users are written in the direct
/// tau / nu / t_pri form, so load(save(sc)) reproduces sc exactly.
inline json scenario_to_json(const Scenario& sc) {
    json doc;
    doc["system"] = {{"B", sc.total_bandwidth}, {"alpha", sc.alpha},     {"p", sc.p},
                     {"delta", sc.delta},       {"seed", sc.seed}};
    doc["users"] = json::array();
    for (const auto& u : sc.users)
        doc["users"].push_back({{"tau", u.tau},
                                {"nu", u.nu},
                                {"t_pri", u.t_pri},
                                {"xi_lo", u.xi_lo},
                                {"xi_hi", u.xi_hi}});
    return doc;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open scenario file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("scenario file ") + path + ": " + e.what());
    }
}

inline Scenario load_scenario(const std::string& path, int n_users_override = -1) {
    return scenario_from_json(load_json_file(path), n_users_override);
}

inline void save_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open for writing: " + path);
    out << scenario_to_json(sc).dump(2) << "\n";
}

} // namespace feo
