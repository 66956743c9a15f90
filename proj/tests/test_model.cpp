#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "feo/model.hpp"
#include "feo/rng.hpp"
#include "feo/verify.hpp"

using namespace feo;
using Catch::Approx;

namespace {

UserModel pair_user_one() { return UserModel{1.0, 1.0, 0.5, 1e-3, 1.0 - 1e-3}; }

// Central second difference of (f+g)^2 with a relative step.
double squared_utility_curvature(const UserModel& u, double x, double rel_step = 1e-5) {
    double h = rel_step * x;
    auto gamma = [&](double y) {
        double v = utility(y, u);
        return v * v;
    };
    return (gamma(x + h) - 2.0 * gamma(x) + gamma(x - h)) / (h * h);
}

} // namespace

TEST_CASE("communication rate closed form") {
    UserModel u = pair_user_one();
    CHECK(comm_rate(0.0, u) == 0.0);
    CHECK(comm_rate(1.0, u) == Approx(1.0).epsilon(1e-14));
    u.tau = 3.0;
    CHECK(comm_rate(1.0, u) == Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(comm_rate(-1.0, u), std::domain_error);
}

TEST_CASE("estimation rate closed form") {
    UserModel u = pair_user_one();  // nu = 1, t_pri = 0.5
    CHECK(est_rate(0.0, u) == 0.0);
    CHECK(est_rate(1.0, u) == Approx(1.0).epsilon(1e-14));
    CHECK(est_rate(3.0, u) == Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(est_rate(-0.5, u), std::domain_error);
}

TEST_CASE("utility sums the two rates") {
    UserModel u = pair_user_one();
    CHECK(utility(1.0, u) == Approx(2.0).epsilon(1e-14));
    CHECK(utility(0.0, u) == 0.0);
}

TEST_CASE("decibel conversions") {
    CHECK(dbm_to_watts(43.0) == Approx(19.952623149688797).epsilon(1e-13));
    CHECK(db_to_linear(19.0) == Approx(79.43282347242814).epsilon(1e-13));
}

TEST_CASE("derived utility parameters from the reference link budget") {
    PhysicalParams ph;  // defaults hold the reference values, unit channel gains
    UserModel u = derive_user(ph, 1e4, 1e7);
    CHECK(u.tau == Approx(577.69842771921424).epsilon(1e-12));
    CHECK(u.nu == Approx(15176.776104298518).epsilon(1e-12));
    CHECK(u.t_pri == 1e-5);

    // Utility at the lower bound clears the normalization threshold.
    double u_lo = utility(1e4, u);
    CHECK(u_lo >= 1.0);
    CHECK(u_lo == Approx(1359674.7640131915).epsilon(1e-10));
    CHECK(utility(1e7, u) == Approx(1857987.1388597123).epsilon(1e-10));
}

TEST_CASE("derive_user converts decibels before use") {
    PhysicalParams ph;
    ph.comm_channel_gain = 0.5;
    UserModel half = derive_user(ph, 1e4, 1e7);
    PhysicalParams unit;
    UserModel full = derive_user(unit, 1e4, 1e7);
    CHECK(half.tau == Approx(0.5 * full.tau).epsilon(1e-13));
    CHECK(half.nu == full.nu);
}

TEST_CASE("utility is strictly increasing", "[property]") {
    std::mt19937_64 gen(101);
    for (int i = 0; i < 200; ++i) {
        UserModel u;
        u.tau = uniform(gen, 0.1, 20.0);
        u.nu = uniform(gen, 0.1, 20.0);
        u.t_pri = uniform(gen, 0.05, 2.0);
        u.xi_lo = 0.5;
        u.xi_hi = 10.0;
        double a = uniform(gen, 0.0, 10.0);
        double b = uniform(gen, 0.0, 10.0);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        REQUIRE(utility(a, u) < utility(b, u));
    }
}

TEST_CASE("communication rate is concave", "[property]") {
    std::mt19937_64 gen(202);
    for (int i = 0; i < 200; ++i) {
        UserModel u;
        u.tau = uniform(gen, 0.1, 20.0);
        u.xi_lo = 0.1;
        u.xi_hi = 10.0;
        double a = uniform(gen, 1e-3, 10.0);
        double b = uniform(gen, 1e-3, 10.0);
        double mid = 0.5 * (a + b);
        REQUIRE(comm_rate(mid, u) >= 0.5 * (comm_rate(a, u) + comm_rate(b, u)) - 1e-12);
    }
}

TEST_CASE("closed-form derivative matches finite differences") {
    std::mt19937_64 gen(303);
    for (int i = 0; i < 100; ++i) {
        UserModel u;
        u.tau = uniform(gen, 0.2, 10.0);
        u.nu = uniform(gen, 0.2, 10.0);
        u.t_pri = uniform(gen, 0.1, 1.0);
        double x = uniform(gen, 0.05, 8.0);
        double h = 1e-6 * x;
        double numeric = (utility(x + h, u) - utility(x - h, u)) / (2.0 * h);
        REQUIRE(utility_derivative(x, u) == Approx(numeric).epsilon(1e-6));
    }
}

TEST_CASE("squared utility is neither concave nor convex") {
    // Curvature of (f+g)^2 flips sign across the bandwidth range.
    UserModel u{1.0, 1.0, 0.5, 1e-3, 2.0};
    double at_third = squared_utility_curvature(u, 1.0 / 3.0);
    double at_one = squared_utility_curvature(u, 1.0);
    CHECK(at_third > 0.0);
    CHECK(at_one < 0.0);

    UserModel slow{1.0, 1.0, 2.0, 1e-3, 2.0};
    CHECK(squared_utility_curvature(slow, 0.05) > 0.0);
    CHECK(squared_utility_curvature(slow, 1.0) < 0.0);
}

TEST_CASE("scenario validation") {
    Scenario sc;
    sc.users = {UserModel{1.0, 1.0, 0.5, 0.9, 3.0}, UserModel{2.0, 1.0, 0.5, 0.9, 3.0}};
    sc.total_bandwidth = 3.0;
    CHECK_NOTHROW(sc.validate());

    Scenario tight = sc;
    tight.total_bandwidth = 1.0;  // below the sum of lower bounds
    CHECK_THROWS_AS(tight.validate(), infeasible_error);

    Scenario bad = sc;
    bad.users[0].xi_lo = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
