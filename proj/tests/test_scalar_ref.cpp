#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gpsol/functionals.hpp"
#include "gpsol/scalar_ref.hpp"
#include "gpsol/tws_check.hpp"
#include "support.hpp"

using namespace gpsol;

TEST_CASE("profile invariants") {
    const Grid g(40.0, 8001);
    for (double c : {0.0, 0.3, 0.6, 1.0, 1.3}) {
        const auto sol = build_scalar(c, g);
        CHECK(std::abs(sol.rho[0] - 1.0) < 1e-6);
        CHECK(std::abs(sol.rho[g.size() - 1] - 1.0) < 1e-6);
        const double r0 = sol.rho[g.center()];
        CHECK(std::abs(r0 * r0 - c * c / 2.0) < 1e-10);
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(sol.rho[i] <= 1.0);
            CHECK(sol.rho[i] == sol.rho[g.size() - 1 - i]);
            CHECK(sol.phi[i] == sol.phi[g.size() - 1 - i]);
            CHECK(std::abs(sol.rho[i] * sol.rho[i] - oracle::rho2(c, g.x(i))) < 1e-6);
        }
    }
}

TEST_CASE("black soliton is |tanh(x / sqrt 2)|") {
    const Grid g(40.0, 8001);
    const auto sol = build_scalar(0.0, g);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        CHECK(std::abs(sol.rho[i] - std::abs(std::tanh(g.x(i) / std::sqrt(2.0)))) < 1e-12);
        CHECK(sol.phi[i] == 0.0);
    }
    CHECK(std::abs(energy(sol.state(), {}) - std::sqrt(8.0) / 3.0) < 2e-3);
}

TEST_CASE("energies of the family") {
    const Grid g(40.0, 8001);
    CHECK(std::abs(energy(build_scalar(1.0, g).state(), {}) - 1.0 / 3.0) < 2e-3);
    CHECK(energy(build_scalar(1.4, g).state(), {}) < 0.01);
    CHECK(scalar_energy(0.0) == doctest::Approx(0.9428090416).epsilon(1e-10));
    CHECK(scalar_energy(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(scalar_energy(std::sqrt(2.0) - 1e-9) < 1e-12);
    for (double c : {0.0, 0.45, 0.9, 1.2}) CHECK(scalar_energy(c) == doctest::Approx(oracle::scalar_energy(c)));
}

TEST_CASE("domain checks") {
    const Grid g(10.0, 101);
    CHECK_THROWS_AS(build_scalar(-0.1, g), std::domain_error);
    CHECK_THROWS_AS(build_scalar(std::sqrt(2.0), g), std::domain_error);
    CHECK_THROWS_AS(scalar_energy(1.5), std::domain_error);
    CHECK_THROWS_AS(scalar_momentum_of_speed(0.0, g), std::domain_error);
    CHECK_THROWS_AS(speed_of_momentum(0.0, g), std::domain_error);
    CHECK_THROWS_AS(speed_of_momentum(M_PI / 2.0, g), std::domain_error);
}

TEST_CASE("momentum of speed") {
    const Grid g(40.0, 8001);
    CHECK(std::abs(scalar_momentum_of_speed(1e-4, g) - M_PI / 2.0) < 1e-3);
    CHECK(std::abs(scalar_momentum_of_speed(1.0, g) - oracle::scalar_momentum(1.0)) < 1e-5);
    CHECK(scalar_momentum_of_speed(1.4, g) < 5e-3);
    double prev = INFINITY;
    for (int k = 1; k <= 50; ++k) {
        const double c = 1.41 * k / 50.0;
        const double q = scalar_momentum_of_speed(c, g);
        CHECK(q < prev);
        if (c <= 1.3) CHECK(std::abs(q - oracle::scalar_momentum(c)) < 2e-5);
        prev = q;
    }
}

TEST_CASE("speed of momentum inverts the dictionary") {
    const Grid g(40.0, 8001);
    CHECK(std::abs(speed_of_momentum(scalar_momentum_of_speed(1.0, g), g) - 1.0) < 1e-8);
    CHECK(speed_of_momentum(M_PI / 2.0 - 1e-6, g) < 1e-2);
    const double c = speed_of_momentum(0.3, g);
    CHECK(scalar_energy(c) < std::sqrt(2.0) * 0.3);
    for (int k = 1; k <= 15; ++k) {
        const double q = 0.1 * k;
        CHECK(scalar_energy(speed_of_momentum(q, g)) < std::sqrt(2.0) * q);
    }
}

TEST_CASE("momentum-speed relation q = (c/4) int (1-rho^2)^2/rho^2") {
    const Grid g(40.0, 8001);
    for (double c : {0.5, 1.0, 1.3}) {
        const auto sol = build_scalar(c, g);
        const auto one = SampledField::constant(g, 1.0);
        const auto hole = one - sol.rho * sol.rho;
        std::vector<double> w(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) w[i] = hole[i] * hole[i] / (sol.rho[i] * sol.rho[i]);
        CHECK(c / 4.0 * integrate(SampledField(g, w)) == doctest::Approx(momentum(sol.state())).epsilon(1e-10));
    }
}

TEST_CASE("closed form solves the traveling-wave equation to O(h^2)") {
    double ode[2], fi[2];
    int k = 0;
    for (std::size_t n : {4001, 8001}) {
        const Grid g(40.0, n);
        const auto s = build_scalar(1.0, g).state();
        const auto r = ode_residual(s, 1.0, 0.37, {});
        ode[k] = r.norm;
        fi[k] = max_abs(first_integral_residual(s, 1.0, 0.37, {}));
        CHECK(max_abs(r.v) == 0.0);
        ++k;
    }
    CHECK(ode[1] < 1e-4);
    CHECK(std::log2(ode[0] / ode[1]) > 1.8);
    CHECK(std::log2(fi[0] / fi[1]) > 1.8);
}
