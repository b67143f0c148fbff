#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "gpsol/functionals.hpp"
#include "gpsol/scalar_ref.hpp"
#include "gpsol/solver.hpp"
#include "support.hpp"

using namespace gpsol;

namespace {

SolveResult solve(ConstraintTargets t) {
    MinimizeConfig cfg;
    cfg.targets = t;
    return minimize(cfg);
}

const SolveResult& manakov() {
    static const SolveResult r = solve({0.3, 0.2, 1.0, 1.0});
    return r;
}

const SolveResult& miscible() {
    static const SolveResult r = solve({0.3, 0.5, 1.0, 4.0});
    return r;
}

} // namespace

TEST_CASE("config validation") {
    MinimizeConfig cfg;
    cfg.targets = {0.3, 0.2, 1.0, 1.0};
    CHECK_NOTHROW(validate(cfg));
    auto bad = cfg;
    bad.max_iters = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.grad_tol = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.backtrack_factor = 1.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.armijo_c = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.symmetrize_every = -1;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.targets.q = 2.0;
    CHECK_THROWS_AS(minimize(bad), std::invalid_argument);
}

TEST_CASE("phase optimum") {
    const Grid g(40.0, 8001);
    SUBCASE("recovers the soliton phase") {
        const auto sol = build_scalar(1.0, g);
        const double q = momentum(sol.state());
        const auto opt = phase_optimum(sol.rho, q);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(opt.phi[i] - sol.phi[i]) < 1e-8);
        CHECK(opt.kinetic == doctest::Approx(0.5 * integrate(sol.rho * sol.rho * opt.phi * opt.phi)).epsilon(1e-12));
    }
    SUBCASE("q = 0") {
        const auto rho = SampledField::sample(g, [](double x) { return 1.0 - 0.2 * std::exp(-x * x); });
        const auto opt = phase_optimum(rho, 0.0);
        CHECK(max_abs(opt.phi) == 0.0);
        CHECK(opt.kinetic == 0.0);
    }
    SUBCASE("linear in q") {
        const auto rho = SampledField::sample(g, [](double x) { return 1.0 - 0.2 * std::exp(-x * x); });
        const auto a = phase_optimum(rho, 0.1), b = phase_optimum(rho, 0.2);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(b.phi[i] == doctest::Approx(2.0 * a.phi[i]));
        CHECK(b.kinetic == doctest::Approx(4.0 * a.kinetic));
    }
    SUBCASE("meets the constraint and beats any other admissible phase") {
        const Grid gg(10.0, 1001);
        std::mt19937_64 rng(41);
        for (int k = 0; k < 20; ++k) {
            const auto s = testing::random_state(gg, rng);
            const double q = 0.25;
            const auto opt = phase_optimum(s.rho(), q);
            const PairState best(s.rho(), opt.phi, s.v());
            CHECK(std::abs(momentum(best) - q) < 1e-12);
            const double p = momentum(s);
            if (std::abs(p) < 1e-3) continue;
            const PairState other(s.rho(), (q / p) * s.phi(), s.v());
            CHECK(0.5 * integrate(s.rho() * s.rho() * other.phi() * other.phi()) >= opt.kinetic - 1e-12);
        }
    }
    SUBCASE("flat modulus cannot carry momentum") {
        CHECK_THROWS_AS(phase_optimum(SampledField::constant(g, 1.0), 0.3), std::domain_error);
    }
}

TEST_CASE("multipliers of the explicit soliton") {
    const Grid g(40.0, 8001);
    const auto s = build_scalar(1.0, g).state();
    const ConstraintTargets t{momentum(s), 0.0, 1.0, 1.0};
    CHECK(std::abs(speed_multiplier(s, t) - 1.0) < 1e-3);
    CHECK_THROWS_AS(extract_multipliers(s, t), std::domain_error);
    // Add a tiny bright bump so the mass is positive; c stays put.
    const auto v = SampledField::sample(g, [](double x) { return std::abs(x) >= 40.0 ? 0.0 : 1e-4 / std::cosh(x); });
    const auto m = extract_multipliers(PairState(s.rho(), s.phi(), v), t);
    CHECK(std::abs(m.c_crosscheck - 1.0) < 1e-3);
}

TEST_CASE("hypotheses and multiplier bounds") {
    auto h = check_hypotheses(0.3, {0.3, 0.5, 1.0, 4.0});
    CHECK(h.h1);
    for (double e : {0.0, 0.1, 0.5}) CHECK_FALSE(check_hypotheses(e, {0.3, 0.2, 1.0, 1.0}).h1);
    h = check_hypotheses(0.4, {0.3, 0.2, 1.0, 1.0});
    CHECK(h.h2);
    CHECK_FALSE(check_hypotheses(0.9, {0.3, 0.2, 1.0, 1.0}).h2);

    const ConstraintTargets t{0.3, 0.2, 1.0, 1.0};
    const double upper = 2.0 + std::sqrt(32.0) * 1.5;
    CHECK(upper == doctest::Approx(10.485).epsilon(1e-4));
    CHECK(multiplier_bounds_hold(1.0, 0.6, t));
    CHECK_FALSE(multiplier_bounds_hold(1.0, 0.4, t));
    CHECK_FALSE(multiplier_bounds_hold(1.0, upper + 1e-9, t));
    CHECK_FALSE(multiplier_bounds_hold(1.5, 0.6, t));
    CHECK_FALSE(multiplier_bounds_hold(0.0, 0.6, t));
    CHECK_FALSE(multiplier_bounds_hold(1.0, std::nullopt, t));
    CHECK(multiplier_bounds_hold(1.0, std::nullopt, {0.3, 0.0, 1.0, 1.0}));
}

TEST_CASE("scalar mode reproduces the explicit family") {
    const Grid g(40.0, 8001);
    for (double c : {0.6, 1.0, 1.3}) {
        const auto r = solve({scalar_momentum_of_speed(c, g), 0.0, 1.0, 1.0});
        CHECK(r.converged);
        CHECK(std::abs(r.energy - oracle::scalar_energy(c)) < 2e-3);
        CHECK(std::abs(r.multiplier_c - c) < 1e-2);
        CHECK_FALSE(r.multiplier_lambda);
        CHECK(max_abs(r.state.v()) == 0.0);
    }
}

TEST_CASE("Manakov pair") {
    const auto& r = manakov();
    const ConstraintTargets t{0.3, 0.2, 1.0, 1.0};
    REQUIRE(r.converged);
    CHECK(r.grad_norm <= 1e-8);
    CHECK(r.energy < scalar_energy(speed_of_momentum(0.3, r.state.grid())));
    CHECK(r.h2_holds);
    CHECK_FALSE(r.h1_holds);
    CHECK(r.bounds_ok);
    REQUIRE(r.multiplier_lambda);
    CHECK(r.multiplier_c > 0.0);
    CHECK(r.multiplier_c < std::sqrt(2.0));
    CHECK(*r.multiplier_lambda > r.multiplier_c * r.multiplier_c / 2.0);
    CHECK(std::abs(r.multiplier_c - r.multiplier_c_crosscheck) < 1e-3);
    CHECK(r.momentum_residual <= 1e-10);
    CHECK(r.mass_residual <= 1e-10);
    const double h = r.state.grid().spacing();
    CHECK(r.ode_residual <= std::max(1e-7, 10.0 * h * h));
    const auto co = coercivity_check(r.state, t);
    CHECK(co.lhs <= co.rhs);
    CHECK(validate(r.state).empty());
}

TEST_CASE("miscible pair has the predicted shape") {
    const auto& r = miscible();
    REQUIRE(r.converged);
    CHECK(r.h1_holds);
    const auto& g = r.state.grid();
    const std::size_t c = g.center(), n = g.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        CHECK(r.state.rho()[i] > 0.0);
        CHECK(r.state.rho()[i] <= 1.0 - 1e-12);
        CHECK(r.state.v()[i] > 0.0);
    }
    for (std::size_t j = 1; j <= c; ++j) {
        CHECK(std::abs(r.state.rho()[c + j] - r.state.rho()[c - j]) <= 1e-8);
        CHECK(std::abs(r.state.v()[c + j] - r.state.v()[c - j]) <= 1e-8);
        CHECK(r.state.rho()[c + j] >= r.state.rho()[c + j - 1] - 1e-8);
        CHECK(r.state.v()[c + j] <= r.state.v()[c + j - 1] + 1e-8);
    }
}

TEST_CASE("trace and constraints along the iteration") {
    const auto& r = manakov();
    REQUIRE(r.trace.size() >= 2);
    CHECK(r.trace.front().iter == 0);
    CHECK(r.trace.back().iter == r.iterations);
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
        CHECK(r.trace[k].energy <= r.trace[k - 1].energy + 1e-12);
        CHECK(r.trace[k].momentum_residual <= 1e-10);
        CHECK(r.trace[k].mass_residual <= 1e-10);
    }
}

TEST_CASE("solves are deterministic") {
    MinimizeConfig cfg;
    cfg.targets = {0.45, 0.1, 1.0, 2.0};
    cfg.grid = Grid(30.0, 3001);
    const auto a = minimize(cfg), b = minimize(cfg);
    CHECK(a.energy == b.energy);
    CHECK(a.iterations == b.iterations);
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) CHECK(a.state.rho()[i] == b.state.rho()[i]);
}

TEST_CASE("an iteration limit is reported, not thrown") {
    MinimizeConfig cfg;
    cfg.targets = {0.3, 0.2, 1.0, 1.0};
    cfg.max_iters = 3;
    const auto r = minimize(cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 3);
    CHECK_FALSE(r.message.empty());
}

TEST_CASE("initial state on a foreign grid is rejected") {
    MinimizeConfig cfg;
    cfg.targets = {0.3, 0.2, 1.0, 1.0};
    CHECK_THROWS_AS(minimize(cfg, PairState::trivial(Grid(10.0, 101))), std::invalid_argument);
}
