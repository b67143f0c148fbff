#include "gpsol/functionals.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace gpsol {

namespace {

// d/drho of G(|1 - rho|).
double g_weight_slope(double rho) {
    const double s = std::abs(1.0 - rho);
    const double ds = rho < 1.0 ? -1.0 : (rho > 1.0 ? 1.0 : 0.0);
    return (2.0 - 2.0 * s) * ds;
}

} // namespace

double momentum(const PairState& s) {
    const std::size_t n = s.grid().size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = g_weight(std::abs(1.0 - s.rho()[i])) * s.phi()[i];
    return 0.5 * kernels::integrate(f, s.grid().spacing());
}

double classical_momentum(const PairState& s) {
    const std::size_t n = s.grid().size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = s.rho()[i];
        f[i] = (1.0 - r * r) * s.phi()[i];
    }
    return 0.5 * kernels::integrate(f, s.grid().spacing());
}

double mass(const PairState& s) {
    const std::size_t n = s.grid().size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = s.v()[i] * s.v()[i];
    return kernels::integrate(f, s.grid().spacing());
}

double energy(const PairState& s, const ConstraintTargets& t) {
    const std::size_t n = s.grid().size();
    const double h = s.grid().spacing();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = s.rho()[i];
        const double p = s.phi()[i];
        const double v = s.v()[i];
        const double a = 1.0 - r * r;
        const double v2 = v * v;
        f[i] = 0.25 * a * a + 0.5 * r * r * p * p + 0.25 * t.beta * v2 * v2 - 0.5 * t.alpha * a * v2;
    }
    return 0.5 * dirichlet_form(s.rho()) + 0.5 * dirichlet_form(s.v()) + kernels::integrate(f, h);
}

EnergyGradient energy_gradient(const PairState& s, const ConstraintTargets& t) {
    const std::size_t n = s.grid().size();
    const double h = s.grid().spacing();
    std::vector<double> lap_rho(n), lap_v(n);
    kernels::second_difference(s.rho().values(), h, lap_rho);
    kernels::second_difference(s.v().values(), h, lap_v);
    std::vector<double> g_rho(n, 0.0), g_phi(n, 0.0), g_v(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = s.rho()[i];
        const double p = s.phi()[i];
        const double v = s.v()[i];
        g_rho[i] = -lap_rho[i] + r * (r * r - 1.0) + r * p * p + t.alpha * r * v * v;
        g_phi[i] = r * r * p;
        g_v[i] = -lap_v[i] + t.beta * v * v * v - t.alpha * (1.0 - r * r) * v;
    }
    return {SampledField(s.grid(), std::move(g_rho)), SampledField(s.grid(), std::move(g_phi)),
            SampledField(s.grid(), std::move(g_v))};
}

SampledField momentum_gradient_rho(const PairState& s) {
    const std::size_t n = s.grid().size();
    std::vector<double> g(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) g[i] = 0.5 * g_weight_slope(s.rho()[i]) * s.phi()[i];
    return SampledField(s.grid(), std::move(g));
}

CoercivityCheck coercivity_check(const PairState& s, const ConstraintTargets& t) {
    const std::size_t n = s.grid().size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = s.rho()[i];
        const double a = 1.0 - r * r;
        const double v2 = s.v()[i] * s.v()[i];
        f[i] = a * a + 2.0 * r * r * s.phi()[i] * s.phi()[i] + t.beta * v2 * v2;
    }
    const double lhs = 2.0 * dirichlet_form(s.rho()) + 2.0 * dirichlet_form(s.v()) +
                       kernels::integrate(f, s.grid().spacing());
    const double rhs = 4.0 * std::numbers::sqrt2 * t.q + 2.0 * t.alpha * t.m;
    return {lhs, rhs};
}

FunctionalReport report(const PairState& s, const ConstraintTargets& t) {
    const double p = momentum(s);
    const double ms = mass(s);
    const auto coercive = coercivity_check(s, t);
    return {energy(s, t),
            p,
            classical_momentum(s),
            ms,
            coercive.lhs,
            coercive.rhs,
            std::abs(p - t.q),
            std::abs(ms - t.m)};
}

} // namespace gpsol
