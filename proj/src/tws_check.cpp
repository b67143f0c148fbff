#include "gpsol/tws_check.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gpsol/scalar_ref.hpp"

namespace gpsol {

OdeResidual ode_residual(const PairState& s, double c, double lambda, const ConstraintTargets& t) {
    const std::size_t n = s.grid().size();
    const double h = s.grid().spacing();
    std::vector<double> lap_rho(n), lap_v(n);
    kernels::second_difference(s.rho().values(), h, lap_rho);
    kernels::second_difference(s.v().values(), h, lap_v);
    std::vector<double> r_rho(n, 0.0), r_v(n, 0.0), sq(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = s.rho()[i];
        const double v = s.v()[i];
        const double r2 = r * r;
        r_rho[i] = -lap_rho[i] + c * c * (1.0 - r2 * r2) / (4.0 * r2 * r) -
                   (1.0 - r2 - t.alpha * v * v) * r;
        r_v[i] = -lap_v[i] - (lambda - t.alpha * r2 - t.beta * v * v) * v;
        sq[i] = r_rho[i] * r_rho[i] + r_v[i] * r_v[i];
    }
    const double norm = std::sqrt(kernels::integrate(sq, h));
    return {SampledField(s.grid(), std::move(r_rho)), SampledField(s.grid(), std::move(r_v)), norm};
}

SampledField first_integral_residual(const PairState& s, double c, double lambda,
                                     const ConstraintTargets& t) {
    const auto d_rho = derivative(s.rho());
    const auto d_v = derivative(s.v());
    const std::size_t n = s.grid().size();
    std::vector<double> res(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = s.rho()[i];
        const double v = s.v()[i];
        const double r2 = r * r;
        const double hole = 1.0 - r2;
        const double lhs = d_rho[i] * d_rho[i] + d_v[i] * d_v[i];
        const double rhs = (1.0 - c * c / (2.0 * r2)) * hole * hole / 2.0 +
                           (0.5 * t.beta * v * v + t.alpha * r2 - lambda) * v * v;
        res[i] = lhs - rhs;
    }
    return SampledField(s.grid(), std::move(res));
}

ShootResult shoot(double c, double lambda, const ConstraintTargets& t, double dip, double amp,
                  const Grid& grid) {
    if (!(c > 0.0 && c < kSoundSpeed)) throw std::domain_error("shoot: c must lie in (0, sqrt 2)");
    if (!(dip > 0.0 && dip < 1.0)) throw std::domain_error("shoot: dip must lie in (0, 1)");
    if (!(amp >= 0.0)) throw std::domain_error("shoot: amp must be >= 0");

    using Y = std::array<double, 4>; // rho, rho', v, v'
    const auto rhs = [&](const Y& y) -> Y {
        const double r = y[0], v = y[2];
        const double r2 = r * r;
        return {y[1], c * c * (1.0 - r2 * r2) / (4.0 * r2 * r) - (1.0 - r2 - t.alpha * v * v) * r,
                y[3], -(lambda - t.alpha * r2 - t.beta * v * v) * v};
    };
    const auto axpy = [](const Y& a, double s, const Y& b) {
        return Y{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2], a[3] + s * b[3]};
    };

    const std::size_t n = grid.size();
    const std::size_t mid = grid.center();
    const double h = grid.spacing();
    std::vector<double> rho(n), v(n);
    Y y{dip, 0.0, amp, 0.0};
    rho[mid] = dip;
    v[mid] = amp;
    std::optional<double> blowup;
    for (std::size_t k = 1; mid + k < n; ++k) {
        if (!blowup) {
            const Y k1 = rhs(y);
            const Y k2 = rhs(axpy(y, 0.5 * h, k1));
            const Y k3 = rhs(axpy(y, 0.5 * h, k2));
            const Y k4 = rhs(axpy(y, h, k3));
            Y next;
            for (int j = 0; j < 4; ++j) next[j] = y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            const bool ok = std::isfinite(next[0]) && std::isfinite(next[2]) && next[0] > 0.0 &&
                            next[0] < 2.0 && std::abs(next[2]) < 10.0;
            if (ok) {
                y = next;
            } else {
                blowup = grid.x(mid + k);
            }
        }
        rho[mid + k] = rho[mid - k] = y[0];
        v[mid + k] = v[mid - k] = y[2];
    }
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = c * (1.0 - rho[i] * rho[i]) / (2.0 * rho[i] * rho[i]);
    return {PairState(SampledField(grid, std::move(rho)), SampledField(grid, std::move(phi)),
                      SampledField(grid, std::move(v))),
            blowup};
}

} // namespace gpsol
