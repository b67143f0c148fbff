#include "gpsol/scalar_ref.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>


namespace gpsol {

PairState ScalarSoliton::state() const {
    return PairState(rho, phi, SampledField::constant(rho.grid(), 0.0));
}

ScalarSoliton build_scalar(double c, const Grid& grid) {
    if (!(c >= 0.0 && c < kSoundSpeed)) {
        throw std::domain_error("soliton speed must lie in [0, sqrt(2))");
    }
    const double depth = 2.0 - c * c;
    const double k = std::sqrt(depth) / 2.0;
    const std::size_t n = grid.size();
    std::vector<double> rho(n), phi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double sech = 1.0 / std::cosh(k * grid.x(i));
        // 1 - rho^2 computed directly to keep the tails accurate
        const double hole = 0.5 * depth * sech * sech;
        const double r2 = 1.0 - hole;
        rho[i] = std::sqrt(r2);
        phi[i] = c == 0.0 ? 0.0 : c * hole / (2.0 * r2);
    }
    rho.front() = rho.back() = 1.0;
    phi.front() = phi.back() = 0.0;
    return {c, SampledField(grid, std::move(rho)), SampledField(grid, std::move(phi))};
}

double scalar_energy(double c) {
    if (!(c >= 0.0 && c < kSoundSpeed)) {
        throw std::domain_error("soliton speed must lie in [0, sqrt(2))");
    }
    return std::pow(2.0 - c * c, 1.5) / 3.0;
}

double scalar_momentum_of_speed(double c, const Grid& grid) {
    if (!(c > 0.0 && c < kSoundSpeed)) {
        throw std::domain_error("soliton speed must lie in (0, sqrt(2))");
    }
    // Same integrand as momentum() on build_scalar(c), 1/2 G(1 - rho) phi = c hole^2 / (4 rho^2),
    // but on nodes x = w sinh(s) that follow the dip: its width shrinks like c and a
    // uniform grid stops resolving it once c is comparable to the spacing.
    const double depth = 2.0 - c * c;
    const double k = std::sqrt(depth) / 2.0;
    const double w = c / k;
    const double s_max = std::asinh(grid.half_width() / w);
    constexpr int kNodes = 4000;
    const double ds = s_max / kNodes;
    double sum = 0.0;
    for (int j = 0; j <= kNodes; ++j) {
        const double s = j * ds;
        const double x = w * std::sinh(s);
        const double sech = 1.0 / std::cosh(k * x);
        const double hole = 0.5 * depth * sech * sech;
        const double f = c * hole * hole / (4.0 * (1.0 - hole)) * w * std::cosh(s);
        sum += (j == 0 || j == kNodes) ? 0.5 * f : f;
    }
    return 2.0 * sum * ds;
}

double speed_of_momentum(double q, const Grid& grid) {
    if (!(q > 0.0 && q < std::numbers::pi / 2)) {
        throw std::domain_error("momentum must lie in (0, pi/2)");
    }
    // p(c) decreases from ~pi/2 (c -> 0) to 0 (c -> sqrt 2).
    double lo = 0.0, hi = kSoundSpeed;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= 0.0 || scalar_momentum_of_speed(mid, grid) > q) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace gpsol
