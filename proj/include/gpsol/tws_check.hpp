#pragma once

#include <optional>

#include "gpsol/grid.hpp"
#include "gpsol/state.hpp"

namespace gpsol {

/// Pointwise residuals of the reduced traveling-wave system
///   -rho'' + c^2 (1 - rho^4) / (4 rho^3) = (1 - rho^2 - alpha v^2) rho
///   -v''   = (lambda - alpha rho^2 - beta v^2) v
/// with compact second differences; boundary entries are zero.
struct OdeResidual {
    SampledField rho;
    SampledField v;
    double norm; ///< sqrt(int r_rho^2 + r_v^2)
};
OdeResidual ode_residual(const PairState& s, double c, double lambda, const ConstraintTargets& t);

/// (rho')^2 + (v')^2 - [(1 - c^2/(2 rho^2)) (1 - rho^2)^2 / 2 + (beta v^2/2 + alpha rho^2 - lambda) v^2]
/// with central-difference derivatives; boundary entries are zero.
SampledField first_integral_residual(const PairState& s, double c, double lambda,
                                     const ConstraintTargets& t);

struct ShootResult {
    PairState state;
    /// First |x| at which the orbit left 0 < rho < 2, |v| < 10; nodes beyond it
    /// repeat the last accepted values.
    std::optional<double> blowup_x;
};

/// Even solution of the reduced system from rho(0) = dip, v(0) = amp, rho'(0) = v'(0) = 0,
/// integrated with classical RK4 at the grid spacing and reflected to x < 0.
/// phi is filled with c (1 - rho^2) / (2 rho^2).
ShootResult shoot(double c, double lambda, const ConstraintTargets& t, double dip, double amp,
                  const Grid& grid);

} // namespace gpsol
