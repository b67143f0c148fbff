#pragma once

#include "gpsol/grid.hpp"
#include "gpsol/state.hpp"

namespace gpsol {

inline constexpr double kSoundSpeed = 1.4142135623730951;

/// Explicit gray soliton u(x) = sqrt((2-c^2)/2) tanh(sqrt(2-c^2) x / 2) - i c / sqrt(2),
/// stored through its modulus and phase gradient.
struct ScalarSoliton {
    double speed;
    SampledField rho;
    SampledField phi;

    /// (rho, phi, v = 0).
    PairState state() const;
};

/// rho^2 = 1 - (2-c^2)/2 sech^2(sqrt(2-c^2) x / 2), phi = c (1 - rho^2) / (2 rho^2).
/// The two boundary nodes are pinned to (1, 0). For c = 0 (black soliton) phi = 0.
/// Throws std::domain_error unless 0 <= c < sqrt(2).
ScalarSoliton build_scalar(double c, const Grid& grid);

/// (2 - c^2)^{3/2} / 3.
double scalar_energy(double c);

/// Momentum of the profile of build_scalar(c) on [-L, L], by quadrature on nodes graded
/// toward the dip (resolved for any c > 0). Requires 0 < c < sqrt(2).
double scalar_momentum_of_speed(double c, const Grid& grid);

/// Inverse of scalar_momentum_of_speed by bisection (|dc| <= 1e-10). Requires 0 < q < pi/2.
double speed_of_momentum(double q, const Grid& grid);

} // namespace gpsol
