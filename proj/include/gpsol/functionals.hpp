#pragma once

#include "gpsol/grid.hpp"
#include "gpsol/state.hpp"

namespace gpsol {

/// G(s) = s(2 - s), the weight in the modified momentum.
constexpr double g_weight(double s) { return s * (2.0 - s); }

/// p = 1/2 int G(|1 - rho|) phi.
double momentum(const PairState& s);

/// Q = 1/2 int (1 - rho^2) phi. Equal to p wherever rho <= 1.
double classical_momentum(const PairState& s);

/// ||v||_2^2.
double mass(const PairState& s);

/// Renormalized energy in lifted variables:
///   int 1/2 rho'^2 + 1/4 (1-rho^2)^2 + 1/2 rho^2 phi^2 + 1/2 v'^2 + beta/4 v^4 - alpha/2 (1-rho^2) v^2.
/// The two gradient terms use the edge form dirichlet_form(), the rest the trapezoidal rule.
double energy(const PairState& s, const ConstraintTargets& t);

/// L^2 gradients of energy() (derivative w.r.t. node values divided by the node weight h).
/// Boundary entries are zero.
struct EnergyGradient {
    SampledField rho;
    SampledField phi;
    SampledField v;
};
EnergyGradient energy_gradient(const PairState& s, const ConstraintTargets& t);

/// L^2 gradient of p with respect to rho at fixed phi: 1/2 G'(|1-rho|) d|1-rho|/drho phi.
SampledField momentum_gradient_rho(const PairState& s);

struct CoercivityCheck {
    double lhs; ///< 2||rho'||^2 + ||1-rho^2||^2 + 2||rho phi||^2 + 2||v'||^2 + beta ||v||_4^4
    double rhs; ///< 4 sqrt(2) q + 2 alpha m
};
CoercivityCheck coercivity_check(const PairState& s, const ConstraintTargets& t);

struct FunctionalReport {
    double energy;
    double momentum;
    double classical_momentum;
    double mass;
    double coercivity_lhs;
    double coercivity_rhs;
    double momentum_residual; ///< |p - q|
    double mass_residual;     ///< |mass - m|
};
FunctionalReport report(const PairState& s, const ConstraintTargets& t);

} // namespace gpsol
