#pragma once

#include <span>
#include <vector>

#include "gpsol/grid.hpp"
#include "gpsol/state.hpp"

namespace gpsol {

/// Discrete symmetric decreasing rearrangement.
///
/// Samples are sorted in descending order (stable, so ties keep their original
/// order) and placed outward from the center node: rank 0 at the center, then
/// one step right, one step left, two steps right, two steps left, and so on.
/// The multiset of values is preserved exactly. Throws on negative samples.
SampledField rearrange_decreasing(const SampledField& f);
std::vector<double> rearrange_decreasing(std::span<const double> f);

struct Symmetrized {
    PairState state;
    double gamma;
};

/// Rearranges 1 - rho, |phi| and |v|, then rescales the phase gradient by gamma
/// so that the momentum equals t.q again. Mass is preserved exactly.
/// Throws std::domain_error when the rescaling denominator is not positive.
Symmetrized symmetrize(const PairState& s, const ConstraintTargets& t);

struct InequalityCheck {
    double lhs;
    double rhs;
    double margin() const { return rhs - lhs; }
};

/// int f g <= int f* g*, with the uniform node-sum quadrature h * sum_i
/// (identical to integrate() for fields vanishing at both ends).
InequalityCheck check_hardy_littlewood(const SampledField& f, const SampledField& g);

/// ||(f*)'||^2 <= ||f'||^2 with the edge Dirichlet form; f must vanish at both ends.
InequalityCheck check_polya_szego(const SampledField& f);

/// Same comparison with central-difference derivatives (grid_core::derivative).
/// Not an exact discrete inequality; used to measure the discretization slack.
InequalityCheck check_polya_szego_central(const SampledField& f);

/// Two-bump refinement: f and g are even, nonnegative, radially nonincreasing
/// bumps centered at the middle node. The test field is f moved `shift` nodes
/// left plus g moved `shift` nodes right. Returns ||(h*)'||^2 against
/// ||f'||^2 + ||g'||^2 - 3/4 min(||f'||^2, ||g'||^2).
/// Throws when the shifted supports overlap or leave the grid interior.
InequalityCheck check_two_bump_gap(const SampledField& f, const SampledField& g, long shift);

} // namespace gpsol
