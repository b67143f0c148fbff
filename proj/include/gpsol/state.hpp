#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gpsol/grid.hpp"

namespace gpsol {

/// Lower/upper margin applied to the modulus after each descent step.
inline constexpr double kModulusFloor = 1e-6;

/// Lifted pair u = rho e^{i theta}, v real, stored as (rho, phi = theta', v).
class PairState {
public:
    PairState(SampledField rho, SampledField phi, SampledField v);

    /// rho = 1, phi = 0, v = 0 everywhere.
    static PairState trivial(const Grid& grid);

    const Grid& grid() const { return rho_.grid(); }
    const SampledField& rho() const { return rho_; }
    const SampledField& phi() const { return phi_; }
    const SampledField& v() const { return v_; }

private:
    SampledField rho_;
    SampledField phi_;
    SampledField v_;
};

/// Constraint values p(u) = q, ||v||^2 = m and the couplings alpha, beta.
struct ConstraintTargets {
    double q = 0.0;
    double m = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
};

/// Throws std::invalid_argument unless 0 < q < pi/2, m >= 0, alpha > 0, beta >= 0.
void validate_targets(const ConstraintTargets& t);

struct Violation {
    enum class Kind { ModulusBound, BoundaryValue };
    Kind kind;
    std::size_t node;
    std::string field;
    double value;
    std::string describe() const;
};

/// Every node where 0 < rho < 2 fails and every boundary node not equal to (1, 0, 0).
std::vector<Violation> validate(const PairState& s);

/// Primitive of phi with theta(-L) = anchor.
SampledField reconstruct_phase(const PairState& s, double anchor);

} // namespace gpsol
