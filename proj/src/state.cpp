#include "gpsol/state.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gpsol {

PairState::PairState(SampledField rho, SampledField phi, SampledField v)
    : rho_(std::move(rho)), phi_(std::move(phi)), v_(std::move(v)) {
    if (!(rho_.grid() == phi_.grid()) || !(rho_.grid() == v_.grid())) {
        throw std::invalid_argument("rho, phi and v must share one grid");
    }
}

PairState PairState::trivial(const Grid& grid) {
    return PairState(SampledField::constant(grid, 1.0), SampledField::constant(grid, 0.0),
                     SampledField::constant(grid, 0.0));
}

void validate_targets(const ConstraintTargets& t) {
    if (!(t.q > 0.0 && t.q < std::numbers::pi / 2)) {
        throw std::invalid_argument("q must lie in (0, pi/2)");
    }
    if (!(t.m >= 0.0) || !std::isfinite(t.m)) throw std::invalid_argument("m must be >= 0");
    if (!(t.alpha > 0.0) || !std::isfinite(t.alpha)) throw std::invalid_argument("alpha must be > 0");
    if (!(t.beta >= 0.0) || !std::isfinite(t.beta)) throw std::invalid_argument("beta must be >= 0");
}

std::string Violation::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (kind == Kind::ModulusBound) {
        os << "node " << node << ": rho = " << value << " outside (0, 2)";
    } else {
        os << "node " << node << ": boundary " << field << " = " << value << " (expected "
           << (field == "rho" ? "1" : "0") << ")";
    }
    return os.str();
}

std::vector<Violation> validate(const PairState& s) {
    std::vector<Violation> out;
    const std::size_t n = s.grid().size();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = s.rho()[i];
        if (!(r > 0.0 && r < 2.0)) out.push_back({Violation::Kind::ModulusBound, i, "rho", r});
    }
    for (std::size_t i : {std::size_t{0}, n - 1}) {
        if (s.rho()[i] != 1.0 && s.rho()[i] > 0.0 && s.rho()[i] < 2.0) {
            out.push_back({Violation::Kind::BoundaryValue, i, "rho", s.rho()[i]});
        }
        if (s.phi()[i] != 0.0) out.push_back({Violation::Kind::BoundaryValue, i, "phi", s.phi()[i]});
        if (s.v()[i] != 0.0) out.push_back({Violation::Kind::BoundaryValue, i, "v", s.v()[i]});
    }
    return out;
}

SampledField reconstruct_phase(const PairState& s, double anchor) {
    return cumulative_integral(s.phi(), anchor);
}

} // namespace gpsol
