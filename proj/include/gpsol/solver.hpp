#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpsol/grid.hpp"
#include "gpsol/state.hpp"

namespace gpsol {

struct MinimizeConfig {
    ConstraintTargets targets;
    Grid grid{40.0, 8001};
    long max_iters = 200000;
    double grad_tol = 1e-8;       ///< on the L^2 norm of the projected gradient
    double step_init = 0.5;
    double backtrack_factor = 0.5;
    double armijo_c = 1e-4;
    long symmetrize_every = 25;   ///< 0 disables
    std::uint64_t seed = 0;
};

/// Throws std::invalid_argument on out-of-range fields (targets included).
void validate(const MinimizeConfig& cfg);

/// Phase gradient minimizing 1/2 int rho^2 phi^2 subject to p = q at fixed rho:
/// phi = mu G(|1-rho|) / rho^2 with mu = 2q / I and I = int G(|1-rho|)^2 / rho^2.
struct PhaseOptimum {
    SampledField phi;
    double kinetic;         ///< 2 q^2 / I
    double weight_integral; ///< I
};
/// Throws std::domain_error when q > 0 and I is (numerically) zero.
PhaseOptimum phase_optimum(const SampledField& rho, double q);

struct Multipliers {
    double c;
    double lambda;
    double c_crosscheck;
};

/// Speed multiplier from pairing the rho-gradient of E and of p with the direction
/// (1 - rho^2)/rho, plus lambda = int v(-v'' + beta v^3 + alpha rho^2 v) / ||v||^2
/// and the cross-check c = 4q / int (1 - rho^2)^2 / rho^2.
/// Throws std::domain_error if the mass or the pairing denominator vanishes.
Multipliers extract_multipliers(const PairState& s, const ConstraintTargets& t);

/// Pairing estimate of c alone (usable at m = 0).
double speed_multiplier(const PairState& s, const ConstraintTargets& t);

struct Hypotheses {
    bool h1;
    bool h2;
};
/// (H1): alpha^2 < beta and E < (1 - alpha^2/beta) sqrt(8)/3.  (H2): E + alpha m / 2 < sqrt(8)/3.
Hypotheses check_hypotheses(double e_min, const ConstraintTargets& t);

/// 0 < c < sqrt 2 and, when m > 0, alpha c^2/2 < lambda < 2 alpha + sqrt(32) q / m.
bool multiplier_bounds_hold(double c, std::optional<double> lambda, const ConstraintTargets& t);

struct TraceRow {
    long iter;
    double energy;
    double grad_norm;
    double momentum_residual;
    double mass_residual;
};

struct SolveResult {
    explicit SolveResult(PairState s) : state(std::move(s)) {}

    PairState state;
    bool converged = false;
    std::string message;
    double multiplier_c = 0.0;
    std::optional<double> multiplier_lambda; ///< empty when m = 0
    double multiplier_c_crosscheck = 0.0;
    double energy = 0.0;
    double grad_norm = 0.0;
    long iterations = 0;
    bool h1_holds = false;
    bool h2_holds = false;
    bool bounds_ok = false;
    double first_integral_residual = 0.0; ///< max over interior nodes
    double ode_residual = 0.0;            ///< L^2 norm
    double momentum_residual = 0.0;
    double mass_residual = 0.0;
    long symmetrizations_accepted = 0;
    std::vector<TraceRow> trace;
};

/// Scalar soliton with the requested momentum times a sech-shaped bright bump of mass m.
PairState default_initial_state(const ConstraintTargets& t, const Grid& grid);

/// Minimizes E over {p = q, ||v||^2 = m}. Without init, starts from default_initial_state().
/// The init must live on cfg.grid; its phase is replaced by the optimal one and v is
/// rescaled to mass m before the first step (v is dropped when m = 0).
SolveResult minimize(const MinimizeConfig& cfg, const std::optional<PairState>& init = std::nullopt);

} // namespace gpsol
