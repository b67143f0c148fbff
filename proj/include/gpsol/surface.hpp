#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gpsol/solver.hpp"
#include "gpsol/state.hpp"

namespace gpsol {

/// One (q, m) cell of the minimizing surface.
struct SurfaceSample {
    double q = 0.0;
    double m = 0.0;
    double e_min = 0.0;              ///< best energy over restarts
    double c = 0.0;
    std::optional<double> lambda;    ///< empty when m = 0
    double c_crosscheck = 0.0;
    bool converged = false;
    bool h1 = false;
    bool h2 = false;
    bool bounds_ok = false;
    double coercivity_lhs = 0.0;
    double coercivity_rhs = 0.0;
    int best_restart = 0;
    long iterations = 0;
    double grad_norm = 0.0;
};

/// Initial state for restart r of a cell. r = 0 is default_initial_state(); r = 1 is a
/// perturbed state passed through symmetrize(); r >= 2 is a perturbed state.
/// Deterministic in (t, grid, seed, r).
PairState restart_state(const ConstraintTargets& t, const Grid& grid, std::uint64_t seed, int r);

/// Thread count from GPSOL_THREADS, falling back to the hardware concurrency.
int default_jobs();

/// Solves every (q, m) in q_list x m_list with alpha and beta taken from t and the remaining
/// settings from cfg. The table is sorted by (q, m) and does not depend on jobs.
/// Throws std::invalid_argument on bad targets or restarts < 1.
std::vector<SurfaceSample> sweep(const std::vector<double>& q_list, const std::vector<double>& m_list,
                                 const ConstraintTargets& t, const MinimizeConfig& cfg, int restarts = 3,
                                 int jobs = 0);

/// Computed values only bound the true infimum from above, so an inequality that fails
/// by less than tol is not evidence of a violation.
enum class Verdict { Verified, Inconclusive, Violated, Skipped };

std::string to_string(Verdict v);

struct PropertyResult {
    std::string name;
    Verdict verdict = Verdict::Skipped;
    double worst_margin = 0.0;  ///< rhs - lhs of the tightest instance
    std::string worst_case;     ///< cells of the tightest instance
    int checked = 0;
    int inconclusive = 0;
    int violated = 0;
    int near_equality = 0;      ///< strict instances with margin below the strictness margin
};

struct PropertyReport {
    double tol = 0.0;
    std::vector<PropertyResult> properties;

    /// No property violated beyond tol.
    bool holds() const;
    /// Throws std::out_of_range for an unknown name.
    const PropertyResult& at(const std::string& name) const;
};

/// Checks the structural properties of the surface on the cells present in the table:
/// nonnegative, lower_bound, momentum_bound, q_monotone, m_nonincreasing, m_shifted_monotone,
/// increment_bound, lipschitz, subadditive, energetic_advantage, coercivity.
PropertyReport check_properties(const std::vector<SurfaceSample>& table, const ConstraintTargets& t,
                                double tol, double strict_margin = 1e-6);

} // namespace gpsol
