#include "gpsol/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gpsol/functionals.hpp"
#include "gpsol/rearrange.hpp"
#include "gpsol/scalar_ref.hpp"
#include "gpsol/tws_check.hpp"

namespace gpsol {

namespace {

constexpr double kSqrt8Over3 = 0.94280904158206336587; // sqrt(8)/3

double weight_sq_over_rho2(double rho) {
    const double g = g_weight(std::abs(1.0 - rho));
    return g * g / (rho * rho);
}

// d/drho [G(|1-rho|)^2 / rho^2]
double weight_sq_over_rho2_slope(double rho) {
    const double s = std::abs(1.0 - rho);
    const double ds = rho < 1.0 ? -1.0 : (rho > 1.0 ? 1.0 : 0.0);
    const double g = g_weight(s);
    const double dg = (2.0 - 2.0 * s) * ds;
    return 2.0 * g * dg / (rho * rho) - 2.0 * g * g / (rho * rho * rho);
}

// Factorized (1 - D2) with homogeneous Dirichlet rows; D2 the compact second difference.
class SobolevPreconditioner {
public:
    SobolevPreconditioner(std::size_t n, double h) : n_(n), cprime_(n, 0.0), inv_denom_(n, 0.0) {
        off_ = -1.0 / (h * h);
        const double diag = 1.0 + 2.0 / (h * h);
        // Thomas factorization over the interior 1..n-2
        double prev_c = 0.0;
        for (std::size_t i = 1; i + 1 < n_; ++i) {
            const double denom = diag - off_ * prev_c;
            inv_denom_[i] = 1.0 / denom;
            cprime_[i] = off_ / denom;
            prev_c = cprime_[i];
        }
    }

    void apply(std::span<const double> r, std::span<double> out) const {
        out[0] = out[n_ - 1] = 0.0;
        double prev = 0.0;
        for (std::size_t i = 1; i + 1 < n_; ++i) {
            prev = (r[i] - off_ * prev) * inv_denom_[i];
            out[i] = prev;
        }
        for (std::size_t i = n_ - 2; i >= 2; --i) out[i - 1] -= cprime_[i - 1] * out[i];
    }

private:
    std::size_t n_;
    double off_;
    std::vector<double> cprime_;
    std::vector<double> inv_denom_;
};

double dot(std::span<const double> a, std::span<const double> b, double h) {
    // Trapezoid pairing; every field here vanishes at the boundary.
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < a.size(); ++i) s += a[i] * b[i];
    return s * h;
}

struct Evaluation {
    double energy = 0.0;
    double weight_integral = 0.0; // I(rho)
    double scale = 0.0;           // sum of absolute contributions, for round-off allowance
};

class ReducedProblem {
public:
    ReducedProblem(const ConstraintTargets& t, const Grid& grid)
        : t_(t), n_(grid.size()), h_(grid.spacing()), lap_(grid.size()) {}

    Evaluation evaluate(std::span<const double> rho, std::span<const double> v) const {
        Evaluation e;
        double local = 0.0, local_abs = 0.0, weight = 0.0;
        for (std::size_t i = 1; i + 1 < n_; ++i) {
            const double r = rho[i];
            const double a = 1.0 - r * r;
            const double v2 = v[i] * v[i];
            const double pos = 0.25 * a * a + 0.25 * t_.beta * v2 * v2;
            const double neg = 0.5 * t_.alpha * a * v2;
            local += pos - neg;
            local_abs += pos + std::abs(neg);
            weight += weight_sq_over_rho2(r);
        }
        const double grad_terms =
            0.5 * kernels::dirichlet_form(rho, h_) + 0.5 * kernels::dirichlet_form(v, h_);
        e.weight_integral = weight * h_;
        const double kinetic = t_.q > 0.0 ? 2.0 * t_.q * t_.q / e.weight_integral : 0.0;
        e.energy = grad_terms + local * h_ + kinetic;
        e.scale = grad_terms + local_abs * h_ + kinetic;
        return e;
    }

    // L^2 gradients of the reduced energy (phase eliminated) in rho and v.
    void gradient(std::span<const double> rho, std::span<const double> v, double weight_integral,
                  std::span<double> g_rho, std::span<double> g_v) {
        const double kin = t_.q > 0.0 ? 2.0 * t_.q * t_.q / (weight_integral * weight_integral) : 0.0;
        kernels::second_difference(rho, h_, lap_);
        for (std::size_t i = 1; i + 1 < n_; ++i) {
            const double r = rho[i];
            g_rho[i] = -lap_[i] + r * (r * r - 1.0) + t_.alpha * r * v[i] * v[i] -
                       kin * weight_sq_over_rho2_slope(r);
        }
        kernels::second_difference(v, h_, lap_);
        for (std::size_t i = 1; i + 1 < n_; ++i) {
            const double r = rho[i];
            g_v[i] = -lap_[i] + t_.beta * v[i] * v[i] * v[i] - t_.alpha * (1.0 - r * r) * v[i];
        }
        g_rho[0] = g_rho[n_ - 1] = g_v[0] = g_v[n_ - 1] = 0.0;
    }

private:
    ConstraintTargets t_;
    std::size_t n_;
    double h_;
    std::vector<double> lap_;
};

void clamp_modulus(std::span<double> rho) {
    for (std::size_t i = 1; i + 1 < rho.size(); ++i) {
        rho[i] = std::clamp(rho[i], kModulusFloor, 2.0 - kModulusFloor);
    }
}

void rescale_mass(std::span<double> v, double m, double h) {
    if (m == 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        return;
    }
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i] * v[i];
    s *= h;
    if (!(s > 0.0)) throw std::domain_error("bright component vanished; cannot restore mass");
    const double f = std::sqrt(m / s);
    for (double& x : v) x *= f;
}

PairState assemble(const Grid& grid, std::vector<double> rho, std::vector<double> v, double q) {
    SampledField rho_f(grid, std::move(rho));
    auto phase = phase_optimum(rho_f, q);
    return PairState(std::move(rho_f), std::move(phase.phi), SampledField(grid, std::move(v)));
}

} // namespace

void validate(const MinimizeConfig& cfg) {
    validate_targets(cfg.targets);
    if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(cfg.grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be > 0");
    if (!(cfg.step_init > 0.0)) throw std::invalid_argument("step_init must be > 0");
    if (!(cfg.backtrack_factor > 0.0 && cfg.backtrack_factor < 1.0)) {
        throw std::invalid_argument("backtrack_factor must lie in (0, 1)");
    }
    if (!(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0)) {
        throw std::invalid_argument("armijo_c must lie in (0, 1)");
    }
    if (cfg.symmetrize_every < 0) throw std::invalid_argument("symmetrize_every must be >= 0");
}

PhaseOptimum phase_optimum(const SampledField& rho, double q) {
    const Grid& grid = rho.grid();
    const std::size_t n = grid.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) w[i] = weight_sq_over_rho2(rho[i]);
    const double integral = kernels::integrate(w, grid.spacing());
    if (q == 0.0) return {SampledField::constant(grid, 0.0), 0.0, integral};
    if (!(integral > 1e-300)) {
        throw std::domain_error("phase_optimum: a flat modulus cannot carry momentum");
    }
    const double mu = 2.0 * q / integral;
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) {
        phi[i] = mu * g_weight(std::abs(1.0 - rho[i])) / (rho[i] * rho[i]);
    }
    return {SampledField(grid, std::move(phi)), 2.0 * q * q / integral, integral};
}

double speed_multiplier(const PairState& s, const ConstraintTargets& t) {
    const auto g = energy_gradient(s, t);
    const auto dp = momentum_gradient_rho(s);
    const std::size_t n = s.grid().size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = s.rho()[i];
        const double w = (1.0 - r * r) / r;
        num += g.rho[i] * w;
        den += dp[i] * w;
    }
    if (std::abs(den) < 1e-14) throw std::domain_error("speed multiplier: (p'|w) vanishes");
    return num / den;
}

Multipliers extract_multipliers(const PairState& s, const ConstraintTargets& t) {
    const double ms = mass(s);
    if (!(ms > 1e-14)) throw std::domain_error("extract_multipliers: mass vanishes");
    const double c = speed_multiplier(s, t);

    const std::size_t n = s.grid().size();
    const double h = s.grid().spacing();
    std::vector<double> lam(n, 0.0), hole(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = s.rho()[i];
        const double v = s.v()[i];
        lam[i] = t.beta * v * v * v * v + t.alpha * r * r * v * v;
        hole[i] = (1.0 - r * r) * (1.0 - r * r) / (r * r);
    }
    const double lambda = (dirichlet_form(s.v()) + kernels::integrate(lam, h)) / ms;
    const double c_cross = 4.0 * t.q / kernels::integrate(hole, h);
    return {c, lambda, c_cross};
}

Hypotheses check_hypotheses(double e_min, const ConstraintTargets& t) {
    const double ratio = t.alpha * t.alpha;
    const bool h1 = ratio < t.beta && e_min < (1.0 - ratio / t.beta) * kSqrt8Over3;
    const bool h2 = e_min + t.alpha * t.m / 2.0 < kSqrt8Over3;
    return {h1, h2};
}

bool multiplier_bounds_hold(double c, std::optional<double> lambda, const ConstraintTargets& t) {
    if (!(c > 0.0 && c < kSoundSpeed)) return false;
    if (t.m > 0.0) {
        if (!lambda) return false;
        const double upper = 2.0 * t.alpha + std::sqrt(32.0) * t.q / t.m;
        return t.alpha * c * c / 2.0 < *lambda && *lambda < upper;
    }
    return true;
}

PairState default_initial_state(const ConstraintTargets& t, const Grid& grid) {
    const double c = speed_of_momentum(t.q, grid);
    auto dark = build_scalar(c, grid);
    const std::size_t n = grid.size();
    std::vector<double> v(n, 0.0);
    if (t.m > 0.0) {
        for (std::size_t i = 1; i + 1 < n; ++i) v[i] = std::sqrt(t.m / 2.0) / std::cosh(grid.x(i));
        rescale_mass(v, t.m, grid.spacing());
    }
    std::vector<double> rho(dark.rho.values().begin(), dark.rho.values().end());
    return assemble(grid, std::move(rho), std::move(v), t.q);
}

SolveResult minimize(const MinimizeConfig& cfg, const std::optional<PairState>& init) {
    validate(cfg);
    const ConstraintTargets& t = cfg.targets;
    const Grid& grid = cfg.grid;
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    const bool bright = t.m > 0.0;

    PairState start = init ? *init : default_initial_state(t, grid);
    if (!(start.grid() == grid)) throw std::invalid_argument("initial state lives on another grid");

    std::vector<double> rho(start.rho().values().begin(), start.rho().values().end());
    std::vector<double> v(start.v().values().begin(), start.v().values().end());
    rho.front() = rho.back() = 1.0;
    v.front() = v.back() = 0.0;
    clamp_modulus(rho);
    rescale_mass(v, t.m, h);

    ReducedProblem problem(t, grid);
    SobolevPreconditioner precond(n, h);

    std::vector<double> g_rho(n, 0.0), g_v(n, 0.0), d_rho(n, 0.0), d_v(n, 0.0);
    std::vector<double> pg_v(n, 0.0), pv(n, 0.0), trial_rho(n), trial_v(n);
    std::vector<double> tg_rho(n, 0.0), tg_v(n, 0.0);
    bool have_grad = false;

    SolveResult result(PairState::trivial(grid));
    Evaluation current = problem.evaluate(rho, v);
    double step = cfg.step_init;
    // Never regrow past a step that has already been rejected.
    double step_cap = 2.0 * cfg.step_init;
    long iter = 0;
    double grad_norm = std::numeric_limits<double>::infinity();

    // |p - q| of the eliminated phase, evaluated the same way momentum() does.
    const auto momentum_residual = [&](std::span<const double> r, double weight_integral) {
        if (t.q == 0.0) return 0.0;
        const double mu = 2.0 * t.q / weight_integral;
        double p = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double g = g_weight(std::abs(1.0 - r[i]));
            p += g * (mu * g / (r[i] * r[i]));
        }
        return std::abs(0.5 * p * h - t.q);
    };

    for (;; ++iter) {
        if (!have_grad) problem.gradient(rho, v, current.weight_integral, g_rho, g_v);
        have_grad = false;
        double lambda_red = 0.0;
        if (bright) lambda_red = dot(g_v, v, h) / dot(v, v, h);
        double norm2 = dot(g_rho, g_rho, h);
        if (bright) {
            // |g_v - lambda v|^2 = |g_v|^2 - lambda^2 |v|^2
            norm2 += dot(g_v, g_v, h) - 2.0 * lambda_red * dot(g_v, v, h) +
                     lambda_red * lambda_red * dot(v, v, h);
        }
        grad_norm = std::sqrt(std::max(norm2, 0.0));
        result.trace.push_back({iter, current.energy, grad_norm,
                                momentum_residual(rho, current.weight_integral),
                                bright ? std::abs(dot(v, v, h) - t.m) : 0.0});

        if (grad_norm <= cfg.grad_tol) {
            result.converged = true;
            result.message = "converged";
            break;
        }
        if (iter >= cfg.max_iters) {
            result.message = "iteration limit reached";
            break;
        }

        precond.apply(g_rho, d_rho);
        for (double& x : d_rho) x = -x;
        double slope = dot(g_rho, d_rho, h);
        if (bright) {
            precond.apply(g_v, pg_v);
            precond.apply(v, pv);
            const double coef = dot(pg_v, v, h) / dot(pv, v, h);
            for (std::size_t i = 0; i < n; ++i) d_v[i] = -(pg_v[i] - coef * pv[i]);
            slope += dot(g_v, d_v, h);
        }
        if (!(slope < 0.0)) {
            result.message = "no descent direction";
            break;
        }

        const double allowance = 64.0 * std::numeric_limits<double>::epsilon() * current.scale;
        double t_step = step;
        bool accepted = false;
        Evaluation trial_eval;
        while (t_step > 1e-14) {
            for (std::size_t i = 0; i < n; ++i) trial_rho[i] = rho[i] + t_step * d_rho[i];
            clamp_modulus(trial_rho);
            if (bright) {
                for (std::size_t i = 0; i < n; ++i) trial_v[i] = v[i] + t_step * d_v[i];
                rescale_mass(trial_v, t.m, h);
            } else {
                std::fill(trial_v.begin(), trial_v.end(), 0.0);
            }
            trial_eval = problem.evaluate(trial_rho, trial_v);
            if (!std::isfinite(trial_eval.energy)) {
                t_step *= cfg.backtrack_factor;
                continue;
            }
            if (std::abs(trial_eval.energy - current.energy) > 1e3 * allowance) {
                if (trial_eval.energy <= current.energy + cfg.armijo_c * t_step * slope) {
                    accepted = true;
                    break;
                }
            } else {
                // Energy differences are lost in round-off here. Test the decrease
                // through the slope at the trial point instead (quadratic model).
                problem.gradient(trial_rho, trial_v, trial_eval.weight_integral, tg_rho, tg_v);
                double trial_slope = dot(tg_rho, d_rho, h);
                if (bright) {
                    const double lam = dot(tg_v, trial_v, h) / dot(trial_v, trial_v, h);
                    double s_v = 0.0;
                    for (std::size_t i = 1; i + 1 < n; ++i) s_v += (tg_v[i] - lam * trial_v[i]) * d_v[i];
                    trial_slope += s_v * h;
                }
                if (trial_slope <= (2.0 * cfg.armijo_c - 1.0) * slope) {
                    accepted = true;
                    have_grad = true;
                    break;
                }
            }
            t_step *= cfg.backtrack_factor;
        }
        if (!accepted) {
            result.message = "line search stalled";
            break;
        }
        if (t_step != step) step_cap = std::min(step_cap, t_step);
        step = t_step == step ? std::min(2.0 * step, step_cap) : t_step;
        rho.swap(trial_rho);
        v.swap(trial_v);
        if (have_grad) {
            g_rho.swap(tg_rho);
            g_v.swap(tg_v);
        }
        current = trial_eval;

        if (cfg.symmetrize_every > 0 && (iter + 1) % cfg.symmetrize_every == 0 && t.q > 0.0) {
            try {
                const PairState here = assemble(grid, rho, v, t.q);
                const auto sym = symmetrize(here, t);
                std::vector<double> srho(sym.state.rho().values().begin(), sym.state.rho().values().end());
                std::vector<double> sv(sym.state.v().values().begin(), sym.state.v().values().end());
                clamp_modulus(srho);
                rescale_mass(sv, t.m, h);
                const Evaluation sym_eval = problem.evaluate(srho, sv);
                if (sym_eval.energy <= current.energy + 1e-12) {
                    rho.swap(srho);
                    v.swap(sv);
                    current = sym_eval;
                    have_grad = false;
                    ++result.symmetrizations_accepted;
                }
            } catch (const std::domain_error&) {
                // degenerate rearrangement: keep the descent iterate
            }
        }
    }

    result.iterations = iter;
    result.grad_norm = grad_norm;
    result.state = assemble(grid, rho, v, t.q);
    const auto rep = report(result.state, t);
    result.energy = rep.energy;
    result.momentum_residual = rep.momentum_residual;
    result.mass_residual = rep.mass_residual;

    if (bright) {
        const auto mult = extract_multipliers(result.state, t);
        result.multiplier_c = mult.c;
        result.multiplier_lambda = mult.lambda;
        result.multiplier_c_crosscheck = mult.c_crosscheck;
    } else {
        result.multiplier_c = speed_multiplier(result.state, t);
        std::vector<double> hole(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double r = rho[i];
            hole[i] = (1.0 - r * r) * (1.0 - r * r) / (r * r);
        }
        result.multiplier_c_crosscheck = 4.0 * t.q / kernels::integrate(hole, h);
    }
    const auto hyp = check_hypotheses(result.energy, t);
    result.h1_holds = hyp.h1;
    result.h2_holds = hyp.h2;
    result.bounds_ok = multiplier_bounds_hold(result.multiplier_c, result.multiplier_lambda, t);
    const double lambda = result.multiplier_lambda.value_or(0.0);
    result.ode_residual = ode_residual(result.state, result.multiplier_c, lambda, t).norm;
    result.first_integral_residual =
        max_abs(first_integral_residual(result.state, result.multiplier_c, lambda, t));
    return result;
}

} // namespace gpsol
