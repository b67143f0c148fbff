#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "gpsol/functionals.hpp"
#include "gpsol/io.hpp"
#include "gpsol/rearrange.hpp"
#include "gpsol/scalar_ref.hpp"
#include "gpsol/solver.hpp"
#include "gpsol/surface.hpp"
#include "gpsol/tws_check.hpp"

namespace gpsol::cli {
namespace {

using io::json;

// Flags shared by solve and sweep. Unset flags fall back to --config, then to defaults.
struct Numeric {
    std::optional<double> alpha, beta, q, m, L, tol;
    std::optional<std::size_t> n;
    std::optional<long> max_iters;
    std::optional<std::uint64_t> seed;
    std::string config;
};

void add_numeric(CLI::App* app, Numeric& o, bool with_qm) {
    app->add_option("--alpha", o.alpha, "inter-species coupling");
    app->add_option("--beta", o.beta, "bright self-interaction");
    if (with_qm) {
        app->add_option("--q", o.q, "momentum target in (0, pi/2)");
        app->add_option("--m", o.m, "mass target (>= 0)");
    }
    app->add_option("--L", o.L, "half-width of the domain (default 40)");
    app->add_option("--n", o.n, "number of grid points, odd (default 8001)");
    app->add_option("--tol", o.tol, "projected gradient tolerance (default 1e-8)");
    app->add_option("--max-iters", o.max_iters, "iteration limit (default 200000)");
    app->add_option("--seed", o.seed, "seed for perturbed restarts");
    app->add_option("--config", o.config, "JSON file with defaults for these flags");
}

template <class T>
void merge(std::optional<T>& flag, const json& file, const char* key) {
    if (!flag && file.contains(key)) flag = file.at(key).get<T>();
}

json load_config(const std::string& path, std::initializer_list<const char*> allowed) {
    if (path.empty()) return json::object();
    json j = io::read_json_file(path);
    if (!j.is_object()) throw std::invalid_argument(path + ": config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
            throw std::invalid_argument(path + ": unknown config key \"" + key + "\"");
        }
    }
    return j;
}

MinimizeConfig resolve(Numeric& o, const json& file) {
    try {
        merge(o.alpha, file, "alpha");
        merge(o.beta, file, "beta");
        merge(o.q, file, "q");
        merge(o.m, file, "m");
        merge(o.L, file, "L");
        merge(o.n, file, "n");
        merge(o.tol, file, "tol");
        merge(o.max_iters, file, "max_iters");
        merge(o.seed, file, "seed");
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    MinimizeConfig cfg;
    cfg.targets = {o.q.value_or(0.0), o.m.value_or(0.0), o.alpha.value_or(1.0), o.beta.value_or(1.0)};
    cfg.grid = Grid(o.L.value_or(40.0), o.n.value_or(8001));
    cfg.grad_tol = o.tol.value_or(cfg.grad_tol);
    cfg.max_iters = o.max_iters.value_or(cfg.max_iters);
    cfg.seed = o.seed.value_or(0);
    return cfg;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

const char* yes(bool b) { return b ? "yes" : "no"; }

// ---- solve ----

struct SolveOpts {
    Numeric num;
    std::string out;
    std::string format = "json";
    bool profiles = false;
};

int cmd_solve(SolveOpts& o, std::ostream& out) {
    const json file = load_config(o.num.config, {"alpha", "beta", "q", "m", "L", "n", "tol", "max_iters", "seed"});
    if (!o.num.q && !file.contains("q")) throw std::invalid_argument("--q is required");
    const MinimizeConfig cfg = resolve(o.num, file);
    validate(cfg);

    const SolveResult r = minimize(cfg);
    out << (r.converged ? "converged" : "not converged (" + r.message + ")") << " E=" << fmt(r.energy)
        << " c=" << fmt(r.multiplier_c)
        << " lambda=" << (r.multiplier_lambda ? fmt(*r.multiplier_lambda) : std::string("n/a"))
        << " ode=" << fmt(r.ode_residual) << " first_integral=" << fmt(r.first_integral_residual)
        << " p_res=" << fmt(r.momentum_residual) << " mass_res=" << fmt(r.mass_residual)
        << " H1=" << yes(r.h1_holds) << " H2=" << yes(r.h2_holds) << " bounds=" << (r.bounds_ok ? "ok" : "fail")
        << " iters=" << r.iterations << '\n';

    if (!o.out.empty()) {
        std::ostringstream text;
        if (o.format == "csv") {
            io::write_trace_csv(text, r.trace);
        } else {
            text << io::to_json(r, o.profiles).dump(2) << '\n';
        }
        io::write_text_file(o.out, text.str());
    }
    return r.converged ? kOk : kNotConverged;
}

// ---- sweep ----

struct SweepOpts {
    Numeric num;
    std::vector<double> q_list;
    std::vector<double> m_list;
    std::optional<int> restarts;
    std::optional<int> jobs;
    double property_tol = 2e-3;
    std::string out;
    std::string report;
};

int cmd_sweep(SweepOpts& o, std::ostream& out) {
    const json file = load_config(o.num.config, {"alpha", "beta", "L", "n", "tol", "max_iters", "seed", "q_list",
                                                 "m_list", "restarts", "jobs"});
    try {
        if (o.q_list.empty() && file.contains("q_list")) o.q_list = file.at("q_list").get<std::vector<double>>();
        if (o.m_list.empty() && file.contains("m_list")) o.m_list = file.at("m_list").get<std::vector<double>>();
        merge(o.restarts, file, "restarts");
        merge(o.jobs, file, "jobs");
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (o.q_list.empty()) o.q_list = {0.15, 0.3, 0.45, 0.6};
    if (o.m_list.empty()) o.m_list = {0.0, 0.1, 0.2, 0.4};
    const int restarts = o.restarts.value_or(3);
    const int jobs = o.jobs.value_or(default_jobs());
    if (jobs < 1) throw std::invalid_argument("--jobs must be >= 1");

    MinimizeConfig cfg = resolve(o.num, file);
    cfg.targets.q = o.q_list.front();
    validate(cfg);

    const auto table = sweep(o.q_list, o.m_list, cfg.targets, cfg, restarts, jobs);
    const auto rep = check_properties(table, cfg.targets, o.property_tol);

    std::ostringstream csv;
    io::write_surface_csv(csv, table);
    if (o.out.empty()) {
        out << csv.str();
    } else {
        io::write_text_file(o.out, csv.str());
    }
    if (!o.report.empty()) io::write_text_file(o.report, io::to_json(rep).dump(2) + "\n");

    for (const auto& p : rep.properties) {
        out << p.name << ": " << to_string(p.verdict) << " (worst margin " << fmt(p.worst_margin) << ", "
            << p.checked << " checked)\n";
    }
    const bool all = std::all_of(table.begin(), table.end(), [](const SurfaceSample& s) { return s.converged; });
    return all ? kOk : kNotConverged;
}

// ---- check ----

struct Suite {
    std::ostream& out;
    bool ok = true;

    void line(const std::string& name, bool pass, const std::string& detail) {
        out << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
        ok = ok && pass;
    }
};

// Nonnegative field vanishing at both ends: a few random bumps plus optional noise.
SampledField random_field(const Grid& grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double L = grid.half_width();
    std::vector<double> f(grid.size(), 0.0);
    const int bumps = 1 + static_cast<int>(u(rng) * 4);
    for (int k = 0; k < bumps; ++k) {
        const double a = 0.1 + 2.0 * u(rng);
        const double x0 = (u(rng) - 0.5) * L;
        const double w = 0.2 + 2.0 * u(rng);
        for (std::size_t i = 1; i + 1 < f.size(); ++i) f[i] += a * std::exp(-std::pow((grid.x(i) - x0) / w, 2));
    }
    if (u(rng) < 0.5) {
        for (std::size_t i = 1; i + 1 < f.size(); ++i) f[i] += 0.1 * u(rng);
    }
    return SampledField(grid, std::move(f));
}

// Even, radially nonincreasing, compactly supported bump a cos^2(pi x / 2w) on |x| < w.
SampledField centered_bump(const Grid& grid, double a, double w) {
    return SampledField::sample(grid, [&](double x) {
        const double c = std::cos(M_PI * x / (2.0 * w));
        return std::abs(x) < w ? a * c * c : 0.0;
    });
}

struct RearrangeOpts {
    int cases = 1000;
    std::uint64_t seed = 0;
};

int check_rearrange(const RearrangeOpts& o, std::ostream& out) {
    if (o.cases < 1) throw std::invalid_argument("--cases must be >= 1");
    const Grid grid(10.0, 1001);
    std::mt19937_64 rng(o.seed);
    int equi = 0, hl = 0, ps = 0;
    double hl_worst = INFINITY, ps_worst = INFINITY;
    for (int k = 0; k < o.cases; ++k) {
        const auto f = random_field(grid, rng);
        const auto g = random_field(grid, rng);
        const auto fs = rearrange_decreasing(f);
        std::vector<double> a(f.values().begin(), f.values().end()), b(fs.values().begin(), fs.values().end());
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        equi += a == b;
        const auto h = check_hardy_littlewood(f, g);
        hl += h.margin() >= -1e-12 * std::max(1.0, std::abs(h.rhs));
        hl_worst = std::min(hl_worst, h.margin());
        const auto p = check_polya_szego(f);
        ps += p.margin() >= -1e-12 * std::max(1.0, std::abs(p.rhs));
        ps_worst = std::min(ps_worst, p.margin());
    }

    const int bump_cases = std::max(1, o.cases / 5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int gap = 0;
    double gap_worst = INFINITY;
    for (int k = 0; k < bump_cases; ++k) {
        const double wf = 0.5 + 2.0 * u(rng), wg = 0.5 + 2.0 * u(rng);
        const auto f = centered_bump(grid, 0.2 + 2.0 * u(rng), wf);
        const auto g = centered_bump(grid, 0.2 + 2.0 * u(rng), wg);
        const long shift = static_cast<long>(std::ceil((wf + wg) / (2.0 * grid.spacing()))) + 2 +
                           static_cast<long>(u(rng) * 50);
        const auto c = check_two_bump_gap(f, g, shift);
        const double slack = grid.spacing() * (dirichlet_form(f) + dirichlet_form(g));
        gap += c.margin() >= -slack;
        gap_worst = std::min(gap_worst, c.margin());
    }

    Suite s{out};
    const auto frac = [](int k, int n) { return std::to_string(k) + "/" + std::to_string(n); };
    s.line("equimeasurability", equi == o.cases, frac(equi, o.cases) + " bit-identical multisets");
    s.line("hardy_littlewood", hl == o.cases, frac(hl, o.cases) + ", worst margin " + fmt(hl_worst));
    s.line("polya_szego", ps == o.cases, frac(ps, o.cases) + ", worst margin " + fmt(ps_worst));
    s.line("two_bump_gap", gap == bump_cases, frac(gap, bump_cases) + ", worst margin " + fmt(gap_worst));
    return s.ok ? kOk : kNotConverged;
}

int check_scalar(Numeric& o, std::ostream& out) {
    const MinimizeConfig cfg = resolve(o, load_config(o.config, {"L", "n"}));
    const Grid& grid = cfg.grid;
    Suite s{out};
    for (double c : {0.0, 1.0}) {
        const double e = energy(build_scalar(c, grid).state(), {});
        const double exact = scalar_energy(c);
        s.line("energy c=" + fmt(c), std::abs(e - exact) <= 2e-3,
               "E=" + fmt(e) + " closed form " + fmt(exact));
    }
    s.line("black soliton energy", std::abs(scalar_energy(0.0) - std::sqrt(8.0) / 3.0) < 1e-15,
           fmt(scalar_energy(0.0)));
    double worst = INFINITY;
    for (int k = 1; k <= 15; ++k) {
        const double q = 0.1 * k;
        worst = std::min(worst, std::sqrt(2.0) * q - scalar_energy(speed_of_momentum(q, grid)));
    }
    s.line("energy below sqrt(2) q", worst > 0.0, "q = 0.1..1.5, worst margin " + fmt(worst));
    return s.ok ? kOk : kNotConverged;
}

struct ResidualOpts {
    std::string in;
    double c = 0.0;
    double lambda = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
    double max_ode = 1e-4;
    double max_first_integral = 1e-3;
    std::string out;
};

int check_residual(const ResidualOpts& o, std::ostream& out) {
    json j;
    try {
        j = io::read_json_file(o.in);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument(e.what());
    }
    const PairState s = io::state_from_json(j.contains("profiles") ? j.at("profiles") : j);
    const ConstraintTargets t{0.0, 0.0, o.alpha, o.beta};
    const auto r = ode_residual(s, o.c, o.lambda, t);
    const auto fi = first_integral_residual(s, o.c, o.lambda, t);
    if (!o.out.empty()) {
        std::ostringstream csv;
        io::write_residual_csv(csv, r, fi);
        io::write_text_file(o.out, csv.str());
    }
    Suite suite{out};
    suite.line("ode_residual", r.norm <= o.max_ode, "L2 norm " + fmt(r.norm) + " <= " + fmt(o.max_ode));
    suite.line("first_integral", max_abs(fi) <= o.max_first_integral,
               "max " + fmt(max_abs(fi)) + " <= " + fmt(o.max_first_integral));
    return suite.ok ? kOk : kNotConverged;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dark-bright soliton pairs by constrained energy minimization"};
    app.name("gpsol");
    app.require_subcommand(1);

    SolveOpts solve;
    auto* solve_cmd = app.add_subcommand("solve", "minimize the energy at one (q, m)");
    add_numeric(solve_cmd, solve.num, true);
    solve_cmd->add_option("--out", solve.out, "output file");
    solve_cmd->add_option("--format", solve.format, "json (result) or csv (trace)")
        ->check(CLI::IsMember({"json", "csv"}));
    solve_cmd->add_flag("--profiles", solve.profiles, "include rho, phi, v in the JSON output");

    SweepOpts sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "minimizing surface over a (q, m) grid");
    add_numeric(sweep_cmd, sw.num, false);
    sweep_cmd->add_option("--q-list", sw.q_list, "comma-separated momenta")->delimiter(',');
    sweep_cmd->add_option("--m-list", sw.m_list, "comma-separated masses")->delimiter(',');
    sweep_cmd->add_option("--restarts", sw.restarts, "initializations per cell (default 3)");
    sweep_cmd->add_option("--jobs", sw.jobs, "worker threads (default GPSOL_THREADS or all cores)");
    sweep_cmd->add_option("--property-tol", sw.property_tol, "tolerance of the property checks");
    sweep_cmd->add_option("--out", sw.out, "CSV table (stdout when absent)");
    sweep_cmd->add_option("--report", sw.report, "JSON property report");

    auto* check_cmd = app.add_subcommand("check", "verification suites");
    check_cmd->require_subcommand(1);
    RearrangeOpts rearr;
    auto* rearr_cmd = check_cmd->add_subcommand("rearrange", "rearrangement inequalities on random fields");
    rearr_cmd->add_option("--cases", rearr.cases, "number of random cases");
    rearr_cmd->add_option("--seed", rearr.seed, "RNG seed");
    Numeric scalar;
    auto* scalar_cmd = check_cmd->add_subcommand("scalar", "explicit scalar soliton reference values");
    scalar_cmd->add_option("--L", scalar.L, "half-width");
    scalar_cmd->add_option("--n", scalar.n, "grid points");
    scalar_cmd->add_option("--config", scalar.config, "JSON file with L and n");
    ResidualOpts resid;
    auto* resid_cmd = check_cmd->add_subcommand("residual", "traveling-wave residuals of a stored profile");
    resid_cmd->add_option("--in", resid.in, "profile JSON")->required();
    resid_cmd->add_option("--c", resid.c, "speed")->required();
    resid_cmd->add_option("--lambda", resid.lambda, "chemical potential")->required();
    resid_cmd->add_option("--alpha", resid.alpha, "inter-species coupling");
    resid_cmd->add_option("--beta", resid.beta, "bright self-interaction");
    resid_cmd->add_option("--max-ode", resid.max_ode, "threshold on the ODE residual L2 norm");
    resid_cmd->add_option("--max-first-integral", resid.max_first_integral, "threshold on the first integral");
    resid_cmd->add_option("--out", resid.out, "CSV of x, r_rho, r_v, first_integral");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*solve_cmd) return cmd_solve(solve, out);
        if (*sweep_cmd) return cmd_sweep(sw, out);
        if (*rearr_cmd) return check_rearrange(rearr, out);
        if (*scalar_cmd) return check_scalar(scalar, out);
        if (*resid_cmd) return check_residual(resid, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

} // namespace gpsol::cli
