#include "gpsol/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gpsol::io {
namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> to_vector(const SampledField& f) { return {f.values().begin(), f.values().end()}; }

} // namespace

json to_json(const PairState& s) {
    return {{"L", s.grid().half_width()},
            {"n", s.grid().size()},
            {"rho", to_vector(s.rho())},
            {"phi", to_vector(s.phi())},
            {"v", to_vector(s.v())}};
}

PairState state_from_json(const json& j) {
    for (const char* key : {"L", "n", "rho", "phi", "v"}) {
        if (!j.contains(key)) throw std::invalid_argument(std::string("profile lacks key \"") + key + "\"");
    }
    try {
        const Grid grid(j.at("L").get<double>(), j.at("n").get<std::size_t>());
        return PairState(SampledField(grid, j.at("rho").get<std::vector<double>>()),
                         SampledField(grid, j.at("phi").get<std::vector<double>>()),
                         SampledField(grid, j.at("v").get<std::vector<double>>()));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed profile: ") + e.what());
    }
}

json to_json(const FunctionalReport& r) {
    return {{"energy", r.energy},
            {"momentum", r.momentum},
            {"classical_momentum", r.classical_momentum},
            {"mass", r.mass},
            {"coercivity_lhs", r.coercivity_lhs},
            {"coercivity_rhs", r.coercivity_rhs},
            {"momentum_residual", r.momentum_residual},
            {"mass_residual", r.mass_residual}};
}

json to_json(const SolveResult& r, bool profiles) {
    json j = {{"converged", r.converged},
              {"message", r.message},
              {"energy", r.energy},
              {"c", r.multiplier_c},
              {"lambda", r.multiplier_lambda ? json(*r.multiplier_lambda) : json(nullptr)},
              {"c_crosscheck", r.multiplier_c_crosscheck},
              {"grad_norm", r.grad_norm},
              {"iterations", r.iterations},
              {"h1", r.h1_holds},
              {"h2", r.h2_holds},
              {"bounds_ok", r.bounds_ok},
              {"ode_residual", r.ode_residual},
              {"first_integral_residual", r.first_integral_residual},
              {"momentum_residual", r.momentum_residual},
              {"mass_residual", r.mass_residual},
              {"symmetrizations_accepted", r.symmetrizations_accepted}};
    if (profiles) j["profiles"] = to_json(r.state);
    return j;
}

json to_json(const PropertyReport& r) {
    json props = json::array();
    for (const auto& p : r.properties) {
        props.push_back({{"name", p.name},
                         {"verdict", to_string(p.verdict)},
                         {"worst_margin", p.worst_margin},
                         {"worst_case", p.worst_case},
                         {"checked", p.checked},
                         {"inconclusive", p.inconclusive},
                         {"violated", p.violated},
                         {"near_equality", p.near_equality}});
    }
    return {{"tol", r.tol}, {"holds", r.holds()}, {"properties", props}};
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
    os << "iter,E,grad_norm,p_residual,mass_residual\n";
    for (const auto& row : trace) {
        os << row.iter << ',' << num(row.energy) << ',' << num(row.grad_norm) << ','
           << num(row.momentum_residual) << ',' << num(row.mass_residual) << '\n';
    }
}

void write_surface_csv(std::ostream& os, const std::vector<SurfaceSample>& table) {
    os << "q,m,e_min,c,lambda,converged,h1,h2,bounds_ok\n";
    for (const auto& s : table) {
        os << num(s.q) << ',' << num(s.m) << ',' << num(s.e_min) << ',' << num(s.c) << ','
           << (s.lambda ? num(*s.lambda) : std::string()) << ',' << s.converged << ',' << s.h1 << ','
           << s.h2 << ',' << s.bounds_ok << '\n';
    }
}

void write_residual_csv(std::ostream& os, const OdeResidual& r, const SampledField& first_integral) {
    const Grid& grid = r.rho.grid();
    os << "x,r_rho,r_v,first_integral\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        os << num(grid.x(i)) << ',' << num(r.rho[i]) << ',' << num(r.v[i]) << ',' << num(first_integral[i]) << '\n';
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out || !(out << text)) throw std::runtime_error("cannot write " + path);
}

} // namespace gpsol::io
