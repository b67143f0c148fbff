#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "../tools/cli.hpp"
#include "gpsol/io.hpp"
#include "support.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = gpsol::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Coarse grid keeps each solve well under a second.
const std::vector<std::string> kCoarse = {"--L", "20", "--n", "2001"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

} // namespace

TEST_CASE("solve exit codes") {
    auto ok = call(with({"solve", "--q", "0.3", "--m", "0.2"}, kCoarse));
    CHECK(ok.code == 0);
    CHECK(ok.out.rfind("converged E=", 0) == 0);
    CHECK(ok.out.find("lambda=") != std::string::npos);

    CHECK(call(with({"solve", "--q", "2.0"}, kCoarse)).code == 1);
    CHECK(call(with({"solve", "--q", "0.3", "--m", "-1"}, kCoarse)).code == 1);
    CHECK(call(with({"solve", "--m", "0.1"}, kCoarse)).code == 1);
    CHECK(call({"solve", "--q", "0.3", "--n", "2000"}).code == 1);
    CHECK(call(with({"solve", "--q", "0.3", "--format", "xml"}, kCoarse)).code == 1);
    CHECK(call({"solve", "--q", "abc"}).code == 1);
    CHECK(call({}).code == 1);
    CHECK(call({"frobnicate"}).code == 1);
    CHECK(call({"--help"}).code == 0);

    auto capped = call(with({"solve", "--q", "0.3", "--m", "0.2", "--max-iters", "3"}, kCoarse));
    CHECK(capped.code == 2);
    CHECK(capped.out.rfind("not converged", 0) == 0);
}

TEST_CASE("solve writes JSON and trace CSV") {
    const std::string json_path = "cli_solve.json", csv_path = "cli_trace.csv";
    REQUIRE(call(with({"solve", "--q", "0.3", "--out", json_path, "--profiles"}, kCoarse)).code == 0);
    const auto j = gpsol::io::read_json_file(json_path);
    CHECK(j.at("converged").get<bool>());
    CHECK(j.at("lambda").is_null());
    const double c = j.at("c").get<double>();
    // m = 0 reduces to the scalar soliton of the same momentum.
    CHECK(j.at("energy").get<double>() == doctest::Approx(oracle::scalar_energy(c)).epsilon(1e-3));
    CHECK(j.at("profiles").at("rho").size() == 2001);

    REQUIRE(call(with({"solve", "--q", "0.3", "--m", "0.1", "--format", "csv", "--out", csv_path}, kCoarse)).code ==
            0);
    const auto text = slurp(csv_path);
    CHECK(text.rfind("iter,E,grad_norm,p_residual,mass_residual\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') > 2);
    std::remove(json_path.c_str());
    std::remove(csv_path.c_str());
}

TEST_CASE("config file supplies defaults and flags win") {
    const std::string cfg = "cli_cfg.json", out = "cli_cfg_out.json";
    gpsol::io::write_text_file(cfg, R"({"q": 0.45, "m": 0.1, "L": 20, "n": 2001})");
    REQUIRE(call({"solve", "--config", cfg, "--out", out}).code == 0);
    const auto from_file = gpsol::io::read_json_file(out);
    REQUIRE(call({"solve", "--config", cfg, "--q", "0.3", "--out", out}).code == 0);
    const auto overridden = gpsol::io::read_json_file(out);
    REQUIRE(call(with({"solve", "--q", "0.3", "--m", "0.1", "--out", out}, kCoarse)).code == 0);
    const auto direct = gpsol::io::read_json_file(out);
    CHECK(overridden.at("energy") == direct.at("energy"));
    CHECK(from_file.at("energy").get<double>() > direct.at("energy").get<double>());

    gpsol::io::write_text_file(cfg, R"({"q": 0.3, "speed": 1.0})");
    const auto bad = call({"solve", "--config", cfg});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("speed") != std::string::npos);
    gpsol::io::write_text_file(cfg, R"({"q": "fast"})");
    CHECK(call({"solve", "--config", cfg}).code == 1);
    gpsol::io::write_text_file(cfg, "[1, 2]");
    CHECK(call({"solve", "--config", cfg}).code == 1);
    CHECK(call({"solve", "--config", "/nonexistent/cfg.json"}).code == 1);
    std::remove(cfg.c_str());
    std::remove(out.c_str());
}

TEST_CASE("sweep table is independent of the thread count") {
    const auto base = with({"sweep", "--q-list", "0.3,0.15", "--m-list", "0,0.1", "--restarts", "2"}, kCoarse);
    const auto one = call(with(base, {"--jobs", "1"}));
    const auto four = call(with(base, {"--jobs", "4"}));
    REQUIRE(one.code == 0);
    REQUIRE(four.code == 0);
    CHECK(one.out == four.out);
    std::istringstream in(one.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "q,m,e_min,c,lambda,converged,h1,h2,bounds_ok");
    int rows = 0;
    while (std::getline(in, line) && line.find(':') == std::string::npos) ++rows;
    CHECK(rows == 4);
    CHECK(one.out.find("q_monotone: ") != std::string::npos);

    CHECK(call(with(base, {"--jobs", "0"})).code == 1);
    CHECK(call(with({"sweep", "--q-list", "0.3,1.7"}, kCoarse)).code == 1);
}

TEST_CASE("single-cell sweep agrees with solve") {
    const std::string csv = "cli_sweep.csv", rep = "cli_report.json", sol = "cli_single.json";
    REQUIRE(call(with({"sweep", "--q-list", "0.3", "--m-list", "0.2", "--restarts", "1", "--out", csv, "--report",
                       rep},
                      kCoarse))
                .code == 0);
    REQUIRE(call(with({"solve", "--q", "0.3", "--m", "0.2", "--out", sol}, kCoarse)).code == 0);
    std::istringstream in(slurp(csv));
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    std::vector<std::string> cells;
    std::stringstream rs(row);
    for (std::string c; std::getline(rs, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 9);
    CHECK(std::stod(cells[2]) == doctest::Approx(gpsol::io::read_json_file(sol).at("energy").get<double>()).epsilon(1e-9));
    CHECK(gpsol::io::read_json_file(rep).at("properties").size() == 11);
    std::remove(csv.c_str());
    std::remove(rep.c_str());
    std::remove(sol.c_str());
}

TEST_CASE("check suites") {
    const auto scalar = call({"check", "scalar"});
    CHECK(scalar.code == 0);
    CHECK(scalar.out.find("FAIL") == std::string::npos);
    const auto rearr = call({"check", "rearrange", "--cases", "50", "--seed", "3"});
    CHECK(rearr.code == 0);
    CHECK(rearr.out.find("PASS equimeasurability: 50/50") != std::string::npos);
    CHECK(call({"check", "rearrange", "--cases", "0"}).code == 1);
    CHECK(call({"check"}).code == 1);
}

TEST_CASE("check residual on a stored profile") {
    const std::string prof = "cli_profile.json", csv = "cli_resid.csv";
    REQUIRE(call({"solve", "--q", "0.3", "--m", "0.2", "--out", prof, "--profiles"}).code == 0);
    const auto j = gpsol::io::read_json_file(prof);
    const std::string c = std::to_string(j.at("c").get<double>());
    const std::string lambda = std::to_string(j.at("lambda").get<double>());
    const auto good = call({"check", "residual", "--in", prof, "--c", c, "--lambda", lambda, "--out", csv});
    CHECK(good.code == 0);
    CHECK(slurp(csv).rfind("x,r_rho,r_v,first_integral\n", 0) == 0);
    // A wrong chemical potential leaves an O(1) residual in the bright equation.
    CHECK(call({"check", "residual", "--in", prof, "--c", c, "--lambda", "5"}).code == 2);
    CHECK(call({"check", "residual", "--in", "/nonexistent.json", "--c", "1", "--lambda", "1"}).code == 1);
    gpsol::io::write_text_file(prof, R"({"L": 10})");
    CHECK(call({"check", "residual", "--in", prof, "--c", "1", "--lambda", "1"}).code == 1);
    CHECK(call({"check", "residual", "--in", prof}).code == 1);
    std::remove(prof.c_str());
    std::remove(csv.c_str());
}
