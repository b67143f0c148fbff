#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpsol/functionals.hpp"
#include "gpsol/solver.hpp"
#include "gpsol/surface.hpp"
#include "gpsol/tws_check.hpp"

namespace gpsol::io {

using nlohmann::json;

/// {"L", "n", "rho", "phi", "v"}.
json to_json(const PairState& s);
/// Inverse of to_json(PairState). Throws std::invalid_argument on missing keys or bad sizes.
PairState state_from_json(const json& j);

json to_json(const FunctionalReport& r);
/// Scalars always; the state under "profiles" only when asked.
json to_json(const SolveResult& r, bool profiles);
json to_json(const PropertyReport& r);

/// Doubles are written with 17 significant digits.
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace);
void write_surface_csv(std::ostream& os, const std::vector<SurfaceSample>& table);
void write_residual_csv(std::ostream& os, const OdeResidual& r, const SampledField& first_integral);

/// Throws std::runtime_error when the file cannot be read or parsed.
json read_json_file(const std::string& path);
/// Throws std::runtime_error when the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

} // namespace gpsol::io
