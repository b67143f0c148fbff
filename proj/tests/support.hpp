#pragma once

// Test-side oracles and random generators. Nothing here calls into the library's
// own closed forms, so the two can disagree.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gpsol/grid.hpp"
#include "gpsol/state.hpp"

namespace oracle {

// Momentum of the gray soliton of speed c, from integrating (c/4)(1-rho^2)^2/rho^2 by hand.
inline double scalar_momentum(double c) {
    const double k = std::sqrt(2.0 - c * c);
    return std::numbers::pi / 2.0 - std::atan(c / k) - 0.5 * c * k;
}

inline double scalar_energy(double c) { return std::pow(2.0 - c * c, 1.5) / 3.0; }

// int (1 - rho_c^2) over the line.
inline double scalar_depletion(double c) { return 2.0 * std::sqrt(2.0 - c * c); }

inline double rho2(double c, double x) {
    const double k = std::sqrt(2.0 - c * c);
    const double s = 1.0 / std::cosh(k * x / 2.0);
    return 1.0 - 0.5 * k * k * s * s;
}

// Plain trapezoid over [-L, L] with n points.
template <class F>
double trapezoid(F f, double L, std::size_t n) {
    const double h = 2.0 * L / static_cast<double>(n - 1);
    double sum = 0.5 * (f(-L) + f(L));
    for (std::size_t i = 1; i + 1 < n; ++i) sum += f(-L + static_cast<double>(i) * h);
    return sum * h;
}

} // namespace oracle

namespace testing {

struct Bump {
    double amp, centre, width;
};

inline std::vector<Bump> random_bumps(std::mt19937_64& rng, int count, double amp_lo, double amp_hi,
                                      double span) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Bump> out;
    for (int k = 0; k < count; ++k) {
        out.push_back({amp_lo + (amp_hi - amp_lo) * u(rng), (u(rng) - 0.5) * span, 0.4 + 1.2 * u(rng)});
    }
    return out;
}

inline double eval(const std::vector<Bump>& bumps, double x) {
    double s = 0.0;
    for (const auto& b : bumps) s += b.amp * std::exp(-std::pow((x - b.centre) / b.width, 2));
    return s;
}

// Field with pinned end values.
inline gpsol::SampledField field(const gpsol::Grid& g, const std::vector<Bump>& bumps, double base, double end) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = base + eval(bumps, g.x(i));
    v.front() = v.back() = end;
    return gpsol::SampledField(g, std::move(v));
}

// Smooth random valid state on g: rho in (0.2, 1.6), phi of either sign, v >= 0 when
// nonneg_v, with the boundary pinned to (1, 0, 0).
inline gpsol::PairState random_state(const gpsol::Grid& g, std::mt19937_64& rng, bool nonneg_v = false) {
    const double span = g.half_width();
    auto dips = random_bumps(rng, 2, -0.3, 0.6, span);
    std::vector<double> r(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) r[i] = std::clamp(1.0 - eval(dips, g.x(i)), 0.2, 1.6);
    r.front() = r.back() = 1.0;
    const auto phi = field(g, random_bumps(rng, 2, -0.8, 0.8, span), 0.0, 0.0);
    const auto v = field(g, random_bumps(rng, 2, nonneg_v ? 0.0 : -0.6, 0.6, span), 0.0, 0.0);
    return gpsol::PairState(gpsol::SampledField(g, std::move(r)), phi, v);
}

// Zero-boundary smooth direction.
inline gpsol::SampledField random_direction(const gpsol::Grid& g, std::mt19937_64& rng) {
    return field(g, random_bumps(rng, 3, -1.0, 1.0, g.half_width()), 0.0, 0.0);
}

} // namespace testing
