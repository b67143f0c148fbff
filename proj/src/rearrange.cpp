#include "gpsol/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gpsol/functionals.hpp"

namespace gpsol {

namespace {

double node_sum(std::span<const double> f, double h) {
    double s = 0.0;
    for (double x : f) s += x;
    return s * h;
}

std::vector<double> shifted(std::span<const double> f, long shift) {
    const long n = static_cast<long>(f.size());
    std::vector<double> out(f.size(), 0.0);
    for (long i = 0; i < n; ++i) {
        const long j = i + shift;
        if (j >= 0 && j < n) out[static_cast<std::size_t>(j)] = f[static_cast<std::size_t>(i)];
    }
    return out;
}

// Indices of the first and last nonzero samples, or {1, 0} for the zero field.
std::pair<long, long> support(std::span<const double> f) {
    long lo = -1, hi = -1;
    for (long i = 0; i < static_cast<long>(f.size()); ++i) {
        if (f[static_cast<std::size_t>(i)] != 0.0) {
            if (lo < 0) lo = i;
            hi = i;
        }
    }
    if (lo < 0) return {1, 0};
    return {lo, hi};
}

} // namespace

std::vector<double> rearrange_decreasing(std::span<const double> f) {
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (f[i] < 0.0) {
            throw std::invalid_argument("rearrangement needs nonnegative samples (node " +
                                        std::to_string(i) + ")");
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });

    std::vector<double> out(n);
    const std::size_t c = n / 2;
    for (std::size_t rank = 0; rank < n; ++rank) {
        // rank 0 -> c, 1 -> c+1, 2 -> c-1, 3 -> c+2, 4 -> c-2, ...
        const std::size_t step = (rank + 1) / 2;
        const std::size_t pos = rank % 2 == 1 ? c + step : c - step;
        out[pos] = f[order[rank]];
    }
    return out;
}

SampledField rearrange_decreasing(const SampledField& f) {
    return SampledField(f.grid(), rearrange_decreasing(f.values()));
}

Symmetrized symmetrize(const PairState& s, const ConstraintTargets& t) {
    const Grid& grid = s.grid();
    const std::size_t n = grid.size();
    std::vector<double> dip(n), abs_phi(n), abs_v(n);
    for (std::size_t i = 0; i < n; ++i) {
        dip[i] = std::abs(1.0 - s.rho()[i]);
        abs_phi[i] = std::abs(s.phi()[i]);
        abs_v[i] = std::abs(s.v()[i]);
    }
    const auto dip_star = rearrange_decreasing(dip);
    const auto phi_star = rearrange_decreasing(abs_phi);
    auto v_star = rearrange_decreasing(abs_v);

    std::vector<double> rho(n), weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        rho[i] = 1.0 - dip_star[i];
        weight[i] = g_weight(dip_star[i]) * phi_star[i];
    }
    const double denom = kernels::integrate(weight, grid.spacing());
    if (!(denom > 0.0)) {
        throw std::domain_error("symmetrize: momentum weight vanishes after rearrangement");
    }
    const double gamma = 2.0 * t.q / denom;
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = gamma * phi_star[i];
    return {PairState(SampledField(grid, std::move(rho)), SampledField(grid, std::move(phi)),
                      SampledField(grid, std::move(v_star))),
            gamma};
}

InequalityCheck check_hardy_littlewood(const SampledField& f, const SampledField& g) {
    if (!(f.grid() == g.grid())) throw std::invalid_argument("fields live on different grids");
    const auto fs = rearrange_decreasing(f.values());
    const auto gs = rearrange_decreasing(g.values());
    const std::size_t n = f.size();
    std::vector<double> plain(n), arranged(n);
    for (std::size_t i = 0; i < n; ++i) {
        plain[i] = f[i] * g[i];
        arranged[i] = fs[i] * gs[i];
    }
    const double h = f.grid().spacing();
    return {node_sum(plain, h), node_sum(arranged, h)};
}

InequalityCheck check_polya_szego(const SampledField& f) {
    if (f[0] != 0.0 || f[f.size() - 1] != 0.0) {
        throw std::invalid_argument("Polya-Szego check needs f = 0 at both boundary nodes");
    }
    const auto fs = rearrange_decreasing(f);
    return {dirichlet_form(fs), dirichlet_form(f)};
}

InequalityCheck check_polya_szego_central(const SampledField& f) {
    if (f[0] != 0.0 || f[f.size() - 1] != 0.0) {
        throw std::invalid_argument("Polya-Szego check needs f = 0 at both boundary nodes");
    }
    const auto fs = rearrange_decreasing(f);
    const auto dfs = derivative(fs);
    const auto df = derivative(f);
    return {integrate(dfs * dfs), integrate(df * df)};
}

InequalityCheck check_two_bump_gap(const SampledField& f, const SampledField& g, long shift) {
    if (!(f.grid() == g.grid())) throw std::invalid_argument("fields live on different grids");
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] < 0.0 || g[i] < 0.0) throw std::invalid_argument("bumps must be nonnegative");
    }
    const auto left = shifted(f.values(), -shift);
    const auto right = shifted(g.values(), shift);
    const auto [f_lo, f_hi] = support(f.values());
    const auto [g_lo, g_hi] = support(g.values());
    const long n = static_cast<long>(f.size());
    const bool f_empty = f_lo > f_hi;
    const bool g_empty = g_lo > g_hi;
    if (!f_empty && (f_lo - shift < 1 || f_hi - shift > n - 2)) {
        throw std::invalid_argument("shifted f leaves the grid interior");
    }
    if (!g_empty && (g_lo + shift < 1 || g_hi + shift > n - 2)) {
        throw std::invalid_argument("shifted g leaves the grid interior");
    }
    if (!f_empty && !g_empty && f_hi - shift >= g_lo + shift) {
        throw std::invalid_argument("shifted supports overlap");
    }
    std::vector<double> sum(f.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = left[i] + right[i];
    const SampledField combined(f.grid(), std::move(sum));
    const double lhs = dirichlet_form(rearrange_decreasing(combined));
    const double df = dirichlet_form(f);
    const double dg = dirichlet_form(g);
    return {lhs, df + dg - 0.75 * std::min(df, dg)};
}

} // namespace gpsol
