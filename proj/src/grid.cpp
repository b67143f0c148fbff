#include "gpsol/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gpsol {

Grid::Grid(double half_width, std::size_t n_points)
    : half_width_(half_width), n_points_(n_points), spacing_(0.0) {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw std::invalid_argument("grid half-width must be positive and finite");
    }
    if (n_points < 3 || n_points % 2 == 0) {
        throw std::invalid_argument("grid needs an odd number of points >= 3, got " +
                                    std::to_string(n_points));
    }
    spacing_ = 2.0 * half_width / static_cast<double>(n_points - 1);
}

Grid Grid::with_spacing(double half_width, double spacing) {
    if (!(spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    const double cells = 2.0 * half_width / spacing;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 * rounded) {
        throw std::invalid_argument("2L/h is not an integer");
    }
    return Grid(half_width, static_cast<std::size_t>(rounded) + 1);
}

double Grid::x(std::size_t i) const {
    // Measured from the center so that nodes are exactly antisymmetric.
    const auto c = static_cast<std::ptrdiff_t>(center());
    return static_cast<double>(static_cast<std::ptrdiff_t>(i) - c) * spacing_;
}

std::vector<double> Grid::nodes() const {
    std::vector<double> xs(n_points_);
    for (std::size_t i = 0; i < n_points_; ++i) xs[i] = x(i);
    return xs;
}

SampledField::SampledField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("field has " + std::to_string(values_.size()) +
                                    " samples but grid has " + std::to_string(grid_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw std::invalid_argument("non-finite sample at node " + std::to_string(i));
        }
    }
}

SampledField SampledField::constant(const Grid& grid, double value) {
    return SampledField(grid, std::vector<double>(grid.size(), value));
}

SampledField SampledField::sample(const Grid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.x(i));
    return SampledField(grid, std::move(v));
}

namespace {

template <class Op>
SampledField zip(const SampledField& a, const SampledField& b, Op op) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a[i], b[i]);
    return SampledField(a.grid(), std::move(out));
}

} // namespace

SampledField operator+(const SampledField& a, const SampledField& b) {
    return zip(a, b, [](double x, double y) { return x + y; });
}
SampledField operator-(const SampledField& a, const SampledField& b) {
    return zip(a, b, [](double x, double y) { return x - y; });
}
SampledField operator*(const SampledField& a, const SampledField& b) {
    return zip(a, b, [](double x, double y) { return x * y; });
}
SampledField operator*(double s, const SampledField& a) {
    std::vector<double> out(a.values().begin(), a.values().end());
    for (double& x : out) x *= s;
    return SampledField(a.grid(), std::move(out));
}

SampledField derivative(const SampledField& f) {
    const std::size_t n = f.size();
    const double h = f.grid().spacing();
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    // written in differences so constants give exactly zero
    d[0] = (4.0 * (f[1] - f[0]) - (f[2] - f[0])) / (2.0 * h);
    d[n - 1] = (4.0 * (f[n - 1] - f[n - 2]) - (f[n - 1] - f[n - 3])) / (2.0 * h);
    return SampledField(f.grid(), std::move(d));
}

SampledField second_difference(const SampledField& f) {
    std::vector<double> out(f.size());
    kernels::second_difference(f.values(), f.grid().spacing(), out);
    return SampledField(f.grid(), std::move(out));
}

double integrate(const SampledField& f) {
    return kernels::integrate(f.values(), f.grid().spacing());
}

double dirichlet_form(const SampledField& f) {
    return kernels::dirichlet_form(f.values(), f.grid().spacing());
}

SampledField cumulative_integral(const SampledField& f, double start) {
    const double h = f.grid().spacing();
    std::vector<double> out(f.size());
    out[0] = start;
    for (std::size_t i = 1; i < out.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return SampledField(f.grid(), std::move(out));
}

double max_abs(const SampledField& f) {
    double m = 0.0;
    for (double x : f.values()) m = std::max(m, std::abs(x));
    return m;
}

namespace kernels {

double integrate(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    double s = 0.5 * (f[0] + f[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) s += f[i];
    return s * h;
}

double dirichlet_form(std::span<const double> f, double h) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        const double d = f[i + 1] - f[i];
        s += d * d;
    }
    return s / h;
}

void second_difference(std::span<const double> f, double h, std::span<double> out) {
    const std::size_t n = f.size();
    const double inv_h2 = 1.0 / (h * h);
    out[0] = 0.0;
    out[n - 1] = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv_h2;
}

} // namespace kernels

} // namespace gpsol
