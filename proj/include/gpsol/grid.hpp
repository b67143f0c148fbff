#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gpsol {

/// Uniform mesh on [-L, L] with an odd number of nodes, so that x = 0 is a node.
class Grid {
public:
    Grid(double half_width, std::size_t n_points);

    /// Grid with the given spacing; 2L/h must be an even integer (up to 1e-9 relative).
    static Grid with_spacing(double half_width, double spacing);

    double half_width() const { return half_width_; }
    std::size_t size() const { return n_points_; }
    double spacing() const { return spacing_; }
    std::size_t center() const { return n_points_ / 2; }
    double x(std::size_t i) const;
    std::vector<double> nodes() const;

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.half_width_ == b.half_width_ && a.n_points_ == b.n_points_;
    }

private:
    double half_width_;
    std::size_t n_points_;
    double spacing_;
};

/// Real samples on a grid, one per node, all finite.
class SampledField {
public:
    SampledField(const Grid& grid, std::vector<double> values);

    static SampledField constant(const Grid& grid, double value);
    static SampledField sample(const Grid& grid, const std::function<double(double)>& f);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    Grid grid_;
    std::vector<double> values_;
};

SampledField operator+(const SampledField& a, const SampledField& b);
SampledField operator-(const SampledField& a, const SampledField& b);
SampledField operator*(const SampledField& a, const SampledField& b);
SampledField operator*(double s, const SampledField& a);

/// Central differences inside, one-sided second-order stencils at the two ends.
SampledField derivative(const SampledField& f);

/// Compact three-point second difference; zero at the two boundary nodes.
SampledField second_difference(const SampledField& f);

/// Trapezoidal rule over [-L, L].
double integrate(const SampledField& f);

/// Edge form sum_i (f_{i+1} - f_i)^2 / h, the discrete counterpart of the integral of (f')^2.
double dirichlet_form(const SampledField& f);

/// Running trapezoid integral with value `start` at x = -L.
SampledField cumulative_integral(const SampledField& f, double start);

double max_abs(const SampledField& f);

namespace kernels {
// Span-level versions used by the hot loops in the solver.
double integrate(std::span<const double> f, double h);
double dirichlet_form(std::span<const double> f, double h);
void second_difference(std::span<const double> f, double h, std::span<double> out);
} // namespace kernels

} // namespace gpsol
