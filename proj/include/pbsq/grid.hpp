#pragma once

#include <cmath>

#include "pbsq/types.hpp"

namespace pbsq {

/// Quadrature support on the real line: strictly increasing nodes with
/// positive weights.
struct Grid {
    RealVector nodes;
    RealVector weights;

    Eigen::Index size() const { return nodes.size(); }
};

/// Complex samples of an L^2(R) function on a quadrature grid.
struct GridFunction {
    Grid grid;
    Eigen::VectorXcd values;
};

inline bool same_grid(const Grid& a, const Grid& b) {
    return a.nodes.size() == b.nodes.size() && a.nodes == b.nodes && a.weights == b.weights;
}

/// Uniform grid on [-half_width, half_width] with trapezoid weights.
inline Grid make_uniform_grid(int n_nodes, double half_width) {
    if (n_nodes < 2 || half_width <= 0.0) throw Error("make_uniform_grid: bad parameters");
    Grid g;
    g.nodes = RealVector::LinSpaced(n_nodes, -half_width, half_width);
    const double h = g.nodes(1) - g.nodes(0);
    g.weights = RealVector::Constant(n_nodes, h);
    g.weights(0) = h / 2.0;
    g.weights(n_nodes - 1) = h / 2.0;
    return g;
}

/// Extent rule for complex-scaled Hermite functions: the Gaussian envelope of
/// H_n(e^{i nu} x) exp(-e^{2 i nu} x^2 / 2) decays like exp(-cos(2 nu) x^2 / 2),
/// so support widens as nu approaches +-pi/4.
inline double grid_half_width(int n_max, double cos_two_nu) {
    if (cos_two_nu <= 0.0) throw NonNormalizable("grid_half_width: cos(2 nu) must be positive");
    return 1.2 * std::sqrt((2.0 * n_max + 1.0) / cos_two_nu);
}

/// Sum of weights * conj(f) * g; conjugate-linear in the first argument.
inline Complex l2_inner(const GridFunction& f, const GridFunction& g) {
    if (!same_grid(f.grid, g.grid)) throw GridMismatch("l2_inner: functions on different grids");
    return (f.values.conjugate().cwiseProduct(g.values).cwiseProduct(
                f.grid.weights.cast<Complex>()))
        .sum();
}

inline double l2_norm(const GridFunction& f) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < f.grid.size(); ++i)
        s += f.grid.weights(i) * std::norm(f.values(i));
    return std::sqrt(s);
}

inline GridFunction operator*(Complex c, const GridFunction& f) {
    return {f.grid, (c * f.values).eval()};
}

inline GridFunction operator+(const GridFunction& f, const GridFunction& g) {
    if (!same_grid(f.grid, g.grid)) throw GridMismatch("GridFunction +: different grids");
    return {f.grid, (f.values + g.values).eval()};
}

inline GridFunction operator-(const GridFunction& f, const GridFunction& g) {
    if (!same_grid(f.grid, g.grid)) throw GridMismatch("GridFunction -: different grids");
    return {f.grid, (f.values - g.values).eval()};
}

}  // namespace pbsq
