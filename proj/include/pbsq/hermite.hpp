#pragma once

#include <cmath>

#include "pbsq/grid.hpp"
#include "pbsq/types.hpp"

namespace pbsq {

// Forward recurrence loses accuracy slowly with n; past this order the
// result is flagged rather than trusted blindly.
inline constexpr int kHermiteStabilityBudget = 512;

namespace detail {

// One recurrence step of the jointly scaled Hermite functions
//   g_k(x) = H_k(s x) exp(-s^2 x^2 / 2) / sqrt(2^k k!),
//   g_{k+1} = s x sqrt(2/(k+1)) g_k - sqrt(k/(k+1)) g_{k-1}.
// Carrying the Gaussian inside every step keeps the iterates polynomially
// bounded where the naked polynomials H_n(s x) overflow near n ~ 150.
struct ScaledHermiteRecurrence {
    Complex y;          // s * x
    Complex gk, gkm1;   // current and previous scaled values
    double log_scale = 0.0;

    explicit ScaledHermiteRecurrence(Complex s, double x)
        : y(s * x), gk(std::exp(-0.5 * s * s * x * x)), gkm1(0.0) {}

    void advance(int k) {  // g_k -> g_{k+1}
        const Complex next =
            y * std::sqrt(2.0 / (k + 1.0)) * gk - std::sqrt(double(k) / (k + 1.0)) * gkm1;
        gkm1 = gk;
        gk = next;
        const double mag = std::abs(gk);
        if (mag > 1e150) {
            gk /= mag;
            gkm1 /= mag;
            log_scale += std::log(mag);
        }
    }

    Complex value() const { return gk * std::exp(log_scale); }
};

}  // namespace detail

/// (2^n n!)^{-1/2} H_n(s x) exp(-s^2 x^2 / 2) sampled on the grid. For s = 1
/// the result times pi^{-1/4} is the orthonormal oscillator eigenfunction
/// e_n(x). Requires Re(s^2) > 0 so the Gaussian factor decays.
inline GridFunction hermite_grid_function(int n, Complex s, const Grid& grid,
                                          bool* precision_degraded = nullptr) {
    if (n < 0) throw Error("hermite_grid_function: negative order");
    if (std::real(s * s) <= 0.0)
        throw NonNormalizable("hermite_grid_function: Re(s^2) <= 0, Gaussian factor does not decay");
    if (precision_degraded) *precision_degraded = n > kHermiteStabilityBudget;
    GridFunction f{grid, Eigen::VectorXcd(grid.size())};
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        detail::ScaledHermiteRecurrence rec(s, grid.nodes(i));
        for (int k = 0; k < n; ++k) rec.advance(k);
        f.values(i) = rec.value();
    }
    return f;
}

/// Columns n = 0..n_max of the scaled Hermite family on the grid.
inline Eigen::MatrixXcd hermite_table(int n_max, Complex s, const Grid& grid) {
    if (n_max < 0) throw Error("hermite_table: negative order");
    if (std::real(s * s) <= 0.0) throw NonNormalizable("hermite_table: Re(s^2) <= 0");
    Eigen::MatrixXcd table(grid.size(), n_max + 1);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        detail::ScaledHermiteRecurrence rec(s, grid.nodes(i));
        table(i, 0) = rec.value();
        for (int k = 0; k < n_max; ++k) {
            rec.advance(k);
            table(i, k + 1) = rec.value();
        }
    }
    return table;
}

/// Orthonormal oscillator eigenfunctions e_n on the grid (s = 1 family
/// times pi^{-1/4}).
inline Eigen::MatrixXcd oscillator_basis_table(int n_max, const Grid& grid) {
    return std::pow(kPi, -0.25) * hermite_table(n_max, Complex(1.0, 0.0), grid);
}

/// Gauss-Hermite grid with weights premultiplied by e^{x_i^2}, so that
/// sum_i w_i f(x_i) integrates a plain decaying f. Nodes come from the
/// Golub-Welsch Jacobi matrix; the modified weight at a node is
/// 1 / (m * h_{m-1}(x_i)^2) with h the orthonormal Hermite function, which
/// stays well scaled for any m (the classical w_i alone underflows).
inline Grid make_gauss_hermite_grid(int m) {
    if (m < 2) throw Error("make_gauss_hermite_grid: need at least 2 nodes");
    RealMatrix jacobi = RealMatrix::Zero(m, m);
    for (int k = 1; k < m; ++k) {
        const double b = std::sqrt(k / 2.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(jacobi, Eigen::EigenvaluesOnly);
    Grid g;
    g.nodes = solver.eigenvalues();
    g.weights.resize(m);
    const double norm_factor = std::pow(kPi, -0.25);
    for (int i = 0; i < m; ++i) {
        detail::ScaledHermiteRecurrence rec(Complex(1.0, 0.0), g.nodes(i));
        for (int k = 0; k < m - 1; ++k) rec.advance(k);
        const double h = std::abs(rec.value()) * norm_factor;
        g.weights(i) = 1.0 / (m * h * h);
    }
    return g;
}

}  // namespace pbsq
