#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "pbsq/hermite.hpp"
#include "pbsq/legendre.hpp"
#include "pbsq/model.hpp"
#include "pbsq/types.hpp"

namespace pbsq {

/// Non-hermitian Swanson oscillator, nu in (-pi/4, pi/4) \ {0}. The basis
/// families are the complex-scaled Hermite functions
///   phi_n = N1 (2^n n!)^{-1/2} H_n(e^{i nu} x) exp(-e^{2 i nu} x^2 / 2),
///   Psi_n = N2 (2^n n!)^{-1/2} H_n(e^{-i nu} x) exp(-e^{-2 i nu} x^2 / 2).
/// <phi_0, Psi_0> = conj(N1) N2 sqrt(pi) e^{i nu}, so biorthonormality under
/// the conjugate-linear-first inner product fixes conj(N1) N2 = e^{-i nu}/sqrt(pi).
struct SwansonSpec {
    double nu = 0.3;
    Complex N1{1.0, 0.0};
    Complex N2{0.0, 0.0};  // defaulted to e^{-i nu}/sqrt(pi) when left zero
};

// Covers ratio tests up to k = 2000 (indices 2k + 2).
inline constexpr int kSwansonNormTableSize = 4206;

inline void validate_swanson_nu(double nu) {
    if (!(nu > -kPi / 4.0 && nu < kPi / 4.0) || nu == 0.0)
        throw Error("swanson: nu must lie in (-pi/4, pi/4) excluding 0"
                    " (nu = 0 is the identity model)");
}

/// log ||phi_n||^2 = log( sqrt(pi / cos 2nu) * L_n(1 / cos 2nu) ), N1 = 1.
/// Well defined at nu = 0 too (orthonormal limit, L_n(1) = 1).
inline double swanson_log_norm_sq(int n, double nu) {
    if (!(nu > -kPi / 4.0 && nu < kPi / 4.0))
        throw Error("swanson_log_norm_sq: nu must lie in (-pi/4, pi/4)");
    const double c = std::cos(2.0 * nu);
    return 0.5 * std::log(kPi / c) + legendre_log(n, 1.0 / c);
}

inline Grid swanson_default_grid(double nu, int n_max, int nodes = 400) {
    return make_uniform_grid(nodes, grid_half_width(n_max, std::cos(2.0 * nu)));
}

inline DeformationModel build_swanson(const SwansonSpec& spec, int dim, const Grid& grid,
                                      int n_basis = 96) {
    validate_swanson_nu(spec.nu);
    if (dim < 2) throw InvalidDimension("build_swanson: dim must be >= 2");
    if (n_basis < dim - 1) n_basis = dim - 1;
    const double nu = spec.nu;
    const Complex n2 =
        (spec.N2 == Complex(0.0, 0.0))
            ? std::polar(1.0 / std::sqrt(kPi), -nu) / std::conj(spec.N1)
            : spec.N2;
    if (std::abs(std::conj(spec.N1) * n2 - std::polar(1.0 / std::sqrt(kPi), -nu)) > 1e-12)
        throw NormalizationError("build_swanson: conj(N1) N2 must equal e^{-i nu}/sqrt(pi)");

    DeformationModel m;
    m.name = "swanson";
    m.regular = false;
    m.dim = dim;
    m.rep = Representation::grid;
    m.n_basis = n_basis;
    m.nu = nu;
    m.grid = grid;

    const Complex s_phi = std::polar(1.0, nu);
    m.phi_table = spec.N1 * hermite_table(n_basis, s_phi, grid);
    m.psi_table = n2 * hermite_table(n_basis, std::conj(s_phi), grid);
    m.e_table = oscillator_basis_table(dim - 1, grid);

    // change of representation: c_{kn} = <e_k, phi_n> by quadrature
    const auto weighted = [&grid](const ComplexMatrix& t) {
        return (grid.weights.cast<Complex>().asDiagonal() * t).eval();
    };
    m.phi_fock_table = m.e_table.adjoint() * weighted(m.phi_table);
    m.psi_fock_table = m.e_table.adjoint() * weighted(m.psi_table);

    // Eq.-of-motion ladder pair a = cos(nu) a0 + i sin(nu) a0^dag,
    // b = i sin(nu) a0 + cos(nu) a0^dag; [a, b] = 1, b != a^dag.
    const FockOperator a0 = annihilator_matrix(dim);
    m.ladder_a = std::cos(nu) * a0 + kI * std::sin(nu) * a0.adjoint();
    m.ladder_b = kI * std::sin(nu) * a0 + std::cos(nu) * a0.adjoint();

    // Closed-form norms via Legendre, tabulated once in log space so the
    // radius machinery can sample far beyond the truncation at O(1) cost.
    const double c2nu = std::cos(2.0 * nu);
    const auto log_leg = std::make_shared<const std::vector<double>>(
        legendre_log_table(kSwansonNormTableSize, 1.0 / c2nu));
    const double log_prefactor = 0.25 * std::log(kPi / c2nu);
    const double log_abs_n1 = std::log(std::abs(spec.N1));
    const double log_abs_n2 = std::log(std::abs(n2));
    m.log_phi_norm = [log_leg, log_prefactor, log_abs_n1](int n) {
        return log_prefactor + 0.5 * log_leg->at(n) + log_abs_n1;
    };
    m.log_psi_norm = [log_leg, log_prefactor, log_abs_n2](int n) {
        return log_prefactor + 0.5 * log_leg->at(n) + log_abs_n2;
    };
    return m;
}

/// Derivative of the sinc interpolant on a uniform grid:
/// D(j, k) = (-1)^{j-k} / (h (j - k)), zero diagonal. Spectrally accurate
/// for functions that decay inside the window; used to apply the ladder
/// operators in their differential form independently of the recurrences
/// that built the basis tables.
inline RealMatrix sinc_differentiation_matrix(const Grid& g) {
    const Eigen::Index n = g.size();
    const double h = g.nodes(1) - g.nodes(0);
    for (Eigen::Index i = 2; i < n; ++i)
        if (std::abs((g.nodes(i) - g.nodes(i - 1)) - h) > 1e-12 * h)
            throw GridMismatch("sinc_differentiation_matrix: grid not uniform");
    RealMatrix d = RealMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
            if (j != k) d(j, k) = ((j - k) % 2 ? -1.0 : 1.0) / (h * double(j - k));
    return d;
}

enum class Ladder { lower_phi, raise_phi, raise_psi, lower_psi };  // a, b, a^dag, b^dag

/// Differential action of the pseudo-bosonic ladder operators on grid
/// samples: a = (e^{i nu} x + e^{-i nu} d/dx)/sqrt(2), b with the minus sign,
/// and the adjoint pair with nu negated.
inline GridFunction swanson_ladder_apply(const DeformationModel& m, const ComplexMatrix& diff,
                                         const GridFunction& f, Ladder op) {
    if (m.rep != Representation::grid)
        throw CapabilityError("swanson_ladder_apply: grid models only");
    const double nu = (op == Ladder::lower_phi || op == Ladder::raise_phi) ? m.nu : -m.nu;
    const double deriv_sign = (op == Ladder::lower_phi || op == Ladder::lower_psi) ? 1.0 : -1.0;
    const Eigen::VectorXcd x_part =
        std::polar(1.0, nu) * f.grid.nodes.cast<Complex>().cwiseProduct(f.values);
    const Eigen::VectorXcd d_part = std::polar(1.0, -nu) * (diff * f.values).eval();
    return {f.grid, ((x_part + deriv_sign * d_part) / std::sqrt(2.0)).eval()};
}

/// Fock expansion of a grid function against the oscillator basis carried by
/// the model, with the usual tail diagnostic attached to the result.
inline FockVector fock_expansion(const DeformationModel& m, const GridFunction& f) {
    if (m.rep != Representation::grid) throw CapabilityError("fock_expansion: fock-native model");
    if (!same_grid(f.grid, *m.grid)) throw GridMismatch("fock_expansion: wrong grid");
    return m.e_table.adjoint() * (f.grid.weights.cast<Complex>().asDiagonal() * f.values);
}

/// Synthesis of a Fock vector back onto the model grid.
inline GridFunction grid_synthesis(const DeformationModel& m, const FockVector& c) {
    if (m.rep != Representation::grid) throw CapabilityError("grid_synthesis: fock-native model");
    return {*m.grid, (m.e_table * c).eval()};
}

}  // namespace pbsq
