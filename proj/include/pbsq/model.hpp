#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "pbsq/fock.hpp"
#include "pbsq/grid.hpp"
#include "pbsq/types.hpp"

namespace pbsq {

enum class Representation { fock, grid };

/// A named pseudo-bosonic structure. Regular models carry the deformation T
/// with its inverse and express everything in the truncated number basis;
/// grid models (unbounded T) expose their basis families as sampled
/// functions plus Fock-space projections obtained by quadrature.
struct DeformationModel {
    std::string name;
    bool regular = false;
    int dim = 0;
    Representation rep = Representation::fock;

    FockOperator ladder_a;  // lowers phi_n
    FockOperator ladder_b;  // raises phi_n

    std::optional<FockOperator> T, T_inv;

    // grid payload (rep == grid)
    double nu = 0.0;  // complex-scaling angle of the grid family
    std::optional<Grid> grid;
    ComplexMatrix phi_table, psi_table;  // basis values, columns n = 0..n_basis
    ComplexMatrix e_table;               // orthonormal e_n values, columns 0..dim-1
    ComplexMatrix phi_fock_table, psi_fock_table;  // change of representation
    int n_basis = 0;

    // log ||phi_n||, log ||Psi_n|| in closed form, valid for every n (the
    // radius machinery samples far beyond any truncation)
    std::function<double(int)> log_phi_norm, log_psi_norm;

    int max_basis_index() const { return rep == Representation::grid ? n_basis : dim - 1; }

    FockVector phi_fock(int n) const {
        if (n < 0 || n > max_basis_index()) throw InvalidDimension("phi_fock: index out of range");
        if (regular) return T->col(n);
        return phi_fock_table.col(n);
    }

    FockVector psi_fock(int n) const {
        if (n < 0 || n > max_basis_index()) throw InvalidDimension("psi_fock: index out of range");
        if (regular) return T_inv->adjoint().col(n).eval();
        return psi_fock_table.col(n);
    }

    GridFunction phi_grid(int n) const {
        if (rep != Representation::grid)
            throw CapabilityError("phi_grid: model has no grid representation");
        if (n < 0 || n > n_basis) throw InvalidDimension("phi_grid: index out of range");
        return {*grid, phi_table.col(n).eval()};
    }

    GridFunction psi_grid(int n) const {
        if (rep != Representation::grid)
            throw CapabilityError("psi_grid: model has no grid representation");
        if (n < 0 || n > n_basis) throw InvalidDimension("psi_grid: index out of range");
        return {*grid, psi_table.col(n).eval()};
    }

    FockVector phi0_fock() const { return phi_fock(0); }
    FockVector psi0_fock() const { return psi_fock(0); }
};

/// Undeformed baseline: T = 1, phi_n = Psi_n = e_n.
inline DeformationModel build_identity(int dim) {
    if (dim < 2) throw InvalidDimension("build_identity: dim must be >= 2");
    DeformationModel m;
    m.name = "identity";
    m.regular = true;
    m.dim = dim;
    m.rep = Representation::fock;
    m.ladder_a = annihilator_matrix(dim);
    m.ladder_b = m.ladder_a.adjoint();
    m.T = FockOperator::Identity(dim, dim);
    m.T_inv = FockOperator::Identity(dim, dim);
    m.log_phi_norm = [](int) { return 0.0; };
    m.log_psi_norm = [](int) { return 0.0; };
    return m;
}

}  // namespace pbsq
