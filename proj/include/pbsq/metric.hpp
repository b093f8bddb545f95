#pragma once

#include <string>
#include <vector>

#include "pbsq/model.hpp"
#include "pbsq/swanson.hpp"
#include "pbsq/types.hpp"

namespace pbsq {

struct MetricResult {
    FockOperator eta;
    bool truncated = false;  // non-regular fallback S_Psi
    int dim_eff = 0;
};

/// Metric operator eta = (T^{-1})^dag T^{-1} for regular models. Non-regular
/// models fall back to the truncated S_Psi = sum_n |Psi_n><Psi_n|, which only
/// makes sense while the summands decay; growing summands raise
/// MetricDivergent unless the caller caps dim_eff explicitly.
inline MetricResult metric_eta(const DeformationModel& m, int dim_eff_cap = -1,
                               double summand_tol = 1e-12) {
    if (m.regular) {
        return {(m.T_inv->adjoint() * (*m.T_inv)).eval(), false, m.dim};
    }
    const int n_max = (dim_eff_cap >= 0) ? std::min(dim_eff_cap, m.max_basis_index())
                                         : m.max_basis_index();
    FockOperator s_psi = FockOperator::Zero(m.dim, m.dim);
    double prev = -1.0;
    int growth_run = 0;
    int used = 0;
    for (int n = 0; n <= n_max; ++n) {
        const FockVector psi = m.psi_fock(n);
        const double summand = psi.squaredNorm();
        if (prev >= 0.0 && summand > prev) ++growth_run; else growth_run = 0;
        if (dim_eff_cap < 0 && growth_run >= 4)
            throw MetricDivergent("metric_eta: S_Psi summands grow (" + m.name +
                                  " is non-regular); pass an explicit dim_eff cap");
        s_psi.noalias() += psi * psi.adjoint();
        ++used;
        prev = summand;
        if (summand < summand_tol) break;
    }
    return {s_psi, true, used};
}

struct BiorthReport {
    ComplexMatrix gram;                    // G(n, m) = <phi_n, Psi_m>
    RealMatrix ladder_residuals;           // rows: b phi up, a phi down, a^dag Psi up, b^dag Psi down
    std::vector<int> flagged;              // rows whose Fock expansion violates the tail rule
    double max_offdiagonal = 0.0;
    double max_diagonal_deviation = 0.0;
};

/// Gram matrix of the two families plus the four ladder-relation residuals,
/// everything evaluated in the model's Fock representation (grid models go
/// through their quadrature projections, whose tails are reported).
inline BiorthReport biorthogonality_matrix(const DeformationModel& m, int n_max) {
    if (n_max < 1 || n_max > m.max_basis_index())
        throw InvalidDimension("biorthogonality_matrix: n_max out of range");
    BiorthReport rep;
    rep.gram.resize(n_max + 1, n_max + 1);
    if (m.rep == Representation::grid) {
        for (int n = 0; n <= n_max; ++n)
            for (int k = 0; k <= n_max; ++k)
                rep.gram(n, k) = l2_inner(m.phi_grid(n), m.psi_grid(k));
    } else {
        for (int n = 0; n <= n_max; ++n)
            for (int k = 0; k <= n_max; ++k)
                rep.gram(n, k) = inner(m.phi_fock(n), m.psi_fock(k));
    }
    for (int n = 0; n <= n_max; ++n)
        for (int k = 0; k <= n_max; ++k) {
            const double dev = std::abs(rep.gram(n, k) - (n == k ? 1.0 : 0.0));
            if (n == k)
                rep.max_diagonal_deviation = std::max(rep.max_diagonal_deviation, dev);
            else
                rep.max_offdiagonal = std::max(rep.max_offdiagonal, dev);
        }

    rep.ladder_residuals.resize(4, n_max);
    if (m.rep == Representation::grid) {
        // differential form on the grid; the truncated Fock projection keeps
        // a real tail at these orders and would swamp the relation
        const ComplexMatrix diff = sinc_differentiation_matrix(*m.grid).cast<Complex>();
        for (int n = 0; n < n_max; ++n) {
            const double root = std::sqrt(double(n + 1));
            rep.ladder_residuals(0, n) = l2_norm(
                swanson_ladder_apply(m, diff, m.phi_grid(n), Ladder::raise_phi) -
                root * m.phi_grid(n + 1));
            rep.ladder_residuals(1, n) = l2_norm(
                swanson_ladder_apply(m, diff, m.phi_grid(n + 1), Ladder::lower_phi) -
                root * m.phi_grid(n));
            rep.ladder_residuals(2, n) = l2_norm(
                swanson_ladder_apply(m, diff, m.psi_grid(n), Ladder::raise_psi) -
                root * m.psi_grid(n + 1));
            rep.ladder_residuals(3, n) = l2_norm(
                swanson_ladder_apply(m, diff, m.psi_grid(n + 1), Ladder::lower_psi) -
                root * m.psi_grid(n));
        }
    } else {
        const FockOperator a_dag = m.ladder_a.adjoint();
        const FockOperator b_dag = m.ladder_b.adjoint();
        for (int n = 0; n < n_max; ++n) {
            const FockVector phi_n = m.phi_fock(n), phi_n1 = m.phi_fock(n + 1);
            const FockVector psi_n = m.psi_fock(n), psi_n1 = m.psi_fock(n + 1);
            const double root = std::sqrt(double(n + 1));
            rep.ladder_residuals(0, n) = (m.ladder_b * phi_n - root * phi_n1).norm();
            rep.ladder_residuals(1, n) = (m.ladder_a * phi_n1 - root * phi_n).norm();
            rep.ladder_residuals(2, n) = (a_dag * psi_n - root * psi_n1).norm();
            rep.ladder_residuals(3, n) = (b_dag * psi_n1 - root * psi_n).norm();
        }
    }
    for (int n = 0; n <= n_max; ++n) {
        if (!tail_converged(m.phi_fock(n)) || !tail_converged(m.psi_fock(n)))
            rep.flagged.push_back(n);
    }
    return rep;
}

}  // namespace pbsq
