#pragma once

#include <cmath>

#include "pbsq/model.hpp"
#include "pbsq/types.hpp"

namespace pbsq {

/// Bounded rank-one deformation T = 1 + alpha |v><u| with <u, v> = 1.
/// T^{-1} = 1 + beta |v><u| where alpha + beta + alpha*beta = 0.
struct RankOneSpec {
    FockVector u;
    FockVector v;
    Complex alpha{1.0, 0.0};
};

inline RankOneSpec default_rank_one_spec(int dim) {
    RankOneSpec s;
    s.u = basis_vector(dim, 0);
    s.v = basis_vector(dim, 0) + basis_vector(dim, 1);
    s.alpha = Complex(1.0, 0.0);
    return s;
}

inline DeformationModel build_rank_one(const RankOneSpec& spec, int dim) {
    if (dim < 2) throw InvalidDimension("build_rank_one: dim must be >= 2");
    if (spec.u.size() > dim || spec.v.size() > dim)
        throw InvalidDimension("build_rank_one: u, v not representable in dim");
    FockVector u = FockVector::Zero(dim), v = FockVector::Zero(dim);
    u.head(spec.u.size()) = spec.u;
    v.head(spec.v.size()) = spec.v;
    if (std::abs(inner(u, v) - 1.0) > 1e-12)
        throw NormalizationError("build_rank_one: <u, v> must equal 1");
    if (std::abs(spec.alpha + 1.0) < 1e-14)
        throw Error("build_rank_one: alpha = -1 makes T singular");

    const Complex alpha = spec.alpha;
    const Complex beta = -alpha / (1.0 + alpha);
    DeformationModel m;
    m.name = "rank-one";
    m.regular = true;
    m.dim = dim;
    m.rep = Representation::fock;
    const FockOperator id = FockOperator::Identity(dim, dim);
    const FockOperator proj = v * u.adjoint();  // P_{u,v} f = <u, f> v
    m.T = id + alpha * proj;
    m.T_inv = id + beta * proj;
    const FockOperator a0 = annihilator_matrix(dim);
    m.ladder_a = *m.T * a0 * *m.T_inv;
    m.ladder_b = *m.T * a0.adjoint() * *m.T_inv;

    const double v_sq = v.squaredNorm(), u_sq = u.squaredNorm();
    m.log_phi_norm = [u, v, alpha, v_sq, dim](int n) {
        if (n >= dim) return 0.0;  // phi_n = e_n past the support of u
        const Complex cross = alpha * std::conj(u(n)) * v(n);
        return 0.5 * std::log(1.0 + 2.0 * std::real(cross) +
                              std::norm(alpha) * std::norm(u(n)) * v_sq);
    };
    const Complex beta_c = beta;
    m.log_psi_norm = [u, v, beta_c, u_sq, dim](int n) {
        if (n >= dim) return 0.0;
        const Complex cross = std::conj(beta_c) * std::conj(v(n)) * u(n);
        return 0.5 * std::log(1.0 + 2.0 * std::real(cross) +
                              std::norm(beta_c) * std::norm(v(n)) * u_sq);
    };
    return m;
}

}  // namespace pbsq
