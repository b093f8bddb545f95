#pragma once

#include <cmath>
#include <string>

#include "pbsq/fock.hpp"
#include "pbsq/model.hpp"
#include "pbsq/states.hpp"
#include "pbsq/types.hpp"

namespace pbsq {

inline Complex metric_inner(const FockOperator& metric, const FockVector& x, const FockVector& y) {
    return inner(x, (metric * y).eval());
}

/// Variance in the metric inner product <.,.>_eta = <., eta .> on a state the
/// caller has eta-normalized. Complex on purpose: the imaginary part is a
/// sanity metric for operators that fail eta-self-adjointness.
inline Complex deformed_variance(const FockOperator& metric, const FockOperator& op,
                                 const FockVector& state, double norm_tol = 1e-6) {
    const Complex sq = metric_inner(metric, state, state);
    if (std::abs(sq - 1.0) > norm_tol)
        throw NormalizationError("deformed_variance: <chi, eta chi> = " +
                                 std::to_string(std::real(sq)) + " + " +
                                 std::to_string(std::imag(sq)) + "i, expected 1");
    const Complex mean = metric_inner(metric, state, (op * state).eval());
    const Complex second = metric_inner(metric, state, (op * op * state).eval());
    return second - mean * mean;
}

inline FockVector eta_normalize(const FockOperator& metric, const FockVector& state) {
    const double sq = std::real(metric_inner(metric, state, state));
    if (sq <= 0.0) throw NormalizationError("eta_normalize: nonpositive metric norm");
    return state / std::sqrt(sq);
}

struct UncertaintyReport {
    double delta_q = 0.0, delta_p = 0.0, product = 0.0;
    double mirror_delta_q = 0.0, mirror_delta_p = 0.0, mirror_product = 0.0;
};

/// Deformed uncertainties of q = T q0 T^{-1}, p = T p0 T^{-1} on the
/// bi-coherent phi_z in the eta inner product; the product saturates at 1/2.
/// The mirror works on Psi_z with eta^{-1} = T T^dag and the adjoint pair.
inline UncertaintyReport uncertainty_saturation(const DeformationModel& m, Complex z) {
    if (!m.regular) throw CapabilityError("uncertainty_saturation: regular models only");
    const FockOperator q0 = position_matrix(m.dim), p0 = momentum_matrix(m.dim);
    const FockOperator q = *m.T * q0 * *m.T_inv;
    const FockOperator p = *m.T * p0 * *m.T_inv;
    const FockOperator eta = m.T_inv->adjoint() * *m.T_inv;
    const FockOperator eta_inv = *m.T * m.T->adjoint();

    const FockVector base = coherent(z, m.dim);
    const FockVector phi_z = eta_normalize(eta, (*m.T * base).eval());
    const FockVector psi_z = eta_normalize(eta_inv, (m.T_inv->adjoint() * base).eval());

    UncertaintyReport r;
    r.delta_q = std::sqrt(std::real(deformed_variance(eta, q, phi_z)));
    r.delta_p = std::sqrt(std::real(deformed_variance(eta, p, phi_z)));
    r.product = r.delta_q * r.delta_p;
    r.mirror_delta_q = std::sqrt(std::real(deformed_variance(eta_inv, q.adjoint(), psi_z)));
    r.mirror_delta_p = std::sqrt(std::real(deformed_variance(eta_inv, p.adjoint(), psi_z)));
    r.mirror_product = r.mirror_delta_q * r.mirror_delta_p;
    return r;
}

struct EtaStatistics {
    double total_probability = 0.0;       // sum |<phi_n, phi_z>_eta|^2
    double variance_number = 0.0;         // (Delta_eta N)^2 on phi_z
    RealVector weights;                   // per-n eta weights
    RealVector poisson;                   // e^{-|z|^2} |z|^{2n} / n!
    double unweighted_sum = 0.0;          // sum |<e_n, phi_z>|^2 (no metric)
    double mirror_total_probability = 0.0;
};

/// Counting statistics of the bi-coherent state under the metric inner
/// product: the eta weights reproduce the Poisson distribution and the
/// number variance equals |z|^2, while the metric-free sum exposes the
/// failure of the naive probabilistic reading for ||T|| != 1.
inline EtaStatistics eta_statistics(const DeformationModel& m, Complex z) {
    if (!m.regular) throw CapabilityError("eta_statistics: regular models only");
    const FockOperator eta = m.T_inv->adjoint() * *m.T_inv;
    const FockOperator eta_inv = *m.T * m.T->adjoint();
    const FockVector base = coherent(z, m.dim);
    const FockVector phi_z = *m.T * base;
    const FockVector psi_z = m.T_inv->adjoint() * base;

    EtaStatistics s;
    s.weights.resize(m.dim);
    s.poisson.resize(m.dim);
    const FockVector eta_phi_z = eta * phi_z;
    for (int n = 0; n < m.dim; ++n) {
        s.weights(n) = std::norm(inner(m.phi_fock(n), eta_phi_z));
        s.poisson(n) = std::exp(-std::norm(z)) * std::pow(std::norm(z), n) / std::tgamma(n + 1.0);
    }
    s.total_probability = s.weights.sum();
    s.unweighted_sum = phi_z.squaredNorm();

    const FockOperator number = m.ladder_b * m.ladder_a;
    s.variance_number =
        std::real(deformed_variance(eta, number, eta_normalize(eta, phi_z)));

    const FockVector eta_inv_psi_z = eta_inv * psi_z;
    double mirror = 0.0;
    for (int n = 0; n < m.dim; ++n) mirror += std::norm(inner(m.psi_fock(n), eta_inv_psi_z));
    s.mirror_total_probability = mirror;
    return s;
}

}  // namespace pbsq
