#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "pbsq/displacement.hpp"
#include "pbsq/expm.hpp"
#include "pbsq/fock.hpp"
#include "pbsq/model.hpp"
#include "pbsq/squeeze_params.hpp"
#include "pbsq/types.hpp"

namespace pbsq {

// Squeezed coefficient mass decays like tanh(r)^k over even levels; past
// tanh r = 0.8 the default truncation cannot hold the state.
inline void require_squeeze_safe(Complex z, Eigen::Index dim) {
    const double r = std::abs(z);
    if (std::tanh(r) > 0.8)
        throw TruncationUnsafe("squeeze: tanh(r) = " + std::to_string(std::tanh(r)) +
                               " exceeds 0.8");
    if (r > 0.0 && dim < 48)
        throw TruncationUnsafe("squeeze: dim >= 48 required for nonzero squeezing");
}

enum class StandardSqueezeRoute { exponential, factorized };

/// Standard squeezing operator S(z) = exp(z (a0^dag)^2/2 - conj(z) a0^2/2),
/// either as a single matrix exponential or in the factorized
/// exp(lambda_b (a0^dag)^2) exp(lambda (a0 a0^dag + a0^dag a0)) exp(lambda_a a0^2)
/// form. Both preserve the even/odd block structure exactly.
inline FockOperator squeeze_standard(Complex z, Eigen::Index dim,
                                     StandardSqueezeRoute route = StandardSqueezeRoute::exponential) {
    require_squeeze_safe(z, dim);
    const FockOperator a0 = annihilator_matrix(dim);
    const FockOperator a0d = a0.adjoint();
    if (route == StandardSqueezeRoute::exponential) {
        return matrix_exponential(0.5 * z * a0d * a0d - 0.5 * std::conj(z) * a0 * a0);
    }
    const SqueezeParams p = squeeze_params(z);
    const FockOperator left = matrix_exponential(p.lambda_b * a0d * a0d);
    const FockOperator mid = matrix_exponential(p.lambda * (a0 * a0d + a0d * a0));
    const FockOperator right = matrix_exponential(p.lambda_a * a0 * a0);
    return left * mid * right;
}

enum class SqueezeKind { S, T };  // the deformed pair: S(z) acts on phi's, T(z) on Psi's

/// Deformed squeezing operators by three routes:
///   conjugation  T S(z) T^{-1}               (resp. (T^{-1})^dag S(z) T^dag)
///   series       sum_k (z b^2/2 - conj(z) a^2/2)^k / k!
///   bch          exp(lambda_b b^2) exp(lambda (ab + ba)) exp(lambda_a a^2)
/// The BCH factors are individually unbounded upstairs, so that route is
/// diagnostic-only; its residual is reported but never gates anything.
inline std::pair<FockOperator, OperatorBuildReport> deformed_squeeze(
    const DeformationModel& m, Complex z, SqueezeKind kind,
    DeformedRoute route = DeformedRoute::conjugation) {
    require_squeeze_safe(z, m.dim);
    OperatorBuildReport rep;
    rep.route = route;
    const FockOperator& a = m.ladder_a;
    const FockOperator& b = m.ladder_b;
    FockOperator out;
    switch (route) {
        case DeformedRoute::conjugation: {
            if (!m.regular)
                throw CapabilityError("deformed_squeeze: conjugation route needs bounded T");
            const FockOperator s = squeeze_standard(z, m.dim);
            if (kind == SqueezeKind::S)
                out = *m.T * s * *m.T_inv;
            else
                out = m.T_inv->adjoint() * s * m.T->adjoint();
            break;
        }
        case DeformedRoute::series: {
            FockOperator gen;
            if (kind == SqueezeKind::S)
                gen = 0.5 * z * b * b - 0.5 * std::conj(z) * a * a;
            else
                gen = 0.5 * z * (a.adjoint() * a.adjoint()) -
                      0.5 * std::conj(z) * (b.adjoint() * b.adjoint());
            SeriesSumReport series_rep;
            out = exponential_series(gen, {}, &series_rep);
            rep.terms_used = series_rep.terms_used;
            break;
        }
        case DeformedRoute::bch: {
            const SqueezeParams p = squeeze_params(z);
            if (kind == SqueezeKind::S) {
                out = matrix_exponential(p.lambda_b * b * b) *
                      matrix_exponential(p.lambda * (a * b + b * a)) *
                      matrix_exponential(p.lambda_a * a * a);
            } else {
                const FockOperator ad = a.adjoint(), bd = b.adjoint();
                out = matrix_exponential(p.lambda_b * ad * ad) *
                      matrix_exponential(p.lambda * (bd * ad + ad * bd)) *
                      matrix_exponential(p.lambda_a * bd * bd);
            }
            break;
        }
    }
    if (route != DeformedRoute::conjugation && m.regular) {
        rep.residual_vs_reference =
            leading_block_residual(out, deformed_squeeze(m, z, kind).first);
    }
    return {out, rep};
}

struct OperatorRelationReport {
    double s_times_s_neg = 0.0;   // || S(z) S(-z) - 1 ||
    double s_neg_vs_t_dag = 0.0;  // || S(-z) - T(z)^dag ||
    double t_times_t_neg = 0.0;   // || T(z) T(-z) - 1 ||
    double t_neg_vs_s_dag = 0.0;  // || T(-z) - S(z)^dag ||
    double intertwining = 0.0;    // || T T^dag T(z) - S(z) T T^dag ||
    double max_residual = 0.0;
};

/// Inverse/adjoint relations among the deformed squeezers plus the
/// T T^dag intertwiner, measured on the leading block.
inline OperatorRelationReport verify_operator_relations(const DeformationModel& m, Complex z) {
    if (!m.regular) throw CapabilityError("verify_operator_relations: regular models only");
    const FockOperator s_pos = deformed_squeeze(m, z, SqueezeKind::S).first;
    const FockOperator s_neg = deformed_squeeze(m, -z, SqueezeKind::S).first;
    const FockOperator t_pos = deformed_squeeze(m, z, SqueezeKind::T).first;
    const FockOperator t_neg = deformed_squeeze(m, -z, SqueezeKind::T).first;
    const FockOperator id = FockOperator::Identity(m.dim, m.dim);
    const FockOperator tt_dag = *m.T * m.T->adjoint();
    OperatorRelationReport r;
    r.s_times_s_neg = leading_block_residual(s_pos * s_neg, id);
    r.s_neg_vs_t_dag = leading_block_residual(s_neg, t_pos.adjoint());
    r.t_times_t_neg = leading_block_residual(t_pos * t_neg, id);
    r.t_neg_vs_s_dag = leading_block_residual(t_neg, s_pos.adjoint());
    r.intertwining = leading_block_residual(tt_dag * t_pos, s_pos * tt_dag);
    r.max_residual = std::max({r.s_times_s_neg, r.s_neg_vs_t_dag, r.t_times_t_neg,
                               r.t_neg_vs_s_dag, r.intertwining});
    return r;
}

}  // namespace pbsq
