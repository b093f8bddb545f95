#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "pbsq/expm.hpp"
#include "pbsq/fock.hpp"
#include "pbsq/model.hpp"
#include "pbsq/types.hpp"

namespace pbsq {

// Coherent mass must fit inside the truncation.
inline void require_displacement_safe(Complex z, Eigen::Index dim) {
    if (std::norm(z) > dim / 4.0)
        throw TruncationUnsafe("displacement: |z|^2 = " + std::to_string(std::norm(z)) +
                               " exceeds dim/4 = " + std::to_string(dim / 4.0));
}

/// W(z) = exp(z a0^dag - conj(z) a0); unitary on the leading block.
inline FockOperator displacement(Complex z, Eigen::Index dim) {
    require_displacement_safe(z, dim);
    const FockOperator a0 = annihilator_matrix(dim);
    return matrix_exponential(z * a0.adjoint() - std::conj(z) * a0);
}

enum class DisplacementKind { U, V };
enum class DeformedRoute { conjugation, series, bch };

struct OperatorBuildReport {
    DeformedRoute route = DeformedRoute::conjugation;
    int terms_used = 0;
    double residual_vs_reference = 0.0;  // leading-block distance to the conjugation route
};

/// Deformed displacements U(z) = T W(z) T^{-1} and V(z) = (T^{-1})^dag W(z) T^dag,
/// or their strong-series forms exp(z b - conj(z) a), exp(z a^dag - conj(z) b^dag).
inline FockOperator deformed_displacement(const DeformationModel& m, Complex z,
                                          DisplacementKind kind,
                                          std::optional<DeformedRoute> route_opt = {},
                                          OperatorBuildReport* report = nullptr) {
    const DeformedRoute route =
        route_opt.value_or(m.regular ? DeformedRoute::conjugation : DeformedRoute::series);
    OperatorBuildReport rep;
    rep.route = route;
    FockOperator out;
    switch (route) {
        case DeformedRoute::conjugation: {
            if (!m.regular)
                throw CapabilityError("deformed_displacement: conjugation route needs bounded T");
            const FockOperator w = displacement(z, m.dim);
            if (kind == DisplacementKind::U)
                out = *m.T * w * *m.T_inv;
            else
                out = m.T_inv->adjoint() * w * m.T->adjoint();
            break;
        }
        case DeformedRoute::series: {
            FockOperator gen;
            if (kind == DisplacementKind::U)
                gen = z * m.ladder_b - std::conj(z) * m.ladder_a;
            else
                gen = z * m.ladder_a.adjoint() - std::conj(z) * m.ladder_b.adjoint();
            SeriesSumReport series_rep;
            out = exponential_series(gen, {}, &series_rep);
            rep.terms_used = series_rep.terms_used;
            if (m.regular) {
                rep.residual_vs_reference = leading_block_residual(
                    out, deformed_displacement(m, z, kind, DeformedRoute::conjugation));
            }
            break;
        }
        case DeformedRoute::bch:
            throw CapabilityError("deformed_displacement: no BCH route for displacements");
    }
    if (report) *report = rep;
    return out;
}

}  // namespace pbsq
