#pragma once

#include <cmath>

#include "pbsq/expm.hpp"
#include "pbsq/model.hpp"
#include "pbsq/quadrature.hpp"
#include "pbsq/states.hpp"
#include "pbsq/types.hpp"

namespace pbsq {

/// Residual of the coherent-squeezed resolution of the identity,
///   (1/pi) integral <f, tau^alpha_z> <kappa^alpha_z, g> d^2alpha - <f, g>,
/// for regular models (z = 0 reduces to the bi-coherent resolution). The
/// quadrature states W(alpha) psi0_z are evaluated through the normal-ordered
/// displacement action, which reproduces the untruncated overlaps exactly for
/// truncation-supported vectors, so the cutoff radius may exceed the naive
/// dim/4 safety bound.
inline Complex identity_resolution_residual(const DeformationModel& m, Complex z,
                                            const FockVector& f, const FockVector& g,
                                            const QuadratureSpec& spec) {
    if (!m.regular)
        throw CapabilityError(
            "identity_resolution_residual: continuous form needs a bounded T; "
            "use discrete_quasi_basis_residual");
    if (f.size() != m.dim || g.size() != m.dim)
        throw InvalidDimension("identity_resolution_residual: vector dimension mismatch");
    const FockVector seed = squeezed_vacuum(z, m.dim);
    const FockVector u = m.T->adjoint() * f;  // <f, T psi> = <T^dag f, psi>
    const FockVector w = *m.T_inv * g;        // <(T^-1)^dag psi, g> = <psi, T^-1 g>
    const auto integrand = [&](Complex alpha) {
        const FockVector psi = displace_normal_ordered(alpha, seed);
        return inner(u, psi) * inner(psi, w);
    };
    return complex_plane_integral(integrand, spec) - inner(f, g);
}

/// Discrete quasi-basis residual sum_n <f, phi_n> <Psi_n, g> - <f, g> over
/// the representable part of the families.
inline Complex discrete_quasi_basis_residual(const DeformationModel& m, const FockVector& f,
                                             const FockVector& g, int n_max = -1) {
    if (f.size() != m.dim || g.size() != m.dim)
        throw InvalidDimension("discrete_quasi_basis_residual: vector dimension mismatch");
    const int top = (n_max < 0) ? m.max_basis_index() : std::min(n_max, m.max_basis_index());
    Complex acc{0.0, 0.0};
    for (int n = 0; n <= top; ++n) acc += inner(f, m.phi_fock(n)) * inner(m.psi_fock(n), g);
    return acc - inner(f, g);
}

}  // namespace pbsq
