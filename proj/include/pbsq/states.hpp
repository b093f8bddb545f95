#pragma once

#include <cmath>
#include <string>
#include <variant>

#include "pbsq/convergence.hpp"
#include "pbsq/displacement.hpp"
#include "pbsq/model.hpp"
#include "pbsq/squeeze_ops.hpp"
#include "pbsq/squeeze_params.hpp"
#include "pbsq/swanson.hpp"
#include "pbsq/types.hpp"

namespace pbsq {

/// A state in whichever representation its model is native to. Pairings mix
/// representations never: silent coercion would hide tail errors.
using State = std::variant<FockVector, GridFunction>;

inline double state_norm(const State& s) {
    if (std::holds_alternative<FockVector>(s)) return std::get<FockVector>(s).norm();
    return l2_norm(std::get<GridFunction>(s));
}

inline Complex state_pairing(const State& left, const State& right) {
    if (std::holds_alternative<FockVector>(left) && std::holds_alternative<FockVector>(right))
        return inner(std::get<FockVector>(left), std::get<FockVector>(right));
    if (std::holds_alternative<GridFunction>(left) && std::holds_alternative<GridFunction>(right))
        return l2_inner(std::get<GridFunction>(left), std::get<GridFunction>(right));
    throw RepresentationMismatch("state_pairing: mixed Fock/grid pair");
}

inline State state_difference(const State& a, const State& b) {
    if (std::holds_alternative<FockVector>(a) && std::holds_alternative<FockVector>(b))
        return State((std::get<FockVector>(a) - std::get<FockVector>(b)).eval());
    if (std::holds_alternative<GridFunction>(a) && std::holds_alternative<GridFunction>(b))
        return State(std::get<GridFunction>(a) - std::get<GridFunction>(b));
    throw RepresentationMismatch("state_difference: mixed Fock/grid pair");
}

enum class Construction { t_action, operator_action, series };

struct SeriesDiagnostics {
    int terms_used = 1;
    double last_term_norm = 0.0;
    double estimated_radius_margin = 1.0;  // 1 - tanh(r)/tanh(rho_hat)
    bool stalled = false;
};

struct BiStatePair {
    State left;   // phi-side
    State right;  // Psi-side
    Construction construction = Construction::series;
    Complex pairing{0.0, 0.0};
};

struct BiStateResult {
    BiStatePair pair;
    SeriesDiagnostics diagnostics;
};

/// Coherent coefficients e^{-|z|^2/2} z^n / sqrt(n!).
inline FockVector coherent(Complex z, Eigen::Index dim) {
    require_displacement_safe(z, dim);
    FockVector c(dim);
    c(0) = std::exp(-0.5 * std::norm(z));
    for (Eigen::Index n = 1; n < dim; ++n) c(n) = c(n - 1) * z / std::sqrt(double(n));
    return c;
}

inline double coherent_eigen_residual(Complex z, const FockVector& v) {
    return (annihilator_matrix(v.size()) * v - z * v).norm();
}

/// Squeezed vacuum S(z) e_0 in closed form: even coefficients
/// c_{2k} = e^lambda lambda_b^k sqrt((2k)!)/k!, odd coefficients exactly zero.
inline FockVector squeezed_vacuum(Complex z, Eigen::Index dim) {
    require_squeeze_safe(z, dim);
    const SqueezeParams p = squeeze_params(z);
    FockVector c = FockVector::Zero(dim);
    Complex even = std::exp(p.lambda);
    c(0) = even;
    for (Eigen::Index k = 1; 2 * k < dim; ++k) {
        even *= p.lambda_b * std::sqrt(double(2 * k) * double(2 * k - 1)) / double(k);
        c(2 * k) = even;
    }
    return c;
}

/// psi^alpha_z = W(alpha) S(z) e_0.
inline FockVector coherent_squeezed(Complex alpha, Complex z, Eigen::Index dim) {
    require_displacement_safe(alpha, dim);
    return displacement(alpha, dim) * squeezed_vacuum(z, dim);
}

struct CoherentSqueezedResiduals {
    double annihilator = 0.0;     // [cosh r (a0 - alpha) - e^{i theta} sinh r (a0^dag - conj(alpha))] psi
    double eigen_relation = 0.0;  // (a0 + zeta a0^dag) psi = (alpha + zeta conj(alpha)) psi
    double norm_deviation = 0.0;
    Complex zeta{0.0, 0.0};       // -e^{i theta} tanh r
};

inline CoherentSqueezedResiduals coherent_squeezed_residuals(Complex alpha, Complex z,
                                                             const FockVector& psi) {
    const Eigen::Index dim = psi.size();
    const SqueezeParams p = squeeze_params(z);
    const FockOperator a0 = annihilator_matrix(dim);
    const FockOperator a0d = a0.adjoint();
    const FockOperator id = FockOperator::Identity(dim, dim);
    CoherentSqueezedResiduals r;
    r.zeta = -std::polar(std::tanh(p.r), p.theta);
    const FockOperator vac = std::cosh(p.r) * (a0 - alpha * id) -
                             std::polar(std::sinh(p.r), p.theta) * (a0d - std::conj(alpha) * id);
    r.annihilator = (vac * psi).norm();
    const Complex eig = alpha + r.zeta * std::conj(alpha);
    r.eigen_relation = ((a0 + r.zeta * a0d) * psi - eig * psi).norm();
    r.norm_deviation = std::abs(psi.norm() - 1.0);
    return r;
}

namespace detail {

// Even-index series sum_k c_k basis(2k) on the grid, ascending k, with the
// three-consecutive-small-terms rule against the accumulated term-norm mass.
struct GridSeriesSum {
    Eigen::VectorXcd values;
    SeriesDiagnostics diag;
};

template <class CoefFn, class LogNormFn>
GridSeriesSum grid_even_series(const ComplexMatrix& table, int n_basis, CoefFn coef,
                               LogNormFn log_norm, double rel_tol = 1e-14) {
    GridSeriesSum out;
    out.values = Eigen::VectorXcd::Zero(table.rows());
    double mass = 0.0;
    int small_run = 0;
    int k = 0;
    for (; 2 * k <= n_basis; ++k) {
        const Complex c = coef(k);
        const double term_norm = std::abs(c) * std::exp(log_norm(2 * k));
        out.values += c * table.col(2 * k);
        mass += term_norm;
        out.diag.terms_used = k + 1;
        out.diag.last_term_norm = term_norm;
        small_run = (term_norm <= rel_tol * mass) ? small_run + 1 : 0;
        if (small_run >= 3) return out;
    }
    out.diag.stalled = true;
    return out;
}

template <class CoefFn>
FockVector fock_even_series(const DeformationModel& m, bool phi_side, CoefFn coef,
                            SeriesDiagnostics* diag) {
    FockVector acc = FockVector::Zero(m.dim);
    double mass = 0.0;
    int small_run = 0;
    for (int k = 0; 2 * k <= m.max_basis_index(); ++k) {
        const Complex c = coef(k);
        const FockVector term = c * (phi_side ? m.phi_fock(2 * k) : m.psi_fock(2 * k));
        acc += term;
        mass += term.norm();
        if (diag) {
            diag->terms_used = k + 1;
            diag->last_term_norm = term.norm();
        }
        small_run = (term.norm() <= 1e-14 * mass) ? small_run + 1 : 0;
        if (small_run >= 3) return acc;
    }
    return acc;
}

}  // namespace detail

/// Bi-coherent pair phi_z = e^{-|z|^2/2} sum z^n/sqrt(n!) phi_n and the
/// Psi-side mirror. For regular models the sum collapses to T Phi_z and
/// (T^{-1})^dag Phi_z exactly; grid models sum the sampled basis. The
/// coherent series is entire, so only basis exhaustion can stall it.
inline BiStateResult bi_coherent(const DeformationModel& m, Complex z) {
    require_displacement_safe(z, m.dim);
    BiStateResult out;
    out.pair.construction = Construction::series;
    if (m.rep == Representation::fock) {
        const FockVector base = coherent(z, m.dim);
        out.pair.left = State((*m.T * base).eval());
        out.pair.right = State((m.T_inv->adjoint() * base).eval());
        out.diagnostics.terms_used = int(m.dim);
        out.diagnostics.last_term_norm =
            std::abs(base(m.dim - 1)) * std::exp(m.log_phi_norm(m.dim - 1));
    } else {
        // full (not only even) coherent series over the grid basis
        const auto run = [&](const ComplexMatrix& table, const std::function<double(int)>& ln) {
            Eigen::VectorXcd vals = Eigen::VectorXcd::Zero(table.rows());
            SeriesDiagnostics diag;
            Complex c = std::exp(-0.5 * std::norm(z));
            double mass = 0.0;
            int small_run = 0;
            for (int n = 0; n <= m.n_basis; ++n) {
                if (n > 0) c *= z / std::sqrt(double(n));
                vals += c * table.col(n);
                const double term_norm = std::abs(c) * std::exp(ln(n));
                mass += term_norm;
                diag.terms_used = n + 1;
                diag.last_term_norm = term_norm;
                small_run = (term_norm <= 1e-14 * mass) ? small_run + 1 : 0;
                if (small_run >= 3) return std::pair{vals, diag};
            }
            diag.stalled = true;
            return std::pair{vals, diag};
        };
        auto [phi_vals, phi_diag] = run(m.phi_table, m.log_phi_norm);
        auto [psi_vals, psi_diag] = run(m.psi_table, m.log_psi_norm);
        out.pair.left = State(GridFunction{*m.grid, phi_vals});
        out.pair.right = State(GridFunction{*m.grid, psi_vals});
        out.diagnostics = phi_diag;
        out.diagnostics.stalled = phi_diag.stalled || psi_diag.stalled;
    }
    out.pair.pairing = state_pairing(out.pair.left, out.pair.right);
    return out;
}

struct BiCoherentResiduals {
    double eigen_left = 0.0;   // ||a phi_z - z phi_z||
    double eigen_right = 0.0;  // ||b^dag Psi_z - z Psi_z||
    double pairing_deviation = 0.0;
};

inline BiCoherentResiduals verify_bi_coherent(const DeformationModel& m, Complex z,
                                              const BiStatePair& pair) {
    const auto to_fock = [&m](const State& s) {
        if (std::holds_alternative<FockVector>(s)) return std::get<FockVector>(s);
        return fock_expansion(m, std::get<GridFunction>(s));
    };
    const FockVector phi = to_fock(pair.left), psi = to_fock(pair.right);
    BiCoherentResiduals r;
    r.eigen_left = (m.ladder_a * phi - z * phi).norm();
    r.eigen_right = (m.ladder_b.adjoint() * psi - z * psi).norm();
    r.pairing_deviation = std::abs(pair.pairing - 1.0);
    return r;
}

/// Bi-squeezed pair (tau_z, kappa_z). Regular models admit all three
/// constructions (T-action on the squeezed vacuum, deformed squeezers on the
/// vacua, even-index series); grid models admit only the series, gated by
/// the empirical convergence radius. Both sides carry lambda_b^k: the
/// T-action route is linear in the expansion and fixes the kappa coefficient.
inline BiStateResult bi_squeezed(const DeformationModel& m, Complex z,
                                 Construction construction = Construction::series) {
    require_squeeze_safe(z, m.dim);
    const SqueezeParams p = squeeze_params(z);
    BiStateResult out;
    out.pair.construction = construction;
    out.diagnostics.estimated_radius_margin = 1.0 - std::tanh(p.r);

    if (m.rep == Representation::grid) {
        if (construction != Construction::series)
            throw CapabilityError("bi_squeezed: non-regular models admit only the series route");
        const double rho_hat = convergence_radius_empirical(m).rho_hat;
        out.diagnostics.estimated_radius_margin =
            1.0 - std::tanh(p.r) / std::tanh(std::min(rho_hat, 700.0));
        if (p.r >= rho_hat)
            throw SeriesDivergent("bi_squeezed: r = " + std::to_string(p.r) +
                                  " outside the estimated radius " + std::to_string(rho_hat));
        const auto coef = [&p, first = Complex(std::exp(p.lambda), 0.0)](int k) mutable {
            if (k > 0) first *= p.lambda_b * std::sqrt(double(2 * k) * double(2 * k - 1)) / double(k);
            return first;
        };
        auto left = detail::grid_even_series(m.phi_table, m.n_basis, coef, m.log_phi_norm);
        auto right = detail::grid_even_series(m.psi_table, m.n_basis, coef, m.log_psi_norm);
        out.pair.left = State(GridFunction{*m.grid, left.values});
        out.pair.right = State(GridFunction{*m.grid, right.values});
        out.diagnostics.terms_used = left.diag.terms_used;
        out.diagnostics.last_term_norm = left.diag.last_term_norm;
        out.diagnostics.stalled = left.diag.stalled || right.diag.stalled;
        out.pair.pairing = state_pairing(out.pair.left, out.pair.right);
        return out;
    }

    switch (construction) {
        case Construction::t_action: {
            const FockVector psi0 = squeezed_vacuum(z, m.dim);
            out.pair.left = State((*m.T * psi0).eval());
            out.pair.right = State((m.T_inv->adjoint() * psi0).eval());
            break;
        }
        case Construction::operator_action: {
            out.pair.left =
                State((deformed_squeeze(m, z, SqueezeKind::S).first * m.phi0_fock()).eval());
            out.pair.right =
                State((deformed_squeeze(m, z, SqueezeKind::T).first * m.psi0_fock()).eval());
            break;
        }
        case Construction::series: {
            const auto coef = [&p, first = Complex(std::exp(p.lambda), 0.0)](int k) mutable {
                if (k > 0)
                    first *= p.lambda_b * std::sqrt(double(2 * k) * double(2 * k - 1)) / double(k);
                return first;
            };
            out.pair.left = State(detail::fock_even_series(m, true, coef, &out.diagnostics));
            out.pair.right = State(detail::fock_even_series(m, false, coef, nullptr));
            break;
        }
    }
    out.pair.pairing = state_pairing(out.pair.left, out.pair.right);
    return out;
}

/// Coherent bi-squeezed pair tau^alpha_z = T psi^alpha_z = U(alpha) S(z) phi_0
/// (and the V/T mirror); regular models only.
struct CoherentBiSqueezedResult {
    BiStatePair pair;                  // T-action construction
    double route_residual_left = 0.0;  // vs U(alpha) S(z) phi_0
    double route_residual_right = 0.0; // vs V(alpha) T(z) Psi_0
};

inline CoherentBiSqueezedResult coherent_bi_squeezed(const DeformationModel& m, Complex alpha,
                                                     Complex z) {
    if (!m.regular) throw CapabilityError("coherent_bi_squeezed: regular models only");
    const FockVector psi = coherent_squeezed(alpha, z, m.dim);
    CoherentBiSqueezedResult out;
    out.pair.construction = Construction::t_action;
    out.pair.left = State((*m.T * psi).eval());
    out.pair.right = State((m.T_inv->adjoint() * psi).eval());
    out.pair.pairing = state_pairing(out.pair.left, out.pair.right);

    const FockVector op_left = deformed_displacement(m, alpha, DisplacementKind::U) *
                               deformed_squeeze(m, z, SqueezeKind::S).first * m.phi0_fock();
    const FockVector op_right = deformed_displacement(m, alpha, DisplacementKind::V) *
                                deformed_squeeze(m, z, SqueezeKind::T).first * m.psi0_fock();
    out.route_residual_left = (std::get<FockVector>(out.pair.left) - op_left).norm();
    out.route_residual_right = (std::get<FockVector>(out.pair.right) - op_right).norm();
    return out;
}

struct CoherentBiSqueezedResiduals {
    double vacuum_left = 0.0;   // [cosh r (a - alpha) - e^{i theta} sinh r (b - conj(alpha))] tau
    double vacuum_right = 0.0;  // [cosh r (b^dag - alpha) - e^{i theta} sinh r (a^dag - conj(alpha))] kappa
    double eigen_left = 0.0;    // (a + zeta b) tau = (alpha + zeta conj(alpha)) tau
    double eigen_right = 0.0;   // (b^dag + zeta a^dag) kappa = (alpha + zeta conj(alpha)) kappa
    double pairing_deviation = 0.0;
    Complex zeta{0.0, 0.0};
};

inline CoherentBiSqueezedResiduals verify_coherent_bi_squeezed(const DeformationModel& m,
                                                               Complex alpha, Complex z,
                                                               const BiStatePair& pair) {
    const SqueezeParams p = squeeze_params(z);
    const FockVector tau = std::get<FockVector>(pair.left);
    const FockVector kappa = std::get<FockVector>(pair.right);
    const FockOperator id = FockOperator::Identity(m.dim, m.dim);
    const FockOperator& a = m.ladder_a;
    const FockOperator& b = m.ladder_b;
    const FockOperator ad = a.adjoint(), bd = b.adjoint();
    const Complex sin_ph = std::polar(std::sinh(p.r), p.theta);
    CoherentBiSqueezedResiduals r;
    r.zeta = -std::polar(std::tanh(p.r), p.theta);
    r.vacuum_left =
        ((std::cosh(p.r) * (a - alpha * id) - sin_ph * (b - std::conj(alpha) * id)) * tau).norm();
    r.vacuum_right =
        ((std::cosh(p.r) * (bd - alpha * id) - sin_ph * (ad - std::conj(alpha) * id)) * kappa)
            .norm();
    const Complex eig = alpha + r.zeta * std::conj(alpha);
    r.eigen_left = ((a + r.zeta * b) * tau - eig * tau).norm();
    r.eigen_right = ((bd + r.zeta * ad) * kappa - eig * kappa).norm();
    r.pairing_deviation = std::abs(pair.pairing - 1.0);
    return r;
}

/// Evolution under the number Hamiltonian H = b a, applied term-wise to the
/// even-index series (the k-th term picks up e^{-2 i k t}); the result must
/// coincide with the bi-squeezed state at theta - 2t.
struct EvolutionResult {
    State evolved;
    double residual_vs_rotated = 0.0;
    SeriesDiagnostics diagnostics;
};

inline EvolutionResult evolve_bi_squeezed_number_hamiltonian(const DeformationModel& m, Complex z,
                                                             double t) {
    require_squeeze_safe(z, m.dim);
    const SqueezeParams p = squeeze_params(z);
    const auto coef = [&p, t, first = Complex(std::exp(p.lambda), 0.0)](int k) mutable {
        if (k > 0) first *= p.lambda_b * std::sqrt(double(2 * k) * double(2 * k - 1)) / double(k);
        return first * std::polar(1.0, -2.0 * k * t);
    };
    EvolutionResult out;
    if (m.rep == Representation::grid) {
        const double rho_hat = convergence_radius_empirical(m).rho_hat;
        if (p.r >= rho_hat)
            throw SeriesDivergent("evolve_bi_squeezed: outside the estimated radius");
        auto sum = detail::grid_even_series(m.phi_table, m.n_basis, coef, m.log_phi_norm);
        out.evolved = State(GridFunction{*m.grid, sum.values});
        out.diagnostics = sum.diag;
    } else {
        out.evolved = State(detail::fock_even_series(m, true, coef, &out.diagnostics));
    }
    const Complex z_rotated = std::polar(p.r, p.theta - 2.0 * t);
    const BiStateResult reference = bi_squeezed(m, z_rotated, Construction::series);
    out.residual_vs_rotated = state_norm(state_difference(out.evolved, reference.pair.left));
    return out;
}

}  // namespace pbsq
