#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pbsq/expm.hpp"
#include "pbsq/model.hpp"
#include "pbsq/squeeze_ops.hpp"
#include "pbsq/types.hpp"

namespace pbsq {

struct DynamicsParams {
    double omega = 0.0;
    double Lambda = 0.1;
    double t = 0.0;
};

/// Interaction-picture ladder pair A(t), B(t) and the exponentially
/// amplified/damped quadratures X+-(t).
struct CapitalOps {
    FockOperator A_t, B_t, Xplus_t, Xminus_t;
};

/// Closed-form Heisenberg solution: A(t) = a cosh(2 Lambda t) + b sinh(2 Lambda t),
/// B(t) = b cosh + a sinh, X+-(t) = X+-(0) e^{+-2 Lambda t}.
inline CapitalOps capital_ops_analytic(const DeformationModel& m, const DynamicsParams& p) {
    const double c = std::cosh(2.0 * p.Lambda * p.t), s = std::sinh(2.0 * p.Lambda * p.t);
    CapitalOps ops;
    ops.A_t = c * m.ladder_a + s * m.ladder_b;
    ops.B_t = c * m.ladder_b + s * m.ladder_a;
    ops.Xplus_t = 0.5 * (ops.A_t + ops.B_t);
    ops.Xminus_t = (ops.A_t - ops.B_t) / (2.0 * kI);
    return ops;
}

namespace detail {

// One adaptive Dormand-Prince(4,5) integration of dY/dt = rate * Y.
inline FockOperator integrate_linear_growth(const FockOperator& y0, double rate, double t_final,
                                            double tol) {
    if (t_final == 0.0) return y0;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                            e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;
    const auto f = [rate](const FockOperator& y) { return (rate * y).eval(); };
    const double direction = (t_final > 0.0) ? 1.0 : -1.0;
    double t = 0.0;
    double h = direction * std::min(0.1, std::abs(t_final));
    FockOperator y = y0;
    const double scale = std::max(y0.norm(), 1.0);
    int steps = 0;
    while (direction * (t_final - t) > 0.0) {
        if (std::abs(h) < 1e-14 * std::abs(t_final))
            throw Error("capital_ops_numeric: step size underflow at t = " + std::to_string(t));
        if (direction * (t + h - t_final) > 0.0) h = t_final - t;
        const FockOperator k1 = f(y);
        const FockOperator k2 = f(y + h * a21 * k1);
        const FockOperator k3 = f(y + h * (a31 * k1 + a32 * k2));
        const FockOperator k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const FockOperator k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const FockOperator k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const FockOperator y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const FockOperator k7 = f(y5);
        const FockOperator y4 =
            y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double err = (y5 - y4).norm() / scale;
        if (err <= tol) {
            t += h;
            y = y5;
        }
        const double factor = 0.9 * std::pow(std::max(err, 1e-16) / tol, -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
        if (++steps > 100000)
            throw Error("capital_ops_numeric: step budget exhausted");
    }
    return y;
}

}  // namespace detail

/// Independent verification of the analytic solution: integrates
/// dX+-/dt = +-2 Lambda X+- with an adaptive Runge-Kutta pair.
inline CapitalOps capital_ops_numeric(const DeformationModel& m, const DynamicsParams& p,
                                      double ode_tol = 1e-9) {
    if (!(ode_tol > 1e-12 && ode_tol < 1e-6))
        throw Error("capital_ops_numeric: ode_tol outside (1e-12, 1e-6)");
    const FockOperator xp0 = 0.5 * (m.ladder_a + m.ladder_b);
    const FockOperator xm0 = (m.ladder_a - m.ladder_b) / (2.0 * kI);
    CapitalOps ops;
    ops.Xplus_t = detail::integrate_linear_growth(xp0, 2.0 * p.Lambda, p.t, ode_tol);
    ops.Xminus_t = detail::integrate_linear_growth(xm0, -2.0 * p.Lambda, p.t, ode_tol);
    ops.A_t = ops.Xplus_t + kI * ops.Xminus_t;
    ops.B_t = ops.Xplus_t - kI * ops.Xminus_t;
    return ops;
}

struct NumberElements {
    Complex psi_phi;          // <Psi_0, B(t) A(t) phi_0> = sinh^2(2 Lambda t)
    Complex phi_phi;          // <phi_0, B(t) A(t) phi_0>, cross term included
    Complex phi_phi_closed;   // ||phi_0||^2 sinh^2 + <phi_0, b^2 phi_0> sinh cosh
};

inline NumberElements number_matrix_elements(const DeformationModel& m, const DynamicsParams& p) {
    const CapitalOps ops = capital_ops_analytic(m, p);
    const FockVector phi0 = m.phi0_fock();
    const FockVector psi0 = m.psi0_fock();
    const FockVector n_phi0 = ops.B_t * (ops.A_t * phi0);
    NumberElements e;
    e.psi_phi = inner(psi0, n_phi0);
    e.phi_phi = inner(phi0, n_phi0);
    const double c = std::cosh(2.0 * p.Lambda * p.t), s = std::sinh(2.0 * p.Lambda * p.t);
    e.phi_phi_closed = phi0.squaredNorm() * s * s +
                       inner(phi0, (m.ladder_b * m.ladder_b * phi0).eval()) * s * c;
    return e;
}

struct QuadratureVariances {
    Complex var_plus, var_minus;  // (delta X+-)^2 in the <Psi_0, . phi_0> pairing
    Complex product;              // delta X+ * delta X- (principal square roots)
    bool negative_flagged = false;
};

/// The deformed variances (delta G)^2 = <Psi_0, G^2 phi_0> - <Psi_0, G phi_0>^2
/// for the canonically normalized quadratures G+- = (A(t) +- B(t))/sqrt(2)
/// (so that [G+, G-] = i and the vacuum gives delta = 1/sqrt(2) each); their
/// product stays 1/2 at every t. The 1/2-normalized X+- fields of CapitalOps
/// would give 1/4.
inline QuadratureVariances quadrature_variance_product(const DeformationModel& m,
                                                       const DynamicsParams& p) {
    const CapitalOps ops = capital_ops_analytic(m, p);
    const FockVector phi0 = m.phi0_fock();
    const FockVector psi0 = m.psi0_fock();
    const auto dvar = [&](const FockOperator& g) {
        const Complex mean = inner(psi0, (g * phi0).eval());
        const Complex second = inner(psi0, (g * (g * phi0)).eval());
        return second - mean * mean;
    };
    QuadratureVariances q;
    q.var_plus = 2.0 * dvar(ops.Xplus_t);
    q.var_minus = 2.0 * dvar(ops.Xminus_t);
    q.negative_flagged =
        std::real(q.var_plus) < -1e-10 || std::real(q.var_minus) < -1e-10;
    q.product = std::sqrt(q.var_plus) * std::sqrt(q.var_minus);
    return q;
}

struct FieldProfileRow {
    double x;
    double amp_plus, amp_minus;  // 2 e^{+-2 Lambda t}
    double sin_term, cos_term;   // sin(kx - omega t), cos(kx - omega t), k = 1
};

inline std::vector<FieldProfileRow> field_quadrature_profile(const DeformationModel&,
                                                             const DynamicsParams& p,
                                                             const std::vector<double>& xs) {
    std::vector<FieldProfileRow> rows;
    rows.reserve(xs.size());
    for (double x : xs) {
        FieldProfileRow r;
        r.x = x;
        r.amp_plus = 2.0 * std::exp(2.0 * p.Lambda * p.t);
        r.amp_minus = 2.0 * std::exp(-2.0 * p.Lambda * p.t);
        r.sin_term = std::sin(x - p.omega * p.t);
        r.cos_term = std::cos(x - p.omega * p.t);
        rows.push_back(r);
    }
    return rows;
}

struct IdentificationReport {
    double residual_forward = 0.0;   // || exp(-iH) - S(2 Lambda) || on the leading block
    double residual_backward = 0.0;  // || exp(+iH) - S(-2 Lambda) ||
    std::string chosen;              // which pairing realizes the identification
};

/// At omega = 0 the Hamiltonian is H = i Lambda (b^2 - a^2) and its
/// exponential is a deformed squeezer with z = +-2 Lambda; both sign
/// pairings are compared and the better one is named.
inline IdentificationReport squeeze_hamiltonian_identification(const DeformationModel& m,
                                                               double Lambda) {
    require_squeeze_safe(Complex(2.0 * Lambda, 0.0), m.dim);
    const FockOperator h =
        kI * Lambda * (m.ladder_b * m.ladder_b - m.ladder_a * m.ladder_a);
    const FockOperator exp_forward = matrix_exponential((-kI * h).eval());
    const FockOperator exp_backward = matrix_exponential((kI * h).eval());
    const auto deformed = [&](double zz) {
        if (m.regular) return deformed_squeeze(m, Complex(zz, 0.0), SqueezeKind::S).first;
        return deformed_squeeze(m, Complex(zz, 0.0), SqueezeKind::S, DeformedRoute::series).first;
    };
    IdentificationReport rep;
    rep.residual_forward = leading_block_residual(exp_forward, deformed(2.0 * Lambda));
    rep.residual_backward = leading_block_residual(exp_backward, deformed(-2.0 * Lambda));
    rep.chosen = rep.residual_forward <= rep.residual_backward
                     ? "exp(-iH) = S(+2 Lambda)"
                     : "exp(+iH) = S(-2 Lambda)";
    return rep;
}

}  // namespace pbsq
