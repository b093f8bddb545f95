#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "pbsq/types.hpp"

namespace pbsq {

enum class PlaneScheme { polar_gauss, tensor_trapezoid };

/// Discretization of (1/pi) * integral over the disk |alpha| <= cutoff_radius.
struct QuadratureSpec {
    int radial_order = 80;
    int angular_order = 64;
    double cutoff_radius = 6.0;
    PlaneScheme scheme = PlaneScheme::polar_gauss;

    void validate() const {
        if (cutoff_radius <= 0.0) throw Error("QuadratureSpec: cutoff_radius must be positive");
        if (radial_order < 4 || angular_order < 4)
            throw Error("QuadratureSpec: orders must be >= 4");
    }
};

/// Gauss-Legendre nodes/weights on [0, 1] (Golub-Welsch).
inline void gauss_legendre_unit(int n, RealVector& nodes, RealVector& weights) {
    RealMatrix jacobi = RealMatrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(jacobi);
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes(i) = 0.5 * (solver.eigenvalues()(i) + 1.0);
        const double v0 = solver.eigenvectors()(0, i);
        weights(i) = v0 * v0;  // mu0 = 2 on [-1,1], halved by the affine map
    }
}

/// (1/pi) * integral of F over |alpha| <= R. The polar scheme substitutes
/// u = r^2 (Gauss-Legendre radially) and a uniform trapezoid in the angle,
/// exact for trigonometric polynomials below the angular order. The tensor
/// scheme is a plain trapezoid product over the bounding square, adequate
/// for rapidly decaying integrands only.
inline Complex complex_plane_integral(const std::function<Complex(Complex)>& f,
                                      const QuadratureSpec& spec) {
    spec.validate();
    const double R = spec.cutoff_radius;
    Complex acc{0.0, 0.0};
    if (spec.scheme == PlaneScheme::polar_gauss) {
        RealVector u, w;
        gauss_legendre_unit(spec.radial_order, u, w);
        const int m = spec.angular_order;
        for (int i = 0; i < spec.radial_order; ++i) {
            const double r = R * std::sqrt(u(i));
            Complex ring{0.0, 0.0};
            for (int j = 0; j < m; ++j) {
                const double theta = 2.0 * kPi * j / m;
                const Complex alpha = std::polar(r, theta);
                const Complex val = f(alpha);
                if (!std::isfinite(std::real(val)) || !std::isfinite(std::imag(val)))
                    throw Error("complex_plane_integral: non-finite integrand at alpha = (" +
                                std::to_string(std::real(alpha)) + ", " +
                                std::to_string(std::imag(alpha)) + ")");
                ring += val;
            }
            acc += (R * R) * w(i) * ring / double(m);
        }
        return acc;
    }
    // tensor_trapezoid over [-R, R]^2
    const int nx = spec.radial_order, ny = spec.angular_order;
    const double hx = 2.0 * R / (nx - 1), hy = 2.0 * R / (ny - 1);
    for (int i = 0; i < nx; ++i) {
        const double wx = (i == 0 || i == nx - 1) ? hx / 2.0 : hx;
        for (int j = 0; j < ny; ++j) {
            const double wy = (j == 0 || j == ny - 1) ? hy / 2.0 : hy;
            const Complex alpha{-R + i * hx, -R + j * hy};
            const Complex val = f(alpha);
            if (!std::isfinite(std::real(val)) || !std::isfinite(std::imag(val)))
                throw Error("complex_plane_integral: non-finite integrand at alpha = (" +
                            std::to_string(std::real(alpha)) + ", " +
                            std::to_string(std::imag(alpha)) + ")");
            acc += wx * wy * val;
        }
    }
    return acc / kPi;
}

}  // namespace pbsq
