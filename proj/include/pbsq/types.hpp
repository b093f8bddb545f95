#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace pbsq {

using Complex = std::complex<double>;

// Coefficient vector in the truncated number basis.
using FockVector = Eigen::VectorXcd;
// Dense operator on the truncated number basis.
using FockOperator = Eigen::MatrixXcd;

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// Default reliability threshold: a state is trusted when the norm mass in
// its tail window stays below kTailTol times its norm.
inline constexpr double kTailTol = 1e-8;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDimension : Error { using Error::Error; };
struct TruncationUnsafe : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct NonNormalizable : Error { using Error::Error; };
struct PrecisionDegraded : Error { using Error::Error; };
struct ExponentialOverflow : Error { using Error::Error; };
struct SeriesStalled : Error { using Error::Error; };
struct SeriesDivergent : Error { using Error::Error; };
struct CapabilityError : Error { using Error::Error; };
struct MetricDivergent : Error { using Error::Error; };
struct NormalizationError : Error { using Error::Error; };
struct DegenerateSpec : Error { using Error::Error; };
struct InconclusiveResult : Error { using Error::Error; };
struct RepresentationMismatch : Error { using Error::Error; };
struct UsageError : Error { using Error::Error; };

// Tail window: the last ceil(dim/8) coefficients.
inline Eigen::Index tail_window(Eigen::Index dim) { return (dim + 7) / 8; }

inline double tail_estimate(const FockVector& v) {
    return v.tail(tail_window(v.size())).norm();
}

inline bool tail_converged(const FockVector& v, double tol = kTailTol) {
    return tail_estimate(v) <= tol * v.norm();
}

// Operator residuals are compared on the block of rows/cols below
// dim - dim/4; squeezing populates high Fock levels and the top quarter
// carries the truncation artifacts.
inline Eigen::Index leading_block_size(Eigen::Index dim) { return dim - dim / 4; }

inline ComplexMatrix leading_block(const ComplexMatrix& a) {
    const Eigen::Index b = leading_block_size(a.rows());
    return a.topLeftCorner(b, b);
}

inline double leading_block_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (leading_block(a) - leading_block(b)).norm();
}

inline bool all_finite(const ComplexMatrix& a) { return a.allFinite(); }

inline FockVector basis_vector(Eigen::Index dim, Eigen::Index n) {
    if (n < 0 || n >= dim) throw InvalidDimension("basis_vector: index outside truncation");
    FockVector e = FockVector::Zero(dim);
    e(n) = 1.0;
    return e;
}

// Conjugate-linear in the first argument throughout.
inline Complex inner(const FockVector& f, const FockVector& g) {
    if (f.size() != g.size()) throw InvalidDimension("inner: dimension mismatch");
    return f.dot(g);  // Eigen's dot conjugates the first argument
}

inline double operator_norm(const ComplexMatrix& a) {
    return Eigen::JacobiSVD<ComplexMatrix>(a).singularValues()(0);
}

}  // namespace pbsq
