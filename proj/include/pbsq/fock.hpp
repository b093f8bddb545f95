#pragma once

#include <cmath>

#include "pbsq/types.hpp"

namespace pbsq {

/// Standard annihilation operator on the truncated number basis:
/// entries (m, n) = sqrt(n) at m = n-1. The truncated commutator
/// [a0, a0^dag] equals the identity except for the last diagonal entry,
/// which is 1 - dim.
inline FockOperator annihilator_matrix(Eigen::Index dim) {
    if (dim < 2) throw InvalidDimension("annihilator_matrix: dim must be >= 2");
    FockOperator a = FockOperator::Zero(dim, dim);
    for (Eigen::Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

inline FockOperator creator_matrix(Eigen::Index dim) {
    return annihilator_matrix(dim).adjoint();
}

inline FockOperator number_matrix(Eigen::Index dim) {
    const FockOperator a = annihilator_matrix(dim);
    return a.adjoint() * a;
}

// q0 = (a0 + a0^dag)/sqrt(2), p0 = (a0 - a0^dag)/(i sqrt(2))
inline FockOperator position_matrix(Eigen::Index dim) {
    const FockOperator a = annihilator_matrix(dim);
    return (a + a.adjoint()) / std::sqrt(2.0);
}

inline FockOperator momentum_matrix(Eigen::Index dim) {
    const FockOperator a = annihilator_matrix(dim);
    return (a - a.adjoint()) / (kI * std::sqrt(2.0));
}

inline FockOperator commutator(const FockOperator& a, const FockOperator& b) {
    return a * b - b * a;
}

}  // namespace pbsq
