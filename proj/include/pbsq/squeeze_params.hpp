#pragma once

#include <cmath>

#include "pbsq/types.hpp"

namespace pbsq {

/// Factorization parameters of the squeezing operator
///   S(z) = exp(z (a0^dag)^2 / 2 - conj(z) a0^2 / 2)
///        = exp(lambda_b (a0^dag)^2) exp(lambda (a0 a0^dag + a0^dag a0)) exp(lambda_a a0^2),
/// z = r e^{i theta}. The SU(1,1) disentangling of this exponent gives
/// lambda_b = +e^{i theta} tanh(r) / 2 and lambda_a = -conj(lambda_b);
/// lambda = -log(cosh r)/2 is the usual normalization.
struct SqueezeParams {
    Complex z;
    double r = 0.0;
    double theta = 0.0;
    double lambda = 0.0;
    Complex lambda_a{0.0, 0.0};
    Complex lambda_b{0.0, 0.0};
};

inline SqueezeParams squeeze_params(Complex z) {
    SqueezeParams p;
    p.z = z;
    p.r = std::abs(z);
    p.theta = std::arg(z);
    p.lambda = -0.5 * std::log(std::cosh(p.r));
    p.lambda_b = 0.5 * std::polar(std::tanh(p.r), p.theta);
    p.lambda_a = -std::conj(p.lambda_b);
    return p;
}

}  // namespace pbsq
