#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pbsq/convergence.hpp"
#include "pbsq/metric.hpp"
#include "pbsq/metrics.hpp"
#include "pbsq/model.hpp"
#include "pbsq/rank_one.hpp"
#include "pbsq/resolution.hpp"
#include "pbsq/states.hpp"
#include "pbsq/swanson.hpp"
#include "pbsq/types.hpp"
#include "support.hpp"

using namespace pbsq;

namespace {
DeformationModel rank_one_64() { return build_rank_one(default_rank_one_spec(64), 64); }
DeformationModel swanson_model(double nu) {
    return build_swanson(SwansonSpec{nu}, 64, swanson_default_grid(nu, 96), 96);
}

// Direct-summation oracle for the number statistics of a coherent state.
double poisson_variance_oracle(Complex z, int dim) {
    double mean = 0.0, second = 0.0, fact = 1.0;
    for (int n = 0; n < dim; ++n) {
        if (n > 0) fact *= n;
        const double w = std::exp(-std::norm(z)) * std::pow(std::norm(z), n) / fact;
        mean += n * w;
        second += double(n) * n * w;
    }
    return second - mean * mean;
}
}  // namespace

TEST_CASE("deformed variance with the trivial metric") {
    const int dim = 64;
    const FockOperator eye = FockOperator::Identity(dim, dim);
    const FockVector phi1 = coherent(1.0, dim);
    const FockOperator n0 = number_matrix(dim);

    const Complex var = deformed_variance(eye, n0, phi1);
    CHECK(std::abs(var - poisson_variance_oracle(1.0, dim)) < 1e-10);
    CHECK(std::abs(var - 1.0) < 1e-8);
    CHECK(std::abs(var.imag()) < 1e-12);

    CHECK(std::abs(deformed_variance(eye, eye, phi1)) < 1e-12);

    CHECK_THROWS_AS(deformed_variance(eye, n0, (2.0 * phi1).eval()), NormalizationError);
}

TEST_CASE("deformed variance of the pseudo number operator") {
    const DeformationModel m = rank_one_64();
    const FockOperator eta = metric_eta(m).eta;
    const FockVector phi_z = eta_normalize(eta, (*m.T * coherent(1.0, 64)).eval());
    const Complex var = deformed_variance(eta, (m.ladder_b * m.ladder_a).eval(), phi_z);
    CHECK(std::abs(var - 1.0) < 1e-7);
}

TEST_CASE("uncertainty saturation") {
    const DeformationModel ident = build_identity(64);
    const UncertaintyReport vac = uncertainty_saturation(ident, 0.0);
    CHECK(vac.delta_q == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(vac.delta_p == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(vac.product == doctest::Approx(0.5).epsilon(1e-10));

    const DeformationModel m = rank_one_64();
    const UncertaintyReport rep = uncertainty_saturation(m, Complex(1.0, 0.5));
    CHECK(std::abs(rep.product - 0.5) < 1e-6);
    CHECK(std::abs(rep.mirror_product - 0.5) < 1e-6);
    // the deformed variance in the eta product equals the bare variance on
    // the undeformed coherent state
    CHECK(std::abs(rep.delta_p - 1.0 / std::sqrt(2.0)) < 1e-8);
    CHECK(std::abs(rep.delta_q - 1.0 / std::sqrt(2.0)) < 1e-8);

    CHECK_THROWS_AS(uncertainty_saturation(swanson_model(0.3), 0.5), CapabilityError);
}

TEST_CASE("eta statistics recover the poisson distribution") {
    {
        const DeformationModel ident = build_identity(64);
        const EtaStatistics s = eta_statistics(ident, 1.0);
        CHECK(std::abs(s.total_probability - 1.0) < 1e-10);
        CHECK((s.weights - s.poisson).cwiseAbs().maxCoeff() < 1e-10);
    }
    const DeformationModel m = rank_one_64();
    const EtaStatistics s = eta_statistics(m, 1.0);
    CHECK(std::abs(s.total_probability - 1.0) < 1e-7);
    CHECK(std::abs(s.mirror_total_probability - 1.0) < 1e-7);
    CHECK((s.weights - s.poisson).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(std::abs(s.variance_number - 1.0) < 1e-6);
    // without the metric no probabilistic reading survives
    CHECK(std::abs(s.unweighted_sum - 1.0) > 0.01);
}

TEST_CASE("eta weights are invariant under rescaling T") {
    const DeformationModel m = rank_one_64();
    DeformationModel scaled = m;
    const double c = 3.7;
    scaled.T = (c * *m.T).eval();
    scaled.T_inv = (*m.T_inv / c).eval();
    const EtaStatistics s1 = eta_statistics(m, 1.0);
    const EtaStatistics s2 = eta_statistics(scaled, 1.0);
    CHECK((s1.weights - s2.weights).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(s2.total_probability - 1.0) < 1e-7);
}

TEST_CASE("resolution of the identity by phase-space quadrature") {
    QuadratureSpec spec;
    spec.cutoff_radius = 6.0;
    spec.radial_order = 80;
    spec.angular_order = 64;

    const DeformationModel ident = build_identity(64);
    const Complex r0 = identity_resolution_residual(ident, 0.0, basis_vector(64, 0),
                                                    basis_vector(64, 0), spec);
    CHECK(std::abs(r0) < 1e-6);

    const DeformationModel m = rank_one_64();
    const Complex r1 = identity_resolution_residual(m, Complex(0.3, 0.0), basis_vector(64, 1),
                                                    basis_vector(64, 2), spec);
    CHECK(std::abs(r1) < 1e-5);

    CHECK_THROWS_AS(identity_resolution_residual(swanson_model(0.3), 0.0, basis_vector(64, 0),
                                                 basis_vector(64, 0), spec),
                    CapabilityError);
}

TEST_CASE("quadrature residual shrinks under radial refinement") {
    const DeformationModel ident = build_identity(48);
    QuadratureSpec coarse;
    coarse.cutoff_radius = 6.0;
    coarse.radial_order = 6;
    coarse.angular_order = 32;
    QuadratureSpec fine = coarse;
    fine.radial_order = 12;
    const FockVector e0 = basis_vector(48, 0);
    const double res_coarse =
        std::abs(identity_resolution_residual(ident, 0.0, e0, e0, coarse));
    const double res_fine = std::abs(identity_resolution_residual(ident, 0.0, e0, e0, fine));
    CHECK(res_fine * 2.0 <= res_coarse);
}

TEST_CASE("discrete quasi-basis residual") {
    const DeformationModel m = rank_one_64();
    const FockVector phi0 = m.phi_fock(0);
    // sum_n <phi0, phi_n><Psi_n, phi0> telescopes to <phi0, phi0>
    CHECK(std::abs(discrete_quasi_basis_residual(m, phi0, phi0)) <
          1e-8 * std::abs(inner(phi0, phi0)));

    const DeformationModel sw = swanson_model(0.3);
    const FockVector sphi0 = sw.phi_fock(0);
    CHECK(std::abs(discrete_quasi_basis_residual(sw, sphi0, sphi0)) < 1e-8);

    // random truncation-representable vectors
    const FockVector f = testutil::random_vector(64, 5);
    const FockVector g = testutil::random_vector(64, 6);
    CHECK(std::abs(discrete_quasi_basis_residual(m, f, g)) < 1e-10 * f.norm() * g.norm());
}

TEST_CASE("theoretical convergence radius") {
    BoundSpec flat;
    flat.alpha_seq = [](int n) {
        return std::exp(std::lgamma(n + 1.0) - 0.5 * std::lgamma(2.0 * n + 1.0));
    };
    flat.alpha_bar = 0.5;
    flat.r_growth = 1.0;
    flat.M_seq = [](int) { return 1.0; };
    flat.M_limit = 1.0;
    CHECK(std::isinf(convergence_radius_theoretical(flat, flat)));

    const BoundSpec sw = swanson_bound_spec(0.3);
    validate_bound_spec(sw);
    CHECK(convergence_radius_theoretical(sw, sw) ==
          doctest::Approx(0.586663203645585).epsilon(1e-12));
    CHECK(swanson_radius_paper_form(0.3) == doctest::Approx(0.285781269291670).epsilon(1e-12));

    BoundSpec degenerate = sw;
    degenerate.M_limit = -1.0;
    CHECK_THROWS_AS(convergence_radius_theoretical(degenerate, degenerate), DegenerateSpec);

    BoundSpec wrong_alpha = sw;
    wrong_alpha.alpha_bar = 0.75;
    CHECK_THROWS_AS(validate_bound_spec(wrong_alpha), DegenerateSpec);
}

TEST_CASE("empirical convergence radius") {
    {
        const EmpiricalRadius r = convergence_radius_empirical(build_identity(16));
        CHECK(r.infinite);
    }
    {
        const EmpiricalRadius r = convergence_radius_empirical(rank_one_64());
        CHECK(r.infinite);
    }
    const DeformationModel sw = swanson_model(0.3);
    const RadiusReport rep = radius_report(sw, 0.3);
    CHECK(rep.agreement == RadiusAgreement::theorem_form);
    CHECK(std::abs(rep.rho_empirical - rep.rho_theoretical) <= 0.02 * rep.rho_theoretical);
    CHECK(std::abs(rep.rho_empirical - rep.rho_paper_form) > 0.02 * rep.rho_paper_form);

    // shrinks toward nu = pi/4
    const DeformationModel far = swanson_model(0.7);
    CHECK(convergence_radius_empirical(far).rho_hat < 0.1);
}

TEST_CASE("empirical radius decreases with nu") {
    double prev = std::numeric_limits<double>::infinity();
    for (double nu : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}) {
        const double rho = convergence_radius_empirical(swanson_model(nu)).rho_hat;
        CHECK(rho < prev);
        prev = rho;
    }
}

TEST_CASE("swanson norms against quadrature") {
    CHECK(swanson_norm_sq(0, 0.3) == doctest::Approx(1.951010664182356).epsilon(1e-13));
    CHECK(swanson_norm_sq(1, 0.3) == doctest::Approx(2.363899762638823).epsilon(1e-13));
    // orthonormal limit
    for (int n : {0, 3, 10}) CHECK(swanson_norm_sq(n, 0.0) == doctest::Approx(std::sqrt(kPi)));

    const DeformationModel sw = swanson_model(0.3);
    for (int n = 0; n <= 30; ++n) {
        const double quad = std::pow(l2_norm(sw.phi_grid(n)), 2);
        CHECK(std::abs(quad - swanson_norm_sq(n, 0.3)) < 1e-6 * swanson_norm_sq(n, 0.3));
    }
}

TEST_CASE("laplace-heine asymptotics") {
    const double x = 1.0 / std::cos(0.6);
    CHECK(laplace_heine_deviation(1000, x) < laplace_heine_deviation(100, x));
    CHECK(laplace_heine_deviation(500, 2.0) < 1e-3);
    CHECK(laplace_heine_deviation(2000, x) < 5e-4);
    CHECK(laplace_heine_check({100, 500, 1000, 2000}, 2.0) < 1e-2);
    CHECK_THROWS_AS(laplace_heine_deviation(100, 0.9), Error);
}
