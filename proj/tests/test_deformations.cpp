#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pbsq/metric.hpp"
#include "pbsq/model.hpp"
#include "pbsq/rank_one.hpp"
#include "pbsq/swanson.hpp"
#include "pbsq/types.hpp"
#include "support.hpp"

using namespace pbsq;

namespace {

// Independent rank-one oracle: explicit entry loops for T and a numeric LU
// inverse, sharing no code with build_rank_one.
FockOperator rank_one_T_oracle(const FockVector& u, const FockVector& v, Complex alpha) {
    const Eigen::Index dim = u.size();
    FockOperator t(dim, dim);
    for (Eigen::Index m = 0; m < dim; ++m)
        for (Eigen::Index n = 0; n < dim; ++n)
            t(m, n) = (m == n ? 1.0 : 0.0) + alpha * std::conj(u(n)) * v(m);
    return t;
}

DeformationModel swanson_03() {
    const int n_basis = 96;
    const Grid grid = swanson_default_grid(0.3, n_basis);
    return build_swanson(SwansonSpec{0.3}, 64, grid, n_basis);
}

}  // namespace

TEST_CASE("identity model") {
    const DeformationModel m = build_identity(16);
    const BiorthReport rep = biorthogonality_matrix(m, 7);
    CHECK((rep.gram - ComplexMatrix::Identity(8, 8)).norm() == 0.0);
    CHECK(rep.flagged.empty());
    const MetricResult eta = metric_eta(m);
    CHECK((eta.eta - FockOperator::Identity(16, 16)).norm() == 0.0);
    CHECK_FALSE(eta.truncated);
    CHECK((m.ladder_b - m.ladder_a.adjoint()).norm() == 0.0);
}

TEST_CASE("rank-one example model") {
    const int dim = 16;
    const RankOneSpec spec = default_rank_one_spec(dim);
    const DeformationModel m = build_rank_one(spec, dim);

    // beta = -alpha/(1+alpha) = -1/2
    const FockOperator t_oracle = rank_one_T_oracle(
        (FockVector(dim) << spec.u, FockVector::Zero(dim - spec.u.size())).finished(),
        (FockVector(dim) << spec.v, FockVector::Zero(dim - spec.v.size())).finished(), spec.alpha);
    CHECK((*m.T - t_oracle).norm() == 0.0);
    CHECK((*m.T_inv - t_oracle.inverse()).norm() < 1e-14);

    const FockVector phi0 = m.phi_fock(0);
    CHECK(std::abs(phi0(0) - 2.0) < 1e-15);
    CHECK(std::abs(phi0(1) - 1.0) < 1e-15);
    CHECK(phi0.tail(dim - 2).norm() == 0.0);

    const FockVector psi0 = m.psi_fock(0);
    CHECK(std::abs(psi0(0) - 0.5) < 1e-15);
    CHECK(psi0.tail(dim - 1).norm() < 1e-15);

    CHECK(std::abs(inner(phi0, psi0) - 1.0) < 1e-14);
    CHECK(std::abs(inner(phi0, m.psi_fock(1))) < 1e-14);

    CHECK((*m.T * *m.T_inv - FockOperator::Identity(dim, dim)).norm() < 1e-13);
}

TEST_CASE("rank-one alpha = 0 degenerates to the identity model") {
    RankOneSpec spec = default_rank_one_spec(8);
    spec.alpha = 0.0;
    const DeformationModel m = build_rank_one(spec, 8);
    CHECK((*m.T - FockOperator::Identity(8, 8)).norm() == 0.0);
    CHECK((m.ladder_b - m.ladder_a.adjoint()).norm() < 1e-14);
}

TEST_CASE("rank-one diagonal example and its metric") {
    RankOneSpec spec;
    spec.u = basis_vector(8, 0);
    spec.v = basis_vector(8, 0);
    spec.alpha = 1.0;
    const DeformationModel m = build_rank_one(spec, 8);
    FockVector diag_expected = FockVector::Ones(8);
    diag_expected(0) = 2.0;
    CHECK((*m.T - FockOperator(diag_expected.asDiagonal())).norm() == 0.0);
    const MetricResult eta = metric_eta(m);
    FockVector eta_expected = FockVector::Ones(8);
    eta_expected(0) = 0.25;
    CHECK((eta.eta - FockOperator(eta_expected.asDiagonal())).norm() < 1e-15);
}

TEST_CASE("rank-one validation errors") {
    RankOneSpec spec = default_rank_one_spec(8);
    spec.v *= 2.0;  // <u, v> = 2
    CHECK_THROWS_AS(build_rank_one(spec, 8), NormalizationError);

    RankOneSpec singular;
    singular.u = basis_vector(8, 0);
    singular.v = basis_vector(8, 0);
    singular.alpha = -1.0;
    CHECK_THROWS_AS(build_rank_one(singular, 8), Error);
}

TEST_CASE("metric maps phi onto Psi for regular models") {
    const DeformationModel m = build_rank_one(default_rank_one_spec(64), 64);
    const MetricResult eta = metric_eta(m);
    for (int n = 0; n <= 20; ++n)
        CHECK((eta.eta * m.phi_fock(n) - m.psi_fock(n)).norm() < 1e-10);
}

TEST_CASE("phi_n two ways: T e_n vs ladder powers") {
    const DeformationModel m = build_rank_one(default_rank_one_spec(64), 64);
    FockVector phi = m.phi_fock(0);
    for (int n = 1; n <= 20; ++n) {
        phi = (m.ladder_b * phi / std::sqrt(double(n))).eval();
        CHECK((phi - m.phi_fock(n)).norm() < 1e-9);
    }
}

TEST_CASE("number operator eigenrelations") {
    const DeformationModel m = build_rank_one(default_rank_one_spec(64), 64);
    const FockOperator number = m.ladder_b * m.ladder_a;
    for (int n = 0; n <= 16; ++n) {
        CHECK((number * m.phi_fock(n) - double(n) * m.phi_fock(n)).norm() < 1e-8);
        CHECK((number.adjoint() * m.psi_fock(n) - double(n) * m.psi_fock(n)).norm() < 1e-8);
    }
}

TEST_CASE("swanson model biorthogonality and ladder structure") {
    const DeformationModel m = swanson_03();

    const BiorthReport rep = biorthogonality_matrix(m, 20);
    CHECK(rep.max_offdiagonal < 1e-8);
    CHECK(rep.max_diagonal_deviation < 1e-8);

    // [a, b] = 1 on the leading block
    const FockOperator comm = commutator(m.ladder_a, m.ladder_b);
    CHECK((comm - FockOperator::Identity(64, 64)).topLeftCorner(63, 63).norm() < 1e-12);

    // pseudo- rather than ordinary bosons: a^dag stays far from b
    CHECK((m.ladder_a.adjoint() - m.ladder_b).norm() > 0.1);

    // groundstate annihilation through the Fock projections
    CHECK((m.ladder_a * m.phi_fock(0)).norm() < 1e-10);
    CHECK((m.ladder_b.adjoint() * m.psi_fock(0)).norm() < 1e-10);
}

TEST_CASE("swanson norm cross-check against the Legendre closed form") {
    const DeformationModel m = swanson_03();
    const double closed = std::exp(swanson_log_norm_sq(0, 0.3));
    CHECK(closed == doctest::Approx(std::sqrt(kPi / std::cos(0.6))).epsilon(1e-14));
    const double quad = std::pow(l2_norm(m.phi_grid(0)), 2);
    CHECK(std::abs(quad - closed) / closed < 1e-10);

    // n = 1: sqrt(pi/cos 0.6) / cos 0.6
    const double closed1 = std::exp(swanson_log_norm_sq(1, 0.3));
    CHECK(closed1 ==
          doctest::Approx(std::sqrt(kPi / std::cos(0.6)) / std::cos(0.6)).epsilon(1e-14));
    CHECK(std::abs(std::pow(l2_norm(m.phi_grid(1)), 2) - closed1) / closed1 < 1e-10);
}

TEST_CASE("swanson ladder relations via change of representation") {
    const DeformationModel m = swanson_03();
    const BiorthReport rep = biorthogonality_matrix(m, 17);
    for (int n = 0; n < 17; ++n)
        for (int row = 0; row < 4; ++row) CHECK(rep.ladder_residuals(row, n) < 1e-9);
}

TEST_CASE("swanson parameter domain") {
    const Grid grid = make_uniform_grid(64, 10.0);
    CHECK_THROWS_AS(build_swanson(SwansonSpec{0.0}, 16, grid), Error);
    CHECK_THROWS_AS(build_swanson(SwansonSpec{0.9}, 16, grid), Error);
    CHECK_THROWS_AS(build_swanson(SwansonSpec{-kPi / 4.0}, 16, grid), Error);
}

TEST_CASE("swanson metric fallback") {
    const DeformationModel m = swanson_03();
    CHECK_THROWS_AS(metric_eta(m), MetricDivergent);
    const MetricResult capped = metric_eta(m, 12);
    CHECK(capped.truncated);
    CHECK(capped.dim_eff == 13);
    // S_Psi phi_n = Psi_n only held approximately at this harsh a cap; just
    // check hermiticity and positivity of the truncated sum
    CHECK((capped.eta - capped.eta.adjoint()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<FockOperator> es(capped.eta);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("norm closed forms match the truncation for rank-one") {
    const DeformationModel m = build_rank_one(default_rank_one_spec(32), 32);
    for (int n : {0, 1, 5, 31}) {
        CHECK(std::exp(m.log_phi_norm(n)) == doctest::Approx(m.phi_fock(n).norm()).epsilon(1e-12));
        CHECK(std::exp(m.log_psi_norm(n)) == doctest::Approx(m.psi_fock(n).norm()).epsilon(1e-12));
    }
    CHECK(m.log_phi_norm(1000) == 0.0);  // identity tail of the deformation
}
