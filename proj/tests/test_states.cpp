#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pbsq/metric.hpp"
#include "pbsq/model.hpp"
#include "pbsq/rank_one.hpp"
#include "pbsq/states.hpp"
#include "pbsq/swanson.hpp"
#include "pbsq/types.hpp"
#include "support.hpp"

using namespace pbsq;

namespace {
DeformationModel rank_one_64() { return build_rank_one(default_rank_one_spec(64), 64); }
DeformationModel swanson_03() {
    return build_swanson(SwansonSpec{0.3}, 64, swanson_default_grid(0.3, 96), 96);
}
}  // namespace

TEST_CASE("coherent state") {
    CHECK((coherent(0.0, 16) - basis_vector(16, 0)).norm() == 0.0);
    const FockVector c = coherent(1.0, 64);
    CHECK(std::abs(c(0) - 0.606530659712633) < 1e-13);
    CHECK(c.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(coherent_eigen_residual(Complex(0.0, 2.0), coherent(Complex(0.0, 2.0), 64)) < 1e-8);
    CHECK_THROWS_AS(coherent(Complex(5.0, 0.0), 64), TruncationUnsafe);
}

TEST_CASE("squeezed vacuum closed form") {
    CHECK((squeezed_vacuum(0.0, 16) - basis_vector(16, 0)).norm() == 0.0);
    const FockVector s = squeezed_vacuum(Complex(0.5, 0.0), 64);
    CHECK(std::abs(s(0) - 0.941710615831676) < 1e-13);
    CHECK(std::abs(s(2) - 0.307719176458370) < 1e-13);
    for (int n = 1; n < 64; n += 2) CHECK(std::abs(s(n)) == 0.0);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(squeezed_vacuum(Complex(1.2, 0.0), 64), TruncationUnsafe);
}

TEST_CASE("coherent squeezed state and its defining relations") {
    const int dim = 64;
    CHECK((coherent_squeezed(0.0, Complex(0.4, 0.0), dim) -
           squeezed_vacuum(Complex(0.4, 0.0), dim)).norm() < 1e-14);
    CHECK((coherent_squeezed(1.0, 0.0, dim) - coherent(1.0, dim)).norm() < 1e-12);

    const Complex alpha{0.5, 0.0};
    const Complex z = std::polar(0.4, kPi / 4.0);
    const FockVector psi = coherent_squeezed(alpha, z, dim);
    const CoherentSqueezedResiduals r = coherent_squeezed_residuals(alpha, z, psi);
    CHECK(r.annihilator < 1e-8);
    CHECK(r.eigen_relation < 1e-8);
    CHECK(r.norm_deviation < 1e-9);
}

TEST_CASE("bi-coherent pair on the regular models") {
    const DeformationModel ident = build_identity(64);
    {
        const BiStateResult res = bi_coherent(ident, Complex(0.7, 0.1));
        const FockVector base = coherent(Complex(0.7, 0.1), 64);
        CHECK((std::get<FockVector>(res.pair.left) - base).norm() == 0.0);
        CHECK((std::get<FockVector>(res.pair.right) - base).norm() == 0.0);
        CHECK(std::abs(res.pair.pairing - 1.0) < 1e-12);
    }
    const DeformationModel m = rank_one_64();
    {
        const BiStateResult res = bi_coherent(m, 0.0);
        CHECK((std::get<FockVector>(res.pair.left) - m.phi_fock(0)).norm() == 0.0);
        CHECK((std::get<FockVector>(res.pair.right) - m.psi_fock(0)).norm() == 0.0);
        CHECK(std::abs(res.pair.pairing - 1.0) < 1e-14);
    }
    {
        // independent series oracle: sum the basis columns with Poisson
        // coefficients, no T in sight
        const Complex z{0.8, 0.0};
        const BiStateResult res = bi_coherent(m, z);
        FockVector series = FockVector::Zero(64);
        Complex c = std::exp(-0.5 * std::norm(z));
        for (int n = 0; n < 64; ++n) {
            if (n > 0) c *= z / std::sqrt(double(n));
            series += c * m.phi_fock(n);
        }
        CHECK((std::get<FockVector>(res.pair.left) - series).norm() < 1e-10);

        const BiCoherentResiduals resid = verify_bi_coherent(m, z, res.pair);
        CHECK(resid.eigen_left < 1e-8);
        CHECK(resid.eigen_right < 1e-8);
        CHECK(resid.pairing_deviation < 1e-10);
    }
    for (Complex z : {Complex(0.5, 0.0), Complex(1.0, 0.5)}) {
        const BiStateResult res = bi_coherent(m, z);
        const BiCoherentResiduals resid = verify_bi_coherent(m, z, res.pair);
        CHECK(resid.eigen_left < 1e-8);
        CHECK(resid.eigen_right < 1e-8);
    }
}

TEST_CASE("bi-coherent pair on the swanson model") {
    const DeformationModel sw = swanson_03();
    const BiStateResult res = bi_coherent(sw, Complex(0.9, 0.2));
    CHECK_FALSE(res.diagnostics.stalled);
    CHECK(std::abs(res.pair.pairing - 1.0) < 1e-7);
    const BiCoherentResiduals resid = verify_bi_coherent(sw, Complex(0.9, 0.2), res.pair);
    CHECK(resid.eigen_left < 1e-6);   // includes the change-of-representation tail
    CHECK(resid.eigen_right < 1e-6);
}

TEST_CASE("eigen-relation residual tracks the truncation tail across dims") {
    const Complex z{0.0, 2.4};
    double prev_resid = 1e300;
    for (int dim : {32, 48, 64}) {
        const DeformationModel m = build_rank_one(default_rank_one_spec(dim), dim);
        const BiStateResult res = bi_coherent(m, z);
        const FockVector phi = std::get<FockVector>(res.pair.left);
        const double resid = (m.ladder_a * phi - z * phi).norm();
        const double tail = tail_estimate(phi);
        CHECK(resid <= 100.0 * tail + 1e-11);
        CHECK(resid <= prev_resid * (1.0 + 1e-12));
        prev_resid = resid;
    }
}

TEST_CASE("bi-squeezed constructions agree pairwise (rank-one)") {
    const DeformationModel m = rank_one_64();
    const Complex z = std::polar(0.4, 0.6);

    const BiStateResult t_act = bi_squeezed(m, z, Construction::t_action);
    const BiStateResult op_act = bi_squeezed(m, z, Construction::operator_action);
    const BiStateResult series = bi_squeezed(m, z, Construction::series);

    const auto fock = [](const BiStateResult& r) {
        return std::pair{std::get<FockVector>(r.pair.left), std::get<FockVector>(r.pair.right)};
    };
    const auto [tl, tr] = fock(t_act);
    const auto [ol, orr] = fock(op_act);
    const auto [sl, sr] = fock(series);
    CHECK((tl - ol).norm() < 1e-7);
    CHECK((tl - sl).norm() < 1e-7);
    CHECK((ol - sl).norm() < 1e-7);
    CHECK((tr - orr).norm() < 1e-7);
    CHECK((tr - sr).norm() < 1e-7);
    CHECK((orr - sr).norm() < 1e-7);
    for (const auto* r : {&t_act, &op_act, &series})
        CHECK(std::abs(r->pair.pairing - 1.0) < 1e-7);

    // closed form for the rank-one deformation:
    // tau_z = psi0_z + alpha <u, psi0_z> v
    const FockVector psi0 = squeezed_vacuum(z, 64);
    const FockVector u = basis_vector(64, 0);
    const FockVector v = basis_vector(64, 0) + basis_vector(64, 1);
    const FockVector closed = psi0 + inner(u, psi0) * v;
    CHECK((tl - closed).norm() < 1e-9);

    // z = 0 collapses to the vacua
    const BiStateResult zero = bi_squeezed(m, 0.0, Construction::series);
    CHECK((std::get<FockVector>(zero.pair.left) - m.phi_fock(0)).norm() < 1e-14);
    CHECK(std::abs(zero.pair.pairing - 1.0) < 1e-14);
}

TEST_CASE("bi-squeezed series support and norm bound") {
    const DeformationModel m = rank_one_64();
    const Complex z = std::polar(0.5, 1.1);
    const BiStateResult res = bi_squeezed(m, z, Construction::series);
    const FockVector tau = std::get<FockVector>(res.pair.left);

    // expansion of tau over the phi family is the squeezed vacuum: zero odd weight
    const FockVector in_phi_basis = *m.T_inv * tau;
    for (int n = 1; n < 64; n += 2) CHECK(std::abs(in_phi_basis(n)) < 1e-14);

    CHECK(tau.norm() <= operator_norm(*m.T) * (1.0 + 1e-12));
}

TEST_CASE("bi-squeezed on the swanson model") {
    const DeformationModel sw = swanson_03();
    CHECK_THROWS_AS(bi_squeezed(sw, Complex(0.2, 0.0), Construction::t_action), CapabilityError);

    const BiStateResult res = bi_squeezed(sw, Complex(0.2, 0.0), Construction::series);
    CHECK_FALSE(res.diagnostics.stalled);
    CHECK(res.diagnostics.estimated_radius_margin > 0.0);
    CHECK(std::abs(res.pair.pairing - 1.0) < 1e-6);

    // outside the estimated radius the series must refuse, not lie
    CHECK_THROWS_AS(bi_squeezed(sw, Complex(0.7, 0.0), Construction::series), SeriesDivergent);
}

TEST_CASE("pairings refuse mixed representations") {
    const DeformationModel sw = swanson_03();
    const DeformationModel m = rank_one_64();
    const State fock_state = State(m.phi_fock(0));
    const State grid_state = State(sw.phi_grid(0));
    CHECK_THROWS_AS(state_pairing(fock_state, grid_state), RepresentationMismatch);
}

TEST_CASE("coherent bi-squeezed pair and its identities") {
    const DeformationModel m = rank_one_64();
    const Complex alpha{0.5, 0.0};
    const Complex z{0.3, 0.0};

    const CoherentBiSqueezedResult res = coherent_bi_squeezed(m, alpha, z);
    CHECK(res.route_residual_left < 1e-7);
    CHECK(res.route_residual_right < 1e-7);
    CHECK(std::abs(res.pair.pairing - 1.0) < 1e-7);

    const CoherentBiSqueezedResiduals rr = verify_coherent_bi_squeezed(m, alpha, z, res.pair);
    CHECK(rr.vacuum_left < 1e-7);
    CHECK(rr.vacuum_right < 1e-7);
    CHECK(rr.eigen_left < 1e-7);
    CHECK(rr.eigen_right < 1e-7);
    CHECK(rr.pairing_deviation < 1e-7);

    // alpha = 0 reduces to the bi-squeezed pair
    const CoherentBiSqueezedResult at_zero = coherent_bi_squeezed(m, 0.0, z);
    const BiStateResult plain = bi_squeezed(m, z, Construction::t_action);
    CHECK((std::get<FockVector>(at_zero.pair.left) -
           std::get<FockVector>(plain.pair.left)).norm() < 1e-12);

    // identity model: both sides are the coherent squeezed state itself
    const DeformationModel ident = build_identity(64);
    const CoherentBiSqueezedResult id_res = coherent_bi_squeezed(ident, alpha, z);
    const FockVector psi = coherent_squeezed(alpha, z, 64);
    CHECK((std::get<FockVector>(id_res.pair.left) - psi).norm() < 1e-12);
    CHECK((std::get<FockVector>(id_res.pair.right) - psi).norm() < 1e-12);

    const DeformationModel sw = swanson_03();
    CHECK_THROWS_AS(coherent_bi_squeezed(sw, alpha, z), CapabilityError);
}

TEST_CASE("number-hamiltonian evolution rotates the squeeze phase") {
    const DeformationModel m = rank_one_64();
    const Complex z = std::polar(0.4, 0.0);
    {
        const EvolutionResult res = evolve_bi_squeezed_number_hamiltonian(m, z, 0.0);
        CHECK(res.residual_vs_rotated == 0.0);
    }
    {
        const EvolutionResult res = evolve_bi_squeezed_number_hamiltonian(m, z, kPi);
        CHECK(res.residual_vs_rotated < 1e-9);
    }
    {
        const EvolutionResult res = evolve_bi_squeezed_number_hamiltonian(m, z, 0.7);
        const BiStateResult rotated =
            bi_squeezed(m, std::polar(0.4, -1.4), Construction::series);
        CHECK((std::get<FockVector>(res.evolved) -
               std::get<FockVector>(rotated.pair.left)).norm() < 1e-8);
        CHECK(res.residual_vs_rotated < 1e-8);
    }
    {
        const DeformationModel sw = swanson_03();
        const EvolutionResult res =
            evolve_bi_squeezed_number_hamiltonian(sw, Complex(0.2, 0.0), 0.4);
        CHECK(res.residual_vs_rotated < 1e-8);
    }
}
