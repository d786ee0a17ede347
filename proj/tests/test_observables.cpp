#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "blochlab/freefermion.hpp"
#include "blochlab/observables.hpp"

using namespace blochlab;
using std::numbers::pi;

TEST_CASE("stationarity: <i[H, Q_X]> vanishes in every eigenstate") {
    ModelSpec m = tv_ring(8, 1.0, 1.0, 1.0);
    auto basis = FockBasis::fixed_charge(8, 4);
    auto spec = diagonalize(m.realize(basis));
    auto H = m.realize(basis);
    for (auto X : {Region(m.lattice, {0, 1, 2}), Region(m.lattice, {3}), half_torus(m.lattice)}) {
        auto J = commutator(H, charge_operator(X, basis)).scaled(cplx(0, 1));
        for (int i : {0, 1, 5}) {
            Vec v = spec.eigenvectors.col(i);
            CHECK(std::abs(J.expectation(v)) < 1e-10);
        }
    }
}

TEST_CASE("edge current decomposition i[H,Q] = J_- - J_+") {
    ModelSpec m = tv_ring(12, 1.0, 0.8, 0.9);
    auto basis = FockBasis::fixed_charge(12, 6);
    Region gamma = half_torus(m.lattice);
    Region sm = boundary_strip(m.lattice, StripSide::minus, 1);
    Region sp = boundary_strip(m.lattice, StripSide::plus, 1);
    auto cd = edge_currents(m, gamma, sm, sp, basis);
    CHECK(cd.residual_norm < 1e-12);

    auto H = m.realize(basis);
    Mat lhs = commutator(H, charge_operator(gamma, basis)).scaled(cplx(0, 1)).dense();
    Mat rhs = cd.J_minus.dense() - cd.J_plus.dense();
    CHECK((lhs - rhs).norm() < 1e-12);

    // continuity: <J_-> = <J_+> in eigenstates
    auto spec = diagonalize(H, DiagMode::lowest_k, 3);
    Vec v = spec.eigenvectors.col(0);
    CHECK(std::abs(cd.J_minus.expectation(v) - cd.J_plus.expectation(v)) < 1e-10);

    // too-narrow strips cannot host the cut terms
    Region tiny_m(m.lattice, {0});
    Region tiny_p(m.lattice, {6});
    CHECK_THROWS_AS(edge_currents(m, gamma, tiny_m, tiny_p, basis), StripTooNarrow);
}

TEST_CASE("twist family: derivative and rest term") {
    ModelSpec m = tv_ring(8, 1.0, 1.0, 0.6);
    auto basis = FockBasis::fixed_charge(8, 4);
    TwistFamily fam(m, basis);

    const double s = 0.21, h = 1e-5;
    Mat fd = (fam.H(s + h).dense() - fam.H(s - h).dense()) / (2 * h);
    CHECK((fd - fam.dH(s).dense()).norm() < 1e-8);
    Mat fd2 = (fam.H(s + h).dense() - 2 * fam.H(s).dense() + fam.H(s - h).dense()) / (h * h);
    CHECK((fd2 - fam.d2H(s).dense()).norm() < 1e-4);

    // ||R_s|| = O(s^2 L): halving s quarters the rest term
    const double r1 = fam.rest(0.2).operator_norm();
    const double r2 = fam.rest(0.1).operator_norm();
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));

    // twist identity: H~ at 2 pi / L is gauge equivalent to H
    std::vector<double> theta(8);
    for (int x = 0; x < 8; ++x) theta[x] = 2.0 * pi * x / 8;
    Mat U = gauge_unitary(theta, basis).dense();
    CHECK((fam.H(2 * pi / 8).dense() - U.adjoint() * fam.H(0).dense() * U).norm() < 1e-12);
}

TEST_CASE("current density matches the quadratic engine at V=0") {
    ModelSpec m = tv_ring(10, 1.0, 0.0, 1.0);
    auto basis = FockBasis::fixed_charge(10, 3);
    auto spec = diagonalize(m.realize(basis), DiagMode::lowest_k, 3);
    GroundSpace g = ground_cluster(spec);
    const double j_mb = g.trace_with(current_density(m, basis)) / g.p;

    Mat h1 = freefermion::from_quadratic(m);
    Mat j1 = freefermion::current_matrix(m);
    const double j_sp = freefermion::quadratic_ground_current(h1, j1, 3);
    CHECK(j_mb == doctest::Approx(j_sp).epsilon(1e-9));
}

TEST_CASE("variational bound holds and vanishes with the flux") {
    auto basis = FockBasis::fixed_charge(8, 4);
    {
        ModelSpec m = tv_ring(8, 1.0, 1.0, 1.0);
        auto spec = diagonalize(m.realize(basis), DiagMode::lowest_k, 6);
        BlochBound b = bloch_bound_1d(m, spec);
        CHECK(b.current <= b.bound + 1e-10);
        CHECK(b.bound > 0.0);
    }
    {
        // odd filling gives a unique, time-reversal invariant ground state, so
        // the current vanishes identically at zero flux
        ModelSpec m0 = tv_ring(8, 1.0, 1.0, 0.0);
        auto basis_odd = FockBasis::fixed_charge(8, 3);
        auto spec0 = diagonalize(m0.realize(basis_odd), DiagMode::lowest_k, 6);
        BlochBound b0 = bloch_bound_1d(m0, spec0);
        CHECK(std::abs(b0.current) < 1e-10);
    }
}

TEST_CASE("thermal bound holds at beta=2") {
    ModelSpec m = tv_ring(8, 1.0, 1.0, 1.0);
    auto sectors = diagonalize_all_sectors(m);
    ThermalBound tb = thermal_bloch_bound(m, sectors, 2.0);
    CHECK(std::abs(tb.current) <= tb.bound + 1e-10);
    const double direct = thermal_expectation(
        sectors, 2.0, [&](BasisPtr b) { return current_density(m, b); });
    CHECK(tb.current == doctest::Approx(std::abs(direct)).epsilon(1e-10));
}

TEST_CASE("slab bound on the small torus stays order one") {
    std::vector<double> mu(9);
    Lattice lat(LatticeKind::torus2d, 3);
    int N = 0;
    for (int x = 0; x < 9; ++x) {
        mu[x] = ((lat.x1(x) + lat.x2(x)) % 2 == 0) ? 5.0 : -5.0;
        if (mu[x] < 0) ++N;
    }
    ModelSpec m = torus_hopping(3, 1.0, mu, 1.0);
    auto spec = diagonalize(m.realize(FockBasis::fixed_charge(9, N)));
    SlabBound sb = quasi1d_bound(m, spec);
    CHECK(std::abs(sb.slab_current) <= sb.bound + 1e-10);
    CHECK(sb.bound > 0.01); // does not decay: the 2D obstruction
}
