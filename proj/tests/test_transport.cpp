#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blochlab/transport.hpp"

using namespace blochlab;

TEST_CASE("distance to multiples of 1/p") {
    CHECK(dist_to_integer_multiple(0.0, 1) == doctest::Approx(0.0));
    CHECK(dist_to_integer_multiple(1.0001, 1) == doctest::Approx(0.0001));
    CHECK(dist_to_integer_multiple(0.49, 2) == doctest::Approx(0.01));
    CHECK(dist_to_integer_multiple(-0.26, 4) == doctest::Approx(0.01));
}

TEST_CASE("drive protocol validation and interval lookup") {
    ModelSpec m = tv_ring(6, 1.0, 0.5, 0.3);
    DriveProtocol p = DriveProtocol::constant(m);
    p.validate();
    CHECK(p.terms_at(0.0).size() == m.terms.size());
    CHECK(p.terms_at(0.99).size() == m.terms.size());

    DriveProtocol bad;
    bad.grid = {0.0};
    bad.terms = {{LocalTerm{{Monomial{1.0, {{0, true}, {1, true}}}}, {}}}};
    CHECK_THROWS(bad.validate());

    DriveProtocol two = DriveProtocol::from_json(
        R"js({"grid":[0.0,0.5],"terms":[["1 * c(0) a(1) + 1 * c(1) a(0)"],["2 * c(1) a(1)"]]})js");
    CHECK(two.terms_at(0.2).size() == 1);
    CHECK(two.terms_at(0.7)[0].monomials[0].coeff.real() == doctest::Approx(2.0));
}

TEST_CASE("magnus evolution of a constant generator is exp(-iH)") {
    ModelSpec m = tv_ring(6, 1.0, 0.5, 0.3);
    auto basis = FockBasis::fixed_charge(6, 3);
    DriveProtocol p = DriveProtocol::constant(m);
    UPath path = evolve(p, basis, 16);
    CHECK(path.unitarity_defect < 1e-12);
    CHECK(path.charge_defect < 1e-12);

    SpectralData spec = diagonalize(m.realize(basis));
    Vec phases(spec.dim());
    for (int i = 0; i < spec.dim(); ++i) phases(i) = std::exp(cplx(0, -spec.eigenvalues(i)));
    Mat exact = spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
    CHECK((path.U.back() - exact).norm() < 1e-10);
}

TEST_CASE("transported charge obeys the continuity identity") {
    ModelSpec m = tv_ring(8, 1.0, 0.5, 0.8);
    auto basis = FockBasis::fixed_charge(8, 4);
    DriveProtocol p = DriveProtocol::constant(m);
    UPath path = evolve(p, basis, 128);

    Region gamma = half_torus(m.lattice);
    Region sm = boundary_strip(m.lattice, StripSide::minus, 1);
    Region sp = boundary_strip(m.lattice, StripSide::plus, 1);
    TransportedCharge tc = transported_charge(path, p, gamma, sm, sp, basis);
    CHECK(tc.ambiguous_terms == 0);
    // U*QU - Q = T_- - T_+ up to quadrature error of the s-integral
    CHECK(tc.ucc_residual < 1e-4);
}

TEST_CASE("transport index of a hamiltonian evolution is a near-zero integer") {
    ModelSpec m = dimerized_ring(12, 1.0, 0.1, 1.0);
    auto basis = FockBasis::fixed_charge(12, 6);
    SpectralData spec = diagonalize(m.realize(basis));
    DriveProtocol p = DriveProtocol::constant(m);
    // the generator is constant, so the magnus propagator is exact at any step
    // count; few steps keep the dense exponentials affordable
    TransportResult r = index(m, spec, p, 8);
    CHECK(r.p == 1);
    CHECK(r.comm_UP < 1e-10); // H generates the evolution, so [U,P]=0
    CHECK(r.dist_to_index < 1e-4);
    CHECK(std::lround(r.tr_PT_minus) == 0);
}

TEST_CASE("bloch pathway: t tr(PJ) never drifts from the integers") {
    ModelSpec m = dimerized_ring(12, 1.0, 0.05, 1.0);
    auto basis = FockBasis::fixed_charge(12, 6);
    SpectralData spec = diagonalize(m.realize(basis));
    BlochPathwayResult b = index_bloch_pathway(m, spec, {0.5, 1.0, 2.5, 5.0});
    CHECK(b.max_quadrature_error < 1e-8);
    CHECK(b.max_dist < 1e-4);
    CHECK(std::abs(b.trPJ) < 1e-4);
}

TEST_CASE("locality constant of a drive is finite and scales with the terms") {
    ModelSpec m = tv_ring(6, 1.0, 0.5, 0.0);
    DriveProtocol p = DriveProtocol::constant(m);
    auto xi = [](int) { return 1.0; };
    const double c1 = p.locality_constant(m.lattice, xi);
    CHECK(c1 > 0.0);
    DriveProtocol doubled = p;
    for (auto& list : doubled.terms)
        for (auto& t : list) t = t.scaled(2.0);
    CHECK(doubled.locality_constant(m.lattice, xi) == doctest::Approx(2.0 * c1).epsilon(1e-10));
}
