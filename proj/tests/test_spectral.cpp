#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blochlab/spectral.hpp"

using namespace blochlab;

TEST_CASE("lanczos matches dense eigenvalues on an interacting chain") {
    ModelSpec m = tv_ring(10, 1.0, 1.0, 0.7);
    auto basis = FockBasis::fixed_charge(10, 5);
    auto H = m.realize(basis);

    SpectralData dense = diagonalize(H, DiagMode::full);
    SpectralData low = diagonalize(H, DiagMode::lowest_k, 5);
    REQUIRE(low.eigenvalues.size() >= 5);
    for (int i = 0; i < 5; ++i)
        CHECK(low.eigenvalues(i) == doctest::Approx(dense.eigenvalues(i)).epsilon(1e-10));
    // eigenvector residuals
    for (int i = 0; i < 5; ++i) {
        Vec v = low.eigenvectors.col(i);
        CHECK((H.apply(v) - low.eigenvalues(i) * v).norm() < 1e-8);
    }
}

TEST_CASE("diagonalize rejects non-hermitian input") {
    auto basis = FockBasis::full(3);
    LocalTerm raise{{Monomial{1.0, {{0, true}, {1, false}}}}, {}};
    CHECK_THROWS_AS(diagonalize(ManyBodyOperator::realize(raise, basis)), NotHermitian);
}

TEST_CASE("ground cluster and the gap guard") {
    // two-fold quasi-degenerate CDW ground space
    ModelSpec m = tv_ring(8, 1.0, 20.0, 0.0);
    auto spec = diagonalize(m.realize(FockBasis::fixed_charge(8, 4)));
    GroundSpace g = ground_cluster(spec, 1e-2);
    CHECK(g.p == 2);
    CHECK(g.gamma > 1.0);
    Mat P = g.projector();
    CHECK((P * P - P).norm() < 1e-10);

    // the tiny splitting is still resolved above a 1e-16 cluster tolerance
    GroundSpace tight = ground_cluster(spec, 1e-16);
    CHECK(tight.p == 1);

    // a spectrum whose spacing at the cluster edge is below the tolerance has
    // no resolvable gap
    SpectralData fake;
    fake.basis = FockBasis::full(2);
    fake.eigenvalues = (Eigen::VectorXd(4) << 0.0, 0.6, 1.1, 5.0).finished();
    fake.eigenvectors = Mat::Identity(4, 4);
    fake.full = true;
    CHECK_THROWS_AS(ground_projector(fake, 1.0), NoGap);
}

TEST_CASE("gibbs state sanity") {
    ModelSpec m = tv_ring(6, 1.0, 0.8, 0.4);
    auto spec = diagonalize(m.realize(FockBasis::fixed_charge(6, 3)));
    GibbsState rho = gibbs(spec, 2.0);
    CHECK(rho.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rho.entropy() >= 0.0);
    // free energy bounds the ground energy from below at beta < infinity
    CHECK(rho.free_energy(spec) <= spec.eigenvalues(0) + 1e-12);
    // beta -> infinity limit approaches the ground energy
    GibbsState cold = gibbs(spec, 200.0);
    CHECK(cold.energy(spec) == doctest::Approx(spec.eigenvalues(0)).epsilon(1e-8));

    Mat dm = rho.density_matrix(spec);
    CHECK(std::abs(dm.trace().real() - 1.0) < 1e-12);
    auto H = m.realize(spec.basis);
    CHECK(rho.expectation(spec, H) == doctest::Approx(rho.energy(spec)).epsilon(1e-12));
}

TEST_CASE("sector sweep and grand-canonical expectation") {
    ModelSpec m = tv_ring(6, 1.0, 0.5, 0.3);
    auto sectors = diagonalize_all_sectors(m);
    CHECK(sectors.size() == 7); // N = 0..6
    int total_dim = 0;
    for (const auto& s : sectors) total_dim += s.data.dim();
    CHECK(total_dim == 64);

    // identity has expectation 1 in any ensemble
    const double one = thermal_expectation(
        sectors, 1.7, [](BasisPtr b) { return ManyBodyOperator::identity(b); });
    CHECK(one == doctest::Approx(1.0).epsilon(1e-12));

    // total charge expectation sits strictly between the sector extremes
    const double q = thermal_expectation(sectors, 1.7, [&](BasisPtr b) {
        return charge_operator(Region(m.lattice, {0, 1, 2, 3, 4, 5}), b);
    });
    CHECK(q > 0.0);
    CHECK(q < 6.0);
}
