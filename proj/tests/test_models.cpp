#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "blochlab/freefermion.hpp"
#include "blochlab/spectral.hpp"

using namespace blochlab;
using std::numbers::pi;

TEST_CASE("every preset is hermitian, charge conserving, finite range") {
    std::vector<ModelSpec> models = {
        tv_ring(8, 1.0, 1.3, 0.7),
        dimerized_ring(8, 1.0, 0.4, 1.1),
        torus_hopping(3, 1.0, {5, -5, 5, -5, 5, -5, 5, -5, 5}, 0.9),
        rice_mele_ring(8, 1.0, 0.3, 0.2, 0.5),
    };
    for (const auto& m : models) {
        m.validate();
        auto basis = FockBasis::full(m.lattice.num_sites());
        auto H = m.realize(basis);
        CHECK(H.is_hermitian(1e-12));
        CHECK(H.max_off_sector_entry() == doctest::Approx(0.0));
    }
}

TEST_CASE("tv_ring L=2 doubles the bond: N=1 eigenvalues -2, +2") {
    ModelSpec m = tv_ring(2, 1.0, 0.0, 0.0);
    auto spec = diagonalize(m.realize(FockBasis::fixed_charge(2, 1)));
    REQUIRE(spec.eigenvalues.size() == 2);
    CHECK(spec.eigenvalues(0) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(spec.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("V=0 ground energy equals the filled Fermi sea") {
    const int L = 8, N = 3;
    const double phi = 0.83;
    ModelSpec m = tv_ring(L, 1.0, 0.0, phi);
    auto spec = diagonalize(m.realize(FockBasis::fixed_charge(L, N)), DiagMode::lowest_k, 4);
    std::vector<double> single;
    for (int k = 0; k < L; ++k) single.push_back(freefermion::ring_eigenvalue(L, phi, k));
    std::sort(single.begin(), single.end());
    double e_sea = single[0] + single[1] + single[2];
    CHECK(spec.eigenvalues(0) == doctest::Approx(e_sea).epsilon(1e-10));
}

TEST_CASE("large V ground states approach charge density waves") {
    ModelSpec m = tv_ring(4, 1.0, 50.0, 0.0);
    auto basis = FockBasis::fixed_charge(4, 2);
    auto spec = diagonalize(m.realize(basis));
    GroundSpace g = ground_cluster(spec, 1e-1);
    CHECK(g.p == 2); // |1010> and |0101> up to tunnel splitting
    // nearly all weight on the two CDW configurations
    double w = 0;
    for (int i = 0; i < g.p; ++i) {
        w += std::norm(g.vectors(basis->index_of(0b1010), i));
        w += std::norm(g.vectors(basis->index_of(0b0101), i));
    }
    CHECK(w / g.p > 0.99);
}

TEST_CASE("dimerized ring single-particle spectrum and degenerate limit") {
    CHECK_THROWS_AS(dimerized_ring(7, 1.0, 0.5, 0.0), OddLength);

    // t1 = t2 reduces to the uniform ring
    ModelSpec a = dimerized_ring(6, 1.0, 1.0, 0.4);
    ModelSpec b = tv_ring(6, 1.0, 0.0, 0.4);
    auto basis = FockBasis::fixed_charge(6, 3);
    CHECK((a.realize(basis).dense() - b.realize(basis).dense()).norm() ==
          doctest::Approx(0.0).epsilon(1e-12));

    // band energies +-sqrt(t1^2 + t2^2 + 2 t1 t2 cos kappa) at phi = 0
    const double t1 = 1.0, t2 = 0.5;
    Mat h = freefermion::from_quadratic(dimerized_ring(4, t1, t2, 0.0));
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    std::vector<double> expect;
    for (int n = 0; n < 2; ++n) {
        const double kappa = 2.0 * pi * n / 2;
        const double eps = std::sqrt(t1 * t1 + t2 * t2 + 2 * t1 * t2 * std::cos(kappa));
        expect.push_back(-eps);
        expect.push_back(eps);
    }
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < 4; ++i)
        CHECK(es.eigenvalues()(i) == doctest::Approx(expect[i]).epsilon(1e-10));

    // the single-particle gap never collapses below 2|t1 - t2|
    for (double phi : {0.0, pi / 4, pi / 2, 1.9}) {
        Mat hp = freefermion::from_quadratic(dimerized_ring(8, t1, t2, phi));
        double gap = 0;
        freefermion::fermi_projection(hp, 4, &gap);
        CHECK(gap >= 2 * std::abs(t1 - t2) - 1e-9);
    }
}

TEST_CASE("flux periodicity: phi and phi + 2 pi are gauge equivalent") {
    const int L = 6;
    const double phi = 0.9;
    auto basis = FockBasis::fixed_charge(L, 3);
    auto s1 = diagonalize(tv_ring(L, 1.0, 0.8, phi).realize(basis));
    auto s2 = diagonalize(tv_ring(L, 1.0, 0.8, phi + 2 * pi).realize(basis));
    CHECK((s1.eigenvalues - s2.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("torus hopping with one direction cut reduces to decoupled rings") {
    // strong staggered potential opens a large single-particle gap
    std::vector<double> mu(9);
    for (int i = 0; i < 9; ++i) mu[i] = ((i % 3 + i / 3) % 2 == 0) ? 5.0 : -5.0;
    ModelSpec m = torus_hopping(3, 1.0, mu, 0.0);
    Mat h = freefermion::from_quadratic(m);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    // 4 sites at -5, 5 at +5; the hopping narrows the gap from 10 to ~7.6
    CHECK(es.eigenvalues()(4) - es.eigenvalues()(3) > 7.0);
}

TEST_CASE("model JSON round trip through presets and explicit terms") {
    ModelSpec m = model_from_json(R"({"preset":"tv_ring","params":{"L":6,"t":1.0,"V":0.5,"phi":0.3}})");
    ModelSpec direct = tv_ring(6, 1.0, 0.5, 0.3);
    auto basis = FockBasis::fixed_charge(6, 3);
    CHECK((m.realize(basis).dense() - direct.realize(basis).dense()).norm() ==
          doctest::Approx(0.0).epsilon(1e-12));
}
