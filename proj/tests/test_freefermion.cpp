#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "blochlab/freefermion.hpp"

using namespace blochlab;
namespace ff = blochlab::freefermion;
using std::numbers::pi;

TEST_CASE("plane waves diagonalize the flux ring") {
    const int L = 12;
    const double phi = 0.73;
    Mat h = ff::ring_hamiltonian(L, phi);
    for (int k = 0; k < L; ++k) {
        Vec psi(L);
        for (int x = 0; x < L; ++x) psi(x) = std::exp(cplx(0, 2 * pi * k * x / L)) / std::sqrt(L);
        CHECK((h * psi - ff::ring_eigenvalue(L, phi, k) * psi).norm() < 1e-12);
        // Feynman-Hellmann: mode current = <psi, j psi>
        const cplx jk = psi.dot(ff::ring_current_matrix(L, phi) * psi);
        CHECK(jk.real() == doctest::Approx(ff::mode_current(L, phi, k)).epsilon(1e-10));
    }
}

TEST_CASE("fermi windows minimize the sea energy for phi in (0, pi)") {
    const int L = 14;
    const double phi = 1.1;
    for (int N : {3, 4, 5, 6}) {
        // energy of the implemented window
        auto window_energy = [&](int klo) {
            double e = 0;
            for (int k = klo; k < klo + N; ++k) e += ff::ring_eigenvalue(L, phi, k);
            return e;
        };
        const int klo_impl = (N % 2 == 1) ? -(N - 1) / 2 : -N / 2 + 1;
        double best = 1e300;
        for (int klo = -L; klo <= L; ++klo) best = std::min(best, window_energy(klo));
        CHECK(window_energy(klo_impl) == doctest::Approx(best).epsilon(1e-12));

        // the window sum matches the direct projector trace
        Mat h = ff::ring_hamiltonian(L, phi);
        CHECK(ff::quadratic_ground_energy(h, N) ==
              doctest::Approx(window_energy(klo_impl)).epsilon(1e-10));
        auto fc = ff::fermi_current(L, phi, N);
        CHECK(ff::quadratic_ground_current(h, ff::current_matrix(tv_ring(L, 1.0, 0.0, phi)), N) ==
              doctest::Approx(fc.exact).epsilon(1e-9));
    }
}

TEST_CASE("halving the density at fixed rho, phi halves the current") {
    const double phi = 1.3;
    auto j1 = ff::fermi_current(301, phi, 101).exact;
    auto j2 = ff::fermi_current(601, phi, 201).exact;
    CHECK(j2 * 2 == doctest::Approx(j1).epsilon(5e-4)); // O(1/L^2) corrections
}

TEST_CASE("quartic terms are rejected by the quadratic extractor") {
    ModelSpec m = tv_ring(6, 1.0, 0.5, 0.0); // V != 0 brings n n terms
    CHECK_THROWS(ff::from_quadratic(m));
}

TEST_CASE("multiprecision band sum agrees with double precision at small L") {
    const double t1 = 1.0, t2 = 0.5, phi = 1.0;
    for (int L : {8, 12, 16}) {
        ModelSpec m = dimerized_ring(L, t1, t2, phi);
        Mat h = ff::from_quadratic(m);
        Mat j1 = ff::current_matrix(m);
        const double direct = ff::quadratic_ground_current(h, j1, L / 2);
        CHECK(ff::dimerized_current_exact(L, t1, t2, phi) ==
              doctest::Approx(direct).epsilon(1e-10));
    }
    CHECK_THROWS_AS(ff::dimerized_current_exact(7, t1, t2, phi), OddLength);
}

TEST_CASE("band sum stays finite far beyond double-precision underflow") {
    const double j400 = ff::dimerized_current_exact(400, 1.0, 0.5, 1.0);
    CHECK(j400 != 0.0);
    CHECK(std::abs(j400) < 1e-50);
    // two decades of L give clean exponential decay
    const double j200 = ff::dimerized_current_exact(200, 1.0, 0.5, 1.0);
    const double rate1 = std::log(std::abs(j200)) / 200.0;
    const double rate2 = std::log(std::abs(j400)) / 400.0;
    CHECK(rate1 == doctest::Approx(rate2).epsilon(0.02));
}

TEST_CASE("pump: static path is exactly zero, gap closure throws") {
    Lattice lat(LatticeKind::ring, 20);
    auto flat = [](double) { return ff::rice_mele_hamiltonian(20, 1.0, 1.0, 0.0); };
    auto r = ff::pump(flat, 10, lat, 16);
    CHECK(r.transported == doctest::Approx(0.0));
    CHECK(r.min_gap > 1.0);

    // amplitude zero leaves the half-filled metal: no gap anywhere
    auto metal = [](double) { return ff::rice_mele_hamiltonian(20, 1.0, 0.0, 0.25); };
    CHECK_THROWS_AS(ff::pump(metal, 10, lat, 8, 1e-3), ff::GapClosedAlongPath);
}

TEST_CASE("rice-mele cycle pumps one unit, reversal flips it") {
    const int L = 40;
    Lattice lat(LatticeKind::ring, L);
    auto cyc = [&](double s) { return ff::rice_mele_hamiltonian(L, 1.0, 1.0, s); };
    auto rev = [&](double s) { return cyc(1.0 - s); };
    auto fwd = ff::pump(cyc, L / 2, lat, 200);
    auto bwd = ff::pump(rev, L / 2, lat, 200);
    CHECK(std::abs(fwd.transported - std::round(fwd.transported)) < 5e-3);
    CHECK(std::lround(std::abs(fwd.transported)) == 1);
    CHECK(fwd.transported == doctest::Approx(-bwd.transported).epsilon(1e-2));
}
