#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blochlab/lattice.hpp"

using namespace blochlab;

TEST_CASE("ring indexing and distance") {
    Lattice ring(LatticeKind::ring, 8);
    CHECK(ring.num_sites() == 8);
    CHECK(ring.x1(5) == 5);
    CHECK(ring.x2(5) == 0);
    CHECK(ring.wrap_dist(0, 7) == 1);
    CHECK(ring.distance(1, 6) == 3);
    CHECK(ring.distance(3, 3) == 0);
}

TEST_CASE("torus row-major indexing") {
    Lattice torus(LatticeKind::torus2d, 4);
    CHECK(torus.num_sites() == 16);
    const int s = torus.site(3, 2);
    CHECK(s == 3 + 4 * 2);
    CHECK(torus.x1(s) == 3);
    CHECK(torus.x2(s) == 2);
    // periodic graph metric: (0,0) to (2,2) -> 2 + 2
    CHECK(torus.distance(torus.site(0, 0), torus.site(2, 2)) == 4);
    CHECK(torus.distance(torus.site(0, 0), torus.site(3, 0)) == 1);
}

TEST_CASE("half torus covers columns 0..L/2") {
    Lattice torus(LatticeKind::torus2d, 4);
    Region gamma = half_torus(torus);
    CHECK(gamma.size() == 12); // 3 columns x 4 rows
    for (int x : gamma.sites()) CHECK(torus.x1(x) <= 2);
    Region rest = gamma.complement();
    CHECK(gamma.size() + rest.size() == torus.num_sites());

    Lattice ring(LatticeKind::ring, 8);
    CHECK(half_torus(ring).size() == 5); // sites 0..4
}

TEST_CASE("boundary strips are centered and disjoint") {
    Lattice ring(LatticeKind::ring, 12);
    Region sm = boundary_strip(ring, StripSide::minus, 1);
    Region sp = boundary_strip(ring, StripSide::plus, 1);
    CHECK(sm.size() == 3);
    CHECK(sm.contains(11));
    CHECK(sm.contains(0));
    CHECK(sm.contains(1));
    CHECK(sp.contains(5));
    CHECK(sp.contains(6));
    CHECK(sp.contains(7));
    CHECK(sm.intersect(sp).empty());
    // 2R+1 >= L/2 is rejected
    CHECK_THROWS_AS(boundary_strip(ring, StripSide::minus, 3), StripOverlap);
}

TEST_CASE("wide strips allow order-L widths") {
    Lattice ring(LatticeKind::ring, 12);
    Region wide = wide_strip(ring, StripSide::minus, 4);
    CHECK(wide.size() == 9);
    CHECK(wide.contains(0));
    CHECK(wide.contains(4));
    CHECK(wide.contains(8));
}

TEST_CASE("site and region distances") {
    Lattice torus(LatticeKind::torus2d, 4);
    Region a(torus, {torus.site(0, 0)});
    Region b(torus, {torus.site(2, 2)});
    CHECK(graph_distance(a, b) == 4);
    CHECK(site_region_distance(torus, torus.site(1, 0), a) == 1);

    Lattice ring(LatticeKind::ring, 8);
    Region gamma = half_torus(ring);
    CHECK(site_region_distance(ring, 0, gamma) == 0);
    CHECK(site_region_distance(ring, 6, gamma) == 2);
}

TEST_CASE("region set algebra") {
    Lattice ring(LatticeKind::ring, 6);
    Region a(ring, {0, 1, 2});
    Region b(ring, {2, 3});
    CHECK(a.unite(b).size() == 4);
    CHECK(a.intersect(b).size() == 1);
    Region boundary = a.boundary();
    CHECK(boundary.contains(0));
    CHECK(boundary.contains(2));
    CHECK(!boundary.contains(1));
    CHECK_THROWS_AS(Region(ring, {7}), std::out_of_range);
}
