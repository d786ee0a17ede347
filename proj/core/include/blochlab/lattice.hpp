#ifndef BLOCHLAB_LATTICE_HPP
#define BLOCHLAB_LATTICE_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace blochlab {

struct StripOverlap : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyRegion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LatticeKind { ring, torus2d };

// Periodic ring Z/LZ or torus (Z/LZ)^2 with the graph (shortest path) metric.
// Torus sites are indexed row-major: x = x1 + L*x2.
class Lattice {
  public:
    Lattice(LatticeKind kind, int L);

    LatticeKind kind() const { return kind_; }
    int L() const { return L_; }
    int num_sites() const { return nsites_; }

    int x1(int site) const { return kind_ == LatticeKind::ring ? site : site % L_; }
    int x2(int site) const { return kind_ == LatticeKind::ring ? 0 : site / L_; }
    int site(int c1, int c2 = 0) const;

    // periodic distance along one coordinate
    int wrap_dist(int a, int b) const;
    int distance(int a, int b) const;

    std::string kind_name() const;

  private:
    LatticeKind kind_;
    int L_;
    int nsites_;
};

// Immutable sorted site set on a lattice.
class Region {
  public:
    Region(const Lattice& lat, std::vector<int> sites);

    const Lattice& lattice() const { return lat_; }
    const std::vector<int>& sites() const { return sites_; }
    int size() const { return static_cast<int>(sites_.size()); }
    bool empty() const { return sites_.empty(); }
    bool contains(int site) const { return member_[site] != 0; }

    Region complement() const;
    Region intersect(const Region& other) const;
    Region unite(const Region& other) const;
    // {x : d(x, X) <= 1 and d(x, X^c) <= 1}
    Region boundary() const;

    bool operator==(const Region& other) const { return sites_ == other.sites_; }

  private:
    Lattice lat_;
    std::vector<int> sites_;
    std::vector<char> member_;
};

enum class StripSide { minus, plus };

// {x : 0 <= x1 <= L/2}
Region half_torus(const Lattice& lat);

// Symmetric strip of 2R+1 columns: minus side centered at x1 = 0,
// plus side centered at x1 = floor(L/2). Throws StripOverlap unless 2R+1 < L/2.
Region boundary_strip(const Lattice& lat, StripSide side, int R);

// Strip of given half-width centered on the same columns as boundary_strip,
// without the disjointness precondition (used for the order-L wide strips S_pm).
Region wide_strip(const Lattice& lat, StripSide side, int half_width);

int site_region_distance(const Lattice& lat, int site, const Region& X);
int graph_distance(const Region& X, const Region& Y);

} // namespace blochlab

#endif
