#include "blochlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace blochlab {

Lattice::Lattice(LatticeKind kind, int L) : kind_(kind), L_(L) {
    if (L < 2) throw std::invalid_argument("Lattice: L must be >= 2");
    nsites_ = (kind == LatticeKind::ring) ? L : L * L;
}

int Lattice::site(int c1, int c2) const {
    c1 = ((c1 % L_) + L_) % L_;
    c2 = ((c2 % L_) + L_) % L_;
    return kind_ == LatticeKind::ring ? c1 : c1 + L_ * c2;
}

int Lattice::wrap_dist(int a, int b) const {
    int d = std::abs(a - b) % L_;
    return std::min(d, L_ - d);
}

int Lattice::distance(int a, int b) const {
    if (kind_ == LatticeKind::ring) return wrap_dist(a, b);
    return wrap_dist(x1(a), x1(b)) + wrap_dist(x2(a), x2(b));
}

std::string Lattice::kind_name() const {
    return kind_ == LatticeKind::ring ? "ring" : "torus2d";
}

Region::Region(const Lattice& lat, std::vector<int> sites) : lat_(lat), sites_(std::move(sites)) {
    std::sort(sites_.begin(), sites_.end());
    sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
    member_.assign(lat_.num_sites(), 0);
    for (int s : sites_) {
        if (s < 0 || s >= lat_.num_sites())
            throw std::out_of_range("Region: site index out of range");
        member_[s] = 1;
    }
}

Region Region::complement() const {
    std::vector<int> out;
    out.reserve(lat_.num_sites() - sites_.size());
    for (int s = 0; s < lat_.num_sites(); ++s)
        if (!member_[s]) out.push_back(s);
    return Region(lat_, std::move(out));
}

Region Region::intersect(const Region& other) const {
    std::vector<int> out;
    for (int s : sites_)
        if (other.contains(s)) out.push_back(s);
    return Region(lat_, std::move(out));
}

Region Region::unite(const Region& other) const {
    std::vector<int> out = sites_;
    out.insert(out.end(), other.sites_.begin(), other.sites_.end());
    return Region(lat_, std::move(out));
}

Region Region::boundary() const {
    std::vector<int> out;
    for (int s = 0; s < lat_.num_sites(); ++s) {
        bool near_in = false, near_out = false;
        for (int t = 0; t < lat_.num_sites(); ++t) {
            if (lat_.distance(s, t) > 1) continue;
            if (member_[t])
                near_in = true;
            else
                near_out = true;
        }
        if (near_in && near_out) out.push_back(s);
    }
    return Region(lat_, std::move(out));
}

Region half_torus(const Lattice& lat) {
    std::vector<int> out;
    const int hi = lat.L() / 2;
    for (int s = 0; s < lat.num_sites(); ++s)
        if (lat.x1(s) <= hi) out.push_back(s);
    return Region(lat, std::move(out));
}

static Region strip_around(const Lattice& lat, int center, int half_width) {
    std::vector<int> out;
    for (int s = 0; s < lat.num_sites(); ++s)
        if (lat.wrap_dist(lat.x1(s), center) <= half_width) out.push_back(s);
    return Region(lat, std::move(out));
}

Region boundary_strip(const Lattice& lat, StripSide side, int R) {
    if (2 * R + 1 >= lat.L() / 2)
        throw StripOverlap("boundary_strip: strips of width " + std::to_string(R) +
                           " overlap on L=" + std::to_string(lat.L()));
    return strip_around(lat, side == StripSide::minus ? 0 : lat.L() / 2, R);
}

Region wide_strip(const Lattice& lat, StripSide side, int half_width) {
    return strip_around(lat, side == StripSide::minus ? 0 : lat.L() / 2, half_width);
}

int site_region_distance(const Lattice& lat, int site, const Region& X) {
    if (X.empty()) throw EmptyRegion("site_region_distance: empty region");
    int best = lat.num_sites();
    for (int t : X.sites()) best = std::min(best, lat.distance(site, t));
    return best;
}

int graph_distance(const Region& X, const Region& Y) {
    if (X.empty() || Y.empty()) throw EmptyRegion("graph_distance: empty region");
    const Lattice& lat = X.lattice();
    int best = lat.num_sites();
    for (int s : X.sites()) best = std::min(best, site_region_distance(lat, s, Y));
    return best;
}

} // namespace blochlab
