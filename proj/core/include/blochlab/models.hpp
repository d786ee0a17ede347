#ifndef BLOCHLAB_MODELS_HPP
#define BLOCHLAB_MODELS_HPP

#include <map>
#include <string>

#include "blochlab/manybody.hpp"

namespace blochlab {

struct OddLength : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A concrete charge-conserving Hamiltonian as a sum of LocalTerms.
struct ModelSpec {
    std::string name;
    Lattice lattice;
    std::map<std::string, double> params;
    std::vector<LocalTerm> terms;
    int range = 2;

    ManyBodyOperator realize(BasisPtr basis) const;

    // finite range, hermiticity and charge conservation of every term
    void validate() const;
};

// Spinless t-V ring with a uniform flux phase phi/L on every bond:
//   H = sum_x [ -t (e^{i phi/L} a*_{x+1} a_x + h.c.) + V n_x n_{x+1} ]
// Gapless at half filling for |V| < 2t; the CDW phase |V| > 2t is the
// interacting gapped testbed.
ModelSpec tv_ring(int L, double t_hop, double V, double flux);

// Alternating-bond hopping ring (t1 on even bonds, t2 on odd bonds) with
// flux; single-particle gap 2|t1 - t2| at half filling.
ModelSpec dimerized_ring(int L, double t1, double t2, double flux);

// Nearest-neighbour hopping on the torus with flux phi/L on x1-bonds and a
// per-site chemical potential pattern.
ModelSpec torus_hopping(int L, double t_hop, const std::vector<double>& mu_pattern, double flux);

// Rice-Mele style chain snapshot: dimerized hopping plus staggered potential.
// Cycling (delta, stagger) around the origin pumps one unit of charge.
ModelSpec rice_mele_ring(int L, double t_hop, double delta, double stagger, double flux);

// Structured config: {"preset": ..., "params": {...}} or an explicit
// {"name", "lattice": {"kind","L"}, "range", "terms": [text,...]}.
ModelSpec model_from_json(const std::string& json_text);
ModelSpec model_from_file(const std::string& path);

} // namespace blochlab

#endif
