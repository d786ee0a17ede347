#include "blochlab/models.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace blochlab {

ManyBodyOperator ModelSpec::realize(BasisPtr basis) const {
    ManyBodyOperator H = ManyBodyOperator::zero(basis);
    for (const auto& t : terms) H = H + ManyBodyOperator::realize(t, basis);
    return H;
}

void ModelSpec::validate() const {
    for (const auto& t : terms) {
        if (t.diameter(lattice) >= range)
            throw std::invalid_argument("ModelSpec '" + name + "': term exceeds range " +
                                        std::to_string(range));
        if (!t.is_even())
            throw std::invalid_argument("ModelSpec '" + name + "': odd term is not an observable");
        if (!t.is_hermitian())
            throw std::invalid_argument("ModelSpec '" + name + "': non-hermitian term");
        for (const auto& m : t.monomials)
            if (!m.balanced())
                throw std::invalid_argument("ModelSpec '" + name +
                                            "': charge non-conserving monomial");
    }
}

namespace {

// hopping -t e^{i phase}(a*_right a_left) + h.c. on the bond <left,right>,
// twisted at the right site
LocalTerm hop_term(int left, int right, double t, double phase) {
    LocalTerm term;
    term.twist_sites = {right};
    Monomial fwd;
    fwd.coeff = -t * std::exp(cplx(0.0, phase));
    fwd.factors = {{right, true}, {left, false}};
    Monomial bwd;
    bwd.coeff = -t * std::exp(cplx(0.0, -phase));
    bwd.factors = {{left, true}, {right, false}};
    term.monomials = {fwd, bwd};
    return term;
}

LocalTerm density_term(int x, int y, double V) {
    LocalTerm term;
    term.twist_sites = {y};
    Monomial m;
    m.coeff = V;
    m.factors = {{x, true}, {x, false}, {y, true}, {y, false}};
    term.monomials = {m};
    return term;
}

LocalTerm onsite_term(int x, double mu) {
    LocalTerm term;
    Monomial m;
    m.coeff = mu;
    m.factors = {{x, true}, {x, false}};
    term.monomials = {m};
    return term;
}

} // namespace

ModelSpec tv_ring(int L, double t_hop, double V, double flux) {
    if (L < 2) throw std::invalid_argument("tv_ring: L >= 2 required");
    ModelSpec m{"tv_ring", Lattice(LatticeKind::ring, L), {}, {}, 2};
    m.params = {{"t", t_hop}, {"V", V}, {"phi", flux}};
    for (int x = 0; x < L; ++x) {
        int y = (x + 1) % L;
        m.terms.push_back(hop_term(x, y, t_hop, flux / L));
        if (V != 0.0) m.terms.push_back(density_term(x, y, V));
    }
    return m;
}

ModelSpec dimerized_ring(int L, double t1, double t2, double flux) {
    if (L % 2 != 0) throw OddLength("dimerized_ring: L must be even");
    ModelSpec m{"dimerized_ring", Lattice(LatticeKind::ring, L), {}, {}, 2};
    m.params = {{"t1", t1}, {"t2", t2}, {"phi", flux}};
    for (int x = 0; x < L; ++x) {
        int y = (x + 1) % L;
        m.terms.push_back(hop_term(x, y, x % 2 == 0 ? t1 : t2, flux / L));
    }
    return m;
}

ModelSpec torus_hopping(int L, double t_hop, const std::vector<double>& mu_pattern, double flux) {
    if (L < 3) throw std::invalid_argument("torus_hopping: L >= 3 required");
    Lattice lat(LatticeKind::torus2d, L);
    if (!mu_pattern.empty() && static_cast<int>(mu_pattern.size()) != lat.num_sites())
        throw std::invalid_argument("torus_hopping: mu_pattern size mismatch");
    ModelSpec m{"torus_hopping", lat, {}, {}, 2};
    m.params = {{"t", t_hop}, {"phi", flux}};
    for (int s = 0; s < lat.num_sites(); ++s) {
        const int c1 = lat.x1(s), c2 = lat.x2(s);
        m.terms.push_back(hop_term(s, lat.site(c1 + 1, c2), t_hop, flux / L)); // x1-bond
        LocalTerm ybond = hop_term(s, lat.site(c1, c2 + 1), t_hop, 0.0);
        ybond.twist_sites.clear(); // only x1-bonds twist
        m.terms.push_back(ybond);
        if (!mu_pattern.empty() && mu_pattern[s] != 0.0)
            m.terms.push_back(onsite_term(s, mu_pattern[s]));
    }
    return m;
}

ModelSpec rice_mele_ring(int L, double t_hop, double delta, double stagger, double flux) {
    if (L % 2 != 0) throw OddLength("rice_mele_ring: L must be even");
    ModelSpec m{"rice_mele_ring", Lattice(LatticeKind::ring, L), {}, {}, 2};
    m.params = {{"t", t_hop}, {"delta", delta}, {"stagger", stagger}, {"phi", flux}};
    for (int x = 0; x < L; ++x) {
        int y = (x + 1) % L;
        double t = t_hop + (x % 2 == 0 ? delta : -delta);
        m.terms.push_back(hop_term(x, y, t, flux / L));
        if (stagger != 0.0) m.terms.push_back(onsite_term(x, x % 2 == 0 ? stagger : -stagger));
    }
    return m;
}

ModelSpec model_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    std::map<std::string, double> params;
    if (j.contains("params"))
        for (auto& [k, v] : j["params"].items()) params[k] = v.get<double>();
    auto get = [&](const std::string& k, double dflt) {
        auto it = params.find(k);
        return it == params.end() ? dflt : it->second;
    };
    if (j.contains("preset")) {
        const std::string preset = j["preset"].get<std::string>();
        const int L = static_cast<int>(get("L", 8));
        if (preset == "tv_ring") return tv_ring(L, get("t", 1.0), get("V", 0.0), get("phi", 0.0));
        if (preset == "dimerized_ring")
            return dimerized_ring(L, get("t1", 1.0), get("t2", 0.5), get("phi", 0.0));
        if (preset == "rice_mele_ring")
            return rice_mele_ring(L, get("t", 1.0), get("delta", 0.0), get("stagger", 0.0),
                                  get("phi", 0.0));
        if (preset == "torus_hopping") {
            std::vector<double> mu;
            if (j.contains("mu_pattern")) mu = j["mu_pattern"].get<std::vector<double>>();
            return torus_hopping(L, get("t", 1.0), mu, get("phi", 0.0));
        }
        throw std::invalid_argument("model_from_json: unknown preset '" + preset + "'");
    }
    const auto& jl = j.at("lattice");
    const std::string kind = jl.at("kind").get<std::string>();
    Lattice lat(kind == "ring" ? LatticeKind::ring : LatticeKind::torus2d, jl.at("L").get<int>());
    ModelSpec m{j.value("name", "custom"), lat, params, {}, j.value("range", 2)};
    for (const auto& t : j.at("terms")) m.terms.push_back(term_from_text(t.get<std::string>()));
    m.validate();
    return m;
}

ModelSpec model_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("model_from_file: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

} // namespace blochlab
