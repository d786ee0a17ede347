#include "blochlab/observables.hpp"

#include <cmath>
#include <numbers>

namespace blochlab {

LocalTerm edge_current_term(const ModelSpec& model, int right_site) {
    LocalTerm out;
    for (const auto& t : model.terms) {
        if (t.twist_sites.size() == 1 && t.twist_sites[0] == right_site) {
            LocalTerm d = t.twist_derivative(1);
            if (!d.monomials.empty()) out = out.plus(d);
        }
    }
    return out;
}

LocalTerm current_density_term(const ModelSpec& model) {
    LocalTerm out;
    for (const auto& t : model.terms) {
        LocalTerm d = t.twist_derivative(1);
        if (!d.monomials.empty()) out = out.plus(d);
    }
    return out.scaled(1.0 / model.lattice.L());
}

ManyBodyOperator current_density(const ModelSpec& model, BasisPtr basis) {
    return ManyBodyOperator::realize(current_density_term(model), basis);
}

CurrentDecomposition edge_currents(const ModelSpec& model, const Region& gamma,
                                   const Region& strip_minus, const Region& strip_plus,
                                   BasisPtr basis) {
    if (!strip_minus.intersect(strip_plus).empty())
        throw StripTooNarrow("edge_currents: strips intersect");
    ManyBodyOperator Q = charge_operator(gamma, basis);
    ManyBodyOperator Hm = ManyBodyOperator::zero(basis);
    ManyBodyOperator Hp = ManyBodyOperator::zero(basis);
    ManyBodyOperator H = ManyBodyOperator::zero(basis);
    for (const auto& t : model.terms) {
        ManyBodyOperator op = ManyBodyOperator::realize(t, basis);
        H = H + op;
        bool in_minus = true, in_plus = true;
        for (int s : t.support_sites()) {
            in_minus = in_minus && strip_minus.contains(s);
            in_plus = in_plus && strip_plus.contains(s);
        }
        if (in_minus) Hm = Hm + op;
        if (in_plus) Hp = Hp + op;
    }
    const cplx I(0.0, 1.0);
    ManyBodyOperator Jm = commutator(Hm, Q).scaled(I);
    ManyBodyOperator Jp = commutator(Hp, Q).scaled(-I);
    ManyBodyOperator resid = commutator(H, Q).scaled(I) - (Jm - Jp);
    double rnorm = resid.frobenius_norm();
    if (rnorm > 1e-10 * std::max(1.0, H.frobenius_norm()))
        throw StripTooNarrow("edge_currents: strips narrower than the model range, residual " +
                             std::to_string(rnorm));
    return CurrentDecomposition{std::move(Jm), std::move(Jp), gamma, rnorm};
}

TwistFamily::TwistFamily(const ModelSpec& model, BasisPtr basis)
    : model_(model), basis_(std::move(basis)) {}

ManyBodyOperator TwistFamily::realize_derivative(double s, int order) const {
    ManyBodyOperator out = ManyBodyOperator::zero(basis_);
    for (const auto& t : model_.terms) {
        LocalTerm d = t.twist_derivative(order).twisted(s);
        if (!d.monomials.empty()) out = out + ManyBodyOperator::realize(d, basis_);
    }
    return out;
}

ManyBodyOperator TwistFamily::H(double s) const { return realize_derivative(s, 0); }
ManyBodyOperator TwistFamily::dH(double s) const { return realize_derivative(s, 1); }
ManyBodyOperator TwistFamily::d2H(double s) const { return realize_derivative(s, 2); }

ManyBodyOperator TwistFamily::rest(double s) const {
    return H(s) - H(0.0) - dH(0.0).scaled(s);
}

BlochBound bloch_bound_1d(const ModelSpec& model, const SpectralData& spec, double cluster_tol) {
    const int L = model.lattice.L();
    const double s0 = 2.0 * std::numbers::pi / L;
    TwistFamily fam(model, spec.basis);
    ManyBodyOperator j = current_density(model, spec.basis);
    ManyBodyOperator Rp = fam.rest(s0);
    ManyBodyOperator Rm = fam.rest(-s0);

    GroundSpace g = ground_cluster(spec, cluster_tol);
    BlochBound out;
    out.gap = g.gamma;
    out.p = g.p;

    // eigenvectors of P j P within the cluster
    Mat jblock(g.p, g.p);
    for (int i = 0; i < g.p; ++i)
        for (int k = 0; k < g.p; ++k)
            jblock(i, k) = g.vectors.col(i).dot(j.matrix() * g.vectors.col(k));
    Eigen::SelfAdjointEigenSolver<Mat> es(jblock);
    for (int i = 0; i < g.p; ++i) {
        Vec psi = g.vectors * es.eigenvectors().col(i);
        const double cur = std::abs(std::real(j.expectation(psi)));
        const double rp = std::abs(std::real(Rp.expectation(psi)));
        const double rm = std::abs(std::real(Rm.expectation(psi)));
        const double bnd = std::max(rp, rm) / (2.0 * std::numbers::pi);
        if (cur >= out.current) {
            out.current = cur;
            out.bound = bnd;
            out.rest_plus = rp;
            out.rest_minus = rm;
        }
    }
    return out;
}

ThermalBound thermal_bloch_bound(const ModelSpec& model,
                                 const std::vector<SectorSpectrum>& sectors, double beta) {
    const int L = model.lattice.L();
    const double s0 = 2.0 * std::numbers::pi / L;
    auto thermal = [&](const LocalTerm& term) {
        return thermal_expectation(sectors, beta, [&](BasisPtr b) {
            return ManyBodyOperator::realize(term, b);
        });
    };
    // assemble j and R_{pm s0} as LocalTerm sums realized per sector
    LocalTerm jterm = current_density_term(model);
    LocalTerm rest_p, rest_m;
    for (const auto& t : model.terms) {
        auto taylor = [&](double s) {
            return t.twisted(s).plus(t.scaled(-1.0)).plus(t.twist_derivative(1).scaled(-s));
        };
        rest_p = rest_p.plus(taylor(s0));
        rest_m = rest_m.plus(taylor(-s0));
    }
    ThermalBound out;
    out.current = std::abs(thermal(jterm));
    out.bound = std::max(std::abs(thermal(rest_p)), std::abs(thermal(rest_m))) /
                (2.0 * std::numbers::pi);
    return out;
}

SlabBound quasi1d_bound(const ModelSpec& model, const SpectralData& spec, double cluster_tol) {
    BlochBound b = bloch_bound_1d(model, spec, cluster_tol);
    return SlabBound{b.current, b.bound};
}

} // namespace blochlab
