#ifndef BLOCHLAB_OBSERVABLES_HPP
#define BLOCHLAB_OBSERVABLES_HPP

#include "blochlab/spectral.hpp"

namespace blochlab {

struct StripTooNarrow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// J_{<x-1,x>}: derivative of the bond terms twisted at site x. For the torus
// this is the total current through the cut left of column x1 = x.
LocalTerm edge_current_term(const ModelSpec& model, int right_site);

// (1/L) sum over cuts of the edge currents = (1/L) d/ds H~_s at s=0
LocalTerm current_density_term(const ModelSpec& model);
ManyBodyOperator current_density(const ModelSpec& model, BasisPtr basis);

// i[H,Q_Gamma] = J_- - J_+ with J_pm supported in the strips
struct CurrentDecomposition {
    ManyBodyOperator J_minus;
    ManyBodyOperator J_plus;
    Region gamma_region;
    double residual_norm;
};

CurrentDecomposition edge_currents(const ModelSpec& model, const Region& gamma,
                                   const Region& strip_minus, const Region& strip_plus,
                                   BasisPtr basis);

// The twist Hamiltonian H~_s and its s-derivatives, all realized exactly from
// the phased terms.
class TwistFamily {
  public:
    TwistFamily(const ModelSpec& model, BasisPtr basis);

    ManyBodyOperator H(double s) const;
    ManyBodyOperator dH(double s) const;
    ManyBodyOperator d2H(double s) const;
    // R_s = H~_s - H - s dH(0); the exact Taylor rest term
    ManyBodyOperator rest(double s) const;

    const ModelSpec& model() const { return model_; }
    const BasisPtr& basis() const { return basis_; }

  private:
    ManyBodyOperator realize_derivative(double s, int order) const;
    ModelSpec model_;
    BasisPtr basis_;
};

// Variational bound |<Omega, j Omega>| <= (2 pi)^-1 max_pm |<Omega, R_{pm 2pi/L} Omega>|.
// For p > 1 the bound is applied to each eigenvector of P j P and the worst
// case is reported.
struct BlochBound {
    double current = 0.0; // max |<j>| over the ground cluster states used
    double bound = 0.0;
    double rest_minus = 0.0;
    double rest_plus = 0.0;
    double gap = 0.0;
    int p = 1;
};

BlochBound bloch_bound_1d(const ModelSpec& model, const SpectralData& spec,
                          double cluster_tol = -1.0);

// Thermal variant: |tr(rho j)| <= (2 pi)^-1 max_pm |tr(rho R_{pm 2pi/L})|.
struct ThermalBound {
    double current = 0.0;
    double bound = 0.0;
};
ThermalBound thermal_bloch_bound(const ModelSpec& model,
                                 const std::vector<SectorSpectrum>& sectors, double beta);

// Same variational machinery on the torus; the bound degenerates to O(1)
// because each cut carries a full column of width W = L.
struct SlabBound {
    double slab_current = 0.0;
    double bound = 0.0;
};
SlabBound quasi1d_bound(const ModelSpec& model, const SpectralData& spec,
                        double cluster_tol = -1.0);

} // namespace blochlab

#endif
