#ifndef BLOCHLAB_QUASIADIABATIC_HPP
#define BLOCHLAB_QUASIADIABATIC_HPP

#include "blochlab/observables.hpp"

namespace blochlab {

struct QuadratureNotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The filter W_hat with W_hat(omega) = -1/(i omega) = i/omega for
// |omega| >= gap. Inside the gap W_hat(omega) = i u(omega) with u odd:
//   linear: u(omega) = omega / gap^2
//   smooth: u(omega) = s(|omega|/gap) / omega with s a C-infinity step,
//           flat at 0 and 1 (this choice has an O(|t|^-inf) time kernel)
class FilterSpec {
  public:
    enum class Interp { linear, smooth };

    explicit FilterSpec(double gap, Interp interp = Interp::linear);

    double gap() const { return gap_; }
    Interp interp() const { return interp_; }

    double u(double omega) const;
    cplx what(double omega) const { return cplx(0.0, u(omega)); }

    // time kernel W(t) = sign(t)/2 + (1/pi) int_0^gap (u - 1/omega) sin(omega t)
    double kernel(double t, int quad_nodes = 200) const;

  private:
    double gap_;
    Interp interp_;
};

// B_mn = W_hat(-(E_m - E_n)) A_mn in the eigenbasis of H
ManyBodyOperator apply_filter(const SpectralData& spec, const ManyBodyOperator& A,
                              const FilterSpec& filt);

// max |(A - B)_mn| over eigenpairs with |E_m - E_n| >= gap
double offgap_deviation(const SpectralData& spec, const ManyBodyOperator& A,
                        const ManyBodyOperator& B, double gap);

// Q_bar = Q - K with K = K_- + K_+, K_- = filter(J_-), K_+ = -filter(J_+);
// the sign convention is the one that makes [Q_bar, P] vanish.
struct DressedCharge {
    ManyBodyOperator Q;
    ManyBodyOperator J_minus;
    ManyBodyOperator K;
    ManyBodyOperator K_minus;
    ManyBodyOperator K_plus;
    ManyBodyOperator Q_bar;
    double comm_filter_defect = 0.0; // ||[K,P] - [Q,P]||
    double comm_dressed = 0.0;       // ||[Q_bar, P]||
    double offgap_defect = 0.0;      // max off-gap |(K - Q)_mn|
    double k_minus_norm = 0.0;
    double k_plus_norm = 0.0;
    // (distance to strip_minus, max_x ||[K_-, q_x]||)
    std::vector<std::pair<int, double>> locality_decay;
};

DressedCharge build_dressed_charge(const ModelSpec& model, const SpectralData& spec,
                                   const Region& gamma, const Region& strip_minus,
                                   const Region& strip_plus, const FilterSpec& filt,
                                   double cluster_tol = -1.0);

// Residual of the proof-line identity P J P = i[H, P K_- P] + i[P H_- P, Q_bar]
// with H_- the terms supported in the wide strip S_-.
struct GappedBlochResult {
    double trPJ = 0.0;
    double residual = 0.0;
    int p = 1;
    double gap = 0.0;
};

GappedBlochResult gapped_bloch_check(const ModelSpec& model, const SpectralData& spec,
                                     const DressedCharge& dressed, const Region& wide_minus,
                                     double cluster_tol = -1.0);

// max over the observables of ||P A P - <A>_P P||
double topological_order_check(const SpectralData& spec,
                               const std::vector<ManyBodyOperator>& observables,
                               double cluster_tol = -1.0);

// K by quadrature over the time kernel; certifies agreement with the spectral
// construction (same smooth interpolation) within tol, else throws.
struct TimeDomainResult {
    std::vector<double> times;
    std::vector<double> kernel;
    double deviation = 0.0; // ||K_time - K_spectral|| / max(1, ||A||)
};

TimeDomainResult time_domain_filter(const SpectralData& spec, const ManyBodyOperator& A,
                                    double gap, double t_max, int t_nodes, double tol);

// connected ground-space correlator |tr(PAB)/p - tr(PA) tr(PB)/p^2|
double clustering_deviation(const GroundSpace& g, const ManyBodyOperator& A,
                            const ManyBodyOperator& B);

} // namespace blochlab

#endif
