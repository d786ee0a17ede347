#ifndef BLOCHLAB_TRANSPORT_HPP
#define BLOCHLAB_TRANSPORT_HPP

#include "blochlab/observables.hpp"

namespace blochlab {

struct StepSizeTooCoarse : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ProjectorNotInvariant : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Time-dependent, local, charge-conserving generator G(s) on s in [0,1],
// piecewise constant on a grid.
struct DriveProtocol {
    std::vector<double> grid; // ascending, starts at 0
    std::vector<std::vector<LocalTerm>> terms; // one term list per grid interval

    const std::vector<LocalTerm>& terms_at(double s) const;
    void validate() const; // every monomial balanced (commutes with total charge)

    // sup_s sup_x sum_{X ni x} ||g_X(s)|| / xi(diam X)
    double locality_constant(const Lattice& lat, const std::function<double(int)>& xi) const;

    static DriveProtocol constant(const ModelSpec& model);
    static DriveProtocol from_json(const std::string& json_text);
    static DriveProtocol from_file(const std::string& path);
};

// U(s) on a uniform grid, integrated with a fourth-order Magnus stepper
// (two-node Gauss, exact exponentials), so each step is exactly unitary.
struct UPath {
    std::vector<double> s;
    std::vector<Mat> U;
    double unitarity_defect = 0.0;
    double charge_defect = 0.0; // ||[U(1), Q_Lambda]||_F
};

UPath evolve(const DriveProtocol& protocol, BasisPtr basis, int steps = 64,
             double unitarity_tol = 1e-8);

// T_- = i int_0^1 U*(s) [G_-(s), Q] U(s) ds with G_-(s) the terms meeting the
// minus strip (terms touching both strips are assigned to G_- with a warning
// counter). Also verifies U*QU - Q = T_- - T_+.
struct TransportedCharge {
    ManyBodyOperator T_minus;
    ManyBodyOperator T_plus;
    double ucc_residual = 0.0; // ||U*QU - Q - (T_- - T_+)||
    int ambiguous_terms = 0;
};

TransportedCharge transported_charge(const UPath& path, const DriveProtocol& protocol,
                                     const Region& gamma, const Region& strip_minus,
                                     const Region& strip_plus, BasisPtr basis);

struct TransportResult {
    double tr_PT_minus = 0.0;
    double dist_to_index = 0.0; // distance to the nearest multiple of 1/p
    int p = 1;
    double comm_UP = 0.0;
    double ucc_residual = 0.0;
};

TransportResult index(const ModelSpec& model, const SpectralData& spec,
                      const DriveProtocol& protocol, int steps = 64, double cluster_tol = -1.0,
                      double projector_tol = 1e-6);

// Bloch corollary pathway: U = e^{-itH}; tr(P T_-(t)) = t tr(PJ) must sit near
// an integer for every t, forcing tr(PJ) ~ 0.
struct BlochPathwayResult {
    double trPJ = 0.0;
    double max_dist = 0.0; // max over t of dist(t tr(PJ), Z)
    double max_quadrature_error = 0.0; // |quadrature - t tr(PJ)|
};

BlochPathwayResult index_bloch_pathway(const ModelSpec& model, const SpectralData& spec,
                                       const std::vector<double>& t_values,
                                       double cluster_tol = -1.0);

double dist_to_integer_multiple(double value, int p);

} // namespace blochlab

#endif
