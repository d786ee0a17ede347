#ifndef BLOCHLAB_FREEFERMION_HPP
#define BLOCHLAB_FREEFERMION_HPP

#include <functional>

#include "blochlab/models.hpp"

namespace blochlab::freefermion {

struct GapClosedAlongPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// flux ring H = -e^{i phi/L} T - e^{-i phi/L} T*, (T psi)(x) = psi(x-1)
Mat ring_hamiltonian(int L, double phi);
// analytic eigenvalue -2 cos((phi - 2 pi k)/L), k in Z/LZ
double ring_eigenvalue(int L, double phi, int k);
// single-particle current matrix j = -dH/dphi
Mat ring_current_matrix(int L, double phi);
// <psi_k, j psi_k> = (2/L) sin((2 pi k - phi)/L)
double mode_current(int L, double phi, int k);

// Exact Fermi-sea current on the flux ring plus the large-L asymptotic value.
// Odd N fills k in [-m, m]; even N = 2m fills k in [-m+1, m], the ground
// window for phi in (0, pi).
struct FermiCurrent {
    double exact = 0.0;
    double asymptotic = 0.0;
};
FermiCurrent fermi_current(int L, double phi, int N);

// Extract the single-particle matrix h(i,j) = coefficient of a*_i a_j from a
// purely quadratic model; throws if the model has quartic terms.
Mat from_quadratic(const ModelSpec& model);
// same extraction applied to the model's current density term
Mat current_matrix(const ModelSpec& model);

// rank-N spectral projection onto the lowest levels; gap_out gets E_N - E_{N-1}
Mat fermi_projection(const Mat& h, int N, double* gap_out = nullptr);

double quadratic_ground_energy(const Mat& h, int N);
// tr(P_F j1)
double quadratic_ground_current(const Mat& h, const Mat& j1, int N);

// Persistent current of the dimerized ring at half filling by the band-sum
//   (2 t1 t2 / L) sum_n sin(k_n - 2 phi/L) / eps(k_n),  k_n = 4 pi n / L,
// evaluated in multiprecision arithmetic: the summands are O(1/L) but cancel
// down to an exponentially small total that double precision cannot resolve.
double dimerized_current_exact(int L, double t1, double t2, double phi);

// Charge transported across the x = 0 cut by parallel transport of the Fermi
// sea along a path of gapped hamiltonians; integer for a closed pump cycle.
struct PumpResult {
    double transported = 0.0;
    double min_gap = 0.0;
};
PumpResult pump(const std::function<Mat(double)>& h_path, int N, const Lattice& lat, int steps,
                double gap_tol = 1e-6);

// Rice-Mele cycle snapshot at parameter s in [0, 1]
Mat rice_mele_hamiltonian(int L, double t_hop, double amplitude, double s);

} // namespace blochlab::freefermion

#endif
