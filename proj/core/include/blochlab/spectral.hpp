#ifndef BLOCHLAB_SPECTRAL_HPP
#define BLOCHLAB_SPECTRAL_HPP

#include <functional>

#include "blochlab/models.hpp"

namespace blochlab {

struct NotHermitian : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IterationDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoGap : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RequiresFullSpectrum : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DiagMode { full, lowest_k };

// Eigendata of a hermitian charge-conserving operator on one basis.
struct SpectralData {
    BasisPtr basis;
    Eigen::VectorXd eigenvalues; // ascending; all of them iff full
    Mat eigenvectors;            // dim x (number of computed pairs)
    bool full = false;
    double norm_estimate = 0.0; // max |eigenvalue| seen

    int dim() const { return basis->dim(); }
    double default_cluster_tol() const { return 1e-8 * std::max(1.0, norm_estimate); }
};

SpectralData diagonalize(const ManyBodyOperator& H, DiagMode mode = DiagMode::full, int k = 8,
                         unsigned seed = 7);

// Low-energy cluster: all eigenvalues within cluster_tol of the minimum.
struct GroundSpace {
    Mat vectors; // dim x p, orthonormal
    int p = 0;
    double gamma = 0.0; // distance from the cluster to the rest (0 if unknown)
    double e0 = 0.0;

    Mat projector() const { return vectors * vectors.adjoint(); }
    // tr(P A), real part
    double trace_with(const ManyBodyOperator& A) const;
    cplx trace_with_complex(const ManyBodyOperator& A) const;
};

// No-throw cluster selection; gamma <= 0 signals an unresolved gap.
GroundSpace ground_cluster(const SpectralData& spec, double cluster_tol = -1.0);

// Throws NoGap when gamma <= cluster_tol (caller then runs the gapless pathway).
GroundSpace ground_projector(const SpectralData& spec, double cluster_tol = -1.0);

struct GibbsState {
    double beta = 0.0;
    Eigen::VectorXd weights; // Boltzmann weights in the eigenbasis, sum 1
    double log_z = 0.0;

    Mat density_matrix(const SpectralData& spec) const;
    double expectation(const SpectralData& spec, const ManyBodyOperator& A) const;
    double energy(const SpectralData& spec) const;
    double entropy() const;
    double free_energy(const SpectralData& spec) const;
};

GibbsState gibbs(const SpectralData& spec, double beta);

// Per-sector diagonalization of a model over all charge sectors.
struct SectorSpectrum {
    int N;
    SpectralData data;
};
std::vector<SectorSpectrum> diagonalize_all_sectors(const ModelSpec& model,
                                                    DiagMode mode = DiagMode::full, int k = 8);

// tr(rho A) over the grand ensemble of sectors; opbuild realizes A on each
// sector basis.
double thermal_expectation(const std::vector<SectorSpectrum>& sectors, double beta,
                           const std::function<ManyBodyOperator(BasisPtr)>& opbuild);

// Lowest-k eigenpairs of a sparse hermitian matrix by Lanczos with full
// reorthogonalization.
struct LanczosResult {
    Eigen::VectorXd eigenvalues;
    Mat eigenvectors;
    double max_residual = 0.0;
};
LanczosResult lanczos_lowest(const SpMat& H, int k, double rel_tol = 1e-11, int max_iter = 600,
                             unsigned seed = 7);

} // namespace blochlab

#endif
