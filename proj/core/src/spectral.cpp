#include "blochlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace blochlab {

namespace {

// One Lanczos sweep in the orthogonal complement of `locked`, returning the
// lowest k Ritz pairs of that complement.
LanczosResult lanczos_run(const SpMat& H, int k, double rel_tol, int max_iter, std::mt19937& gen,
                          const std::vector<Vec>& locked) {
    const int dim = static_cast<int>(H.rows());
    const int free_dim = dim - static_cast<int>(locked.size());
    k = std::min(k, free_dim);
    if (k <= 0) return {};

    std::normal_distribution<double> dist;
    auto deflate = [&](Vec& w) {
        for (const auto& u : locked) w -= u.dot(w) * u;
    };
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cplx(dist(gen), dist(gen));
    deflate(v);
    if (v.norm() < 1e-12) return {};
    v.normalize();

    std::vector<Vec> basis;
    std::vector<double> alpha, beta;
    basis.push_back(v);

    const int m_max = std::min(free_dim, max_iter);
    Eigen::VectorXd ritz;
    Eigen::MatrixXd tvecs;
    double scale = 1.0;

    for (int m = 1; m <= m_max; ++m) {
        Vec w = H * basis.back();
        double a = std::real(basis.back().dot(w));
        alpha.push_back(a);
        w -= a * basis.back();
        if (basis.size() >= 2) w -= beta.back() * basis[basis.size() - 2];
        // full reorthogonalization against the Krylov basis and the locked
        // directions, twice
        for (int pass = 0; pass < 2; ++pass) {
            deflate(w);
            for (const auto& u : basis) w -= u.dot(w) * u;
        }

        // tridiagonal Ritz values
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) T(i, i) = alpha[i];
        for (int i = 0; i + 1 < m; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        ritz = es.eigenvalues();
        tvecs = es.eigenvectors();
        scale = std::max({1.0, std::abs(ritz(0)), std::abs(ritz(m - 1))});

        double b = w.norm();
        bool converged = false;
        if (m >= k) {
            // residual of Ritz pair i is |beta_m * tvecs(m-1, i)|
            converged = true;
            for (int i = 0; i < k; ++i)
                if (b * std::abs(tvecs(m - 1, i)) > rel_tol * scale) converged = false;
        }
        if (converged || m == free_dim) break;
        if (b < 1e-14 * scale) {
            // invariant subspace exhausted; restart with a fresh orthogonal vector
            Vec f(dim);
            for (int i = 0; i < dim; ++i) f(i) = cplx(dist(gen), dist(gen));
            deflate(f);
            for (const auto& u : basis) f -= u.dot(f) * u;
            b = f.norm();
            if (b < 1e-12) break;
            w = f;
        }
        beta.push_back(b);
        basis.push_back(w / b);
        if (m == m_max)
            throw IterationDivergence("lanczos_lowest: no convergence after " +
                                      std::to_string(m_max) + " iterations, residual " +
                                      std::to_string(b * std::abs(tvecs(m - 1, 0))));
    }

    const int m = static_cast<int>(alpha.size());
    const int kk = std::min(k, m);
    LanczosResult out;
    out.eigenvalues = ritz.head(kk);
    out.eigenvectors = Mat::Zero(dim, kk);
    for (int i = 0; i < kk; ++i)
        for (int j = 0; j < m; ++j) out.eigenvectors.col(i) += tvecs(j, i) * basis[j];
    for (int i = 0; i < kk; ++i) {
        out.eigenvectors.col(i).normalize();
        Vec r = H * out.eigenvectors.col(i) - out.eigenvalues(i) * out.eigenvectors.col(i);
        out.max_residual = std::max(out.max_residual, r.norm());
    }
    if (out.max_residual > 1e-9 * scale)
        throw IterationDivergence("lanczos_lowest: residual " + std::to_string(out.max_residual) +
                                  " exceeds tolerance");
    return out;
}

} // namespace

LanczosResult lanczos_lowest(const SpMat& H, int k, double rel_tol, int max_iter, unsigned seed) {
    const int dim = static_cast<int>(H.rows());
    k = std::min(k, dim);
    if (dim == 0) return {};
    if (dim == 1) {
        LanczosResult r;
        r.eigenvalues = Eigen::VectorXd::Constant(1, H.coeff(0, 0).real());
        r.eigenvectors = Mat::Identity(1, 1);
        return r;
    }

    // A single Krylov space holds one vector per distinct eigenvalue, so
    // degenerate levels need deflated restarts: lock converged pairs, sweep the
    // orthogonal complement, and stop once the complement holds nothing below
    // the current k-th level.
    std::mt19937 gen(seed);
    std::vector<std::pair<double, Vec>> found;
    std::vector<Vec> locked;
    double max_residual = 0.0;
    double scale = 1.0;
    while (static_cast<int>(found.size()) < dim) {
        const int want = std::max(1, k - static_cast<int>(found.size()));
        LanczosResult r = lanczos_run(H, want, rel_tol, max_iter, gen, locked);
        if (r.eigenvalues.size() == 0) break;
        for (int i = 0; i < r.eigenvalues.size(); ++i) {
            found.emplace_back(r.eigenvalues(i), r.eigenvectors.col(i));
            locked.push_back(r.eigenvectors.col(i));
            scale = std::max(scale, std::abs(r.eigenvalues(i)));
        }
        max_residual = std::max(max_residual, r.max_residual);
        std::sort(found.begin(), found.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (static_cast<int>(found.size()) >= k &&
            r.eigenvalues(0) >= found[k - 1].first - 1e-10 * scale)
            break;
    }

    const int kk = std::min<int>(k, static_cast<int>(found.size()));
    LanczosResult out;
    out.eigenvalues.resize(kk);
    out.eigenvectors = Mat::Zero(dim, kk);
    for (int i = 0; i < kk; ++i) {
        out.eigenvalues(i) = found[i].first;
        out.eigenvectors.col(i) = found[i].second;
    }
    out.max_residual = max_residual;
    return out;
}

SpectralData diagonalize(const ManyBodyOperator& H, DiagMode mode, int k, unsigned seed) {
    if (!H.is_hermitian(1e-10)) throw NotHermitian("diagonalize: operator is not hermitian");
    SpectralData out;
    out.basis = H.basis();
    if (mode == DiagMode::full || H.dim() <= 2 * k) {
        Eigen::SelfAdjointEigenSolver<Mat> es(H.dense());
        out.eigenvalues = es.eigenvalues();
        out.eigenvectors = es.eigenvectors();
        out.full = true;
    } else {
        LanczosResult lr = lanczos_lowest(H.matrix(), k, 1e-11, 600, seed);
        out.eigenvalues = lr.eigenvalues;
        out.eigenvectors = lr.eigenvectors;
        out.full = false;
    }
    const int ne = static_cast<int>(out.eigenvalues.size());
    out.norm_estimate =
        ne ? std::max(std::abs(out.eigenvalues(0)), std::abs(out.eigenvalues(ne - 1))) : 0.0;
    if (!out.full) {
        // crude upper estimate of ||H|| for tolerance scaling
        out.norm_estimate = std::max(out.norm_estimate, H.frobenius_norm() / std::sqrt(double(H.dim())));
    }
    return out;
}

GroundSpace ground_cluster(const SpectralData& spec, double cluster_tol) {
    if (cluster_tol < 0) cluster_tol = spec.default_cluster_tol();
    GroundSpace g;
    const int ne = static_cast<int>(spec.eigenvalues.size());
    if (ne == 0) return g;
    g.e0 = spec.eigenvalues(0);
    int p = 1;
    while (p < ne && spec.eigenvalues(p) - g.e0 <= cluster_tol) ++p;
    g.p = p;
    g.vectors = spec.eigenvectors.leftCols(p);
    g.gamma = p < ne ? spec.eigenvalues(p) - spec.eigenvalues(p - 1) : 0.0;
    return g;
}

GroundSpace ground_projector(const SpectralData& spec, double cluster_tol) {
    if (cluster_tol < 0) cluster_tol = spec.default_cluster_tol();
    GroundSpace g = ground_cluster(spec, cluster_tol);
    if (g.gamma <= cluster_tol)
        throw NoGap("ground_projector: gap " + std::to_string(g.gamma) +
                    " not resolved above cluster tolerance");
    return g;
}

double GroundSpace::trace_with(const ManyBodyOperator& A) const {
    return trace_with_complex(A).real();
}

cplx GroundSpace::trace_with_complex(const ManyBodyOperator& A) const {
    cplx t = 0.0;
    for (int i = 0; i < p; ++i) t += vectors.col(i).dot(A.matrix() * vectors.col(i));
    return t;
}

GibbsState gibbs(const SpectralData& spec, double beta) {
    if (!spec.full) throw RequiresFullSpectrum("gibbs: full spectrum required");
    GibbsState g;
    g.beta = beta;
    const int ne = static_cast<int>(spec.eigenvalues.size());
    const double e0 = spec.eigenvalues(0);
    g.weights.resize(ne);
    double z = 0;
    for (int i = 0; i < ne; ++i) {
        g.weights(i) = std::exp(-beta * (spec.eigenvalues(i) - e0));
        z += g.weights(i);
    }
    g.weights /= z;
    g.log_z = std::log(z) - beta * e0;
    return g;
}

Mat GibbsState::density_matrix(const SpectralData& spec) const {
    return spec.eigenvectors * weights.asDiagonal() * spec.eigenvectors.adjoint();
}

double GibbsState::expectation(const SpectralData& spec, const ManyBodyOperator& A) const {
    double t = 0;
    for (int i = 0; i < weights.size(); ++i)
        t += weights(i) * std::real(spec.eigenvectors.col(i).dot(A.matrix() * spec.eigenvectors.col(i)));
    return t;
}

double GibbsState::energy(const SpectralData& spec) const {
    return weights.dot(spec.eigenvalues);
}

double GibbsState::entropy() const {
    double s = 0;
    for (int i = 0; i < weights.size(); ++i)
        if (weights(i) > 0) s -= weights(i) * std::log(weights(i));
    return s;
}

double GibbsState::free_energy(const SpectralData& spec) const {
    return energy(spec) - entropy() / beta;
}

std::vector<SectorSpectrum> diagonalize_all_sectors(const ModelSpec& model, DiagMode mode, int k) {
    const int n = model.lattice.num_sites();
    std::vector<SectorSpectrum> out;
    for (int N = 0; N <= n; ++N) {
        auto basis = FockBasis::fixed_charge(n, N);
        out.push_back({N, diagonalize(model.realize(basis), mode, k)});
    }
    return out;
}

double thermal_expectation(const std::vector<SectorSpectrum>& sectors, double beta,
                           const std::function<ManyBodyOperator(BasisPtr)>& opbuild) {
    double e0 = std::numeric_limits<double>::infinity();
    for (const auto& s : sectors)
        if (s.data.eigenvalues.size()) e0 = std::min(e0, s.data.eigenvalues(0));
    double z = 0, acc = 0;
    for (const auto& s : sectors) {
        if (!s.data.full) throw RequiresFullSpectrum("thermal_expectation: full spectra required");
        ManyBodyOperator A = opbuild(s.data.basis);
        for (int i = 0; i < s.data.eigenvalues.size(); ++i) {
            const double w = std::exp(-beta * (s.data.eigenvalues(i) - e0));
            z += w;
            acc += w * std::real(s.data.eigenvectors.col(i).dot(A.matrix() * s.data.eigenvectors.col(i)));
        }
    }
    return acc / z;
}

} // namespace blochlab
