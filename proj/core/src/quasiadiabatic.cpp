#include "blochlab/quasiadiabatic.hpp"

#include <cmath>
#include <numbers>

namespace blochlab {

using std::numbers::pi;

FilterSpec::FilterSpec(double gap, Interp interp) : gap_(gap), interp_(interp) {
    if (gap <= 0) throw std::invalid_argument("FilterSpec: gap must be positive");
}

namespace {

// C-infinity step on [0,1], flat at both ends
double smooth_step(double x) {
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    const double f0 = std::exp(-1.0 / x);
    const double f1 = std::exp(-1.0 / (1.0 - x));
    return f0 / (f0 + f1);
}

// Gauss-Legendre nodes/weights on [-1,1] by Newton on the Legendre recurrence
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p0 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

} // namespace

double FilterSpec::u(double omega) const {
    const double a = std::abs(omega);
    if (a >= gap_) return 1.0 / omega;
    if (interp_ == Interp::linear) return omega / (gap_ * gap_);
    if (a < 1e-300) return 0.0;
    return smooth_step(a / gap_) / omega;
}

double FilterSpec::kernel(double t, int quad_nodes) const {
    // W(t) = sign(t)/2 + (1/pi) int_0^gap (u(w) - 1/w) sin(w t) dw
    std::vector<double> x, w;
    gauss_legendre(quad_nodes, x, w);
    double integral = 0;
    for (int i = 0; i < quad_nodes; ++i) {
        const double om = 0.5 * gap_ * (x[i] + 1.0);
        const double v = u(om) - 1.0 / om;
        integral += w[i] * v * std::sin(om * t);
    }
    integral *= 0.5 * gap_;
    const double sgn = t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
    return 0.5 * sgn + integral / pi;
}

ManyBodyOperator apply_filter(const SpectralData& spec, const ManyBodyOperator& A,
                              const FilterSpec& filt) {
    if (!spec.full) throw RequiresFullSpectrum("apply_filter: full eigendecomposition required");
    const Mat& V = spec.eigenvectors;
    Mat Ae = V.adjoint() * A.dense() * V;
    const int d = static_cast<int>(Ae.rows());
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            Ae(m, n) *= filt.what(spec.eigenvalues(n) - spec.eigenvalues(m));
    Mat B = V * Ae * V.adjoint();
    return ManyBodyOperator::from_dense(A.basis(), B, {}, A.charge_conserving());
}

double offgap_deviation(const SpectralData& spec, const ManyBodyOperator& A,
                        const ManyBodyOperator& B, double gap) {
    const Mat& V = spec.eigenvectors;
    Mat D = V.adjoint() * (A.dense() - B.dense()) * V;
    double worst = 0;
    const int d = static_cast<int>(D.rows());
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            if (std::abs(spec.eigenvalues(m) - spec.eigenvalues(n)) >= gap)
                worst = std::max(worst, std::abs(D(m, n)));
    return worst;
}

DressedCharge build_dressed_charge(const ModelSpec& model, const SpectralData& spec,
                                   const Region& gamma, const Region& strip_minus,
                                   const Region& strip_plus, const FilterSpec& filt,
                                   double cluster_tol) {
    GroundSpace g = ground_projector(spec, cluster_tol);
    CurrentDecomposition cd = edge_currents(model, gamma, strip_minus, strip_plus, spec.basis);

    ManyBodyOperator Q = charge_operator(gamma, spec.basis);
    ManyBodyOperator Km = apply_filter(spec, cd.J_minus, filt);
    ManyBodyOperator Kp = apply_filter(spec, cd.J_plus, filt).scaled(-1.0);
    ManyBodyOperator K = Km + Kp;
    ManyBodyOperator Qbar = Q - K;

    DressedCharge out{Q, cd.J_minus, K, Km, Kp, Qbar};
    Mat P = g.projector();
    auto comm_with_P = [&](const ManyBodyOperator& X) {
        Mat Xd = X.dense();
        return Mat(Xd * P - P * Xd);
    };
    out.comm_filter_defect = (comm_with_P(K) - comm_with_P(Q)).operatorNorm();
    out.comm_dressed = comm_with_P(Qbar).operatorNorm();
    out.offgap_defect = offgap_deviation(spec, K, Q, filt.gap());
    out.k_minus_norm = Km.operator_norm();
    out.k_plus_norm = Kp.operator_norm();

    const Lattice& lat = model.lattice;
    std::vector<std::pair<int, double>> table;
    for (int x = 0; x < lat.num_sites(); ++x) {
        const int d = site_region_distance(lat, x, strip_minus);
        const double nrm = commutator(Km, number_operator(x, spec.basis)).operator_norm();
        bool found = false;
        for (auto& [dist, val] : table)
            if (dist == d) {
                val = std::max(val, nrm);
                found = true;
            }
        if (!found) table.emplace_back(d, nrm);
    }
    std::sort(table.begin(), table.end());
    out.locality_decay = std::move(table);
    return out;
}

GappedBlochResult gapped_bloch_check(const ModelSpec& model, const SpectralData& spec,
                                     const DressedCharge& dressed, const Region& wide_minus,
                                     double cluster_tol) {
    GroundSpace g = ground_projector(spec, cluster_tol);
    ManyBodyOperator H = model.realize(spec.basis);
    ManyBodyOperator Hm = ManyBodyOperator::zero(spec.basis);
    for (const auto& t : model.terms) {
        bool inside = true;
        for (int s : t.support_sites()) inside = inside && wide_minus.contains(s);
        if (inside) Hm = Hm + ManyBodyOperator::realize(t, spec.basis);
    }

    const cplx I(0.0, 1.0);
    Mat P = g.projector();
    Mat Hd = H.dense();
    Mat Hmd = Hm.dense();
    Mat Km = dressed.K_minus.dense();
    Mat Qb = dressed.Q_bar.dense();
    Mat Jd = dressed.J_minus.dense();

    Mat PKmP = P * Km * P;
    Mat PHmP = P * Hmd * P;
    Mat resid = P * Jd * P - I * (Hd * PKmP - PKmP * Hd) - I * (PHmP * Qb - Qb * PHmP);

    GappedBlochResult out;
    out.p = g.p;
    out.gap = g.gamma;
    out.residual = resid.operatorNorm();
    out.trPJ = std::real((P * Jd).trace());
    return out;
}

double topological_order_check(const SpectralData& spec,
                               const std::vector<ManyBodyOperator>& observables,
                               double cluster_tol) {
    GroundSpace g = ground_cluster(spec, cluster_tol);
    Mat P = g.projector();
    double worst = 0;
    for (const auto& A : observables) {
        Mat Ad = A.dense();
        cplx avg = (P * Ad).trace() / double(g.p);
        worst = std::max(worst, Mat(P * Ad * P - avg * P).operatorNorm());
    }
    return worst;
}

TimeDomainResult time_domain_filter(const SpectralData& spec, const ManyBodyOperator& A,
                                    double gap, double t_max, int t_nodes, double tol) {
    if (!spec.full) throw RequiresFullSpectrum("time_domain_filter: full spectrum required");
    FilterSpec filt(gap, FilterSpec::Interp::smooth);

    // Gauss-Legendre in t on [0, t_max]; negative times enter via W(-t) = -W(t)
    std::vector<double> x, w;
    {
        std::vector<double> xr, wr;
        gauss_legendre(t_nodes, xr, wr);
        x.resize(t_nodes);
        w.resize(t_nodes);
        for (int i = 0; i < t_nodes; ++i) {
            x[i] = 0.5 * t_max * (xr[i] + 1.0);
            w[i] = 0.5 * t_max * wr[i];
        }
    }

    TimeDomainResult out;
    out.times = x;
    out.kernel.resize(t_nodes);
    for (int i = 0; i < t_nodes; ++i) out.kernel[i] = filt.kernel(x[i], 400);

    const Mat& V = spec.eigenvectors;
    Mat Ae = V.adjoint() * A.dense() * V;
    const int d = static_cast<int>(Ae.rows());
    Mat Ke = Mat::Zero(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            const double om = spec.eigenvalues(n) - spec.eigenvalues(m);
            // int W(t) e^{i om t} dt with W odd: 2i int_0^T W(t) sin(om t) dt
            double s = 0;
            for (int i = 0; i < t_nodes; ++i) s += w[i] * out.kernel[i] * std::sin(om * x[i]);
            Ke(m, n) = Ae(m, n) * cplx(0.0, 2.0 * s);
        }
    Mat Ktime = V * Ke * V.adjoint();

    ManyBodyOperator Kspec = apply_filter(spec, A, filt);
    const double scale = std::max(1.0, A.operator_norm());
    out.deviation = Mat(Ktime - Kspec.dense()).operatorNorm() / scale;
    if (out.deviation > tol)
        throw QuadratureNotConverged("time_domain_filter: deviation " +
                                     std::to_string(out.deviation) + " exceeds tolerance " +
                                     std::to_string(tol));
    return out;
}

double clustering_deviation(const GroundSpace& g, const ManyBodyOperator& A,
                            const ManyBodyOperator& B) {
    const double p = g.p;
    cplx tAB = 0, tA = 0, tB = 0;
    for (int i = 0; i < g.p; ++i) {
        tAB += g.vectors.col(i).dot(A.matrix() * (B.matrix() * g.vectors.col(i)));
        tA += g.vectors.col(i).dot(A.matrix() * g.vectors.col(i));
        tB += g.vectors.col(i).dot(B.matrix() * g.vectors.col(i));
    }
    return std::abs(tAB / p - tA * tB / (p * p));
}

} // namespace blochlab
