#include "blochlab/freefermion.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <numbers>

#include "blochlab/observables.hpp"

namespace blochlab::freefermion {

using std::numbers::pi;

Mat ring_hamiltonian(int L, double phi) {
    Mat h = Mat::Zero(L, L);
    const cplx fwd = -std::exp(cplx(0.0, phi / L));
    for (int x = 0; x < L; ++x) {
        h((x + 1) % L, x) += fwd;
        h(x, (x + 1) % L) += std::conj(fwd);
    }
    return h;
}

double ring_eigenvalue(int L, double phi, int k) {
    return -2.0 * std::cos((phi - 2.0 * pi * k) / L);
}

Mat ring_current_matrix(int L, double phi) {
    Mat j = Mat::Zero(L, L);
    const cplx fwd = cplx(0.0, 1.0 / L) * std::exp(cplx(0.0, phi / L));
    for (int x = 0; x < L; ++x) {
        j((x + 1) % L, x) += fwd;
        j(x, (x + 1) % L) += std::conj(fwd);
    }
    return j;
}

double mode_current(int L, double phi, int k) {
    return (2.0 / L) * std::sin((2.0 * pi * k - phi) / L);
}

FermiCurrent fermi_current(int L, double phi, int N) {
    if (N < 0 || N > L) throw std::invalid_argument("fermi_current: filling out of range");
    FermiCurrent out;
    int klo, khi;
    if (N % 2 == 1) {
        const int m = (N - 1) / 2;
        klo = -m;
        khi = m;
    } else {
        const int m = N / 2;
        klo = -m + 1;
        khi = m;
    }
    if (N > 0)
        for (int k = klo; k <= khi; ++k) out.exact += mode_current(L, phi, k);
    const double rho = double(N) / L;
    out.asymptotic = -(1.0 / L) * (2.0 * phi / pi) * std::sin(pi * rho);
    return out;
}

Mat from_quadratic(const ModelSpec& model) {
    const int n = model.lattice.num_sites();
    Mat h = Mat::Zero(n, n);
    for (const auto& t : model.terms)
        for (const auto& m : t.monomials) {
            if (m.factors.size() != 2 || !m.factors[0].create || m.factors[1].create)
                throw std::invalid_argument("from_quadratic: model is not purely quadratic");
            h(m.factors[0].site, m.factors[1].site) += m.coeff;
        }
    return h;
}

Mat current_matrix(const ModelSpec& model) {
    ModelSpec jmodel = model;
    jmodel.terms.clear();
    LocalTerm j = current_density_term(model);
    jmodel.terms.push_back(j);
    return from_quadratic(jmodel);
}

Mat fermi_projection(const Mat& h, int N, double* gap_out) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (gap_out) {
        const int n = static_cast<int>(h.rows());
        *gap_out = (N > 0 && N < n) ? es.eigenvalues()(N) - es.eigenvalues()(N - 1) : 0.0;
    }
    const Mat V = es.eigenvectors().leftCols(N);
    return V * V.adjoint();
}

double quadratic_ground_energy(const Mat& h, int N) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    return es.eigenvalues().head(N).sum();
}

double quadratic_ground_current(const Mat& h, const Mat& j1, int N) {
    return std::real((fermi_projection(h, N) * j1).trace());
}

double dimerized_current_exact(int L, double t1, double t2, double phi) {
    if (L % 2 != 0) throw OddLength("dimerized_current_exact: L must be even");
    namespace mp = boost::multiprecision;
    using real_t = mp::mpfr_float;
    // the band sum cancels down to roughly exp(-L ln(t1/t2)/2); pad generously
    const unsigned digits =
        static_cast<unsigned>(0.5 * L * std::abs(std::log10(std::max(t1, t2) / std::min(t1, t2)))) + 50;
    mp::mpfr_float::default_precision(digits);

    const int M = L / 2;
    const real_t two_pi = 2 * boost::math::constants::pi<real_t>();
    const real_t a = real_t(t1) * real_t(t1) + real_t(t2) * real_t(t2);
    const real_t b = 2 * real_t(t1) * real_t(t2);
    real_t sum = 0;
    for (int n = 0; n < M; ++n) {
        const real_t arg = two_pi * n / M - 2 * real_t(phi) / L;
        sum += sin(arg) / sqrt(a + b * cos(arg));
    }
    const real_t current = b / L * sum;
    return current.convert_to<double>();
}

PumpResult pump(const std::function<Mat(double)>& h_path, int N, const Lattice& lat, int steps,
                double gap_tol) {
    const int n = lat.num_sites();
    Region gamma = half_torus(lat);
    Mat Q = Mat::Zero(n, n);
    for (int s : gamma.sites()) Q(s, s) = 1.0;

    auto projector = [&](double s, double* gap) { return fermi_projection(h_path(s), N, gap); };

    const double h = 1e-5;
    Mat U = Mat::Identity(n, n);
    PumpResult out;
    out.min_gap = std::numeric_limits<double>::infinity();
    const double ds = 1.0 / steps;
    for (int k = 0; k < steps; ++k) {
        const double s = (k + 0.5) * ds;
        double gap = 0;
        Mat P = projector(s, &gap);
        out.min_gap = std::min(out.min_gap, gap);
        if (gap < gap_tol)
            throw GapClosedAlongPath("pump: gap " + std::to_string(gap) + " at s=" +
                                     std::to_string(s));
        Mat Pdot = (projector(s + h, nullptr) - projector(s - h, nullptr)) / (2.0 * h);
        // Kato parallel transport: dU/ds = [P', P] U
        Mat A = ds * (Pdot * P - P * Pdot);
        Eigen::SelfAdjointEigenSolver<Mat> es(cplx(0.0, 1.0) * A); // hermitian iA
        Vec phase(n);
        for (int i = 0; i < n; ++i) phase(i) = std::exp(cplx(0.0, -es.eigenvalues()(i)));
        U = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint() * U;
    }

    // restrict the transported-charge operator to a wide strip around the cut
    const int half_width = std::max(1, lat.L() / 4 - 2);
    Region strip = wide_strip(lat, StripSide::minus, half_width);
    Mat chi = Mat::Zero(n, n);
    for (int s : strip.sites()) chi(s, s) = 1.0;

    Mat P0 = projector(0.0, nullptr);
    Mat moved = U.adjoint() * Q * U - Q;
    Mat Tminus = chi * moved * chi;
    out.transported = std::real((P0 * Tminus).trace());
    return out;
}

Mat rice_mele_hamiltonian(int L, double t_hop, double amplitude, double s) {
    const double theta = 2.0 * pi * s;
    const double delta = amplitude * std::cos(theta);
    const double stagger = amplitude * std::sin(theta);
    Mat h = Mat::Zero(L, L);
    for (int x = 0; x < L; ++x) {
        const double t = t_hop + (x % 2 == 0 ? delta : -delta);
        h((x + 1) % L, x) += -t;
        h(x, (x + 1) % L) += -t;
        h(x, x) += (x % 2 == 0 ? stagger : -stagger);
    }
    return h;
}

} // namespace blochlab::freefermion
