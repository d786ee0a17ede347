#include "blochlab/transport.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

namespace blochlab {

const std::vector<LocalTerm>& DriveProtocol::terms_at(double s) const {
    if (grid.empty()) throw std::invalid_argument("DriveProtocol: empty grid");
    size_t i = 0;
    while (i + 1 < grid.size() && s >= grid[i + 1]) ++i;
    return terms[i];
}

void DriveProtocol::validate() const {
    if (grid.size() != terms.size())
        throw std::invalid_argument("DriveProtocol: grid/terms size mismatch");
    for (const auto& list : terms)
        for (const auto& t : list)
            for (const auto& m : t.monomials)
                if (!m.balanced())
                    throw std::invalid_argument(
                        "DriveProtocol: generator term does not conserve charge");
}

double DriveProtocol::locality_constant(const Lattice& lat,
                                        const std::function<double(int)>& xi) const {
    double worst = 0;
    for (const auto& list : terms) {
        std::vector<double> per_site(lat.num_sites(), 0.0);
        for (const auto& t : list) {
            LocalTerm compact = t;
            auto sup = t.support_sites();
            for (auto& m : compact.monomials)
                for (auto& f : m.factors)
                    f.site = static_cast<int>(std::lower_bound(sup.begin(), sup.end(), f.site) -
                                              sup.begin());
            auto basis = FockBasis::full(std::max<size_t>(1, sup.size()));
            const double nrm = ManyBodyOperator::realize(compact, basis).operator_norm();
            const double weight = nrm / xi(t.diameter(lat));
            for (int x : sup) per_site[x] += weight;
        }
        for (double v : per_site) worst = std::max(worst, v);
    }
    return worst;
}

DriveProtocol DriveProtocol::constant(const ModelSpec& model) {
    DriveProtocol p;
    p.grid = {0.0};
    p.terms = {model.terms};
    return p;
}

DriveProtocol DriveProtocol::from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    DriveProtocol p;
    p.grid = j.at("grid").get<std::vector<double>>();
    for (const auto& list : j.at("terms")) {
        std::vector<LocalTerm> entry;
        for (const auto& t : list) entry.push_back(term_from_text(t.get<std::string>()));
        p.terms.push_back(std::move(entry));
    }
    p.validate();
    return p;
}

DriveProtocol DriveProtocol::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("DriveProtocol::from_file: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

namespace {

Mat realize_sum(const std::vector<LocalTerm>& terms, const BasisPtr& basis) {
    ManyBodyOperator G = ManyBodyOperator::zero(basis);
    for (const auto& t : terms) G = G + ManyBodyOperator::realize(t, basis);
    return G.dense();
}

Mat hermitian_exp(const Mat& A_times_minus_i) {
    // input is -i * (hermitian); exponentiate exactly in its eigenbasis
    Mat Ah = cplx(0.0, 1.0) * A_times_minus_i;
    Eigen::SelfAdjointEigenSolver<Mat> es(Ah);
    Vec phases(Ah.rows());
    for (int i = 0; i < Ah.rows(); ++i) phases(i) = std::exp(cplx(0.0, -es.eigenvalues()(i)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

UPath evolve(const DriveProtocol& protocol, BasisPtr basis, int steps, double unitarity_tol) {
    protocol.validate();
    const int d = basis->dim();
    UPath out;
    out.s.resize(steps + 1);
    out.U.reserve(steps + 1);
    out.U.push_back(Mat::Identity(d, d));
    const double ds = 1.0 / steps;
    const double node = std::sqrt(3.0) / 6.0;
    for (int k = 0; k < steps; ++k) {
        const double s0 = k * ds;
        out.s[k] = s0;
        Mat G1 = realize_sum(protocol.terms_at(s0 + ds * (0.5 - node)), basis);
        Mat G2 = realize_sum(protocol.terms_at(s0 + ds * (0.5 + node)), basis);
        // fourth-order Magnus: Omega = -i ds (G1+G2)/2 - ds^2 sqrt(3)/12 [G2, G1]
        Mat omega = cplx(0.0, -0.5 * ds) * (G1 + G2) -
                    (ds * ds * std::sqrt(3.0) / 12.0) * (G2 * G1 - G1 * G2);
        out.U.push_back(hermitian_exp(omega) * out.U.back());
    }
    out.s[steps] = 1.0;
    const Mat& U1 = out.U.back();
    out.unitarity_defect = (U1.adjoint() * U1 - Mat::Identity(d, d)).norm();
    if (out.unitarity_defect > unitarity_tol)
        throw StepSizeTooCoarse("evolve: unitarity defect " +
                                std::to_string(out.unitarity_defect));
    // total charge commutation
    Mat Q = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) Q(i, i) = std::popcount(basis->state(i));
    out.charge_defect = (U1 * Q - Q * U1).norm();
    return out;
}

TransportedCharge transported_charge(const UPath& path, const DriveProtocol& protocol,
                                     const Region& gamma, const Region& strip_minus,
                                     const Region& strip_plus, BasisPtr basis) {
    const int n = static_cast<int>(path.U.size());
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("transported_charge: need an even number of Simpson panels");
    ManyBodyOperator Q = charge_operator(gamma, basis);
    Mat Qd = Q.dense();
    const int d = basis->dim();

    int ambiguous = 0;
    auto split = [&](const std::vector<LocalTerm>& list, bool minus) {
        std::vector<LocalTerm> out;
        for (const auto& t : list) {
            bool hit_m = false, hit_p = false;
            for (int x : t.support_sites()) {
                hit_m = hit_m || strip_minus.contains(x);
                hit_p = hit_p || strip_plus.contains(x);
            }
            if (hit_m && hit_p && minus) ++ambiguous; // long terms go to G_-
            if ((minus && hit_m) || (!minus && hit_p && !hit_m)) out.push_back(t);
        }
        return out;
    };

    Mat Tm = Mat::Zero(d, d), Tp = Mat::Zero(d, d);
    const double h = path.s[1] - path.s[0];
    for (int i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double coeff = w * h / 3.0;
        Mat Gm = realize_sum(split(protocol.terms_at(path.s[i]), true), basis);
        Mat Gp = realize_sum(split(protocol.terms_at(path.s[i]), false), basis);
        const Mat& U = path.U[i];
        Tm += coeff * (U.adjoint() * (cplx(0.0, 1.0) * (Gm * Qd - Qd * Gm)) * U);
        Tp -= coeff * (U.adjoint() * (cplx(0.0, 1.0) * (Gp * Qd - Qd * Gp)) * U);
    }

    const Mat& U1 = path.U.back();
    Mat moved = U1.adjoint() * Qd * U1 - Qd;
    TransportedCharge out{
        ManyBodyOperator::from_dense(basis, Tm, strip_minus.sites(), true),
        ManyBodyOperator::from_dense(basis, Tp, strip_plus.sites(), true),
        (moved - (Tm - Tp)).operatorNorm(), ambiguous};
    return out;
}

double dist_to_integer_multiple(double value, int p) {
    const double scaled = value * p;
    return std::abs(scaled - std::round(scaled)) / p;
}

TransportResult index(const ModelSpec& model, const SpectralData& spec,
                      const DriveProtocol& protocol, int steps, double cluster_tol,
                      double projector_tol) {
    GroundSpace g = ground_projector(spec, cluster_tol);
    Region gamma = half_torus(model.lattice);
    Region sm = boundary_strip(model.lattice, StripSide::minus, model.range);
    Region sp = boundary_strip(model.lattice, StripSide::plus, model.range);

    UPath path = evolve(protocol, spec.basis, steps % 2 == 0 ? steps : steps + 1);
    Mat P = g.projector();
    const double comm_UP = (path.U.back() * P - P * path.U.back()).operatorNorm();
    if (comm_UP > projector_tol)
        throw ProjectorNotInvariant("index: ||[U,P]|| = " + std::to_string(comm_UP));

    TransportedCharge tc = transported_charge(path, protocol, gamma, sm, sp, spec.basis);
    TransportResult out;
    out.p = g.p;
    out.comm_UP = comm_UP;
    out.ucc_residual = tc.ucc_residual;
    out.tr_PT_minus = std::real((P * tc.T_minus.dense()).trace());
    out.dist_to_index = dist_to_integer_multiple(out.tr_PT_minus, g.p);
    return out;
}

BlochPathwayResult index_bloch_pathway(const ModelSpec& model, const SpectralData& spec,
                                       const std::vector<double>& t_values, double cluster_tol) {
    if (!spec.full) throw RequiresFullSpectrum("index_bloch_pathway: full spectrum required");
    GroundSpace g = ground_projector(spec, cluster_tol);
    Region gamma = half_torus(model.lattice);
    Region sm = boundary_strip(model.lattice, StripSide::minus, model.range);
    Region sp = boundary_strip(model.lattice, StripSide::plus, model.range);
    CurrentDecomposition cd = edge_currents(model, gamma, sm, sp, spec.basis);

    Mat P = g.projector();
    const double trPJ = std::real((P * cd.J_minus.dense()).trace());

    // U(s) = e^{-isH} in the eigenbasis; tr(P U* J_- U) integrated over [0, t]
    const Mat& V = spec.eigenvectors;
    Mat Je = V.adjoint() * cd.J_minus.dense() * V;
    Mat Pe = V.adjoint() * P * V;

    BlochPathwayResult out;
    out.trPJ = trPJ;
    for (double t : t_values) {
        // composite Simpson in s
        const int panels = 16;
        const double h = t / panels;
        double acc = 0;
        for (int i = 0; i <= panels; ++i) {
            const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            const double s = i * h;
            Vec ph(spec.eigenvalues.size());
            for (int m = 0; m < ph.size(); ++m) ph(m) = std::exp(cplx(0.0, s * spec.eigenvalues(m)));
            // tr(P U*(s) J U(s)) with U diag in the eigenbasis
            Mat JU = ph.conjugate().asDiagonal() * Je * ph.asDiagonal();
            acc += w * std::real((Pe * JU).trace()) * h / 3.0;
        }
        out.max_quadrature_error = std::max(out.max_quadrature_error, std::abs(acc - t * trPJ));
        out.max_dist = std::max(out.max_dist, dist_to_integer_multiple(t * trPJ, 1));
    }
    return out;
}

} // namespace blochlab
