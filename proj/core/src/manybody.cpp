#include "blochlab/manybody.hpp"

#include <algorithm>
#include <bit>
#include <random>

namespace blochlab {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 0; i < std::min(k, n - k); ++i) r = r * (n - i) / (i + 1);
    return r;
}

FockBasis::FockBasis(int n, std::optional<int> sector) : n_(n), sector_(sector) {
    if (n < 1 || n > 28) throw std::invalid_argument("FockBasis: n out of supported range");
    const std::uint64_t total = std::uint64_t(1) << n;
    if (sector) {
        if (*sector < 0 || *sector > n)
            throw std::invalid_argument("FockBasis: sector out of range");
        states_.reserve(binomial(n, *sector));
        for (std::uint64_t w = 0; w < total; ++w)
            if (std::popcount(w) == *sector) states_.push_back(w);
    } else {
        states_.resize(total);
        for (std::uint64_t w = 0; w < total; ++w) states_[w] = w;
    }
}

BasisPtr FockBasis::full(int n) {
    return std::shared_ptr<const FockBasis>(new FockBasis(n, std::nullopt));
}

BasisPtr FockBasis::fixed_charge(int n, int N) {
    return std::shared_ptr<const FockBasis>(new FockBasis(n, N));
}

int FockBasis::index_of(std::uint64_t state) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), state);
    if (it == states_.end() || *it != state) return -1;
    return static_cast<int>(it - states_.begin());
}

int FockBasis::charge_in(std::uint64_t state, const Region& X) const {
    int q = 0;
    for (int x : X.sites())
        if (occupied(state, x)) ++q;
    return q;
}

std::string FockBasis::bitstring(std::uint64_t state) const {
    std::string s(n_, '0');
    for (int x = 0; x < n_; ++x)
        if (occupied(state, x)) s[x] = '1';
    return s;
}

int Monomial::creator_count() const {
    int c = 0;
    for (const auto& f : factors) c += f.create ? 1 : 0;
    return c;
}

int Monomial::annihilator_count() const {
    return static_cast<int>(factors.size()) - creator_count();
}

std::vector<int> LocalTerm::support_sites() const {
    std::vector<int> s;
    for (const auto& m : monomials)
        for (const auto& f : m.factors) s.push_back(f.site);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

int LocalTerm::diameter(const Lattice& lat) const {
    auto s = support_sites();
    int d = 0;
    for (size_t i = 0; i < s.size(); ++i)
        for (size_t j = i + 1; j < s.size(); ++j)
            d = std::max(d, lat.distance(s[i], s[j]));
    return d;
}

bool LocalTerm::is_even() const {
    for (const auto& m : monomials)
        if (m.factors.size() % 2 != 0) return false;
    return true;
}

LocalTerm LocalTerm::dagger() const {
    LocalTerm out;
    out.twist_sites = twist_sites;
    for (const auto& m : monomials) {
        Monomial d;
        d.coeff = std::conj(m.coeff);
        for (auto it = m.factors.rbegin(); it != m.factors.rend(); ++it)
            d.factors.push_back({it->site, !it->create});
        out.monomials.push_back(std::move(d));
    }
    return out;
}

LocalTerm LocalTerm::scaled(cplx factor) const {
    LocalTerm out = *this;
    for (auto& m : out.monomials) m.coeff *= factor;
    return out;
}

LocalTerm LocalTerm::plus(const LocalTerm& other) const {
    LocalTerm out = *this;
    out.monomials.insert(out.monomials.end(), other.monomials.begin(), other.monomials.end());
    std::vector<int> ts = twist_sites;
    ts.insert(ts.end(), other.twist_sites.begin(), other.twist_sites.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    out.twist_sites = ts;
    return out;
}

int LocalTerm::twist_weight(const Monomial& m) const {
    int w = 0;
    for (const auto& f : m.factors) {
        if (std::find(twist_sites.begin(), twist_sites.end(), f.site) != twist_sites.end())
            w += f.create ? -1 : +1;
    }
    return w;
}

LocalTerm LocalTerm::twisted(double s) const {
    LocalTerm out = *this;
    for (auto& m : out.monomials)
        m.coeff *= std::exp(cplx(0.0, s * twist_weight(m)));
    return out;
}

LocalTerm LocalTerm::twist_derivative(int order) const {
    LocalTerm out;
    out.twist_sites = twist_sites;
    for (const auto& m : monomials) {
        cplx factor = std::pow(cplx(0.0, twist_weight(m)), order);
        if (factor == cplx(0.0, 0.0) && order > 0) continue;
        Monomial d = m;
        d.coeff *= factor;
        out.monomials.push_back(std::move(d));
    }
    return out;
}

LocalTerm LocalTerm::gauge_averaged() const {
    LocalTerm out;
    out.twist_sites = twist_sites;
    for (const auto& m : monomials)
        if (m.balanced()) out.monomials.push_back(m);
    return out;
}

LocalTerm gauge_average(const LocalTerm& term) { return term.gauge_averaged(); }

bool LocalTerm::is_hermitian(double tol) const {
    auto sup = support_sites();
    if (sup.size() > 12) throw std::invalid_argument("is_hermitian: support too large");
    // remap support to a compact site range
    LocalTerm compact = *this;
    for (auto& m : compact.monomials)
        for (auto& f : m.factors)
            f.site = static_cast<int>(std::lower_bound(sup.begin(), sup.end(), f.site) - sup.begin());
    auto basis = FockBasis::full(std::max<int>(1, static_cast<int>(sup.size())));
    auto A = ManyBodyOperator::realize(compact, basis);
    return (A.matrix() - A.adjoint().matrix()).norm() <= tol * std::max(1.0, A.frobenius_norm());
}

// --- realization ---------------------------------------------------------

namespace {

// sign from moving a factor past the occupied sites with index < x
inline int jw_sign(std::uint64_t word, int n, int x) {
    std::uint64_t above = x == 0 ? 0 : (word >> (n - x));
    return (std::popcount(above) & 1) ? -1 : 1;
}

} // namespace

ManyBodyOperator::ManyBodyOperator(BasisPtr basis, SpMat mat, std::vector<int> support,
                                   bool charge_conserving)
    : basis_(std::move(basis)), mat_(std::move(mat)), support_(std::move(support)),
      charge_conserving_(charge_conserving) {}

ManyBodyOperator ManyBodyOperator::realize(const LocalTerm& term, BasisPtr basis) {
    const int n = basis->n();
    for (int s : term.support_sites())
        if (s < 0 || s >= n)
            throw SiteOutOfRange("realize: site " + std::to_string(s) + " not in basis of " +
                                 std::to_string(n) + " sites");
    bool conserving = true;
    for (const auto& m : term.monomials) conserving = conserving && m.balanced();
    if (basis->sector() && !conserving)
        throw BasisMismatch("realize: charge non-conserving term on a fixed-charge basis");

    std::vector<Eigen::Triplet<cplx>> trips;
    const int dim = basis->dim();
    for (int col = 0; col < dim; ++col) {
        const std::uint64_t in = basis->state(col);
        for (const auto& m : term.monomials) {
            std::uint64_t w = in;
            int sign = 1;
            bool dead = false;
            for (auto it = m.factors.rbegin(); it != m.factors.rend(); ++it) {
                const std::uint64_t bit = std::uint64_t(1) << (n - 1 - it->site);
                const bool occ = w & bit;
                if (it->create == occ) { // create on occupied or annihilate on empty
                    dead = true;
                    break;
                }
                sign *= jw_sign(w, n, it->site);
                w ^= bit;
            }
            if (dead) continue;
            const int row = basis->index_of(w);
            trips.emplace_back(row, col, m.coeff * double(sign));
        }
    }
    SpMat mat(dim, dim);
    mat.setFromTriplets(trips.begin(), trips.end());
    mat.prune([](int, int, const cplx& v) { return v != cplx(0.0, 0.0); });
    return ManyBodyOperator(std::move(basis), std::move(mat), term.support_sites(), conserving);
}

ManyBodyOperator ManyBodyOperator::zero(BasisPtr basis) {
    SpMat m(basis->dim(), basis->dim());
    return ManyBodyOperator(std::move(basis), std::move(m), {}, true);
}

ManyBodyOperator ManyBodyOperator::identity(BasisPtr basis) {
    SpMat m(basis->dim(), basis->dim());
    m.setIdentity();
    return ManyBodyOperator(std::move(basis), std::move(m), {}, true);
}

ManyBodyOperator ManyBodyOperator::from_dense(BasisPtr basis, const Mat& m,
                                              std::vector<int> support, bool charge_conserving) {
    SpMat sp = m.sparseView();
    return ManyBodyOperator(std::move(basis), std::move(sp), std::move(support), charge_conserving);
}

ManyBodyOperator ManyBodyOperator::adjoint() const {
    return ManyBodyOperator(basis_, SpMat(mat_.adjoint()), support_, charge_conserving_);
}

void ManyBodyOperator::check_same_basis(const ManyBodyOperator& other) const {
    if (basis_ != other.basis_ &&
        !(basis_->n() == other.basis_->n() && basis_->sector() == other.basis_->sector()))
        throw BasisMismatch("operators defined on different bases");
}

static std::vector<int> union_support(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out = a;
    out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ManyBodyOperator ManyBodyOperator::operator+(const ManyBodyOperator& other) const {
    check_same_basis(other);
    return ManyBodyOperator(basis_, SpMat(mat_ + other.mat_),
                            union_support(support_, other.support_),
                            charge_conserving_ && other.charge_conserving_);
}

ManyBodyOperator ManyBodyOperator::operator-(const ManyBodyOperator& other) const {
    check_same_basis(other);
    return ManyBodyOperator(basis_, SpMat(mat_ - other.mat_),
                            union_support(support_, other.support_),
                            charge_conserving_ && other.charge_conserving_);
}

ManyBodyOperator ManyBodyOperator::operator*(const ManyBodyOperator& other) const {
    check_same_basis(other);
    return ManyBodyOperator(basis_, SpMat(mat_ * other.mat_),
                            union_support(support_, other.support_),
                            charge_conserving_ && other.charge_conserving_);
}

ManyBodyOperator ManyBodyOperator::scaled(cplx factor) const {
    return ManyBodyOperator(basis_, SpMat(factor * mat_), support_, charge_conserving_);
}

cplx ManyBodyOperator::expectation(const Vec& v) const { return v.dot(mat_ * v); }

double ManyBodyOperator::frobenius_norm() const { return mat_.norm(); }

double ManyBodyOperator::max_abs_entry() const {
    double m = 0;
    for (int k = 0; k < mat_.outerSize(); ++k)
        for (SpMat::InnerIterator it(mat_, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

double ManyBodyOperator::operator_norm() const {
    const int d = dim();
    if (d == 0) return 0.0;
    if (d <= 400) {
        Eigen::BDCSVD<Mat> svd(dense());
        return svd.singularValues()(0);
    }
    // power iteration on A^dagger A with a fixed seed
    std::mt19937 gen(12345);
    std::normal_distribution<double> dist;
    Vec v(d);
    for (int i = 0; i < d; ++i) v(i) = cplx(dist(gen), dist(gen));
    v.normalize();
    double prev = 0;
    for (int it = 0; it < 500; ++it) {
        Vec w = mat_.adjoint() * (mat_ * v);
        double nrm = w.norm();
        if (nrm == 0) return 0.0;
        v = w / nrm;
        double est = std::sqrt(nrm);
        if (std::abs(est - prev) <= 1e-12 * std::max(1.0, est)) return est;
        prev = est;
    }
    return prev;
}

bool ManyBodyOperator::is_hermitian(double tol) const {
    return (mat_ - SpMat(mat_.adjoint())).norm() <= tol * std::max(1.0, frobenius_norm());
}

double ManyBodyOperator::max_off_sector_entry() const {
    double m = 0;
    for (int k = 0; k < mat_.outerSize(); ++k)
        for (SpMat::InnerIterator it(mat_, k); it; ++it) {
            const int qr = std::popcount(basis_->state(it.row()));
            const int qc = std::popcount(basis_->state(it.col()));
            if (qr != qc) m = std::max(m, std::abs(it.value()));
        }
    return m;
}

ManyBodyOperator commutator(const ManyBodyOperator& A, const ManyBodyOperator& B) {
    ManyBodyOperator C = A * B - B * A;
    if (C.max_abs_entry() == 0.0)
        return ManyBodyOperator(A.basis(), SpMat(C.dim(), C.dim()), {},
                                A.charge_conserving() && B.charge_conserving());
    return C;
}

ManyBodyOperator charge_operator(const Region& X, BasisPtr basis) {
    const int dim = basis->dim();
    SpMat m(dim, dim);
    std::vector<Eigen::Triplet<cplx>> trips;
    for (int i = 0; i < dim; ++i) {
        int q = basis->charge_in(basis->state(i), X);
        if (q) trips.emplace_back(i, i, cplx(q, 0.0));
    }
    m.setFromTriplets(trips.begin(), trips.end());
    return ManyBodyOperator(std::move(basis), std::move(m), X.sites(), true);
}

ManyBodyOperator number_operator(int site, BasisPtr basis) {
    const int dim = basis->dim();
    SpMat m(dim, dim);
    std::vector<Eigen::Triplet<cplx>> trips;
    for (int i = 0; i < dim; ++i)
        if (basis->occupied(basis->state(i), site)) trips.emplace_back(i, i, cplx(1.0, 0.0));
    m.setFromTriplets(trips.begin(), trips.end());
    return ManyBodyOperator(std::move(basis), std::move(m), {site}, true);
}

ManyBodyOperator gauge_unitary(const std::vector<double>& theta, BasisPtr basis) {
    if (static_cast<int>(theta.size()) != basis->n())
        throw std::invalid_argument("gauge_unitary: one angle per site required");
    const int dim = basis->dim();
    SpMat m(dim, dim);
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(dim);
    for (int i = 0; i < dim; ++i) {
        double phase = 0;
        for (int x = 0; x < basis->n(); ++x)
            if (basis->occupied(basis->state(i), x)) phase += theta[x];
        trips.emplace_back(i, i, std::exp(cplx(0.0, phase)));
    }
    m.setFromTriplets(trips.begin(), trips.end());
    return ManyBodyOperator(std::move(basis), std::move(m), {}, true);
}

} // namespace blochlab
