#ifndef BLOCHLAB_MANYBODY_HPP
#define BLOCHLAB_MANYBODY_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blochlab/lattice.hpp"

namespace blochlab {

using cplx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cplx>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct SiteOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BasisMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Occupation-number basis of n fermionic sites, optionally restricted to a
// fixed total charge N. Bit (n-1-x) of a state word holds the occupation of
// site x, so ascending word order is lexicographic order on the bitstrings
// written site-0 first; the basis is reproducible bit for bit.
class FockBasis {
  public:
    static std::shared_ptr<const FockBasis> full(int n);
    static std::shared_ptr<const FockBasis> fixed_charge(int n, int N);

    int n() const { return n_; }
    std::optional<int> sector() const { return sector_; }
    int dim() const { return static_cast<int>(states_.size()); }
    const std::vector<std::uint64_t>& states() const { return states_; }
    std::uint64_t state(int i) const { return states_[i]; }

    // -1 if the word is not in this basis
    int index_of(std::uint64_t state) const;

    bool occupied(std::uint64_t state, int site) const {
        return (state >> (n_ - 1 - site)) & 1u;
    }
    int charge_in(std::uint64_t state, const Region& X) const;

    std::string bitstring(std::uint64_t state) const;

  private:
    FockBasis(int n, std::optional<int> sector);
    int n_;
    std::optional<int> sector_;
    std::vector<std::uint64_t> states_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

struct FermiOp {
    int site;
    bool create;
};

// One product of fermionic factors; factors act right to left.
struct Monomial {
    cplx coeff;
    std::vector<FermiOp> factors;

    int creator_count() const;
    int annihilator_count() const;
    bool balanced() const { return creator_count() == annihilator_count(); }
};

// A polynomial in creation/annihilation operators with tracked support.
// twist_sites marks the sites whose factors pick up e^{+is} (annihilators)
// and e^{-is} (creators) under the bond twist; empty means untwisted.
struct LocalTerm {
    std::vector<Monomial> monomials;
    std::vector<int> twist_sites;

    std::vector<int> support_sites() const;
    Region support(const Lattice& lat) const { return Region(lat, support_sites()); }
    int diameter(const Lattice& lat) const;

    bool is_even() const;
    bool is_zero() const { return monomials.empty(); }

    LocalTerm dagger() const;
    LocalTerm scaled(cplx factor) const;
    LocalTerm plus(const LocalTerm& other) const;

    // net e^{is} winding of a monomial over the twist sites
    int twist_weight(const Monomial& m) const;
    LocalTerm twisted(double s) const;
    LocalTerm twist_derivative(int order) const;

    // keeps exactly the monomials with equal creator/annihilator counts
    LocalTerm gauge_averaged() const;

    // numeric hermiticity check on the compacted support
    bool is_hermitian(double tol = 1e-12) const;
};

LocalTerm gauge_average(const LocalTerm& term);

// canonical text form, e.g. `1 * c(0) a(1) + (0,-0.5) * a(2)`
std::string to_text(const LocalTerm& term);
LocalTerm term_from_text(const std::string& text);

// Sparse matrix realization of an observable on a FockBasis, with declared
// support and a charge-conservation flag.
class ManyBodyOperator {
  public:
    ManyBodyOperator(BasisPtr basis, SpMat mat, std::vector<int> support,
                     bool charge_conserving);

    static ManyBodyOperator realize(const LocalTerm& term, BasisPtr basis);
    static ManyBodyOperator zero(BasisPtr basis);
    static ManyBodyOperator identity(BasisPtr basis);
    static ManyBodyOperator from_dense(BasisPtr basis, const Mat& m,
                                       std::vector<int> support = {},
                                       bool charge_conserving = false);

    const BasisPtr& basis() const { return basis_; }
    const SpMat& matrix() const { return mat_; }
    int dim() const { return static_cast<int>(mat_.rows()); }
    const std::vector<int>& support() const { return support_; }
    bool charge_conserving() const { return charge_conserving_; }

    Mat dense() const { return Mat(mat_); }
    ManyBodyOperator adjoint() const;

    ManyBodyOperator operator+(const ManyBodyOperator& other) const;
    ManyBodyOperator operator-(const ManyBodyOperator& other) const;
    ManyBodyOperator operator*(const ManyBodyOperator& other) const;
    ManyBodyOperator scaled(cplx factor) const;

    Vec apply(const Vec& v) const { return mat_ * v; }
    cplx expectation(const Vec& v) const;

    double frobenius_norm() const;
    double max_abs_entry() const;
    // spectral norm; dense for small dimensions, power iteration otherwise
    double operator_norm() const;

    bool is_hermitian(double tol = 1e-12) const;
    // largest |entry| connecting basis states of different total charge
    double max_off_sector_entry() const;

  private:
    void check_same_basis(const ManyBodyOperator& other) const;
    BasisPtr basis_;
    SpMat mat_;
    std::vector<int> support_;
    bool charge_conserving_;
};

// AB - BA, support = union of supports (empty if the result vanishes)
ManyBodyOperator commutator(const ManyBodyOperator& A, const ManyBodyOperator& B);

// diagonal charge Q_X = sum_{x in X} q_x
ManyBodyOperator charge_operator(const Region& X, BasisPtr basis);
ManyBodyOperator number_operator(int site, BasisPtr basis);

// diagonal unitary exp(i sum_x theta_x q_x)
ManyBodyOperator gauge_unitary(const std::vector<double>& theta, BasisPtr basis);

std::uint64_t binomial(int n, int k);

} // namespace blochlab

#endif
