#pragma once

#include "ohlab/numkit.hpp"

#include <Eigen/SparseCore>

#include <functional>
#include <utility>
#include <vector>

namespace ohlab {

using SparseOperator = Eigen::SparseMatrix<double>;

// Perfect matching of {0, ..., m-1}; each pair stored as (i, j) with i < j.
class PairPartition {
 public:
  PairPartition(int m, std::vector<std::pair<int, int>> pairs);

  int m() const { return m_; }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  // No two pairs (i,j), (k,l) with i < k < j < l.
  bool non_crossing() const;

 private:
  int m_;
  std::vector<std::pair<int, int>> pairs_;
};

inline constexpr int kMaxNcpLength = 20;

// Non-crossing pair partitions in lexicographic order of their pair lists.
// Odd m gives an empty list; m > 20 is rejected.
std::vector<PairPartition> enumerate_ncp(int m);

// Every perfect matching of {0, ..., m-1}, crossing or not; m <= 14.
std::vector<PairPartition> enumerate_pairings(int m);

// Two-point function phi(x_i x_j) stored as a Hermitian positive
// semidefinite matrix.
class CovarianceForm {
 public:
  explicit CovarianceForm(ComplexMatrix pair_values, double tol = 1e-10);

  static CovarianceForm diagonal(const RealVector& variances);

  Index index_dim() const { return p_.rows(); }
  cplx pair_value(Index i, Index j) const { return p_(i, j); }
  const ComplexMatrix& matrix() const { return p_; }
  bool is_real() const { return p_.imag().norm() <= 1e-14 * std::max(1.0, p_.norm()); }

 private:
  ComplexMatrix p_;
};

// Sum over NCP(m) of prod phi(x_{w_i} x_{w_j}); 0 for odd m.
cplx speicher_moment(const CovarianceForm& cov, const std::vector<int>& word);

// phi(x_i x_j) = int f_i conj(f_j) d1 dmu + int conj(f_i) f_j d2 dmu.
CovarianceForm covariance_from_densities(const std::vector<ComplexVector>& fns, const QuadGrid& grid,
                                         const RealVector& d1, const RealVector& d2);

inline constexpr std::size_t kDefaultFockCap = 200000;

// Full Fock space over orthonormal letters 0..L-1, truncated at word length
// `depth`, with length-lexicographic word order. The letters e_i of the
// covariance are represented as e_i = sum_a C_ia f_a with C = G^(1/2).
class TruncatedFock {
 public:
  TruncatedFock(const CovarianceForm& cov, int depth, std::size_t cap = kDefaultFockCap);

  static std::size_t dimension_for(Index letters, int depth);

  Index index_dim() const { return letters_; }
  int depth() const { return depth_; }
  std::size_t dimension() const { return dim_; }
  // Coefficients of e_i in the orthonormal letters: row i of C.
  const RealMatrix& letter_map() const { return c_; }

  std::size_t word_index(const std::vector<int>& word) const;

  // out = s(c) in for s(c) = sum_a c_a (l(f_a) + l*(f_a)).
  void apply_orthonormal(const RealVector& c, const RealVector& in, RealVector& out) const;
  // Coefficients over orthonormal letters of sum_i h_i e_i.
  RealVector orthonormal_coefficients(const RealVector& h) const { return c_.transpose() * h; }

  // Calls emit(row, col, value) for every nonzero entry of s(c).
  template <typename Emit>
  void visit_entries(const RealVector& c, Emit&& emit) const {
    const auto nl = static_cast<std::size_t>(letters_);
    for (int len = 0; len <= depth_; ++len) {
      const auto ul = static_cast<std::size_t>(len);
      for (std::size_t rank = 0; rank < power_[ul]; ++rank) {
        const std::size_t src = offset_[ul] + rank;
        if (len < depth_) {
          // l(f_a) prepends the letter a.
          for (std::size_t a = 0; a < nl; ++a) {
            const double ca = c(static_cast<Index>(a));
            if (ca != 0.0) emit(offset_[ul + 1] + a * power_[ul] + rank, src, ca);
          }
        }
        if (len >= 1) {
          // l*(f_a) strips a leading letter a.
          const std::size_t a = rank / power_[ul - 1];
          const double ca = c(static_cast<Index>(a));
          if (ca != 0.0) emit(offset_[ul - 1] + rank % power_[ul - 1], src, ca);
        }
      }
    }
  }

 private:
  Index letters_;
  int depth_;
  std::size_t dim_;
  std::vector<std::size_t> offset_;  // first index of each word length
  std::vector<std::size_t> power_;   // letters^len
  RealMatrix c_;
};

// s(h) = l(h) + l*(h) for h = sum_i h_i e_i, as a sparse matrix.
SparseOperator build_semicircular(const TruncatedFock& fock, const RealVector& h);

// <Omega, op_1 ... op_m Omega>
cplx vacuum_moment(const TruncatedFock& fock, const std::vector<SparseOperator>& ops);

// Largest |Ritz value| of a symmetric operator after `steps` Lanczos steps.
double lanczos_norm(const std::function<void(const RealVector&, RealVector&)>& apply, std::size_t dim,
                    int steps, std::uint64_t seed);

struct VoiculescuResult {
  double lhs_trunc = 0.0;  // spectral norm of sum_k s(e_k) on the truncated space
  double rhs = 0.0;        // sup_k ||a_k|| + ||sum E a*a||^(1/2) + ||sum E a a*||^(1/2)
  double full_norm = 0.0;  // 2 (sum variances)^(1/2)
  std::size_t dimension = 0;
};

// Free letters with the given variances. Throws if the Fock dimension
// exceeds cap (the message names the cap needed).
VoiculescuResult voiculescu_check(const RealVector& variances, int depth, std::size_t cap = kDefaultFockCap,
                                  std::uint64_t seed = 1);

// int f g sqrt(d1 d2) dmu
cplx oh_pairing(const ComplexVector& f, const ComplexVector& g, const QuadGrid& grid, const RealVector& d1,
                const RealVector& d2);

}  // namespace ohlab
