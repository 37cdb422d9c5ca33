#pragma once

#include "ohlab/numkit.hpp"

#include <vector>

namespace ohlab {

// (x_1, ..., x_n), all m x m: the coefficients of sum_k x_k (x) e_k.
class MatrixTuple {
 public:
  explicit MatrixTuple(std::vector<ComplexMatrix> x);

  Index n() const { return static_cast<Index>(x_.size()); }
  Index m() const { return m_; }
  const ComplexMatrix& operator[](Index k) const { return x_[static_cast<std::size_t>(k)]; }
  const std::vector<ComplexMatrix>& items() const { return x_; }

 private:
  std::vector<ComplexMatrix> x_;
  Index m_ = 0;
};

// ||sum x_k* x_k||^(1/2)
double column_norm(const MatrixTuple& t);
// ||sum x_k x_k*||^(1/2)
double row_norm(const MatrixTuple& t);
// ||sum x_k (x) conj(x_k)||^(1/2)
double oh_norm(const MatrixTuple& t);

struct SupFormResult {
  double value = 0.0;
  double gap = 0.0;      // last relative change of the best restart
  int iterations = 0;    // summed over restarts
  bool converged = false;
};

// Alternating maximisation of (sum tr(a x_k b x_k*))^(1/2) over positive a, b
// with ||a||_2 = ||b||_2 = 1. Each half-step is exact since the objective is
// linear in the free variable. Iterates are kept above 1e-9 * I.
SupFormResult oh_norm_sup_form(const MatrixTuple& t, int restarts, double tol, std::uint64_t seed,
                               int max_iterations = 20000);

struct HolderCheck {
  double lhs = 0.0;  // ||a x b||_S2
  double rhs = 0.0;  // ||a||_S4 ||x||_inf ||b||_S4
};
HolderCheck holder_level1_check(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexMatrix& b);

// (sum_j u_kj x_j)_k
MatrixTuple mix_coefficients(const MatrixTuple& t, const ComplexMatrix& u);
MatrixTuple adjoint_entries(const MatrixTuple& t);
MatrixTuple scaled(const MatrixTuple& t, cplx c);

}  // namespace ohlab
