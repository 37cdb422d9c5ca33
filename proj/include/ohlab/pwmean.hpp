#pragma once

#include "ohlab/numkit.hpp"

namespace ohlab {

// Commuting positive invertible A = V diag(a) V*, B = V diag(b) V*.
class CommutingPair {
 public:
  CommutingPair(ComplexMatrix basis, RealVector a_eigs, RealVector b_eigs);

  // Joint diagonalisation of two commuting positive definite matrices.
  static CommutingPair from_matrices(const ComplexMatrix& a, const ComplexMatrix& b);
  static CommutingPair scalars(double a, double b);

  Index dim() const { return a_.size(); }
  const ComplexMatrix& basis() const { return v_; }
  const RealVector& a_eigs() const { return a_; }
  const RealVector& b_eigs() const { return b_; }

  ComplexMatrix A() const { return with_spectrum(a_); }
  ComplexMatrix B() const { return with_spectrum(b_); }
  ComplexMatrix with_spectrum(const RealVector& lambda) const;

  CommutingPair swapped() const { return CommutingPair(v_, b_, a_); }

 private:
  ComplexMatrix v_;
  RealVector a_;
  RealVector b_;
};

// sum_i sqrt(a_i b_i) |<v_i, x>|^2 = <x, (AB)^(1/2) x>
double geomean_form(const CommutingPair& p, const ComplexVector& x);

// mu-integral of the pointwise infimum <x, (t A^-1 + (1-t) B^-1)^-1 x>.
double pw_primal(const CommutingPair& p, const ComplexVector& x, const QuadGrid& grid);

struct DualResult {
  double value = 0.0;
  double condition = 0.0;  // of the reduced KKT matrix
};

// Discretised minimum of int (Af,f)/t + (Bg,g)/(1-t) dmu subject to
// Af/t = Bg/(1-t) pointwise and int A^(1/2) f / t dmu = B^(1/2) y.
// Throws when the reduced system is numerically singular and reg == 0.
DualResult pw_dual_solve(const CommutingPair& p, const ComplexVector& y, const QuadGrid& grid,
                         double reg = 0.0);
inline double pw_dual(const CommutingPair& p, const ComplexVector& y, const QuadGrid& grid,
                      double reg = 0.0) {
  return pw_dual_solve(p, y, grid, reg).value;
}

// int_0^1 t^-alpha (1-t)^(alpha-1) dt, by quadrature.
double alpha_normaliser(double alpha);

// <x, A^(1-alpha) B^alpha x> from the parallel sum integrated against
// t^-alpha (1-t)^(alpha-1) dt / c(alpha). Uses a Gauss-Jacobi rule with
// min(grid.size(), 512) nodes; at alpha = 1/2 these are the grid's own nodes.
double alpha_mean(const CommutingPair& p, double alpha, const ComplexVector& x, const QuadGrid& grid);

// Random commuting pair with eigenvalues log-uniform in [lo, hi].
CommutingPair random_commuting_pair(Index dim, double lo, double hi, Rng& rng);

}  // namespace ohlab
