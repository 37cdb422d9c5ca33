#pragma once

#include "ohlab/numkit.hpp"

#include <array>
#include <functional>

namespace ohlab {

// ---- weighted +2 / +1 quotients -------------------------------------------

// Norm of k in L2(g nu) +2 L2(h nu): (sum w |k|^2 / (1/g + 1/h))^(1/2).
double l2_plus2_norm(const RealVector& k, const RealVector& g_dens, const RealVector& h_dens,
                     const RealVector& weights);
double l2_plus2_norm(const RealVector& k, const RealVector& g_dens, const RealVector& h_dens,
                     const QuadGrid& grid, Weight weight);

struct QuotientResult {
  double value = 0.0;
  double lambda = 0.0;  // multiplier at the optimum (0 or inf for a one-leg split)
  bool converged = false;
};

// Golden-section search in log(lambda) over [1e-6, 1e6] after a coarse scan.
// Returns the best value and the lambda attaining it.
QuotientResult minimise_over_multiplier(const std::function<double(double)>& objective, double tol);

// inf ||f1||_{L2(wa)} + ||f2||_{L2(wb)} over f1 + f2 = k. Row i of k holds the
// vector value at node i. For fixed lambda the weighted problem
// ||f1||^2 + lambda ||f2||^2 splits per node; lambda is then searched.
QuotientResult plus1_norm(const ComplexMatrix& k, const RealVector& wa, const RealVector& wb, double tol);

// ---- G_n and F_n -----------------------------------------------------------

// Coset (f, g) + ker Q of L2(nu1; l2^n) (+)_1 L2(nu2; l2^n), Q(f,g) = f + g.
class GElement {
 public:
  GElement(QuadGrid grid, ComplexMatrix f, ComplexMatrix g);

  const QuadGrid& grid() const { return grid_; }
  const ComplexMatrix& f() const { return f_; }
  const ComplexMatrix& g() const { return g_; }
  Index n() const { return f_.cols(); }
  ComplexMatrix sum() const { return f_ + g_; }
  // True when f + g does not depend on the node.
  bool in_f(double tol = 1e-12) const;

 private:
  QuadGrid grid_;
  ComplexMatrix f_;
  ComplexMatrix g_;
};

QuotientResult quotient_norm_l1(const GElement& x, double tol);

// sum_k a_k f_k with f_k = (sqrt(t) e_k, (1 - sqrt(t)) e_k).
GElement f_combination(const QuadGrid& grid, const ComplexVector& a);

// Norm of the constant 1 in L2(nu1) +1 L2(nu2): ||sum a_k f_k|| = c_F ||a||_2.
double f_normalisation(const QuadGrid& grid, double tol);

// ---- two-dimensional pieces ------------------------------------------------

struct TensorGrid {
  QuadGrid t;
  QuadGrid s;
  RealMatrix mu() const { return t.mu_weights() * s.mu_weights().transpose(); }
  RealMatrix t_nodes() const { return t.nodes().replicate(1, s.size()); }
  RealMatrix s_nodes() const { return s.nodes().transpose().replicate(t.size(), 1); }
};
TensorGrid make_tensor_grid(int resolution, Interval t_region, Interval s_region);

// int_R 1/(ts + (1-t)(1-s)) dmu(t) dmu(s)
double cross_density_mass(const TensorGrid& g);

struct DiagLowerResult {
  int n = 0;
  double delta = 0.0;
  double mass = 0.0;      // int_I v dmu dmu (the functional before rescaling)
  double f_norm = 0.0;    // ||f||_{L2(nu1 x nu1)}
  double g_norm = 0.0;    // ||g||_{L2(nu2 x nu2)}
  double h_eps = 0.0;     // ||h||_{L2(nu1) (x)_eps L2(nu2)}
  double k_eps = 0.0;     // ||k||_{L2(nu2) (x)_eps L2(nu1)}
  double h_l2_sq = 0.0;   // ||h||^2_{L2(nu1 x nu2)}
  double scale = 0.0;     // divisor making every constraint hold
  double lower = 0.0;     // sqrt(n) * mass / scale
};

// Certified lower bound for ||sum_i f_i (x) f_i|| in the projective tensor
// product: the test quadruple is rescaled by its measured norms.
DiagLowerResult g_tensor_diag_lower(int n, int resolution);

struct UpperResult {
  double delta = 0.0;
  std::array<double, 4> region_mass{};    // diagonal-type regions
  std::array<double, 4> cross_product{};  // ||1_A|| ||1_B|| of the cross pieces
  double diag_part = 0.0;                 // sqrt2 ||a||_2 sum sqrt(mass)
  double cross_part = 0.0;                // ||a||_S1 sum products
  double upper = 0.0;
};

// Upper bound from the four diagonal regions (via +2, times sqrt2) plus the
// four cross pieces (projective products of one-dimensional norms).
UpperResult g_tensor_norm_upper(const ComplexMatrix& a, int resolution);

// sup over unit a of the bound above divided by ||a||_2, using ||a||_S1 <= sqrt(n) ||a||_2.
double g_tensor_upper_constant(int n, int resolution);

struct CalcQuantity {
  double plus1 = 0.0;      // exact +1 quotient norm by the multiplier method
  double via_plus2 = 0.0;  // sqrt2 * (+2 norm)
  double bound = 0.0;
};
struct CalcResult {
  double delta = 0.0;
  std::array<CalcQuantity, 4> q{};  // [d,1/2]x[1/2,1-d], [1/2,1-d]x[d,1/2], [0,1/2]^2, [1/2,1]^2
};
// +1 norms of region indicators in L2(nu1 x nu1) +1 L2(nu2 x nu2).
CalcResult calc_integrals(double delta, int resolution, double tol);

// ---- discrete K(N,d) and RK_t(N,d) ----------------------------------------

// M_m with normalised trace tau = tr/m and a positive definite density d.
// t = infinity selects K(N,d); finite t selects RK_t(N,d).
class DiscreteKSpace {
 public:
  explicit DiscreteKSpace(ComplexMatrix d, double t_param = kInf);

  Index m() const { return d_.rows(); }
  const ComplexMatrix& d() const { return d_; }
  double t() const { return t_; }
  const RealVector& d_eigs() const { return eigs_; }
  const ComplexMatrix& d_basis() const { return basis_; }
  DiscreteKSpace with_t(double t) const { return DiscreteKSpace(d_, t); }

 private:
  ComplexMatrix d_;
  double t_;
  RealVector eigs_;
  ComplexMatrix basis_;
};

double tau_norm1(const ComplexMatrix& x);  // tau(|x|)
double tau_norm2(const ComplexMatrix& x);  // tau(x* x)^(1/2)

struct KSplit {
  QuotientResult result;
  ComplexMatrix u, v;  // d u + v d = x
  ComplexMatrix z;     // multiplier with d z = u/||u||_F, z d ~ v/||v||_F
};

// inf { ||u||_2 + ||v||_2 : d u + v d = x }
KSplit k_quotient_split(const DiscreteKSpace& s, const ComplexMatrix& x, double tol);
inline QuotientResult k_quotient_norm(const DiscreteKSpace& s, const ComplexMatrix& x, double tol) {
  return k_quotient_split(s, x, tol).result;
}

struct KtResult {
  double value = 0.0;  // objective of a feasible decomposition (upper bound)
  double lower = 0.0;  // certified by a dual vector
  int iterations = 0;
  bool converged = false;
  ComplexMatrix x1, x2, x3;
};

// inf t||x1||_1 + sqrt(t)||x2||_2 + sqrt(t)||x3||_2 over x1 + d x2 + x3 d = x,
// by primal-dual splitting. Stops when (value - lower) <= tol * value.
KtResult kk_t_norm(const DiscreteKSpace& s, const ComplexMatrix& x, double tol, int max_iterations = 100000);

// max(||y||_inf, sqrt(t)||d y||_2, sqrt(t)||y d||_2): the dual norm for the
// pairing <<y, x>>_t = t tau(y* x). Here E(z) = tau(d z d) on the tracial model.
double kk_dual_norm(const DiscreteKSpace& s, const ComplexMatrix& y);
cplx kk_pairing(const DiscreteKSpace& s, const ComplexMatrix& y, const ComplexMatrix& x);

// Largest |<<y, x>>_t| / ||x||_t over rank-one, d(dy), (yd)d and random trial x.
double kk_duality_probe(const DiscreteKSpace& s, const ComplexMatrix& y, int random_trials, Rng& rng,
                        double tol);

}  // namespace ohlab
