#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ohlab {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed subinterval of [0,1].
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// mu is the arcsine law dt/(pi sqrt(t(1-t))); nu1 = mu/t, nu2 = mu/(1-t).
enum class Weight { mu, nu1, nu2 };

class QuadGrid {
 public:
  QuadGrid(RealVector nodes, RealVector mu_weights, Interval region);

  Index size() const { return nodes_.size(); }
  const RealVector& nodes() const { return nodes_; }
  const RealVector& mu_weights() const { return mu_; }
  double node(Index i) const { return nodes_(i); }
  double mu_weight(Index i) const { return mu_(i); }
  double nu1_weight(Index i) const { return mu_(i) / nodes_(i); }
  double nu2_weight(Index i) const { return mu_(i) / (1.0 - nodes_(i)); }
  RealVector weights(Weight w) const;
  Interval region() const { return region_; }

  // Evaluate a scalar function of t at every node.
  template <typename F>
  RealVector sample(F&& f) const {
    RealVector out(size());
    for (Index i = 0; i < size(); ++i) out(i) = f(nodes_(i));
    return out;
  }

 private:
  RealVector nodes_;
  RealVector mu_;
  Interval region_;
};

// Midpoint cells uniform in theta, t = sin^2(theta). Each weight is the exact
// mu-mass (2/pi) * dtheta of its cell, so the weights over [0,1] sum to one.
QuadGrid make_grid(int resolution, Interval region = {});

// Sum of f(t_i) times the chosen weight. For nu1/nu2 the caller clips the
// region away from the singular endpoint or supplies an f that vanishes there.
double integrate(const RealVector& f, const QuadGrid& grid, Weight weight = Weight::mu);

// Gauss rule for the density t^p (1-t)^q on [0,1] (Golub-Welsch). Weights are
// normalised to sum to one. p = q = -1/2 reproduces the nodes of make_grid.
struct QuadRule {
  RealVector nodes;
  RealVector weights;
};
QuadRule gauss_jacobi(int n, double p, double q);

template <typename Derived>
RealVector singular_values(const Eigen::MatrixBase<Derived>& a) {
  using Plain = typename Derived::PlainObject;
  if (a.size() == 0) return RealVector();
  if (a.rows() <= 16 && a.cols() <= 16) return Eigen::JacobiSVD<Plain>(a).singularValues();
  return Eigen::BDCSVD<Plain>(a).singularValues();
}

// (sum sigma_i^p)^(1/p); p = infinity gives the spectral norm.
template <typename Derived>
double schatten_norm(const Eigen::MatrixBase<Derived>& a, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("schatten_norm: p must be >= 1");
  const RealVector s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  if (std::isinf(p)) return s(0);
  const double s0 = s(0);
  return s0 * std::pow((s.array() / s0).pow(p).sum(), 1.0 / p);
}

template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& a) {
  return schatten_norm(a, kInf);
}

template <typename DA, typename DB>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                                        a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <typename Derived>
typename Derived::PlainObject conj(const Eigen::MatrixBase<Derived>& a) {
  return a.conjugate();
}

// Relative asymmetry ||A - A*||_F / ||A||_F (0 for the zero matrix).
double hermitian_defect(const ComplexMatrix& a);

struct HermitianEig {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns
};

// Rejects input whose hermitian_defect exceeds 1e-10.
HermitianEig hermitian_eig(const ComplexMatrix& a);

// f(A) for Hermitian A via its spectral decomposition.
template <typename F>
ComplexMatrix hermitian_function(const ComplexMatrix& a, F&& f) {
  const HermitianEig e = hermitian_eig(a);
  RealVector fv = e.values.unaryExpr([&](double x) { return f(x); });
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

// Inner product antilinear in the first argument.
inline cplx inner(const ComplexVector& x, const ComplexVector& y) { return x.dot(y); }

// Deterministic generator. Uniforms are built from raw 64-bit draws so the
// stream is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  cplx complex_normal() { return {normal() * M_SQRT1_2, normal() * M_SQRT1_2}; }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }
  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

ComplexMatrix random_complex(Index rows, Index cols, Rng& rng);
ComplexVector random_complex_vector(Index n, Rng& rng);
ComplexMatrix random_hermitian(Index n, Rng& rng);
ComplexMatrix random_unitary(Index n, Rng& rng);
// G G* / ||G G*||_F + eps I for a Ginibre G.
ComplexMatrix random_positive_definite(Index n, Rng& rng, double eps = 0.0);

}  // namespace ohlab
