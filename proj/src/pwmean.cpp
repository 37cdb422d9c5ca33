#include "ohlab/pwmean.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

namespace ohlab {

CommutingPair::CommutingPair(ComplexMatrix basis, RealVector a_eigs, RealVector b_eigs)
    : v_(std::move(basis)), a_(std::move(a_eigs)), b_(std::move(b_eigs)) {
  const Index n = a_.size();
  if (b_.size() != n || v_.rows() != n || v_.cols() != n)
    throw std::invalid_argument("CommutingPair: dimension mismatch");
  if ((a_.array() <= 0.0).any() || (b_.array() <= 0.0).any() || !a_.allFinite() || !b_.allFinite())
    throw std::invalid_argument("CommutingPair: eigenvalues must be strictly positive");
  const double unitarity = (v_.adjoint() * v_ - ComplexMatrix::Identity(n, n)).norm();
  if (unitarity > 1e-10 * std::max<double>(1.0, double(n)))
    throw std::invalid_argument("CommutingPair: basis is not unitary");
  const ComplexMatrix a = A(), b = B();
  const double comm = spectral_norm(ComplexMatrix(a * b - b * a));
  if (comm > 1e-10 * spectral_norm(a) * spectral_norm(b))
    throw std::invalid_argument("CommutingPair: A and B do not commute");
}

ComplexMatrix CommutingPair::with_spectrum(const RealVector& lambda) const {
  return v_ * lambda.cast<cplx>().asDiagonal() * v_.adjoint();
}

CommutingPair CommutingPair::from_matrices(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("CommutingPair: size mismatch");
  if (hermitian_defect(a) > 1e-10 || hermitian_defect(b) > 1e-10)
    throw std::invalid_argument("CommutingPair: A and B must be Hermitian");
  const double na = spectral_norm(a), nb = spectral_norm(b);
  if (spectral_norm(ComplexMatrix(a * b - b * a)) > 1e-10 * na * nb)
    throw std::invalid_argument("CommutingPair: A and B do not commute");
  // A generic combination separates the joint eigenspaces.
  const ComplexMatrix mix = a / na + (0.7071067811865476 * kPi / 3.0) * b / nb;
  const HermitianEig e = hermitian_eig(mix);
  const ComplexMatrix& v = e.vectors;
  const RealVector ae = (v.adjoint() * a * v).diagonal().real();
  const RealVector be = (v.adjoint() * b * v).diagonal().real();
  CommutingPair p(v, ae, be);
  if ((p.A() - a).norm() > 1e-9 * a.norm() || (p.B() - b).norm() > 1e-9 * b.norm())
    throw std::runtime_error("CommutingPair: joint diagonalisation failed");
  return p;
}

CommutingPair CommutingPair::scalars(double a, double b) {
  return CommutingPair(ComplexMatrix::Identity(1, 1), RealVector::Constant(1, a), RealVector::Constant(1, b));
}

double geomean_form(const CommutingPair& p, const ComplexVector& x) {
  if (x.size() != p.dim()) throw std::invalid_argument("geomean_form: dimension mismatch");
  const ComplexVector c = p.basis().adjoint() * x;
  return ((p.a_eigs().array() * p.b_eigs().array()).sqrt() * c.array().abs2()).sum();
}

namespace {

struct Inverses {
  ComplexMatrix a_inv;
  ComplexMatrix b_inv;
};

Inverses inverses(const CommutingPair& p) {
  return {p.with_spectrum(p.a_eigs().cwiseInverse()), p.with_spectrum(p.b_eigs().cwiseInverse())};
}

// <x, (t A^-1 + (1-t) B^-1)^-1 x>
double parallel_value(const Inverses& inv, const ComplexVector& x, double t) {
  const ComplexMatrix s = t * inv.a_inv + (1.0 - t) * inv.b_inv;
  const ComplexVector z = s.ldlt().solve(x);
  return x.dot(z).real();
}

}  // namespace

double pw_primal(const CommutingPair& p, const ComplexVector& x, const QuadGrid& grid) {
  if (x.size() != p.dim()) throw std::invalid_argument("pw_primal: dimension mismatch");
  const Inverses inv = inverses(p);
  double total = 0.0;
  for (Index i = 0; i < grid.size(); ++i) total += grid.mu_weight(i) * parallel_value(inv, x, grid.node(i));
  return total;
}

DualResult pw_dual_solve(const CommutingPair& p, const ComplexVector& y, const QuadGrid& grid, double reg) {
  if (y.size() != p.dim()) throw std::invalid_argument("pw_dual: dimension mismatch");
  if (reg < 0.0) throw std::invalid_argument("pw_dual: reg must be >= 0");
  const Index n = p.dim();
  const ComplexMatrix a = p.A();
  const ComplexMatrix b_inv = p.with_spectrum(p.b_eigs().cwiseInverse());
  const ComplexMatrix a_half = p.with_spectrum(p.a_eigs().cwiseSqrt());
  const ComplexMatrix b_half = p.with_spectrum(p.b_eigs().cwiseSqrt());
  const ComplexMatrix ab_a = a * b_inv * a;

  // g = (1-t)/t B^-1 A f turns the objective into sum_i w_i f_i* P_i f_i.
  ComplexMatrix k = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < grid.size(); ++i) {
    const double t = grid.node(i);
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("pw_dual: grid nodes must lie in (0,1)");
    const ComplexMatrix pi = a / t + ((1.0 - t) / (t * t)) * ab_a;
    const ComplexMatrix sol = pi.ldlt().solve(a_half);
    k.noalias() += (grid.mu_weight(i) / (t * t)) * (a_half * sol);
  }
  k = 0.5 * (k + k.adjoint());

  DualResult out;
  const RealVector ev = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(k, Eigen::EigenvaluesOnly).eigenvalues();
  out.condition = ev(ev.size() - 1) / std::max(ev(0), 1e-300);
  if (reg == 0.0 && (ev(0) <= 0.0 || out.condition > 1e14)) {
    std::ostringstream msg;
    msg << "pw_dual: singular KKT system (condition estimate " << out.condition << ")";
    throw std::runtime_error(msg.str());
  }
  const ComplexVector r = b_half * y;
  const ComplexMatrix kr = k + reg * ComplexMatrix::Identity(n, n);
  const ComplexVector lambda = kr.ldlt().solve(r);
  out.value = lambda.dot(k * lambda).real();
  return out;
}

double alpha_normaliser(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha_normaliser: alpha must lie in (0,1)");
  // Split at 1/2; on each half the substitution t = u^k removes the endpoint
  // power, leaving a smooth integrand for Gauss-Legendre.
  const QuadRule leg = gauss_jacobi(64, 0.0, 0.0);
  auto half = [&](double e_near, double e_far) {
    const double k = 1.0 / (1.0 + e_near);
    const double top = std::pow(0.5, 1.0 / k);
    double s = 0.0;
    for (Index i = 0; i < leg.nodes.size(); ++i) {
      const double u = top * leg.nodes(i);
      s += leg.weights(i) * std::pow(1.0 - std::pow(u, k), e_far);
    }
    return k * top * s;
  };
  return half(-alpha, alpha - 1.0) + half(alpha - 1.0, -alpha);
}

double alpha_mean(const CommutingPair& p, double alpha, const ComplexVector& x, const QuadGrid& grid) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha_mean: alpha must lie in (0,1)");
  if (x.size() != p.dim()) throw std::invalid_argument("alpha_mean: dimension mismatch");
  const int n = static_cast<int>(std::min<Index>(grid.size(), 512));
  const QuadRule rule = gauss_jacobi(n, -alpha, alpha - 1.0);
  const Inverses inv = inverses(p);
  double total = 0.0;
  for (Index i = 0; i < rule.nodes.size(); ++i) total += rule.weights(i) * parallel_value(inv, x, rule.nodes(i));
  return total;
}

CommutingPair random_commuting_pair(Index dim, double lo, double hi, Rng& rng) {
  const ComplexMatrix v = random_unitary(dim, rng);
  RealVector a(dim), b(dim);
  const double l0 = std::log(lo), l1 = std::log(hi);
  for (Index i = 0; i < dim; ++i) a(i) = std::exp(rng.uniform(l0, l1));
  for (Index i = 0; i < dim; ++i) b(i) = std::exp(rng.uniform(l0, l1));
  return CommutingPair(v, a, b);
}

}  // namespace ohlab
