#include "ohlab/opspace.hpp"

#include <algorithm>

namespace ohlab {

MatrixTuple::MatrixTuple(std::vector<ComplexMatrix> x) : x_(std::move(x)) {
  if (x_.empty()) throw std::invalid_argument("MatrixTuple: empty tuple");
  m_ = x_.front().rows();
  for (const auto& xk : x_) {
    if (xk.rows() != m_ || xk.cols() != m_)
      throw std::invalid_argument("MatrixTuple: entries must all be m x m");
  }
}

double column_norm(const MatrixTuple& t) {
  ComplexMatrix s = ComplexMatrix::Zero(t.m(), t.m());
  for (const auto& x : t.items()) s.noalias() += x.adjoint() * x;
  return std::sqrt(spectral_norm(s));
}

double row_norm(const MatrixTuple& t) {
  ComplexMatrix s = ComplexMatrix::Zero(t.m(), t.m());
  for (const auto& x : t.items()) s.noalias() += x * x.adjoint();
  return std::sqrt(spectral_norm(s));
}

double oh_norm(const MatrixTuple& t) {
  const Index m = t.m();
  ComplexMatrix s = ComplexMatrix::Zero(m * m, m * m);
  for (const auto& x : t.items()) s += kron(x, conj(x));
  return std::sqrt(spectral_norm(s));
}

namespace {

constexpr double kFloor = 1e-9;

ComplexMatrix normalised_psd(ComplexMatrix m) {
  m = 0.5 * (m + m.adjoint());
  m.diagonal().array() += kFloor * std::max(m.norm(), 1e-300);
  const double nrm = m.norm();
  if (nrm == 0.0) return ComplexMatrix::Identity(m.rows(), m.cols()) / std::sqrt(double(m.rows()));
  return m / nrm;
}

double objective(const MatrixTuple& t, const ComplexMatrix& a, const ComplexMatrix& b) {
  double v = 0.0;
  for (const auto& x : t.items()) v += (a * x * b * x.adjoint()).trace().real();
  return std::max(v, 0.0);
}

}  // namespace

SupFormResult oh_norm_sup_form(const MatrixTuple& t, int restarts, double tol, std::uint64_t seed,
                               int max_iterations) {
  if (restarts < 1) throw std::invalid_argument("oh_norm_sup_form: restarts must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("oh_norm_sup_form: tol must be positive");
  Rng rng(seed);
  const Index m = t.m();
  SupFormResult best;
  best.value = -1.0;
  int total_iterations = 0;
  for (int r = 0; r < restarts; ++r) {
    ComplexMatrix a = normalised_psd(random_positive_definite(m, rng, kFloor));
    ComplexMatrix b;
    double value = 0.0, change = kInf;
    int it = 0;
    for (; it < max_iterations; ++it) {
      ComplexMatrix mb = ComplexMatrix::Zero(m, m);
      for (const auto& x : t.items()) mb.noalias() += x.adjoint() * a * x;
      b = normalised_psd(mb);
      ComplexMatrix na = ComplexMatrix::Zero(m, m);
      for (const auto& x : t.items()) na.noalias() += x * b * x.adjoint();
      a = normalised_psd(na);
      const double next = objective(t, a, b);
      change = std::abs(next - value) / std::max(next, 1e-300);
      value = next;
      if (change < 1e-2 * tol) break;
    }
    total_iterations += it + 1;
    const double root = std::sqrt(value);
    if (root > best.value) {
      best.value = root;
      best.gap = change;
      best.converged = it < max_iterations;
    }
  }
  best.iterations = total_iterations;
  return best;
}

HolderCheck holder_level1_check(const ComplexMatrix& a, const ComplexMatrix& x, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || x.rows() != x.cols() || b.rows() != b.cols() || a.rows() != x.rows() ||
      b.rows() != x.rows())
    throw std::invalid_argument("holder_level1_check: square matrices of equal size required");
  HolderCheck h;
  h.lhs = schatten_norm(a * x * b, 2.0);
  h.rhs = schatten_norm(a, 4.0) * spectral_norm(x) * schatten_norm(b, 4.0);
  return h;
}

MatrixTuple mix_coefficients(const MatrixTuple& t, const ComplexMatrix& u) {
  if (u.rows() != t.n() || u.cols() != t.n()) throw std::invalid_argument("mix_coefficients: u must be n x n");
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(t.n()));
  for (Index k = 0; k < t.n(); ++k) {
    ComplexMatrix y = ComplexMatrix::Zero(t.m(), t.m());
    for (Index j = 0; j < t.n(); ++j) y += u(k, j) * t[j];
    out.push_back(std::move(y));
  }
  return MatrixTuple(std::move(out));
}

MatrixTuple adjoint_entries(const MatrixTuple& t) {
  std::vector<ComplexMatrix> out;
  for (const auto& x : t.items()) out.push_back(x.adjoint());
  return MatrixTuple(std::move(out));
}

MatrixTuple scaled(const MatrixTuple& t, cplx c) {
  std::vector<ComplexMatrix> out;
  for (const auto& x : t.items()) out.push_back(c * x);
  return MatrixTuple(std::move(out));
}

}  // namespace ohlab
