#include "ohlab/numkit.hpp"

#include <Eigen/Eigenvalues>

namespace ohlab {

QuadGrid::QuadGrid(RealVector nodes, RealVector mu_weights, Interval region)
    : nodes_(std::move(nodes)), mu_(std::move(mu_weights)), region_(region) {
  if (nodes_.size() != mu_.size()) throw std::invalid_argument("QuadGrid: size mismatch");
}

RealVector QuadGrid::weights(Weight w) const {
  switch (w) {
    case Weight::mu:
      return mu_;
    case Weight::nu1:
      return mu_.array() / nodes_.array();
    case Weight::nu2:
      return mu_.array() / (1.0 - nodes_.array());
  }
  return mu_;
}

QuadGrid make_grid(int resolution, Interval region) {
  if (resolution < 2) throw std::invalid_argument("make_grid: resolution must be >= 2");
  if (!(region.lo < region.hi)) throw std::invalid_argument("make_grid: degenerate region");
  if (region.lo < 0.0 || region.hi > 1.0) throw std::invalid_argument("make_grid: region outside [0,1]");
  const double a = std::asin(std::sqrt(region.lo));
  const double b = std::asin(std::sqrt(region.hi));
  const double h = (b - a) / resolution;
  RealVector nodes(resolution), mu(resolution);
  for (int i = 0; i < resolution; ++i) {
    const double lo = a + h * i;
    const double hi = (i + 1 == resolution) ? b : a + h * (i + 1);
    const double s = std::sin(0.5 * (lo + hi));
    nodes(i) = s * s;
    mu(i) = (2.0 / kPi) * (hi - lo);
  }
  return QuadGrid(std::move(nodes), std::move(mu), region);
}

double integrate(const RealVector& f, const QuadGrid& grid, Weight weight) {
  if (f.size() != grid.size()) throw std::invalid_argument("integrate: size mismatch");
  if (!f.allFinite()) throw std::invalid_argument("integrate: non-finite integrand value");
  return f.dot(grid.weights(weight));
}

QuadRule gauss_jacobi(int n, double p, double q) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be >= 1");
  if (!(p > -1.0 && q > -1.0)) throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
  // On x = 2t - 1 the density is (1-x)^a (1+x)^b.
  const double a = q, b = p, ab = a + b;
  RealVector diag(n), sub(std::max(n - 1, 1));
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag(k) = (b - a) / (ab + 2.0);
    } else {
      diag(k) = (b * b - a * a) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    double beta;
    if (k == 1) {
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * k + ab;
      beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(beta);
  }
  QuadRule rule;
  if (n == 1) {
    rule.nodes = RealVector::Constant(1, 0.5 * (1.0 + diag(0)));
    rule.weights = RealVector::Ones(1);
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw std::runtime_error("gauss_jacobi: eigensolver failed");
  rule.nodes = 0.5 * (1.0 + es.eigenvalues().array());
  rule.weights = es.eigenvectors().row(0).transpose().array().square();
  rule.weights /= rule.weights.sum();
  return rule;
}

double hermitian_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return kInf;
  const double scale = a.norm();
  if (scale == 0.0) return 0.0;
  return (a - a.adjoint()).norm() / scale;
}

HermitianEig hermitian_eig(const ComplexMatrix& a) {
  const double defect = hermitian_defect(a);
  if (defect > 1e-10) {
    std::ostringstream msg;
    msg << "hermitian_eig: input is not Hermitian (relative asymmetry " << defect << ")";
    throw std::invalid_argument(msg.str());
  }
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  while (u == 0.0) u = uniform();
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  spare_ = r * std::sin(2.0 * kPi * v);
  has_spare_ = true;
  return r * std::cos(2.0 * kPi * v);
}

ComplexMatrix random_complex(Index rows, Index cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

ComplexVector random_complex_vector(Index n, Rng& rng) {
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v;
}

ComplexMatrix random_hermitian(Index n, Rng& rng) {
  const ComplexMatrix g = random_complex(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix random_unitary(Index n, Rng& rng) {
  const ComplexMatrix g = random_complex(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR();
  // Fix column phases so the law is Haar.
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexMatrix random_positive_definite(Index n, Rng& rng, double eps) {
  const ComplexMatrix g = random_complex(n, n, rng);
  ComplexMatrix p = g * g.adjoint();
  p /= p.norm();
  p += eps * ComplexMatrix::Identity(n, n);
  return p;
}

}  // namespace ohlab
