#include "ohlab/freeprob.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

namespace ohlab {

PairPartition::PairPartition(int m, std::vector<std::pair<int, int>> pairs) : m_(m), pairs_(std::move(pairs)) {
  if (m_ < 0 || m_ % 2 != 0 || static_cast<int>(pairs_.size()) * 2 != m_)
    throw std::invalid_argument("PairPartition: m must be even and match the pair count");
  std::vector<int> seen(static_cast<std::size_t>(m_), 0);
  for (auto& p : pairs_) {
    if (p.first > p.second) std::swap(p.first, p.second);
    if (p.first < 0 || p.second >= m_ || p.first == p.second)
      throw std::invalid_argument("PairPartition: index out of range");
    if (seen[static_cast<std::size_t>(p.first)]++ || seen[static_cast<std::size_t>(p.second)]++)
      throw std::invalid_argument("PairPartition: index covered twice");
  }
  std::sort(pairs_.begin(), pairs_.end());
}

bool PairPartition::non_crossing() const {
  for (const auto& [i, j] : pairs_)
    for (const auto& [k, l] : pairs_)
      if (i < k && k < j && j < l) return false;
  return true;
}

namespace {

using PairList = std::vector<std::pair<int, int>>;

// All non-crossing matchings of the consecutive block [lo, hi).
std::vector<PairList> ncp_block(int lo, int hi) {
  if (lo >= hi) return {PairList{}};
  std::vector<PairList> out;
  for (int j = lo + 1; j < hi; j += 2) {
    const auto inner = ncp_block(lo + 1, j);
    const auto outer = ncp_block(j + 1, hi);
    for (const auto& a : inner)
      for (const auto& b : outer) {
        PairList p{{lo, j}};
        p.insert(p.end(), a.begin(), a.end());
        p.insert(p.end(), b.begin(), b.end());
        out.push_back(std::move(p));
      }
  }
  return out;
}

void all_matchings(std::vector<int>& free, PairList& cur, std::vector<PairList>& out) {
  if (free.empty()) {
    out.push_back(cur);
    return;
  }
  const int first = free.front();
  for (std::size_t k = 1; k < free.size(); ++k) {
    const int partner = free[k];
    std::vector<int> rest;
    for (std::size_t j = 1; j < free.size(); ++j)
      if (j != k) rest.push_back(free[j]);
    cur.emplace_back(first, partner);
    all_matchings(rest, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<PairPartition> enumerate_pairings(int m) {
  if (m < 0 || m > 14) throw std::invalid_argument("enumerate_pairings: m must lie in [0, 14]");
  std::vector<PairPartition> out;
  if (m % 2 != 0) return out;
  std::vector<int> free(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) free[static_cast<std::size_t>(i)] = i;
  PairList cur;
  std::vector<PairList> lists;
  all_matchings(free, cur, lists);
  for (auto& p : lists) out.emplace_back(m, std::move(p));
  return out;
}

std::vector<PairPartition> enumerate_ncp(int m) {
  if (m < 0) throw std::invalid_argument("enumerate_ncp: m must be non-negative");
  if (m > kMaxNcpLength) throw std::invalid_argument("enumerate_ncp: m exceeds the enumeration guard of 20");
  std::vector<PairPartition> out;
  if (m % 2 != 0) return out;
  for (auto& p : ncp_block(0, m)) out.emplace_back(m, std::move(p));
  return out;
}

CovarianceForm::CovarianceForm(ComplexMatrix pair_values, double tol) : p_(std::move(pair_values)) {
  if (p_.rows() != p_.cols() || p_.rows() < 1) throw std::invalid_argument("CovarianceForm: square matrix required");
  if (hermitian_defect(p_) > tol) throw std::invalid_argument("CovarianceForm: pair values must be Hermitian");
  const RealVector ev = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(
                            ComplexMatrix(0.5 * (p_ + p_.adjoint())), Eigen::EigenvaluesOnly)
                            .eigenvalues();
  if (ev(0) < -tol * std::max(1.0, std::abs(ev(ev.size() - 1))))
    throw std::invalid_argument("CovarianceForm: pair values must be positive semidefinite");
}

CovarianceForm CovarianceForm::diagonal(const RealVector& variances) {
  return CovarianceForm(variances.cast<cplx>().asDiagonal().toDenseMatrix());
}

cplx speicher_moment(const CovarianceForm& cov, const std::vector<int>& word) {
  for (int w : word)
    if (w < 0 || w >= cov.index_dim()) throw std::invalid_argument("speicher_moment: letter out of range");
  const int m = static_cast<int>(word.size());
  if (m % 2 != 0) return 0.0;
  cplx total = 0.0;
  for (const auto& p : enumerate_ncp(m)) {
    cplx term = 1.0;
    for (const auto& [i, j] : p.pairs())
      term *= cov.pair_value(word[static_cast<std::size_t>(i)], word[static_cast<std::size_t>(j)]);
    total += term;
  }
  return total;
}

CovarianceForm covariance_from_densities(const std::vector<ComplexVector>& fns, const QuadGrid& grid,
                                         const RealVector& d1, const RealVector& d2) {
  if (d1.size() != grid.size() || d2.size() != grid.size())
    throw std::invalid_argument("covariance_from_densities: density size mismatch");
  if ((d1.array() < 0.0).any() || (d2.array() < 0.0).any())
    throw std::invalid_argument("covariance_from_densities: densities must be non-negative");
  const Index n = static_cast<Index>(fns.size());
  ComplexMatrix f(grid.size(), n);
  for (Index i = 0; i < n; ++i) {
    if (fns[static_cast<std::size_t>(i)].size() != grid.size())
      throw std::invalid_argument("covariance_from_densities: function size mismatch");
    f.col(i) = fns[static_cast<std::size_t>(i)];
  }
  const RealVector w1 = grid.mu_weights().cwiseProduct(d1);
  const RealVector w2 = grid.mu_weights().cwiseProduct(d2);
  // P_ij = sum w1 f_i conj(f_j) + sum w2 conj(f_i) f_j
  const ComplexMatrix p = f.transpose() * w1.cast<cplx>().asDiagonal() * f.conjugate() +
                          f.adjoint() * w2.cast<cplx>().asDiagonal() * f;
  return CovarianceForm(p);
}

std::size_t TruncatedFock::dimension_for(Index letters, int depth) {
  std::size_t dim = 0, power = 1;
  for (int len = 0; len <= depth; ++len) {
    dim += power;
    power *= static_cast<std::size_t>(letters);
  }
  return dim;
}

TruncatedFock::TruncatedFock(const CovarianceForm& cov, int depth, std::size_t cap)
    : letters_(cov.index_dim()), depth_(depth) {
  if (depth < 1) throw std::invalid_argument("TruncatedFock: depth must be >= 1");
  if (!cov.is_real()) throw std::invalid_argument("TruncatedFock: covariance must be real symmetric");
  dim_ = dimension_for(letters_, depth_);
  if (dim_ > cap) {
    std::ostringstream msg;
    msg << "TruncatedFock: " << dim_ << " basis words exceed the cap " << cap << "; rerun with a cap of at least "
        << dim_;
    throw std::length_error(msg.str());
  }
  std::size_t off = 0, power = 1;
  for (int len = 0; len <= depth_ + 1; ++len) {
    offset_.push_back(off);
    power_.push_back(power);
    off += power;
    power *= static_cast<std::size_t>(letters_);
  }
  const RealMatrix g = cov.matrix().real();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (g + g.transpose()));
  const RealVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  c_ = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

std::size_t TruncatedFock::word_index(const std::vector<int>& word) const {
  if (static_cast<int>(word.size()) > depth_) throw std::out_of_range("TruncatedFock: word longer than depth");
  std::size_t rank = 0;
  for (int a : word) {
    if (a < 0 || a >= letters_) throw std::out_of_range("TruncatedFock: letter out of range");
    rank = rank * static_cast<std::size_t>(letters_) + static_cast<std::size_t>(a);
  }
  return offset_[word.size()] + rank;
}

void TruncatedFock::apply_orthonormal(const RealVector& c, const RealVector& in, RealVector& out) const {
  if (c.size() != letters_ || in.size() != static_cast<Index>(dim_))
    throw std::invalid_argument("TruncatedFock: dimension mismatch");
  out.setZero(static_cast<Index>(dim_));
  visit_entries(c, [&](std::size_t row, std::size_t col, double v) {
    out(static_cast<Index>(row)) += v * in(static_cast<Index>(col));
  });
}

SparseOperator build_semicircular(const TruncatedFock& fock, const RealVector& h) {
  if (h.size() != fock.index_dim()) throw std::invalid_argument("build_semicircular: coefficient size mismatch");
  const RealVector c = fock.orthonormal_coefficients(h);
  std::vector<Eigen::Triplet<double>> trip;
  const auto dim = fock.dimension();
  trip.reserve(dim * static_cast<std::size_t>(fock.index_dim() + 1));
  fock.visit_entries(c, [&](std::size_t row, std::size_t col, double v) {
    trip.emplace_back(static_cast<int>(row), static_cast<int>(col), v);
  });
  SparseOperator s(static_cast<Index>(dim), static_cast<Index>(dim));
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

cplx vacuum_moment(const TruncatedFock& fock, const std::vector<SparseOperator>& ops) {
  const auto dim = static_cast<Index>(fock.dimension());
  RealVector v = RealVector::Zero(dim);
  v(0) = 1.0;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    if (it->rows() != dim || it->cols() != dim) throw std::invalid_argument("vacuum_moment: dimension mismatch");
    v = (*it) * v;
  }
  return v(0);
}

double lanczos_norm(const std::function<void(const RealVector&, RealVector&)>& apply, std::size_t dim, int steps,
                    std::uint64_t seed) {
  const auto n = static_cast<Index>(dim);
  Rng rng(seed);
  RealVector q(n), prev = RealVector::Zero(n), w(n);
  for (Index i = 0; i < n; ++i) q(i) = rng.normal();
  q.normalize();
  const int k_max = static_cast<int>(std::min<std::size_t>(dim, static_cast<std::size_t>(steps)));
  std::vector<double> alpha, beta;
  double b = 0.0;
  for (int k = 0; k < k_max; ++k) {
    apply(q, w);
    const double a = q.dot(w);
    alpha.push_back(a);
    w -= a * q + b * prev;
    b = w.norm();
    if (k + 1 == k_max || b < 1e-13 * std::max(1.0, std::abs(a))) break;
    beta.push_back(b);
    prev = q;
    q = w / b;
  }
  const Index m = static_cast<Index>(alpha.size());
  if (m == 1) return std::abs(alpha[0]);
  RealVector diag = Eigen::Map<RealVector>(alpha.data(), m);
  RealVector sub = Eigen::Map<RealVector>(beta.data(), m - 1);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(m - 1)));
}

VoiculescuResult voiculescu_check(const RealVector& variances, int depth, std::size_t cap, std::uint64_t seed) {
  if (variances.size() < 1 || (variances.array() < 0.0).any())
    throw std::invalid_argument("voiculescu_check: non-negative variances required");
  const CovarianceForm cov = CovarianceForm::diagonal(variances);
  const TruncatedFock fock(cov, depth, cap);
  const RealVector c = fock.orthonormal_coefficients(RealVector::Ones(variances.size()));
  VoiculescuResult r;
  r.dimension = fock.dimension();
  r.lhs_trunc = lanczos_norm([&](const RealVector& in, RealVector& out) { fock.apply_orthonormal(c, in, out); },
                             fock.dimension(), 80, seed);
  const double total = variances.sum();
  r.rhs = 2.0 * std::sqrt(variances.maxCoeff()) + 2.0 * std::sqrt(total);
  r.full_norm = 2.0 * std::sqrt(total);
  return r;
}

cplx oh_pairing(const ComplexVector& f, const ComplexVector& g, const QuadGrid& grid, const RealVector& d1,
                const RealVector& d2) {
  if (f.size() != grid.size() || g.size() != grid.size() || d1.size() != grid.size() || d2.size() != grid.size())
    throw std::invalid_argument("oh_pairing: size mismatch");
  const RealVector w = grid.mu_weights().cwiseProduct(d1.cwiseProduct(d2).cwiseSqrt());
  return (f.array() * g.array() * w.cast<cplx>().array()).sum();
}

}  // namespace ohlab
