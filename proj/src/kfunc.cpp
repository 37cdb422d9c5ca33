#include "ohlab/kfunc.hpp"

#include <Eigen/SVD>

#include <algorithm>

namespace ohlab {

double l2_plus2_norm(const RealVector& k, const RealVector& g_dens, const RealVector& h_dens,
                     const RealVector& weights) {
  if (k.size() != g_dens.size() || k.size() != h_dens.size() || k.size() != weights.size())
    throw std::invalid_argument("l2_plus2_norm: size mismatch");
  if ((g_dens.array() <= 0.0).any() || (h_dens.array() <= 0.0).any())
    throw std::invalid_argument("l2_plus2_norm: densities must be strictly positive");
  const RealVector harmonic = (g_dens.cwiseInverse() + h_dens.cwiseInverse()).cwiseInverse();
  return std::sqrt((weights.array() * k.array().square() * harmonic.array()).sum());
}

double l2_plus2_norm(const RealVector& k, const RealVector& g_dens, const RealVector& h_dens,
                     const QuadGrid& grid, Weight weight) {
  return l2_plus2_norm(k, g_dens, h_dens, grid.weights(weight));
}

QuotientResult minimise_over_multiplier(const std::function<double(double)>& objective, double tol) {
  const double lo = std::log(1e-6), hi = std::log(1e6);
  constexpr int kScan = 121;
  const double step = (hi - lo) / (kScan - 1);
  QuotientResult best;
  best.value = kInf;
  int arg = 0;
  for (int j = 0; j < kScan; ++j) {
    const double v = objective(std::exp(lo + step * j));
    if (v < best.value) {
      best.value = v;
      arg = j;
    }
  }
  best.lambda = std::exp(lo + step * arg);
  double a = lo + step * std::max(arg - 1, 0);
  double b = lo + step * std::min(arg + 1, kScan - 1);
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = objective(std::exp(c)), fd = objective(std::exp(d));
  const double tol_log = std::max(tol, 1e-12);
  for (int it = 0; it < 200; ++it) {
    if (b - a < tol_log) {
      best.converged = true;
      break;
    }
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = objective(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = objective(std::exp(d));
    }
  }
  if (fc < best.value) {
    best.value = fc;
    best.lambda = std::exp(c);
  }
  if (fd < best.value) {
    best.value = fd;
    best.lambda = std::exp(d);
  }
  return best;
}

QuotientResult plus1_norm(const ComplexMatrix& k, const RealVector& wa, const RealVector& wb, double tol) {
  if (k.rows() != wa.size() || k.rows() != wb.size()) throw std::invalid_argument("plus1_norm: size mismatch");
  if (!k.allFinite()) throw std::invalid_argument("plus1_norm: non-finite values");
  const RealVector nk = k.rowwise().squaredNorm();
  auto objective = [&](double lambda) {
    const Eigen::ArrayXd den = wa.array() + lambda * wb.array();
    const Eigen::ArrayXd c1 = lambda * wb.array() / den;
    const Eigen::ArrayXd c2 = wa.array() / den;
    const double a2 = (wa.array() * c1.square() * nk.array()).sum();
    const double b2 = (wb.array() * c2.square() * nk.array()).sum();
    return std::sqrt(a2) + std::sqrt(b2);
  };
  QuotientResult best = minimise_over_multiplier(objective, tol);
  const double only_a = std::sqrt(wa.dot(nk));
  const double only_b = std::sqrt(wb.dot(nk));
  if (only_a < best.value) {
    best.value = only_a;
    best.lambda = kInf;
  }
  if (only_b < best.value) {
    best.value = only_b;
    best.lambda = 0.0;
  }
  return best;
}

GElement::GElement(QuadGrid grid, ComplexMatrix f, ComplexMatrix g)
    : grid_(std::move(grid)), f_(std::move(f)), g_(std::move(g)) {
  if (f_.rows() != grid_.size() || g_.rows() != grid_.size() || f_.cols() != g_.cols())
    throw std::invalid_argument("GElement: shape mismatch");
}

bool GElement::in_f(double tol) const {
  const ComplexMatrix s = sum();
  const double scale = std::max(s.norm(), 1e-300);
  for (Index i = 1; i < s.rows(); ++i)
    if ((s.row(i) - s.row(0)).norm() > tol * scale) return false;
  return true;
}

QuotientResult quotient_norm_l1(const GElement& x, double tol) {
  return plus1_norm(x.sum(), x.grid().weights(Weight::nu1), x.grid().weights(Weight::nu2), tol);
}

GElement f_combination(const QuadGrid& grid, const ComplexVector& a) {
  const RealVector r = grid.nodes().cwiseSqrt();
  ComplexMatrix f = r.cast<cplx>() * a.transpose();
  ComplexMatrix g = (1.0 - r.array()).matrix().cast<cplx>() * a.transpose();
  return GElement(grid, std::move(f), std::move(g));
}

double f_normalisation(const QuadGrid& grid, double tol) {
  const ComplexMatrix one = ComplexMatrix::Ones(grid.size(), 1);
  return plus1_norm(one, grid.weights(Weight::nu1), grid.weights(Weight::nu2), tol).value;
}

TensorGrid make_tensor_grid(int resolution, Interval t_region, Interval s_region) {
  return {make_grid(resolution, t_region), make_grid(resolution, s_region)};
}

double cross_density_mass(const TensorGrid& g) {
  const Eigen::ArrayXXd t = g.t_nodes().array(), s = g.s_nodes().array();
  return (g.mu().array() / (t * s + (1.0 - t) * (1.0 - s))).sum();
}

namespace {

// Injective norm of a kernel in L2(w_t) (x)_eps L2(w_s): the top singular
// value of diag(sqrt w_t) K diag(sqrt w_s).
double injective_norm(const RealMatrix& kernel, const RealVector& wt, const RealVector& ws) {
  const RealMatrix m = wt.cwiseSqrt().asDiagonal() * kernel * ws.cwiseSqrt().asDiagonal();
  return spectral_norm(m);
}

struct Quadruple {
  Eigen::ArrayXXd f, g, h, k;
};

struct QuadrupleNorms {
  double f = 0.0, g = 0.0, h_eps = 0.0, k_eps = 0.0;
};

QuadrupleNorms quadruple_norms(const TensorGrid& grid, const Quadruple& q) {
  const Eigen::ArrayXXd t = grid.t_nodes().array(), s = grid.s_nodes().array();
  const Eigen::ArrayXXd w = grid.mu().array();
  QuadrupleNorms out;
  out.f = std::sqrt((w * q.f.square() / (t * s)).sum());
  out.g = std::sqrt((w * q.g.square() / ((1.0 - t) * (1.0 - s))).sum());
  out.h_eps = injective_norm(q.h.matrix(), grid.t.weights(Weight::nu1), grid.s.weights(Weight::nu2));
  out.k_eps = injective_norm(q.k.matrix(), grid.t.weights(Weight::nu2), grid.s.weights(Weight::nu1));
  return out;
}

double indicator_norm(double lo, double hi, Weight w, int resolution) {
  const QuadGrid g = make_grid(resolution, {lo, hi});
  return std::sqrt(integrate(RealVector::Ones(g.size()), g, w));
}

}  // namespace

DiagLowerResult g_tensor_diag_lower(int n, int resolution) {
  if (n < 1) throw std::invalid_argument("g_tensor_diag_lower: n must be >= 1");
  DiagLowerResult r;
  r.n = n;
  r.delta = 1.0 / (8.0 * n * std::exp(1.0));
  const TensorGrid grid = make_tensor_grid(resolution, {r.delta, 0.5}, {0.5, 1.0 - r.delta});
  const Eigen::ArrayXXd t = grid.t_nodes().array(), s = grid.s_nodes().array();
  const Eigen::ArrayXXd w = grid.mu().array();
  const Eigen::ArrayXXd v = 1.0 / (t * s + (1.0 - t) * (1.0 - s));

  Quadruple q{t * s * v, (1.0 - t) * (1.0 - s) * v, t * (1.0 - s) * v, (1.0 - t) * s * v};
  r.mass = (w * v).sum();
  const QuadrupleNorms raw = quadruple_norms(grid, q);
  r.f_norm = raw.f;
  r.g_norm = raw.g;
  r.h_eps = raw.h_eps;
  r.k_eps = raw.k_eps;
  r.h_l2_sq = (w * q.h.square() / (t * (1.0 - s))).sum();

  const double rn = std::sqrt(double(n));
  r.scale = std::max({raw.f, raw.g, raw.h_eps / rn, raw.k_eps / rn});
  q.f /= r.scale;
  q.g /= r.scale;
  q.h /= r.scale;
  q.k /= r.scale;

  const QuadrupleNorms scaled = quadruple_norms(grid, q);
  constexpr double slack = 1e-10;
  if (scaled.f > 1.0 + slack || scaled.g > 1.0 + slack || scaled.h_eps > rn * (1.0 + slack) ||
      scaled.k_eps > rn * (1.0 + slack)) {
    std::ostringstream msg;
    msg << "g_tensor_diag_lower: rescaled quadruple violates its constraints (f " << scaled.f << ", g "
        << scaled.g << ", h " << scaled.h_eps << ", k " << scaled.k_eps << ", sqrt n " << rn << ")";
    throw std::runtime_error(msg.str());
  }
  const double functional = (w * q.f / (t * s)).sum();
  r.lower = rn * functional;
  return r;
}

namespace {

UpperResult upper_pieces(int n, int resolution) {
  UpperResult r;
  r.delta = 1.0 / (std::exp(2.0) * double(n) * double(n));
  const double d = r.delta;
  const std::array<std::pair<Interval, Interval>, 4> regions{{
      {{0.0, 0.5}, {0.0, 0.5}},
      {{d, 0.5}, {0.5, 1.0 - d}},
      {{0.5, 1.0 - d}, {d, 0.5}},
      {{0.5, 1.0}, {0.5, 1.0}},
  }};
  for (std::size_t i = 0; i < regions.size(); ++i)
    r.region_mass[i] = cross_density_mass(make_tensor_grid(resolution, regions[i].first, regions[i].second));

  const double low_nu2 = indicator_norm(0.0, d, Weight::nu2, resolution);
  const double mid_nu2 = indicator_norm(d, 0.5, Weight::nu2, resolution);
  const double up_nu1 = indicator_norm(0.5, 1.0, Weight::nu1, resolution);
  const double top_nu1 = indicator_norm(1.0 - d, 1.0, Weight::nu1, resolution);
  r.cross_product = {low_nu2 * up_nu1, mid_nu2 * top_nu1, up_nu1 * low_nu2, top_nu1 * mid_nu2};
  return r;
}

double sum_sqrt(const std::array<double, 4>& a) {
  double s = 0.0;
  for (double x : a) s += std::sqrt(x);
  return s;
}

double sum(const std::array<double, 4>& a) {
  double s = 0.0;
  for (double x : a) s += x;
  return s;
}

}  // namespace

UpperResult g_tensor_norm_upper(const ComplexMatrix& a, int resolution) {
  if (a.rows() != a.cols() || a.rows() < 1) throw std::invalid_argument("g_tensor_norm_upper: a must be n x n");
  UpperResult r = upper_pieces(static_cast<int>(a.rows()), resolution);
  r.diag_part = std::sqrt(2.0) * a.norm() * sum_sqrt(r.region_mass);
  r.cross_part = schatten_norm(a, 1.0) * sum(r.cross_product);
  r.upper = r.diag_part + r.cross_part;
  return r;
}

double g_tensor_upper_constant(int n, int resolution) {
  const UpperResult r = upper_pieces(n, resolution);
  return std::sqrt(2.0) * sum_sqrt(r.region_mass) + std::sqrt(double(n)) * sum(r.cross_product);
}

CalcResult calc_integrals(double delta, int resolution, double tol) {
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("calc_integrals: delta must lie in (0,1/2)");
  CalcResult r;
  r.delta = delta;
  const std::array<std::pair<Interval, Interval>, 4> regions{{
      {{delta, 0.5}, {0.5, 1.0 - delta}},
      {{0.5, 1.0 - delta}, {delta, 0.5}},
      {{0.0, 0.5}, {0.0, 0.5}},
      {{0.5, 1.0}, {0.5, 1.0}},
  }};
  const double log_bound = 4.0 * std::sqrt(2.0) / kPi * std::sqrt(-std::log(delta));
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const TensorGrid g = make_tensor_grid(resolution, regions[i].first, regions[i].second);
    const Eigen::ArrayXXd t = g.t_nodes().array(), s = g.s_nodes().array();
    const Eigen::ArrayXXd w = g.mu().array();
    const Index size = w.size();
    const RealVector wv = Eigen::Map<const RealVector>(w.data(), size);
    const Eigen::ArrayXXd d1 = t * s, d2 = (1.0 - t) * (1.0 - s);
    const RealVector g1 = Eigen::Map<const RealVector>(Eigen::ArrayXXd(1.0 / d1).data(), size);
    const RealVector g2 = Eigen::Map<const RealVector>(Eigen::ArrayXXd(1.0 / d2).data(), size);
    const RealVector wa = wv.cwiseProduct(g1), wb = wv.cwiseProduct(g2);
    r.q[i].plus1 = plus1_norm(ComplexMatrix::Ones(size, 1), wa, wb, tol).value;
    r.q[i].via_plus2 = std::sqrt(2.0) * l2_plus2_norm(RealVector::Ones(size), g1, g2, wv);
    r.q[i].bound = i < 2 ? log_bound : 2.0 * std::sqrt(2.0);
  }
  return r;
}

// ---- K spaces --------------------------------------------------------------

DiscreteKSpace::DiscreteKSpace(ComplexMatrix d, double t_param) : d_(std::move(d)), t_(t_param) {
  if (d_.rows() != d_.cols() || d_.rows() < 1) throw std::invalid_argument("DiscreteKSpace: d must be square");
  if (!(t_ > 0.0)) throw std::invalid_argument("DiscreteKSpace: t must be positive");
  const HermitianEig e = hermitian_eig(d_);
  if (e.values(0) <= 0.0) throw std::invalid_argument("DiscreteKSpace: d must be positive definite");
  eigs_ = e.values;
  basis_ = e.vectors;
}

double tau_norm1(const ComplexMatrix& x) { return schatten_norm(x, 1.0) / double(x.rows()); }
double tau_norm2(const ComplexMatrix& x) { return x.norm() / std::sqrt(double(x.rows())); }

KSplit k_quotient_split(const DiscreteKSpace& s, const ComplexMatrix& x, double tol) {
  if (x.rows() != s.m() || x.cols() != s.m()) throw std::invalid_argument("k_quotient_norm: size mismatch");
  const Index m = s.m();
  const ComplexMatrix& q = s.d_basis();
  const ComplexMatrix xh = q.adjoint() * x * q;
  const Eigen::ArrayXd e = s.d_eigs().array();
  const Eigen::ArrayXd e2 = e.square();
  const double rm = std::sqrt(double(m));

  // For fixed lambda: u = dY, v = Yd / lambda, d^2 Y + Y d^2 / lambda = x.
  auto solve = [&](double lambda) {
    ComplexMatrix y(m, m);
    for (Index j = 0; j < m; ++j)
      for (Index i = 0; i < m; ++i) y(i, j) = xh(i, j) / (e2(i) + e2(j) / lambda);
    return y;
  };
  auto objective = [&](double lambda) {
    const ComplexMatrix y = solve(lambda);
    const ComplexMatrix uh = e.matrix().asDiagonal() * y;
    const ComplexMatrix vh = y * e.matrix().asDiagonal() / lambda;
    return (uh.norm() + vh.norm()) / rm;
  };

  KSplit out;
  out.result = minimise_over_multiplier(objective, tol);
  ComplexMatrix uh, vh, zh;
  const double lambda = out.result.lambda;
  {
    const ComplexMatrix y = solve(lambda);
    uh = e.matrix().asDiagonal() * y;
    vh = y * e.matrix().asDiagonal() / lambda;
    zh = y / std::max(uh.norm(), 1e-300);
  }
  // One-leg splits u = d^-1 x or v = x d^-1.
  const ComplexMatrix u_only = e.inverse().matrix().asDiagonal() * xh;
  const ComplexMatrix v_only = xh * e.inverse().matrix().asDiagonal();
  if (u_only.norm() / rm < out.result.value) {
    out.result.value = u_only.norm() / rm;
    out.result.lambda = kInf;
    uh = u_only;
    vh = ComplexMatrix::Zero(m, m);
    zh = e.inverse().matrix().asDiagonal() * u_only / std::max(u_only.norm(), 1e-300);
  }
  if (v_only.norm() / rm < out.result.value) {
    out.result.value = v_only.norm() / rm;
    out.result.lambda = 0.0;
    uh = ComplexMatrix::Zero(m, m);
    vh = v_only;
    zh = v_only * e.inverse().matrix().asDiagonal() / std::max(v_only.norm(), 1e-300);
  }
  out.u = q * uh * q.adjoint();
  out.v = q * vh * q.adjoint();
  out.z = q * zh * q.adjoint();
  return out;
}

double kk_dual_norm(const DiscreteKSpace& s, const ComplexMatrix& y) {
  if (std::isinf(s.t())) throw std::invalid_argument("kk_dual_norm: finite t required");
  const double rt = std::sqrt(s.t());
  return std::max({spectral_norm(y), rt * tau_norm2(s.d() * y), rt * tau_norm2(y * s.d())});
}

cplx kk_pairing(const DiscreteKSpace& s, const ComplexMatrix& y, const ComplexMatrix& x) {
  return s.t() * (y.adjoint() * x).trace() / double(s.m());
}

namespace {

ComplexMatrix singular_value_shrink(const ComplexMatrix& a, double thr) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector sv = (svd.singularValues().array() - thr).max(0.0);
  return svd.matrixU() * sv.cast<cplx>().asDiagonal() * svd.matrixV().adjoint();
}

ComplexMatrix block_shrink(const ComplexMatrix& a, double thr) {
  const double n = a.norm();
  if (n <= thr) return ComplexMatrix::Zero(a.rows(), a.cols());
  return (1.0 - thr / n) * a;
}

double dual_certificate(const DiscreteKSpace& s, const ComplexMatrix& y, const ComplexMatrix& x) {
  const double dn = kk_dual_norm(s, y);
  if (!(dn > 0.0)) return 0.0;
  return std::abs(kk_pairing(s, y, x)) / dn;
}

}  // namespace

KtResult kk_t_norm(const DiscreteKSpace& s, const ComplexMatrix& x, double tol, int max_iterations) {
  if (std::isinf(s.t())) throw std::invalid_argument("kk_t_norm: finite t required");
  if (x.rows() != s.m() || x.cols() != s.m()) throw std::invalid_argument("kk_t_norm: size mismatch");
  const double t = s.t(), rt = std::sqrt(t);
  const Index m = s.m();
  const ComplexMatrix& d = s.d();
  const ComplexMatrix zero = ComplexMatrix::Zero(m, m);
  auto objective = [&](const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c) {
    return t * tau_norm1(a) + rt * tau_norm2(b) + rt * tau_norm2(c);
  };

  KtResult best;
  const KSplit split = k_quotient_split(s, x, 1e-10);
  best.x1 = zero;
  best.x2 = split.u;
  best.x3 = split.v;
  best.value = objective(best.x1, best.x2, best.x3);
  if (double all_one = t * tau_norm1(x); all_one < best.value) {
    best.value = all_one;
    best.x1 = x;
    best.x2 = best.x3 = zero;
  }
  ComplexMatrix y = (rt / std::sqrt(double(m))) * split.z;
  best.lower = dual_certificate(s, y, x);
  if (x.norm() == 0.0) {
    best.converged = true;
    return best;
  }

  // Saddle point of G(z) + Re<y, x - Az>_F with A(z) = x1 + d x2 + x3 d.
  const double lip = std::sqrt(1.0 + 2.0 * std::pow(spectral_norm(d), 2));
  const double ratio = x.norm() / std::max(y.norm(), 1e-300);
  const double tau_p = 0.99 * ratio / lip, sigma = 0.99 / (ratio * lip);
  const double thr1 = tau_p * t / double(m), thr2 = tau_p * rt / std::sqrt(double(m));
  ComplexMatrix x1 = best.x1, x2 = best.x2, x3 = best.x3;
  int it = 0;
  for (; it < max_iterations; ++it) {
    if (best.value - best.lower <= tol * best.value) {
      best.converged = true;
      break;
    }
    const ComplexMatrix n1 = singular_value_shrink(x1 + tau_p * y, thr1);
    const ComplexMatrix n2 = block_shrink(x2 + tau_p * (d * y), thr2);
    const ComplexMatrix n3 = block_shrink(x3 + tau_p * (y * d), thr2);
    const ComplexMatrix bar1 = 2.0 * n1 - x1, bar2 = 2.0 * n2 - x2, bar3 = 2.0 * n3 - x3;
    y += sigma * (x - bar1 - d * bar2 - bar3 * d);
    x1 = n1;
    x2 = n2;
    x3 = n3;
    if (it % 10 == 0) {
      // Restore feasibility through x1, then score both sides.
      const ComplexMatrix f1 = x - d * x2 - x3 * d;
      const double v = objective(f1, x2, x3);
      if (v < best.value) {
        best.value = v;
        best.x1 = f1;
        best.x2 = x2;
        best.x3 = x3;
      }
      best.lower = std::max(best.lower, dual_certificate(s, y, x));
    }
  }
  best.iterations = it;
  if (best.value - best.lower <= tol * best.value) best.converged = true;
  return best;
}

double kk_duality_probe(const DiscreteKSpace& s, const ComplexMatrix& y, int random_trials, Rng& rng,
                        double tol) {
  std::vector<ComplexMatrix> candidates;
  Eigen::JacobiSVD<ComplexMatrix> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
  candidates.push_back(svd.matrixU().col(0) * svd.matrixV().col(0).adjoint());
  candidates.push_back(s.d() * (s.d() * y));
  candidates.push_back((y * s.d()) * s.d());
  for (int i = 0; i < random_trials; ++i) candidates.push_back(random_complex(s.m(), s.m(), rng));
  double best = 0.0;
  for (const auto& x : candidates) {
    if (x.norm() == 0.0) continue;
    const double nx = kk_t_norm(s, x, tol).value;
    if (nx > 0.0) best = std::max(best, std::abs(kk_pairing(s, y, x)) / nx);
  }
  return best;
}

}  // namespace ohlab
