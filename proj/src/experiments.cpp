#include "ohlab/experiments.hpp"

#include "ohlab/kfunc.hpp"
#include "ohlab/opspace.hpp"
#include "ohlab/pwmean.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

namespace ohlab {

namespace {

using Builder = std::function<Report(const ExperimentConfig&)>;

const std::map<std::string, Builder>& registry() {
  static const std::map<std::string, Builder> table = {
      {"pw-verify", run_pw_verify},         {"gdiag-scaling", run_gdiag_scaling},
      {"proj-const-table", run_proj_const_table}, {"ncp", run_ncp},
      {"fock-moments", run_fock_moments},   {"voiculescu", run_voiculescu},
      {"kfunc-duality", run_kfunc_duality}, {"oh-norm", run_oh_norm},
  };
  return table;
}

std::vector<int> n_or(const ExperimentConfig& cfg, std::vector<int> fallback) {
  return cfg.n_values.empty() ? fallback : cfg.n_values;
}

int grid_or(const ExperimentConfig& cfg, int fallback) { return cfg.grid > 0 ? cfg.grid : fallback; }
int depth_or(const ExperimentConfig& cfg, int fallback) { return cfg.depth > 0 ? cfg.depth : fallback; }
int trials_or(const ExperimentConfig& cfg, int fallback) { return cfg.trials > 0 ? cfg.trials : fallback; }

double log_factor(int n) { return std::sqrt(n * (1.0 + std::log(double(n)))); }

double rel_err(double v, double ref) { return std::abs(v - ref) / std::abs(ref); }

// Row seeds are drawn from one stream so every row is reproducible on its own.
std::vector<std::uint64_t> row_seeds(std::uint64_t seed, std::size_t count) {
  Rng master(seed);
  std::vector<std::uint64_t> out(count);
  for (auto& s : out) s = master.next();
  return out;
}

ComplexVector random_unit_vector(Index n, Rng& rng) {
  ComplexVector x = random_complex_vector(n, rng);
  return x / x.norm();
}

RealMatrix random_real_covariance(Index n, Rng& rng) {
  RealMatrix r(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) r(i, j) = rng.normal();
  RealMatrix g = r * r.transpose();
  g = 0.5 * (g + g.transpose());
  return g / Eigen::SelfAdjointEigenSolver<RealMatrix>(g, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, f] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

void validate(const ExperimentConfig& cfg) {
  if (!registry().count(cfg.command)) throw std::invalid_argument("unknown command '" + cfg.command + "'");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (cfg.grid != 0 && cfg.grid < 8) throw std::invalid_argument("grid must be at least 8");
  if (cfg.depth < 0) throw std::invalid_argument("depth must be positive");
  if (cfg.restarts < 1) throw std::invalid_argument("restarts must be positive");
  if (cfg.trials < 0) throw std::invalid_argument("trials must be positive");
  if (cfg.format != "csv" && cfg.format != "json") throw std::invalid_argument("format must be csv or json");
  for (int n : cfg.n_values)
    if (n < 0) throw std::invalid_argument("n values must be non-negative");
  if (cfg.command == "gdiag-scaling" || cfg.command == "proj-const-table")
    for (int n : cfg.n_values)
      if (n < 1 || n > 4096) throw std::invalid_argument("n values must lie in [1, 4096]");
  if (cfg.command == "voiculescu" || cfg.command == "kfunc-duality")
    for (int n : cfg.n_values)
      if (n < 1) throw std::invalid_argument("n values must be positive");
}

Report run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  return registry().at(cfg.command)(cfg);
}

std::uint64_t catalan(int k) {
  if (k < 0) return 0;
  std::vector<std::uint64_t> c(static_cast<std::size_t>(k) + 1, 0);
  c[0] = 1;
  for (int i = 1; i <= k; ++i)
    for (int j = 0; j < i; ++j) c[static_cast<std::size_t>(i)] += c[static_cast<std::size_t>(j)] * c[static_cast<std::size_t>(i - 1 - j)];
  return c[static_cast<std::size_t>(k)];
}

Report run_pw_verify(const ExperimentConfig& cfg) {
  const int res = grid_or(cfg, 1024);
  const QuadGrid grid = make_grid(res);
  const std::string cite = "int <x,(tA^-1+(1-t)B^-1)^-1 x> dmu = <x,(AB)^(1/2)x> = dual minimum";
  Report rep;

  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const double a = std::pow(10.0, -1.0 + 0.5 * i), b = std::pow(10.0, -1.0 + 0.5 * j);
      const CommutingPair p = CommutingPair::scalars(a, b);
      const ComplexVector x = ComplexVector::Ones(1);
      const double gm = geomean_form(p, x), primal = pw_primal(p, x, grid), dual = pw_dual(p, x, grid);
      const double ep = rel_err(primal, gm), ed = rel_err(dual, gm);
      rep.rows.push_back({"pw-verify/scalar",
                          {{"a", a}, {"b", b}, {"resolution", (long long)res}},
                          {{"geomean", gm}, {"primal", primal}, {"dual", dual}, {"rel_err_primal", ep},
                           {"rel_err_dual", ed}},
                          {{"rel_err_max", cfg.tol}},
                          cite,
                          ep <= cfg.tol && ed <= cfg.tol});
    }

  const auto seeds = row_seeds(cfg.seed, 10);
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    Rng rng(seeds[k]);
    const CommutingPair p = random_commuting_pair(4, 0.1, 10.0, rng);
    const ComplexVector x = random_unit_vector(4, rng);
    const double gm = geomean_form(p, x), primal = pw_primal(p, x, grid), dual = pw_dual(p, x, grid);
    const double ep = rel_err(primal, gm), ed = rel_err(dual, gm);
    rep.rows.push_back({"pw-verify/matrix",
                        {{"instance", (long long)k}, {"dim", 4LL}, {"resolution", (long long)res}},
                        {{"geomean", gm}, {"primal", primal}, {"dual", dual}, {"rel_err_primal", ep},
                         {"rel_err_dual", ed}},
                        {{"rel_err_max", cfg.tol}},
                        cite,
                        ep <= cfg.tol && ed <= cfg.tol});
  }

  // A wide spread slows the quadrature down enough to watch the gap close.
  const CommutingPair wide = CommutingPair::scalars(1e-2, 1e2);
  const ComplexVector one = ComplexVector::Ones(1);
  double prev_gap = kInf;
  for (int r : {res / 4, res / 2, res}) {
    const QuadGrid g = make_grid(r);
    const double primal = pw_primal(wide, one, g), dual = pw_dual(wide, one, g);
    const double gap = std::abs(dual - primal);
    const bool shrinking = gap < prev_gap || gap <= 1e-12 * primal;
    rep.rows.push_back({"pw-verify/refine",
                        {{"a", 1e-2}, {"b", 1e2}, {"resolution", (long long)r}},
                        {{"geomean", 1.0}, {"primal", primal}, {"dual", dual}, {"gap", gap}},
                        {{"gap_previous", prev_gap}},
                        "dual - primal -> 0 as the grid is refined",
                        std::isfinite(gap) && shrinking});
    prev_gap = gap;
  }
  return rep;
}

Report run_gdiag_scaling(const ExperimentConfig& cfg) {
  const int res = grid_or(cfg, 512);
  Report rep;
  for (int n : n_or(cfg, {1, 2, 4, 16, 64, 256, 1024})) {
    const DiagLowerResult lo = g_tensor_diag_lower(n, res);
    const UpperResult up = g_tensor_norm_upper(ComplexMatrix::Identity(n, n), res);
    const double s = log_factor(n);
    const double lower_min = (1.0 - 0.02) * s / (8.0 * kPi), upper_max = 16.0 * s;
    const double ratio = up.upper / lo.lower;
    rep.rows.push_back({"gdiag-scaling",
                        {{"n", (long long)n}, {"resolution", (long long)res}},
                        {{"lower", lo.lower},
                         {"upper", up.upper},
                         {"ratio_lower", lo.lower / s},
                         {"ratio_upper", up.upper / s},
                         {"upper_over_lower", ratio},
                         {"scale", lo.scale},
                         {"h_l2_sq", lo.h_l2_sq}},
                        {{"lower_min", lower_min}, {"upper_max", upper_max}, {"ratio_max", 128.0 * kPi}},
                        "(1-0.02) sqrt(n(1+ln n))/(8 pi) <= lower <= upper <= 16 sqrt(n(1+ln n))",
                        lo.lower >= lower_min && up.upper <= upper_max && lo.lower <= up.upper &&
                            ratio <= 128.0 * kPi});
  }
  return rep;
}

Report run_proj_const_table(const ExperimentConfig& cfg) {
  const int res = grid_or(cfg, 512);
  Report rep;
  for (int n : n_or(cfg, {1, 2, 4, 16, 64, 256, 1024})) {
    const double l = 1.0 + std::log(double(n));
    const double lower_thm = std::sqrt(n / l) / 96.0;
    const double upper_thm = 144.0 * kPi * std::sqrt(2.0 * n / l);
    const double little_g_thm = 96.0 * std::sqrt(l);

    const double diag_lower = g_tensor_diag_lower(n, res).lower;
    const double diag_upper = g_tensor_norm_upper(ComplexMatrix::Identity(n, n), res).upper;
    const double c_up = g_tensor_upper_constant(n, res);
    // Chain multipliers: pi1 on F is within 9 of the diagonal tensor norm,
    // pi1 on OH within 18 from below and 6 from above.
    const double little_g = 6.0 * c_up;
    const double proj_lower = std::sqrt(double(n)) / little_g;
    const double proj_upper = 18.0 * n / diag_lower;

    rep.rows.push_back({"proj-const-table",
                        {{"n", (long long)n}, {"resolution", (long long)res}},
                        {{"diag_lower", diag_lower},
                         {"diag_upper", diag_upper},
                         {"pi1_F_lower", diag_lower / 9.0},
                         {"pi1_OH_lower", diag_lower / 18.0},
                         {"pi1_OH_upper", 6.0 * diag_upper},
                         {"little_g", little_g},
                         {"proj_lower", proj_lower},
                         {"proj_upper", proj_upper}},
                        {{"proj_lower_min", lower_thm}, {"proj_upper_max", upper_thm}, {"little_g_max", little_g_thm}},
                        "sqrt(n/(1+ln n))/96 <= ||P||_cb <= 144 pi sqrt(2n/(1+ln n)); little G <= 96 sqrt(1+ln n)",
                        proj_lower >= lower_thm && proj_lower <= proj_upper && proj_upper <= upper_thm &&
                            little_g <= little_g_thm});
  }
  return rep;
}

Report run_ncp(const ExperimentConfig& cfg) {
  Report rep;
  for (int m : n_or(cfg, {2, 4, 6, 8, 10, 12, 14})) {
    const double count = double(enumerate_ncp(m).size());
    const double cat = m % 2 == 0 ? double(catalan(m / 2)) : 0.0;
    ReportRow row{"ncp", {{"m", (long long)m}}, {{"count", count}}, {{"catalan", cat}},
                  "|NCP(m)| = Catalan(m/2)", count == cat};
    if (m <= 14) {
      double brute = 0.0;
      for (const auto& p : enumerate_pairings(m)) brute += p.non_crossing() ? 1.0 : 0.0;
      row.computed.emplace_back("brute_force", brute);
      row.pass = row.pass && brute == count;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

Report run_fock_moments(const ExperimentConfig& cfg) {
  const int depth = depth_or(cfg, 6);
  Report rep;
  for (double var : {1.0, 2.5}) {
    RealVector v(1);
    v << var;
    const CovarianceForm cov = CovarianceForm::diagonal(v);
    const TruncatedFock fock(cov, depth, cfg.fock_cap);
    const SparseOperator s = build_semicircular(fock, RealVector::Ones(1));
    for (int m = 2; m <= 2 * depth; m += 2) {
      const double vac = vacuum_moment(fock, std::vector<SparseOperator>(static_cast<std::size_t>(m), s)).real();
      const double sp = speicher_moment(cov, std::vector<int>(static_cast<std::size_t>(m), 0)).real();
      const double expected = double(catalan(m / 2)) * std::pow(var, m / 2);
      const double err = std::max(std::abs(vac - expected), std::abs(sp - expected));
      rep.rows.push_back({"fock-moments/single",
                          {{"variance", var}, {"m", (long long)m}, {"depth", (long long)depth}},
                          {{"vacuum", vac}, {"speicher", sp}, {"abs_err", err}},
                          {{"catalan_moment", expected}},
                          "<Omega, s^m Omega> = Catalan(m/2) variance^(m/2)",
                          err <= 1e-12 * std::max(1.0, expected)});
    }
  }

  const int covs = trials_or(cfg, 5);
  const int max_len = std::min(8, 2 * depth);
  const auto seeds = row_seeds(cfg.seed, 2);
  for (int letters : {2, 3}) {
    Rng rng(seeds[static_cast<std::size_t>(letters - 2)]);
    double worst = 0.0, scale = 1.0;
    long long words = 0;
    for (int c = 0; c < covs; ++c) {
      const CovarianceForm cov(random_real_covariance(letters, rng).cast<cplx>());
      const TruncatedFock fock(cov, depth, cfg.fock_cap);
      std::vector<SparseOperator> ops;
      for (int a = 0; a < letters; ++a) ops.push_back(build_semicircular(fock, RealVector::Unit(letters, a)));
      for (int len = 1; len <= max_len; ++len) {
        std::vector<int> w(static_cast<std::size_t>(len), 0);
        while (true) {
          std::vector<SparseOperator> seq;
          for (int a : w) seq.push_back(ops[static_cast<std::size_t>(a)]);
          const cplx vac = vacuum_moment(fock, seq), sp = speicher_moment(cov, w);
          worst = std::max(worst, std::abs(vac - sp));
          scale = std::max(scale, std::abs(sp));
          ++words;
          int pos = len - 1;
          while (pos >= 0 && ++w[static_cast<std::size_t>(pos)] == letters) w[static_cast<std::size_t>(pos--)] = 0;
          if (pos < 0) break;
        }
      }
    }
    rep.rows.push_back({"fock-moments/words",
                        {{"letters", (long long)letters}, {"max_length", (long long)max_len},
                         {"covariances", (long long)covs}, {"depth", (long long)depth}},
                        {{"words", double(words)}, {"max_abs_diff", worst}, {"max_moment", scale}},
                        {{"abs_diff_max", 1e-12 * scale}},
                        "vacuum moment = sum over NCP of pair values",
                        worst <= 1e-12 * scale});
  }
  return rep;
}

Report run_voiculescu(const ExperimentConfig& cfg) {
  const int depth = depth_or(cfg, 6);
  Report rep;
  const auto seeds = row_seeds(cfg.seed, 2);
  for (int n : n_or(cfg, {1, 2, 3, 4, 5, 6})) {
    const VoiculescuResult r = voiculescu_check(RealVector::Ones(n), depth, cfg.fock_cap, seeds[0]);
    const double floor = 0.85 * r.full_norm;
    rep.rows.push_back({"voiculescu/unit",
                        {{"n", (long long)n}, {"depth", (long long)depth}},
                        {{"lhs_trunc", r.lhs_trunc}, {"full_norm", r.full_norm},
                         {"ratio_full", r.lhs_trunc / r.full_norm}, {"dimension", double(r.dimension)}},
                        {{"rhs", r.rhs}, {"lhs_min", floor}},
                        "||sum a_k|| <= sup||a_k|| + ||sum E a*a||^(1/2) + ||sum E aa*||^(1/2)",
                        r.lhs_trunc <= r.rhs * (1.0 + 1e-12) && r.lhs_trunc <= r.full_norm * (1.0 + 1e-12) &&
                            r.lhs_trunc >= floor});
  }

  const int trials = trials_or(cfg, 200);
  Rng rng(seeds[1]);
  double worst = 0.0;
  long long violations = 0;
  for (int k = 0; k < trials; ++k) {
    int n = 0, d = 0;
    do {
      n = rng.integer(1, 6);
      d = rng.integer(1, 8);
    } while (TruncatedFock::dimension_for(n, d) > cfg.fock_cap);
    RealVector var(n);
    for (Index i = 0; i < n; ++i) var(i) = rng.uniform(0.05, 2.0);
    const VoiculescuResult r = voiculescu_check(var, d, cfg.fock_cap, rng.next());
    worst = std::max(worst, r.lhs_trunc / r.rhs);
    if (r.lhs_trunc > r.rhs * (1.0 + 1e-12)) ++violations;
  }
  rep.rows.push_back({"voiculescu/random",
                      {{"trials", (long long)trials}, {"max_letters", 6LL}, {"max_depth", 8LL}},
                      {{"max_lhs_over_rhs", worst}, {"violations", double(violations)}},
                      {{"lhs_over_rhs_max", 1.0}},
                      "||sum a_k|| <= sup||a_k|| + ||sum E a*a||^(1/2) + ||sum E aa*||^(1/2)",
                      violations == 0});
  return rep;
}

Report run_kfunc_duality(const ExperimentConfig& cfg) {
  const double tol = std::max(cfg.tol, 1e-6);
  const int pairs = trials_or(cfg, 8);
  Report rep;
  const auto ts = n_or(cfg, {1, 4, 16});
  const auto seeds = row_seeds(cfg.seed, ts.size() * 3 + 1);
  std::size_t next = 0;
  for (int t : ts)
    for (int m : {2, 3, 4}) {
      Rng rng(seeds[next++]);
      const DiscreteKSpace s(random_positive_definite(m, rng, 0.2), double(t));
      double worst = 0.0, gap = 0.0;
      for (int k = 0; k < pairs; ++k) {
        const ComplexMatrix x = random_complex(m, m, rng), y = random_complex(m, m, rng);
        const KtResult kt = kk_t_norm(s, x, tol);
        worst = std::max(worst, std::abs(kk_pairing(s, y, x)) / (kk_dual_norm(s, y) * kt.value));
        gap = std::max(gap, (kt.value - kt.lower) / kt.value);
      }
      const ComplexMatrix y = random_complex(m, m, rng);
      const double attained = kk_duality_probe(s, y, 20, rng, tol) / kk_dual_norm(s, y);
      rep.rows.push_back({"kfunc-duality/pairing",
                          {{"t", (long long)t}, {"m", (long long)m}, {"pairs", (long long)pairs}},
                          {{"max_ratio", worst}, {"max_rel_gap", gap}, {"probe_attained", attained}},
                          {{"ratio_max", 1.0}, {"probe_min", 0.95}},
                          "|t tau(y* x)| <= max(||y||, sqrt t ||E(y*y)||^(1/2), sqrt t ||E(yy*)||^(1/2)) ||x||_t",
                          worst <= 1.0 + 10.0 * tol && attained >= 0.95});
    }

  Rng rng(seeds[next]);
  const double t = 1e6;
  for (int k = 0; k < 3; ++k) {
    const DiscreteKSpace s(random_positive_definite(3, rng, 0.2), t);
    const ComplexMatrix x = random_complex(3, 3, rng);
    const double scaled = kk_t_norm(s, x, tol).value / std::sqrt(t);
    const double kq = k_quotient_norm(s.with_t(kInf), x, tol).value;
    const double diff = rel_err(scaled, kq);
    rep.rows.push_back({"kfunc-duality/limit",
                        {{"t", t}, {"m", 3LL}, {"instance", (long long)k}},
                        {{"scaled_kt", scaled}, {"k_quotient", kq}, {"rel_diff", diff}},
                        {{"rel_diff_max", 0.02}},
                        "t^(-1/2) ||x||_t -> ||x||_K as t -> inf",
                        diff <= 0.02});
  }
  return rep;
}

namespace {

std::vector<ComplexMatrix> read_tuple(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("input is not valid JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.empty()) throw std::invalid_argument("input must be a non-empty array of matrices");
  std::vector<ComplexMatrix> out;
  for (const auto& mat : doc) {
    if (!mat.is_array() || mat.empty()) throw std::invalid_argument("each matrix must be a non-empty array of rows");
    const Index rows = Index(mat.size()), cols = Index(mat[0].size());
    ComplexMatrix x(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      const auto& row = mat[std::size_t(i)];
      if (!row.is_array() || Index(row.size()) != cols) throw std::invalid_argument("ragged matrix rows");
      for (Index j = 0; j < cols; ++j) {
        const auto& e = row[std::size_t(j)];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          throw std::invalid_argument("entries must be [re, im] pairs");
        x(i, j) = cplx(e[0].get<double>(), e[1].get<double>());
      }
    }
    out.push_back(std::move(x));
  }
  return out;
}

ReportRow oh_row(const MatrixTuple& t, const std::string& source, const ExperimentConfig& cfg, std::uint64_t seed) {
  const double oh = oh_norm(t);
  const SupFormResult sf = oh_norm_sup_form(t, cfg.restarts, cfg.tol, seed);
  const double gap = oh > 0.0 ? std::abs(sf.value - oh) / oh : std::abs(sf.value);
  return {"oh-norm",
          {{"source", source}, {"n", (long long)t.n()}, {"m", (long long)t.m()}},
          {{"column", column_norm(t)}, {"row", row_norm(t)}, {"oh", oh}, {"sup_form", sf.value}, {"rel_gap", gap}},
          {{"rel_gap_max", 1e-3}},
          "||sum x_k (x) conj x_k||^(1/2) = sup (sum tr(a x_k b x_k*))^(1/2) over ||a||_2 = ||b||_2 = 1",
          gap <= 1e-3};
}

}  // namespace

Report run_oh_norm(const ExperimentConfig& cfg) {
  Report rep;
  if (!cfg.input.empty()) {
    rep.rows.push_back(oh_row(MatrixTuple(read_tuple(cfg.input)), "input", cfg, cfg.seed));
    return rep;
  }
  const int count = trials_or(cfg, 5);
  const auto seeds = row_seeds(cfg.seed, std::size_t(count));
  for (int k = 0; k < count; ++k) {
    Rng rng(seeds[std::size_t(k)]);
    const int n = rng.integer(1, 4), m = rng.integer(1, 6);
    std::vector<ComplexMatrix> x;
    for (int i = 0; i < n; ++i) x.push_back(random_complex(m, m, rng));
    rep.rows.push_back(oh_row(MatrixTuple(std::move(x)), "random", cfg, rng.next()));
  }
  return rep;
}

}  // namespace ohlab
