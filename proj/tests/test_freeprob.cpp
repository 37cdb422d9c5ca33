#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

#include "ohlab/freeprob.hpp"

#include <set>

using namespace ohlab;

namespace {

RealMatrix random_covariance(Index n, Rng& rng) {
  RealMatrix r(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) r(i, j) = rng.normal();
  const RealMatrix g = r * r.transpose() / double(n);
  return 0.5 * (g + g.transpose());
}

// Every word of length <= max_len over `letters` letters.
std::vector<std::vector<int>> all_words(int letters, int max_len) {
  std::vector<std::vector<int>> out{{}};
  std::vector<std::vector<int>> layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : layer)
      for (int a = 0; a < letters; ++a) {
        auto v = w;
        v.push_back(a);
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("pair partitions") {
  CHECK_THROWS_AS(PairPartition(3, {{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(PairPartition(4, {{0, 1}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(PairPartition(4, {{0, 1}, {2, 4}}), std::invalid_argument);
  CHECK(PairPartition(4, {{0, 3}, {1, 2}}).non_crossing());
  CHECK_FALSE(PairPartition(4, {{0, 2}, {3, 1}}).non_crossing());
  CHECK(PairPartition(4, {{2, 3}, {1, 0}}).pairs().front() == std::pair{0, 1});
}

TEST_CASE("non-crossing pairings are counted by the Catalan numbers") {
  for (int m = 0; m <= 20; m += 2) CHECK(enumerate_ncp(m).size() == oracle::catalan_binomial(m / 2));
  for (int m = 2; m <= 14; m += 2) CHECK(enumerate_ncp(m).size() == oracle::ncp_count_brute(m));
  CHECK(enumerate_ncp(7).empty());
  CHECK_THROWS_AS(enumerate_ncp(22), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_ncp(-2), std::invalid_argument);

  const auto all = enumerate_ncp(10);
  std::set<std::vector<std::pair<int, int>>> distinct;
  for (const auto& p : all) {
    CHECK(p.non_crossing());
    distinct.insert(p.pairs());
  }
  CHECK(distinct.size() == all.size());
  // (m-1)!! matchings in total.
  CHECK(enumerate_pairings(8).size() == 105);
  CHECK_THROWS_AS(enumerate_pairings(16), std::invalid_argument);
}

TEST_CASE("covariance forms") {
  ComplexMatrix bad(2, 2);
  bad << 1.0, 0.5, 0.1, 1.0;
  CHECK_THROWS_AS(CovarianceForm{bad}, std::invalid_argument);
  ComplexMatrix indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(CovarianceForm{indefinite}, std::invalid_argument);
  ComplexMatrix complex_pos(2, 2);
  complex_pos << 1.0, cplx(0, 0.5), cplx(0, -0.5), 1.0;
  const CovarianceForm c(complex_pos);
  CHECK_FALSE(c.is_real());
  CHECK(CovarianceForm::diagonal(RealVector::Ones(3)).is_real());
}

TEST_CASE("Speicher moments") {
  RealVector v(2);
  v << 1.5, 0.5;
  const CovarianceForm cov = CovarianceForm::diagonal(v);
  for (int k = 0; k <= 6; ++k)
    CHECK(speicher_moment(cov, std::vector<int>(std::size_t(2 * k), 0)).real() ==
          doctest::Approx(double(oracle::catalan_binomial(k)) * std::pow(1.5, k)));
  CHECK(speicher_moment(cov, {0, 0, 0}) == cplx(0.0));
  CHECK(std::abs(speicher_moment(cov, {0, 1, 0, 1})) == 0.0);
  CHECK(speicher_moment(cov, {0, 0, 1, 1}).real() == doctest::Approx(0.75));
  CHECK(speicher_moment(cov, {0, 1, 1, 0}).real() == doctest::Approx(0.75));
  CHECK_THROWS_AS(speicher_moment(cov, {0, 2}), std::invalid_argument);
}

TEST_CASE("covariance from densities") {
  const QuadGrid g = make_grid(128);
  Rng rng(12);
  std::vector<ComplexVector> fns;
  for (int i = 0; i < 3; ++i) fns.push_back(random_complex_vector(g.size(), rng));
  const RealVector d1 = g.sample([](double t) { return t; }), d2 = g.sample([](double t) { return 1.0 - t; });
  const CovarianceForm c = covariance_from_densities(fns, g, d1, d2);
  CHECK(hermitian_defect(c.matrix()) < 1e-12);
  CHECK(hermitian_eig(c.matrix()).values(0) >= -1e-12);
  // Real functions give P_ij = int f_i f_j (d1 + d2) dmu.
  std::vector<ComplexVector> real_fns{g.sample([](double t) { return t; }).cast<cplx>(),
                                      RealVector::Ones(g.size()).cast<cplx>()};
  const CovarianceForm r = covariance_from_densities(real_fns, g, d1, d2);
  CHECK(r.pair_value(0, 1).real() == doctest::Approx(0.5));
  CHECK(r.pair_value(1, 1).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(covariance_from_densities(fns, g, -d1, d2), std::invalid_argument);

  CHECK(std::abs(oh_pairing(RealVector::Ones(g.size()).cast<cplx>(), RealVector::Ones(g.size()).cast<cplx>(), g,
                            RealVector::Ones(g.size()), RealVector::Ones(g.size())) -
                 1.0) < 1e-13);
}

TEST_CASE("truncated Fock space bookkeeping") {
  CHECK(TruncatedFock::dimension_for(3, 2) == 13);
  CHECK(TruncatedFock::dimension_for(1, 5) == 6);
  const TruncatedFock f(CovarianceForm::diagonal(RealVector::Ones(2)), 3);
  CHECK(f.dimension() == 15);
  CHECK(f.word_index({}) == 0);
  CHECK(f.word_index({1}) == 2);
  CHECK(f.word_index({0, 0}) == 3);
  CHECK(f.word_index({1, 1, 1}) == 14);
  CHECK_THROWS_AS(f.word_index({0, 0, 0, 0}), std::out_of_range);
  CHECK_THROWS_AS(f.word_index({2}), std::out_of_range);
  CHECK_THROWS_WITH_AS(TruncatedFock(CovarianceForm::diagonal(RealVector::Ones(6)), 8), doctest::Contains("2015539"),
                       std::length_error);
  CHECK_NOTHROW(TruncatedFock(CovarianceForm::diagonal(RealVector::Ones(6)), 8, 2015539));
}

TEST_CASE("semicircular operators are symmetric and match the matrix-free action") {
  Rng rng(13);
  const CovarianceForm cov(random_covariance(3, rng).cast<cplx>());
  const TruncatedFock f(cov, 4);
  const RealVector h = RealVector::Random(3);
  const SparseOperator s = build_semicircular(f, h);
  CHECK((RealMatrix(s) - RealMatrix(s).transpose()).norm() < 1e-14);
  const RealVector in = RealVector::Random(Index(f.dimension()));
  RealVector out;
  f.apply_orthonormal(f.orthonormal_coefficients(h), in, out);
  CHECK((out - s * in).norm() < 1e-12 * (1.0 + out.norm()));
}

TEST_CASE("vacuum moments agree with the pair-partition sum") {
  testing::for_cases(14, 5, [](Rng& rng, int) {
    const Index letters = rng.integer(1, 3);
    const CovarianceForm cov(random_covariance(letters, rng).cast<cplx>());
    const TruncatedFock f(cov, 4);
    std::vector<SparseOperator> ops;
    for (Index a = 0; a < letters; ++a) ops.push_back(build_semicircular(f, RealVector::Unit(letters, a)));
    for (const auto& w : all_words(int(letters), 8)) {
      std::vector<SparseOperator> seq;
      for (int a : w) seq.push_back(ops[std::size_t(a)]);
      const cplx sp = speicher_moment(cov, w);
      CHECK(std::abs(vacuum_moment(f, seq) - sp) <= 1e-12 * std::max(1.0, std::abs(sp)));
    }
  });
}

TEST_CASE("Voiculescu check on unit variances") {
  // The sum of n free unit semicirculars on the depth-L space has norm
  // 2 sqrt(n) cos(pi / (L + 2)).
  for (int n : {1, 2, 4})
    for (int depth : {2, 4, 6}) {
      const VoiculescuResult r = voiculescu_check(RealVector::Ones(n), depth);
      CHECK(r.lhs_trunc ==
            doctest::Approx(2.0 * std::sqrt(double(n)) * std::cos(oracle::kPi / (depth + 2))).epsilon(1e-9));
      CHECK(r.lhs_trunc <= r.rhs);
      CHECK(r.full_norm == doctest::Approx(2.0 * std::sqrt(double(n))));
    }
  CHECK_THROWS_AS(voiculescu_check(RealVector::Ones(6), 8), std::length_error);
  CHECK_THROWS_AS(voiculescu_check(-RealVector::Ones(2), 2), std::invalid_argument);
}

TEST_CASE("Voiculescu inequality on random variances") {
  testing::for_cases(15, 30, [](Rng& rng, int) {
    const Index n = rng.integer(1, 4);
    RealVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = rng.uniform(0.01, 3.0);
    const VoiculescuResult r = voiculescu_check(v, rng.integer(1, 5));
    CHECK(r.lhs_trunc <= r.rhs * (1.0 + 1e-12));
    CHECK(r.lhs_trunc <= r.full_norm * (1.0 + 1e-12));
  });
}

TEST_CASE("Lanczos norm of a diagonal operator") {
  RealVector diag = RealVector::LinSpaced(50, -3.0, 2.0);
  const double v = lanczos_norm([&](const RealVector& in, RealVector& out) { out = diag.cwiseProduct(in); }, 50, 60, 3);
  CHECK(v == doctest::Approx(3.0).epsilon(1e-10));
}
