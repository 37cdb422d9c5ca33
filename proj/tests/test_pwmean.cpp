#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

#include "ohlab/pwmean.hpp"

using namespace ohlab;

namespace {

double sqrt_product_oracle(const CommutingPair& p, const ComplexVector& x) {
  const ComplexMatrix s = oracle::denman_beavers_sqrt(p.A() * p.B());
  return inner(x, s * x).real();
}

ComplexVector unit_vector(Index n, Rng& rng) {
  const ComplexVector x = random_complex_vector(n, rng);
  return x / x.norm();
}

}  // namespace

TEST_CASE("CommutingPair invariants") {
  CHECK_THROWS_AS(CommutingPair::scalars(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(CommutingPair::scalars(1.0, -2.0), std::invalid_argument);
  Rng rng(8);
  const ComplexMatrix h1 = random_positive_definite(3, rng, 0.1), h2 = random_positive_definite(3, rng, 0.1);
  CHECK_THROWS_AS(CommutingPair::from_matrices(h1, h2), std::invalid_argument);
  CHECK_THROWS_AS(CommutingPair(ComplexMatrix::Ones(2, 2), RealVector::Ones(2), RealVector::Ones(2)),
                  std::invalid_argument);

  const CommutingPair p = random_commuting_pair(4, 0.1, 10.0, rng);
  const CommutingPair q = CommutingPair::from_matrices(p.A(), p.B());
  CHECK((q.A() - p.A()).norm() < 1e-9);
  CHECK((q.B() - p.B()).norm() < 1e-9);
  CHECK((p.A() * p.B() - p.B() * p.A()).norm() < 1e-10 * p.A().norm() * p.B().norm());
}

TEST_CASE("geometric mean form") {
  CHECK(geomean_form(CommutingPair::scalars(4, 9), ComplexVector::Ones(1)) == doctest::Approx(6.0));
  testing::for_cases(21, 10, [](Rng& rng, int) {
    const CommutingPair p = random_commuting_pair(6, 0.1, 10.0, rng);
    const ComplexVector x = unit_vector(6, rng);
    CHECK(geomean_form(p, x) == doctest::Approx(sqrt_product_oracle(p, x)).epsilon(1e-10));
    const CommutingPair same(p.basis(), p.a_eigs(), p.a_eigs());
    CHECK(geomean_form(same, x) == doctest::Approx(inner(x, p.A() * x).real()).epsilon(1e-12));
  });
  CHECK_THROWS_AS(geomean_form(CommutingPair::scalars(1, 1), ComplexVector::Ones(2)), std::invalid_argument);
}

TEST_CASE("primal formula: scalar examples") {
  const ComplexVector one = ComplexVector::Ones(1);
  CHECK(pw_primal(CommutingPair::scalars(1, 1), one, make_grid(512)) == doctest::Approx(1.0).epsilon(1e-8));
  const double v = pw_primal(CommutingPair::scalars(2, 8), one, make_grid(1024));
  CHECK(std::abs(v - 4.0) < 1e-6);
  // The closed form itself, re-derived by adaptive quadrature.
  const double q = oracle::mu_integral([](double t) { return 1.0 / (t / 2.0 + (1.0 - t) / 8.0); });
  CHECK(std::abs(q - 4.0) < 1e-10);
}

TEST_CASE("primal formula: random commuting matrices") {
  const QuadGrid g = make_grid(2048);
  testing::for_cases(31, 10, [&](Rng& rng, int) {
    const CommutingPair p = random_commuting_pair(4, 0.1, 10.0, rng);
    const ComplexVector x = unit_vector(4, rng);
    CHECK(std::abs(pw_primal(p, x, g) - geomean_form(p, x)) < 1e-5);
  });
}

TEST_CASE("primal formula properties") {
  const QuadGrid g = make_grid(1024);
  testing::for_cases(41, 10, [&](Rng& rng, int) {
    const CommutingPair p = random_commuting_pair(3, 0.2, 5.0, rng);
    const ComplexVector x = unit_vector(3, rng);
    const double v = pw_primal(p, x, g);
    CHECK(pw_primal(p.swapped(), x, g) == doctest::Approx(v).epsilon(1e-8));
    for (double lam : {2.0, 10.0}) {
      const CommutingPair s(p.basis(), lam * p.a_eigs(), p.b_eigs() / lam);
      CHECK(pw_primal(s, x, g) == doctest::Approx(v).epsilon(1e-8));
    }
  });
}

TEST_CASE("every feasible decomposition costs at least the primal value") {
  const QuadGrid g = make_grid(64);
  testing::for_cases(51, 5, [&](Rng& rng, int) {
    const CommutingPair p = random_commuting_pair(3, 0.2, 5.0, rng);
    const ComplexVector x = unit_vector(3, rng);
    const double v = pw_primal(p, x, g);
    const ComplexMatrix a = p.A(), b = p.B();
    for (int trial = 0; trial < 100; ++trial) {
      double cost = 0.0;
      for (Index i = 0; i < g.size(); ++i) {
        const double t = g.node(i);
        const ComplexVector bt = (1.0 - t) * x + 0.5 * random_complex_vector(3, rng);
        const ComplexVector at = x - bt;
        cost += g.mu_weight(i) * (inner(at, a * at).real() / t + inner(bt, b * bt).real() / (1.0 - t));
      }
      CHECK(cost >= v * (1.0 - 1e-12));
    }
  });
}

TEST_CASE("dual program") {
  const ComplexVector one = ComplexVector::Ones(1);
  CHECK(std::abs(pw_dual(CommutingPair::scalars(1, 1), one, make_grid(256)) - 1.0) < 1e-6);
  CHECK(std::abs(pw_dual(CommutingPair::scalars(4, 9), one, make_grid(1024)) - 6.0) < 1e-4);
  const DualResult r = pw_dual_solve(CommutingPair::scalars(4, 9), one, make_grid(1024));
  CHECK(r.condition >= 1.0);
  CHECK_THROWS_AS(pw_dual(CommutingPair::scalars(1, 1), one, make_grid(64), -1.0), std::invalid_argument);
}

TEST_CASE("dual gap shrinks under refinement") {
  testing::for_cases(61, 5, [](Rng& rng, int) {
    const CommutingPair p = random_commuting_pair(3, 1e-2, 1e2, rng);
    const ComplexVector y = unit_vector(3, rng);
    double prev = kInf;
    for (int r : {128, 256, 512, 1024, 2048}) {
      const QuadGrid g = make_grid(r);
      const double gap = std::abs(pw_dual(p, y, g) - pw_primal(p, y, g));
      const double value = geomean_form(p, y);
      CHECK((gap <= prev || gap <= 1e-12 * value));
      prev = gap;
    }
    CHECK(prev <= 1e-3 * geomean_form(p, y));
  });
}

TEST_CASE("alpha-weighted mean") {
  for (double alpha : {0.1, 0.25, 0.5, 0.75, 0.9})
    CHECK(alpha_normaliser(alpha) == doctest::Approx(oracle::kPi / std::sin(oracle::kPi * alpha)).epsilon(1e-10));
  CHECK_THROWS_AS(alpha_normaliser(1.0), std::invalid_argument);

  const QuadGrid g = make_grid(512);
  const ComplexVector one = ComplexVector::Ones(1);
  CHECK(alpha_mean(CommutingPair::scalars(1, 16), 0.25, one, g) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK_THROWS_AS(alpha_mean(CommutingPair::scalars(1, 1), 0.0, one, g), std::invalid_argument);
  CHECK_THROWS_AS(alpha_mean(CommutingPair::scalars(1, 1), 1.0, one, g), std::invalid_argument);

  testing::for_cases(71, 5, [&](Rng& rng, int) {
    const CommutingPair p = random_commuting_pair(4, 0.1, 10.0, rng);
    const ComplexVector x = unit_vector(4, rng);
    CHECK(std::abs(alpha_mean(p, 0.5, x, g) - pw_primal(p, x, g)) < 1e-8);
    const double alpha = rng.uniform(0.05, 0.95);
    RealVector spec = p.a_eigs().array().pow(1.0 - alpha) * p.b_eigs().array().pow(alpha);
    const double exact = inner(x, p.with_spectrum(spec) * x).real();
    CHECK(alpha_mean(p, alpha, x, g) == doctest::Approx(exact).epsilon(1e-8));
    const CommutingPair same(p.basis(), p.a_eigs(), p.a_eigs());
    CHECK(alpha_mean(same, alpha, x, g) == doctest::Approx(inner(x, p.A() * x).real()).epsilon(1e-10));
  });
}
