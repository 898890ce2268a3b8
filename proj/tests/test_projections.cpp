#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relaxwave/projections.hpp"
#include "test_util.hpp"

using namespace relaxwave;
using testutil::max_abs;

TEST_CASE("bracket coefficients") {
  std::mt19937 rng(3);
  for (int n = 1; n <= 6; ++n) {
    const CMatrix a = testutil::random_complex(rng, n);
    const auto ap = linalg::poly_adjugate(a);
    CHECK(max_abs(projections::bracket_power(ap, 0) - a.determinant() * a.inverse()) < 1e-9);
    for (int k = 0; k < n; ++k)
      CHECK(std::abs(projections::bracket_trace(ap, k) - projections::bracket_power(ap, k).trace()) < 1e-9);
  }
}

TEST_CASE("damped wave damping matrix") {
  const CMatrix b = linalg::make_matrix({{0, 0}, {0, 1}});
  const auto pr = projections::proj_semisimple_zero(b, 1);
  CHECK(max_abs(pr.P - linalg::make_matrix({{1, 0}, {0, 0}})) < 1e-15);
  CHECK(max_abs(pr.S - linalg::make_matrix({{0, 0}, {0, 1}})) < 1e-15);
  CHECK(pr.m == 1);
}

TEST_CASE("closed form matches the oracle on planted zeros") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 5;
    const int m = 1 + trial % (n - 1);
    const auto pl = testutil::planted_zero(rng, n, m);
    const auto f = projections::proj_semisimple_zero(pl.A, m);
    const auto o = projections::proj_oracle(pl.A, 0.0);
    CHECK(o.m == m);
    CHECK(max_abs(f.P - o.P) <= 1e-7 * pl.cond * pl.cond);
    CHECK(max_abs(f.P - pl.P) <= 1e-7 * pl.cond * pl.cond);
    const CMatrix id = CMatrix::Identity(n, n);
    for (const auto* pr : {&f, &o}) {
      CHECK(max_abs(pr->P * pr->P - pr->P) < 1e-8);
      CHECK(max_abs(pl.A * pr->P) < 1e-8);
      CHECK(max_abs(pl.A * pr->P - pr->P * pl.A) < 1e-8);
      CHECK(max_abs(pr->S * pl.A - (id - pr->P)) < 1e-8);
      CHECK(max_abs(pl.A * pr->S - (id - pr->P)) < 1e-8);
      CHECK(max_abs(pr->S * pr->P) < 1e-8);
      CHECK(linalg::numerical_rank(pr->P, 1e-8) == m);
    }
  }
}

TEST_CASE("defective zero breaks the closed form") {
  const CMatrix j = linalg::make_matrix({{0, 1}, {0, 0}});
  try {
    projections::proj_semisimple_zero(j, 1);
    FAIL("expected ZeroDenominator");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroDenominator);
  }
}

TEST_CASE("oracle refuses ambiguous clusters") {
  const CMatrix a = linalg::make_matrix({{0, 0}, {0, 5e-6}});
  try {
    projections::proj_oracle(a, 0.0, 1e-6);
    FAIL("expected ClusterAmbiguous");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ClusterAmbiguous);
  }
}
