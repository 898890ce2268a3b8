#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relaxwave/io.hpp"
#include "relaxwave/profiles.hpp"
#include "test_util.hpp"

using namespace relaxwave;
using namespace relaxwave::profiles;
using testutil::max_abs;

namespace {

SystemDef fixture(const char* name) { return io::load_system(std::string(RELAXWAVE_DATA_DIR) + "/" + name); }

CVector e1(Eigen::Index n) {
  CVector v = CVector::Zero(n);
  v(0) = 1.0;
  return v;
}

// Classical RK4 on d/dt w = E w.
CVector rk4(const CMatrix& e, CVector w, double t, int steps) {
  const double h = t / steps;
  for (int k = 0; k < steps; ++k) {
    const CVector k1 = e * w;
    const CVector k2 = e * (w + 0.5 * h * k1);
    const CVector k3 = e * (w + 0.5 * h * k2);
    const CVector k4 = e * (w + h * k3);
    w += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return w;
}

}  // namespace

TEST_CASE("grid validation") {
  for (auto bad : {std::pair{1.0, 8}, std::pair{1.0, 100}, std::pair{0.0, 64}, std::pair{-1.0, 64}}) {
    try {
      GridSpec::make(bad.first, bad.second);
      FAIL("expected InvalidArgument");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::InvalidArgument);
    }
  }
  const auto g = GridSpec::make(10.0, 16);
  CHECK(g.x(0) == -10.0);
  CHECK(g.xi(1) == doctest::Approx(M_PI / 10.0));
  CHECK(g.xi(15) == doctest::Approx(-M_PI / 10.0));
}

TEST_CASE("semigroup property") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> lx(-3.0, 2.0), ut(0.0, 5.0);
  for (const auto& sys : {systems::damped_wave(), systems::asymmetric_relaxation(), fixture("jordan_relaxation.json")}) {
    for (int k = 0; k < 100; ++k) {
      const double xi = std::pow(10.0, lx(rng)) * (k % 2 ? 1 : -1);
      const double t1 = ut(rng), t2 = ut(rng);
      CHECK(max_abs(Ghat(sys, xi, t1 + t2) - Ghat(sys, xi, t1) * Ghat(sys, xi, t2)) < 1e-9);
    }
  }
}

TEST_CASE("kernels are conjugate-symmetric in xi") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> lx(-3.0, 2.5), ut(0.1, 20.0);
  for (const auto& sys : {systems::damped_wave(), systems::asymmetric_relaxation(), fixture("jordan_relaxation.json")}) {
    const auto red = reduction::reduce_low(sys);
    const auto hf = reduction::reduce_high(sys);
    for (int k = 0; k < 30; ++k) {
      const double xi = std::pow(10.0, lx(rng)), t = ut(rng);
      CHECK(max_abs(Ghat(sys, -xi, t) - Ghat(sys, xi, t).conjugate()) < 1e-10);
      CHECK(max_abs(Khat(red, -xi, t) - Khat(red, xi, t).conjugate()) < 1e-10);
      CHECK(max_abs(Vhat(hf, -xi, t) - Vhat(hf, xi, t).conjugate()) < 1e-10);
      CHECK(max_abs(Khat_star(red, -xi, t) - Khat_star(red, xi, t).conjugate()) < 1e-10);
    }
  }
}

TEST_CASE("exact kernel against a time-stepping oracle") {
  const auto sys = systems::asymmetric_relaxation();
  for (double xi : {0.01, 0.3, 1.0, 4.0}) {
    const CVector w0 = CVector::Ones(2);
    const CVector oracle = rk4(sys.E(xi), w0, 1.0, 4000);
    CHECK((Ghat(sys, xi, 1.0) * w0 - oracle).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("kernel limits") {
  const auto sys = systems::damped_wave();
  const auto red = reduction::reduce_low(sys);
  const auto hf = reduction::reduce_high(sys);
  CHECK(max_abs(Ghat(sys, 0.7, 0.0) - CMatrix::Identity(2, 2)) < 1e-15);
  CHECK(max_abs(Khat(red, 0.0, 3.0) - red.P0) < 1e-14);
  CHECK(max_abs(Vhat(hf, 0.3, 0.0) - CMatrix::Identity(2, 2)) < 1e-14);
  // Low frequencies: G - K decays, high frequencies: G - V decays.
  CHECK(max_abs(Ghat(sys, 0.01, 50.0) - Khat(red, 0.01, 50.0)) < 1e-2);
  CHECK(max_abs(Ghat(sys, 100.0, 5.0) - Vhat(hf, 100.0, 5.0)) < 1e-2);
}

TEST_CASE("refined kernel needs simple reduced speeds") {
  const auto sys = SystemDef::make("twins", linalg::make_matrix({{0, 0, 1}, {0, 0, 0}, {1, 0, 0}}),
                                   linalg::make_matrix({{0, 0, 0}, {0, 0, 0}, {0, 0, 1}}));
  const auto red = reduction::reduce_low(sys);
  try {
    Khat_star(red, 0.1, 1.0);
    FAIL("expected MissingPj1");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingPj1);
  }
}

TEST_CASE("solver: mass, realness and domain guard") {
  const auto sys = systems::damped_wave();
  const auto grid = GridSpec::make(200.0, 1 << 11);
  const Solver solver(sys, grid, InitialData::gaussian(e1(2)));
  const auto u = solver.solve(10.0, Profile::Exact);
  CHECK(u.values.rows() == grid.N);
  CHECK(u.values.allFinite());
  // The first component is conserved.
  const cplx mass = u.values.col(0).sum() * grid.dx();
  CHECK(std::abs(mass - std::sqrt(M_PI)) < 1e-10);
  const double peak = u.values.cwiseAbs().maxCoeff();
  for (auto p : {Profile::Exact, Profile::Diffusion, Profile::DiffusionRefined, Profile::ExpWave}) {
    const auto s = solver.solve(10.0, p);
    CHECK(s.values.imag().cwiseAbs().maxCoeff() <= 1e-8 * peak);
  }
  const auto snap = solver.snapshot(10.0, false);
  CHECK(max_abs(snap.residual.values - (snap.u.values - snap.U.values - snap.V.values)) < 1e-12);
  try {
    solver.check_domain(1e4);
    FAIL("expected DomainTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DomainTooSmall);
  }
}

TEST_CASE("gaussian datum samples") {
  const auto grid = GridSpec::make(20.0, 256);
  const auto u0 = InitialData::gaussian(e1(2), 2.0, 1.0);
  const CMatrix s = u0.sample(grid);
  const int mid = 128 + static_cast<int>(1.0 / grid.dx());
  CHECK(std::abs(s(mid, 0) - std::exp(-std::pow(grid.x(mid) - 1.0, 2) / 4.0)) < 1e-15);
  CHECK(u0.support(grid) == doctest::Approx(17.0));
}

TEST_CASE("profiles need the reductions") {
  const auto sys = fixture("defective.json");
  const Solver solver(sys, GridSpec::make(200.0, 1 << 10), InitialData::gaussian(e1(2)));
  CHECK(solver.solve(1.0, Profile::Exact).values.allFinite());
  CHECK_FALSE(solver.low().has_value());
  try {
    solver.solve(1.0, Profile::Diffusion);
    FAIL("expected ConditionViolation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConditionViolation);
  }
}
