// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "relaxwave/profiles.hpp"
#include "relaxwave/projections.hpp"
#include "relaxwave/rates.hpp"
#include "relaxwave/reduction.hpp"
#include "relaxwave/structure.hpp"
#include "test_util.hpp"

using namespace relaxwave;
using testutil::max_abs;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

CVector e1(Eigen::Index n) {
  CVector v = CVector::Zero(n);
  v(0) = 1.0;
  return v;
}

const profiles::GridSpec kGrid = profiles::GridSpec::make(2200.0, 1 << 14);

// 1
void projection_oracle(Outcome& o) {
  std::mt19937 rng(20240601);
  double worst_ratio = 0.0, worst_s = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + trial % 5;
    const int m = 1 + (trial / 5) % (n - 1);
    const auto pl = testutil::planted_zero(rng, n, m);
    const auto f = projections::proj_semisimple_zero(pl.A, m);
    const auto oracle = projections::proj_oracle(pl.A, 0.0);
    const double err = max_abs(f.P - oracle.P);
    worst_ratio = std::max(worst_ratio, err / (pl.cond * pl.cond));
    worst_s = std::max(worst_s, max_abs(f.S * pl.A - (CMatrix::Identity(n, n) - f.P)));
  }
  o.detail << "max |P - oracle| / cond^2 = " << worst_ratio << ", max |SA - (I - P)| = " << worst_s;
  o.require(worst_ratio <= 1e-7, "projector");
  o.require(worst_s <= 1e-8, "reduced resolvent");
}

// 2
void damped_wave_exact(Outcome& o) {
  const auto red = reduction::reduce_low(systems::damped_wave());
  double err = max_abs(red.P0 - linalg::make_matrix({{1, 0}, {0, 0}}));
  err = std::max(err, max_abs(red.S0 - linalg::make_matrix({{0, 0}, {0, 1}})));
  err = std::max(err, max_abs(red.P01 - linalg::make_matrix({{0, -1}, {-1, 0}})));
  err = std::max(err, max_abs(red.D - linalg::make_matrix({{1, 0}, {0, 0}})));
  o.require(red.branches.size() == 1 && red.branches[0].sub.size() == 1, "one branch");
  if (o.pass) {
    err = std::max(err, std::abs(red.branches[0].c));
    err = std::max(err, std::abs(red.branches[0].sub[0].d - 1.0));
  }
  o.detail << "max deviation = " << err;
  o.require(err <= 1e-12, "values");
}

// 3
void expansion_orders(Outcome& o) {
  auto run = [&](const SystemDef& sys, double lo, double hi) {
    const auto rep = reduction::expansion_order_check(sys, reduction::reduce_low(sys), reduction::reduce_high(sys));
    o.require(!rep.low.empty() && !rep.high.empty(), sys.name() + " slopes present");
    for (const auto& b : rep.low) {
      o.detail << sys.name() << " low " << b.slope << "; ";
      o.require(b.fitted && b.slope >= lo && b.slope <= hi, sys.name() + " low slope");
    }
    for (const auto& b : rep.high) {
      o.require(b.fitted && b.slope >= -1.4 && b.slope <= -0.6, sys.name() + " high slope");
    }
    if (!rep.high.empty()) o.detail << sys.name() << " high " << rep.high.front().slope << "; ";
  };
  run(systems::damped_wave(), 3.6, 4.4);
  run(systems::goldstein_kac(), 3.6, 4.4);
  run(systems::asymmetric_relaxation(), 2.6, 3.4);
}

double slope_of(const rates::RateReport& rep, const std::string& kind, double p, double q) {
  for (const auto& e : rep.entries)
    if (e.kind == kind && e.p == p && e.q == q) return e.fitted_slope;
  return std::nan("");
}

// 4
void refined_rate(Outcome& o) {
  const auto rep = rates::verify_theorem(systems::damped_wave(), kGrid, profiles::InitialData::gaussian(e1(2)),
                                         {{rates::kInf, 1.0}, {2.0, 2.0}}, true);
  const double s_inf = slope_of(rep, "u-U-V", rates::kInf, 1.0), s_22 = slope_of(rep, "u-U-V", 2.0, 2.0);
  o.detail << "(inf,1) slope " << s_inf << " <= -1.35, (2,2) slope " << s_22 << " <= -0.85";
  o.require(s_inf <= -1.5 + 0.15, "(inf,1)");
  o.require(s_22 <= -1.0 + 0.15, "(2,2)");
}

// 5
void envelope_rate(Outcome& o) {
  const auto rep = rates::verify_theorem(systems::asymmetric_relaxation(), kGrid,
                                         profiles::InitialData::gaussian(e1(2)),
                                         {{rates::kInf, 1.0}, {2.0, 1.0}, {2.0, 2.0}}, false);
  for (const auto& e : rep.entries) {
    if (e.kind != "u-U-V") continue;
    const double bound = rates::theorem_slope(e.p, e.q, false) + 0.15;
    o.detail << "(" << rates::format_exponent(e.p) << "," << rates::format_exponent(e.q) << ") " << e.fitted_slope
             << " <= " << bound << "; ";
    o.require(e.fitted_slope <= bound, "u-U-V slope");
  }
}

// 6
void profile_norms(Outcome& o) {
  for (const auto& sys : {systems::damped_wave(), systems::asymmetric_relaxation()}) {
    const auto rep = rates::verify_theorem(sys, kGrid, profiles::InitialData::gaussian(e1(2)),
                                           {{rates::kInf, 1.0}, {2.0, 1.0}}, false);
    for (const auto& e : rep.entries) {
      if (e.kind == "U") {
        const double target = rates::profile_slope(e.p, e.q);
        o.detail << sys.name() << " U(" << rates::format_exponent(e.p) << ") " << e.fitted_slope << "; ";
        o.require(std::abs(e.fitted_slope - target) <= 0.1, sys.name() + " U slope");
      } else if (e.kind == "V") {
        o.detail << sys.name() << " V rate " << e.fitted_slope << "; ";
        o.require(e.fit == "exponential" && e.fitted_slope < 0.0, sys.name() + " V rate");
      }
    }
  }
}

// 7
void kernel_scan(Outcome& o) {
  const auto sys = systems::damped_wave();
  const auto red = reduction::reduce_low(sys);
  const auto hf = reduction::reduce_high(sys);
  rates::KernelScanOptions opts;
  const auto low = rates::kernel_norm_scan(sys, red, hf, 1.0, rates::Regime::Low, opts);
  opts.refined = true;
  const auto low_star = rates::kernel_norm_scan(sys, red, hf, 1.0, rates::Regime::Low, opts);
  const double s = low.rows.at(0).result.slope, s_star = low_star.rows.at(0).result.slope;
  o.detail << "low " << s << ", refined " << s_star;
  o.require(low.rows[0].fitted && s <= -1.0 + 0.15, "low");
  o.require(low_star.rows[0].fitted && s_star <= -1.5 + 0.15, "low refined");
  for (auto regime : {rates::Regime::Mid, rates::Regime::High}) {
    const auto scan = rates::kernel_norm_scan(sys, red, hf, 1.0, regime);
    for (const auto& row : scan.rows) {
      o.detail << "; " << rates::to_string(regime) << " " << row.quantity << " " << row.result.slope;
      o.require(row.fitted && row.fit == "exponential" && row.result.slope < 0.0,
                std::string(rates::to_string(regime)) + " " + row.quantity);
    }
  }
}

// 8
void property_suites(Outcome& o) {
  std::mt19937 rng(8);
  const std::vector<SystemDef> systems_list{systems::damped_wave(), systems::goldstein_kac(),
                                            systems::asymmetric_relaxation()};
  int checks = 0;
  auto need = [&](bool ok, const std::string& what) {
    ++checks;
    o.require(ok, what);
  };

  // linalg
  for (int k = 0; k < 50; ++k) {
    const int n = 1 + k % 6;
    CMatrix m = testutil::random_complex(rng, n);
    m *= 5.0 / std::max(1.0, linalg::norm_inf(m));
    need(max_abs(linalg::expm(m) * linalg::expm(-m) - CMatrix::Identity(n, n)) < 1e-10, "expm inverse");
    const auto ap = linalg::poly_adjugate(m);
    const cplx x(0.3 * k - 2.0, 0.7);
    const double scale = std::pow(std::max(1.0, linalg::norm_inf(m)), n);
    need(max_abs((m + x * CMatrix::Identity(n, n)) * ap.adj(x) -
                 linalg::poly_eval(ap.det, x) * CMatrix::Identity(n, n)) <= 1e-9 * scale,
         "adjugate identity");
  }

  for (const auto& sys : systems_list) {
    const auto n = sys.n();
    const CMatrix id = CMatrix::Identity(n, n);
    const auto red = reduction::reduce_low(sys);
    const auto hf = reduction::reduce_high(sys);
    const auto fast = reduction::fast_groups(sys);

    // spectral resolutions
    CMatrix sum_j = CMatrix::Zero(n, n), total = red.P0, pi = CMatrix::Zero(n, n);
    for (const auto& br : red.branches) {
      sum_j += br.Pj0;
      for (const auto& s : br.sub) need(linalg::is_nilpotent(s.Njl0, 1e-8), "N nilpotent");
    }
    for (const auto& g : fast) {
      total += g.Fj0;
      need(linalg::is_nilpotent(g.Mj0, 1e-8), "M nilpotent");
      need(g.e.real() > 0.0, "Re e > 0");
    }
    for (const auto& br : hf.branches) {
      pi += br.Pij0;
      for (const auto& s : br.sub) need(linalg::is_nilpotent(s.Thetajl0, 1e-8), "Theta nilpotent");
    }
    need(max_abs(sys.B() * red.P0) < 1e-10, "B P0 = 0");
    need(max_abs(sum_j - red.P0) < 1e-8, "sum P_j = P0");
    need(max_abs(total - id) < 1e-8, "P0 + sum F_j = I");
    need(max_abs(pi - id) < 1e-12, "sum Pi_j = I");
    need(max_abs(hf.Q * hf.Abar * hf.Qinv - sys.A()) < 1e-10, "Q Abar Q^-1 = A");

    // semigroup and realness
    std::uniform_real_distribution<double> lx(-3.0, 2.0), ut(0.0, 5.0);
    for (int k = 0; k < 100; ++k) {
      const double xi = std::pow(10.0, lx(rng)), t1 = ut(rng), t2 = ut(rng);
      need(max_abs(profiles::Ghat(sys, xi, t1 + t2) - profiles::Ghat(sys, xi, t1) * profiles::Ghat(sys, xi, t2)) <
               1e-9,
           "semigroup");
      need(max_abs(profiles::Khat(red, -xi, t1) - profiles::Khat(red, xi, t1).conjugate()) < 1e-12, "K real");
      need(max_abs(profiles::Vhat(hf, -xi, t1) - profiles::Vhat(hf, xi, t1).conjugate()) < 1e-12, "V real");
    }
    const profiles::Solver solver(sys, profiles::GridSpec::make(400.0, 1 << 12), profiles::InitialData::gaussian(e1(2)));
    const auto snap = solver.snapshot(20.0, false);
    const double peak = snap.u.values.cwiseAbs().maxCoeff();
    for (const auto* g : {&snap.u, &snap.U, &snap.V})
      need(g->values.imag().cwiseAbs().maxCoeff() <= 1e-8 * peak, "field realness");

    // dispersion symmetry
    if (structure::check_condition_S(sys).holds) {
      for (int k = 0; k < 50; ++k) {
        const double xi = std::pow(10.0, lx(rng));
        const auto a = linalg::eigenvalues(sys.E(xi)), b = linalg::eigenvalues(sys.E(-xi));
        Eigen::MatrixXd cost(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index j = 0; j < n; ++j) cost(i, j) = std::abs(a[i] - b[j]);
        const auto col = linalg::min_cost_assignment(cost);
        double worst = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, cost(i, col[i]));
        need(worst <= 1e-9 * std::max(1.0, xi), "dispersion symmetry");
      }
    }

    // report invariants
    const auto rep = structure::check_all(sys);
    need(!rep.condCprime.holds || rep.condC.holds, "C' implies C");
    need((rep.theta_est > 0.0) == rep.condD.holds, "theta > 0 iff D");
  }

  // exponent arithmetic
  for (double p : {1.0, 2.0, 4.0, rates::kInf})
    for (double q : {1.0, 2.0})
      if (q <= p)
        need(rates::theorem_slope(p, q, true) == rates::profile_slope(p, q) - 1.0, "exponent arithmetic");
  o.detail << checks << " checks";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"projection-oracle equivalence", projection_oracle},
      {"damped-wave reduction exactness", damped_wave_exact},
      {"expansion orders", expansion_orders},
      {"refined decay rate, damped wave", refined_rate},
      {"decay envelope, non-symmetric fixture", envelope_rate},
      {"profile norms", profile_norms},
      {"kernel-estimate scan", kernel_scan},
      {"property suites", property_suites},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s  %d  %-40s %6.2fs  %s\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), secs,
                o.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
