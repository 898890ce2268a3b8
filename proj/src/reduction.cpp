#include "relaxwave/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "relaxwave/projections.hpp"
#include "relaxwave/structure.hpp"

namespace relaxwave::reduction {

namespace {

constexpr double kSpeedRadius = 1e-7;   // clustering of sigma(C')
constexpr double kBlockRadius = 1e-6;   // clustering inside compressed blocks and sigma(B)
constexpr double kNilpotentRel = 1e-8;

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

// Eigenvalue clusters of a small block with the Riesz projector of each;
// the block may be defective, in which case the eigenvalues come out split
// by roughly sqrt(eps) and are merged by the cluster radius.
struct BlockPart {
  cplx center;
  int mult = 0;
  CMatrix projector;  // in block coordinates
};

std::vector<BlockPart> split_block(const CMatrix& block) {
  std::vector<BlockPart> parts;
  if (block.rows() == 0) return parts;
  const auto values = linalg::eigenvalues(block);
  const double radius = kBlockRadius * std::max(1.0, linalg::norm_inf(block));
  for (const auto& cl : linalg::cluster_values(values, radius)) {
    BlockPart part;
    part.center = cl.center;
    part.mult = static_cast<int>(cl.members.size());
    part.projector = linalg::spectral_projector(block, cl.center, part.mult);
    parts.push_back(std::move(part));
  }
  return parts;
}

// P and S for the eigenvalue 0 of `shifted` with multiplicity `mult`: the
// closed-form route when it succeeds, otherwise the Riesz projector with
// S = (T + P)^{-1} (I - P).
projections::ProjectorPair branch_projectors(const CMatrix& shifted, int mult, bool* semisimple) {
  try {
    auto pair = projections::proj_semisimple_zero(shifted, mult);
    const double tol = 1e-7 * std::max(1.0, linalg::norm_inf(shifted)) * std::max(1.0, linalg::norm_inf(pair.P));
    if (linalg::norm_inf(shifted * pair.P) <= tol) {
      *semisimple = true;
      return pair;
    }
  } catch (const Error& e) {
    if (e.code() != Errc::ZeroDenominator && e.code() != Errc::PostconditionFailure) throw;
  }
  *semisimple = false;
  const Eigen::Index n = shifted.rows();
  projections::ProjectorPair pair;
  pair.m = mult;
  pair.P = linalg::spectral_projector(shifted, 0.0, mult);
  pair.S = (shifted + pair.P).partialPivLu().solve(identity(n) - pair.P);
  return pair;
}

double max_abs(const std::vector<cplx>& values) {
  double out = 0.0;
  for (const auto& v : values) out = std::max(out, std::abs(v));
  return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double nearest_distance(const std::vector<cplx>& values, cplx target) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : values) best = std::min(best, std::abs(v - target));
  return best;
}

}  // namespace

std::vector<double> log_space(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw Error(Errc::InvalidArgument, "log_space needs 0 < lo <= hi");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo), b = std::log10(hi);
  for (int k = 0; k < count; ++k) out[k] = std::pow(10.0, a + (b - a) * k / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

ChapmanEnskogData reduce_low(const SystemDef& sys) {
  const auto condA = structure::check_condition_A(sys);
  if (!condA.holds) throw Error(Errc::ConditionViolation, "condition A fails: " + condA.evidence);
  int m = 0;
  const auto condB = structure::check_condition_B(sys, &m);
  if (!condB.holds) throw Error(Errc::ConditionViolation, "condition B fails: " + condB.evidence);

  const CMatrix& A = sys.A();
  const CMatrix& B = sys.B();
  const Eigen::Index n = sys.n();

  ChapmanEnskogData red;
  red.m = m;
  const auto zero = projections::proj_semisimple_zero(B, m);
  red.P0 = zero.P;
  red.S0 = zero.S;
  red.P01 = -red.P0 * A * red.S0 - red.S0 * A * red.P0;
  red.C = red.P0 * A * red.P0;
  red.D = -(red.P01 * B * red.P01 + red.P0 * A * red.P01 + red.P01 * A * red.P0);
  red.alpha_shift = 1.0 + max_abs(linalg::eigenvalues(red.C));
  red.Cprime = red.C + red.alpha_shift * red.P0;

  const auto speeds = linalg::eigenvalues(red.Cprime);
  const double cnorm = std::max(1.0, linalg::norm_inf(red.Cprime));
  const double tol = linalg::default_tol(red.Cprime);
  for (const auto& cl : linalg::cluster_values(speeds, kSpeedRadius * cnorm)) {
    if (std::abs(cl.center) <= std::max(tol, 1e-6 * cnorm)) continue;
    DiffusionBranch br;
    br.c_shifted = cl.center;
    br.c = cl.center.real() - red.alpha_shift;
    br.mult = static_cast<int>(cl.members.size());
    const auto pair = branch_projectors(red.Cprime - cl.center * identity(n), br.mult, &br.semisimple);
    br.Pj0 = pair.P;
    br.Sj0 = pair.S;

    const CMatrix Dj = br.Pj0 * red.D * br.Pj0;
    const CMatrix basis = linalg::range_basis(br.Pj0, br.mult);
    const CMatrix compressed = basis.adjoint() * Dj * basis;
    for (const auto& part : split_block(compressed)) {
      DiffusionSubBranch sub;
      sub.d = part.center;
      sub.mult = part.mult;
      sub.Pjl0 = basis * part.projector * basis.adjoint() * br.Pj0;
      sub.Njl0 = (Dj - sub.d * identity(n)) * sub.Pjl0;
      if (!linalg::is_nilpotent(sub.Njl0, kNilpotentRel))
        throw Error(Errc::BranchExtractionFailure,
                    "residual of the diffusion block at c = " + std::to_string(br.c) + " is not nilpotent");
      br.sub.push_back(std::move(sub));
    }

    if (br.mult == 1) {
      const CMatrix& P = br.Pj0;
      const CMatrix& S = br.Sj0;
      const CMatrix diffusive = P * red.D * S + S * red.D * P;
      br.Pj1_diffusive = diffusive;
      br.Pj1 = diffusive - red.alpha_shift * (P * red.P01 * S + S * red.P01 * P);
    }
    red.branches.push_back(std::move(br));
  }
  red.h = static_cast<int>(red.branches.size());
  return red;
}

std::vector<FastDecayGroup> fast_groups(const SystemDef& sys) {
  const CMatrix& B = sys.B();
  const double bnorm = std::max(1.0, linalg::norm_inf(B));
  const auto values = linalg::eigenvalues(B);
  std::vector<FastDecayGroup> out;
  int index = 0;
  for (const auto& cl : linalg::cluster_values(values, kBlockRadius * bnorm)) {
    if (std::abs(cl.center) <= 1e-8 * bnorm) continue;
    FastDecayGroup g;
    g.e = cl.center;
    g.mult = static_cast<int>(cl.members.size());
    g.Fj0 = linalg::spectral_projector(B, g.e, g.mult);
    g.Mj0 = (B - g.e * identity(sys.n())) * g.Fj0;
    g.k_index = ++index;
    if (!linalg::is_nilpotent(g.Mj0, kNilpotentRel))
      throw Error(Errc::BranchExtractionFailure, "fast-decay group has a non-nilpotent residual");
    out.push_back(std::move(g));
  }
  return out;
}

HighFreqData reduce_high(const SystemDef& sys) {
  const auto condA = structure::check_condition_A(sys);
  if (!condA.holds) throw Error(Errc::ConditionViolation, "condition A fails: " + condA.evidence);
  const CMatrix& A = sys.A();
  const Eigen::Index n = sys.n();
  const double anorm = std::max(1.0, linalg::norm_inf(A));

  // Eigenvectors per cluster from the null space of A - a, sign-normalized so that the largest entry of each column is positive.
  const auto values = linalg::eigenvalues(A);
  const auto clusters = linalg::cluster_values(values, kBlockRadius * anorm);
  HighFreqData hf;
  hf.Q = CMatrix::Zero(n, n);
  std::vector<double> diag(static_cast<std::size_t>(n));
  Eigen::Index col = 0;
  for (const auto& cl : clusters) {
    const double a = cl.center.real();
    const auto mult = static_cast<Eigen::Index>(cl.members.size());
    // A is real (SystemDef enforces it), so a real SVD gives a real basis.
    const Eigen::MatrixXd shifted = A.real() - a * Eigen::MatrixXd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeFullV);
    CMatrix basis = svd.matrixV().rightCols(mult).cast<cplx>();
    for (Eigen::Index k = 0; k < mult; ++k) {
      Eigen::Index r = 0;
      basis.col(k).cwiseAbs().maxCoeff(&r);
      const cplx lead = basis(r, k);
      basis.col(k) *= std::abs(lead) / lead;
      basis.col(k).normalize();
      hf.Q.col(col) = basis.col(k);
      diag[static_cast<std::size_t>(col)] = a;
      ++col;
    }
    HighFreqBranch br;
    br.alpha = a;
    for (Eigen::Index k = col - mult; k < col; ++k) br.indices.push_back(static_cast<int>(k));
    hf.branches.push_back(std::move(br));
  }

  hf.Qinv = hf.Q.inverse();
  const CMatrix abar = hf.Qinv * A * hf.Q;
  hf.Abar = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) hf.Abar(k, k) = diag[static_cast<std::size_t>(k)];
  if (linalg::norm_inf(abar - hf.Abar) > 1e-8 * anorm)
    throw Error(Errc::ConditionViolation, "A is not diagonalized by its eigenvector basis");
  hf.Bbar = hf.Qinv * sys.B() * hf.Q;
  hf.s = static_cast<int>(hf.branches.size());

  for (auto& br : hf.branches) {
    const auto k = static_cast<Eigen::Index>(br.indices.size());
    br.Pij0 = CMatrix::Zero(n, n);
    CMatrix block(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      br.Pij0(br.indices[r], br.indices[r]) = 1.0;
      for (Eigen::Index c = 0; c < k; ++c) block(r, c) = hf.Bbar(br.indices[r], br.indices[c]);
    }
    const CMatrix compressed = br.Pij0 * hf.Bbar * br.Pij0;
    for (const auto& part : split_block(block)) {
      HighFreqSubBranch sub;
      sub.beta = part.center;
      sub.mult = part.mult;
      sub.Pijl0 = CMatrix::Zero(n, n);
      for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < k; ++c) sub.Pijl0(br.indices[r], br.indices[c]) = part.projector(r, c);
      sub.Thetajl0 = (compressed - sub.beta * identity(n)) * sub.Pijl0;
      if (!linalg::is_nilpotent(sub.Thetajl0, kNilpotentRel))
        throw Error(Errc::BranchExtractionFailure, "high-frequency block has a non-nilpotent residual");
      br.sub.push_back(std::move(sub));
    }
  }
  return hf;
}

std::vector<EigencurveSample> sample_eigencurves(const SystemDef& sys, const std::vector<double>& xi_values) {
  std::vector<EigencurveSample> out;
  out.reserve(xi_values.size());
  for (std::size_t s = 0; s < xi_values.size(); ++s) {
    if (s > 0 && xi_values[s] < xi_values[s - 1])
      throw Error(Errc::InvalidArgument, "xi values must be sorted ascending");
    EigencurveSample sample;
    sample.xi = xi_values[s];
    auto current = linalg::eigenvalues(sys.E(sample.xi));
    const int n = static_cast<int>(current.size());

    if (!out.empty()) {
      const auto& prev = out.back().eigenvalues;
      // Greedy nearest neighbour; global assignment when any previous value
      // has no clear nearest candidate or the greedy choice collides.
      std::vector<int> pick(static_cast<std::size_t>(n), -1);
      std::vector<char> used(static_cast<std::size_t>(n), 0);
      bool ambiguous = false;
      for (int i = 0; i < n && !ambiguous; ++i) {
        double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
        int best = -1;
        for (int j = 0; j < n; ++j) {
          const double d = std::abs(current[j] - prev[i]);
          if (d < d1) {
            d2 = d1;
            d1 = d;
            best = j;
          } else if (d < d2) {
            d2 = d;
          }
        }
        if (n > 1 && d2 < 2.0 * d1) ambiguous = true;
        if (used[best]) ambiguous = true;
        used[best] = 1;
        pick[i] = best;
      }
      if (ambiguous) {
        Eigen::MatrixXd cost(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) cost(i, j) = std::abs(current[j] - prev[i]);
        pick = linalg::min_cost_assignment(cost);
      }
      std::vector<cplx> ordered(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) ordered[i] = current[pick[i]];
      current = std::move(ordered);
    }
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (std::abs(current[a] - current[b]) < 1e-6) sample.coalescing.emplace_back(a, b);
    sample.eigenvalues = std::move(current);
    out.push_back(std::move(sample));
  }
  return out;
}

ExpansionOrderReport expansion_order_check(const SystemDef& sys, const ChapmanEnskogData& red,
                                           const HighFreqData& hf, const ExpansionOrderOptions& opts) {
  ExpansionOrderReport rep;
  const double eps = std::numeric_limits<double>::epsilon();

  auto measure = [&](const std::vector<double>& grid, auto predict) {
    BranchSlope bs;
    std::vector<double> fx, fy;
    for (double xi : grid) {
      const CMatrix E = sys.E(xi);
      const double res = nearest_distance(linalg::eigenvalues(E), predict(xi));
      bs.xi.push_back(xi);
      bs.residual.push_back(res);
      if (res > 1e3 * eps * std::max(1.0, linalg::norm_inf(E))) {
        fx.push_back(xi);
        fy.push_back(res);
      }
    }
    if (fx.size() < 3) {
      bs.fitted = false;
      bs.slope = std::numeric_limits<double>::quiet_NaN();
    } else {
      bs.slope = fit_slope(fx, fy);
    }
    return bs;
  };

  const auto low = log_space(opts.low_min, opts.low_max, opts.points);
  for (std::size_t j = 0; j < red.branches.size(); ++j) {
    const auto& br = red.branches[j];
    for (std::size_t l = 0; l < br.sub.size(); ++l) {
      const cplx d = br.sub[l].d;
      const double c = br.c;
      auto bs = measure(low, [&](double xi) { return cplx(0.0, -c * xi) - d * xi * xi; });
      bs.branch = static_cast<int>(j);
      bs.sub = static_cast<int>(l);
      rep.low.push_back(std::move(bs));
    }
  }

  const auto high = log_space(opts.high_min, opts.high_max, opts.points);
  for (std::size_t j = 0; j < hf.branches.size(); ++j) {
    const auto& br = hf.branches[j];
    for (std::size_t l = 0; l < br.sub.size(); ++l) {
      const cplx beta = br.sub[l].beta;
      const double a = br.alpha;
      auto bs = measure(high, [&](double xi) { return cplx(0.0, -a * xi) - beta; });
      bs.branch = static_cast<int>(j);
      bs.sub = static_cast<int>(l);
      rep.high.push_back(std::move(bs));
    }
  }

  rep.symmetric_gain = !rep.low.empty() && std::all_of(rep.low.begin(), rep.low.end(), [](const BranchSlope& b) {
    return !b.fitted || b.slope >= 3.5;
  });
  return rep;
}

CMatrix zero_group_projection(const SystemDef& sys, double xi, int m) {
  const auto dec = linalg::eig(sys.E(xi));
  const auto n = static_cast<int>(dec.values.size());
  if (m < 1 || m > n) throw Error(Errc::InvalidArgument, "group size out of range");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(dec.values[a]) < std::abs(dec.values[b]); });
  const CMatrix vinv = dec.vectors.inverse();
  CMatrix p = CMatrix::Zero(n, n);
  for (int k = 0; k < m; ++k) p += dec.vectors.col(order[k]) * vinv.row(order[k]);
  return p;
}

CMatrix eigenprojection_near(const SystemDef& sys, double xi, cplx target) {
  const auto dec = linalg::eig(sys.E(xi));
  int best = 0;
  for (int k = 1; k < static_cast<int>(dec.values.size()); ++k)
    if (std::abs(dec.values[k] - target) < std::abs(dec.values[best] - target)) best = k;
  const CMatrix vinv = dec.vectors.inverse();
  return dec.vectors.col(best) * vinv.row(best);
}

}  // namespace relaxwave::reduction
