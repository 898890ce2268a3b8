#include "relaxwave/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace relaxwave::projections {

CMatrix bracket_power(const linalg::AdjugatePoly& expansion, int k) {
  return expansion.adj.coefficient(k);
}

cplx bracket_trace(const linalg::AdjugatePoly& expansion, int k) {
  const auto idx = static_cast<std::size_t>(k + 1);
  if (k < 0 || idx >= expansion.det.size()) return 0.0;
  return static_cast<double>(k + 1) * expansion.det[idx];
}

namespace {

void check_denominator(const CMatrix& a, cplx trace, int k) {
  const Eigen::Index n = a.rows();
  const double scale = std::pow(std::max(1.0, linalg::norm_inf(a)), static_cast<double>(n - k - 1));
  if (std::abs(trace) <= 1e-13 * scale)
    throw Error(Errc::ZeroDenominator,
                "Tr[A]^" + std::to_string(k) +
                    " vanishes: multiplicity wrong or eigenvalue 0 is not semi-simple");
}

}  // namespace

CMatrix eigenprojection_formula(const CMatrix& a, int k) {
  linalg::require_square(a, "projector input");
  const auto expansion = linalg::poly_adjugate(a);
  const cplx tr = bracket_trace(expansion, k);
  check_denominator(a, tr, k);
  return static_cast<double>(k + 1) * bracket_power(expansion, k) / tr;
}

CMatrix reduced_resolvent_formula(const CMatrix& a, int k) {
  linalg::require_square(a, "reduced resolvent input");
  const auto expansion = linalg::poly_adjugate(a);
  const cplx tr_k = bracket_trace(expansion, k);
  check_denominator(a, tr_k, k);
  const cplx tr_k1 = bracket_trace(expansion, k + 1);
  const double k1 = k + 1.0;
  const double k2 = k + 2.0;
  const CMatrix numerator =
      (k1 * k2 * tr_k) * bracket_power(expansion, k + 1) - (k1 * k1 * tr_k1) * bracket_power(expansion, k);
  return numerator / (k2 * tr_k * tr_k);
}

ProjectorPair proj_semisimple_zero(const CMatrix& a, int m) {
  linalg::require_square(a, "projector input");
  linalg::require_finite(a, "projector input");
  const Eigen::Index n = a.rows();
  if (m < 1 || m > n) throw Error(Errc::InvalidArgument, "multiplicity must lie in [1, n]");

  const auto expansion = linalg::poly_adjugate(a);
  const int k = m - 1;
  const cplx tr_k = bracket_trace(expansion, k);
  check_denominator(a, tr_k, k);
  const cplx tr_k1 = bracket_trace(expansion, k + 1);
  const CMatrix bk = bracket_power(expansion, k);
  const CMatrix bk1 = bracket_power(expansion, k + 1);

  ProjectorPair out;
  out.m = m;
  out.P = static_cast<double>(m) * bk / tr_k;
  const double k1 = k + 1.0;
  const double k2 = k + 2.0;
  out.S = ((k1 * k2 * tr_k) * bk1 - (k1 * k1 * tr_k1) * bk) / (k2 * tr_k * tr_k);

  const double pnorm = std::max(1.0, linalg::norm_inf(out.P));
  if (linalg::norm_inf(out.P * out.P - out.P) > 1e-8 * pnorm * pnorm)
    throw Error(Errc::PostconditionFailure, "computed eigenprojection is not idempotent");
  return out;
}

ProjectorPair proj_oracle(const CMatrix& a, cplx eigenvalue, double radius) {
  const auto dec = linalg::eig(a);
  if (radius <= 0.0) radius = 1e-8 * std::max(1.0, linalg::norm_inf(a));
  const Eigen::Index n = a.rows();

  std::vector<int> inside;
  double gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(n); ++k) {
    const double dist = std::abs(dec.values[k] - eigenvalue);
    if (dist <= radius)
      inside.push_back(k);
    else
      gap = std::min(gap, dist);
  }
  if (inside.empty()) throw Error(Errc::InvalidArgument, "target is not an eigenvalue within the cluster radius");
  if (gap < 10.0 * radius) throw Error(Errc::ClusterAmbiguous, "eigenvalue cluster is not isolated");

  const CMatrix vinv = dec.vectors.inverse();
  ProjectorPair out;
  out.m = static_cast<int>(inside.size());
  out.P = CMatrix::Zero(n, n);
  out.S = CMatrix::Zero(n, n);
  for (int k = 0; k < static_cast<int>(n); ++k) {
    const CMatrix pk = dec.vectors.col(k) * vinv.row(k);
    if (std::find(inside.begin(), inside.end(), k) != inside.end())
      out.P += pk;
    else
      out.S += pk / (dec.values[k] - eigenvalue);
  }
  return out;
}

}  // namespace relaxwave::projections
