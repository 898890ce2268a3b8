#include "relaxwave/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace relaxwave {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonSquare: return "NonSquare";
    case Errc::NumericalFailure: return "NumericalFailure";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::PostconditionFailure: return "PostconditionFailure";
    case Errc::ClusterAmbiguous: return "ClusterAmbiguous";
    case Errc::ConditionViolation: return "ConditionViolation";
    case Errc::BranchExtractionFailure: return "BranchExtractionFailure";
    case Errc::ReductionMissing: return "ReductionMissing";
    case Errc::MissingPj1: return "MissingPj1";
    case Errc::DomainTooSmall: return "DomainTooSmall";
    case Errc::DegenerateFit: return "DegenerateFit";
    case Errc::FitFailure: return "FitFailure";
    case Errc::ParseError: return "ParseError";
    case Errc::ShapeError: return "ShapeError";
    case Errc::ValueError: return "ValueError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace linalg {

CMatrix make_matrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  const auto nrows = static_cast<Eigen::Index>(rows.size());
  if (nrows == 0) throw Error(Errc::ShapeError, "empty matrix literal");
  const auto ncols = static_cast<Eigen::Index>(rows.begin()->size());
  CMatrix m(nrows, ncols);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != ncols)
      throw Error(Errc::ShapeError, "ragged matrix literal");
    Eigen::Index j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  require_finite(m, "matrix literal");
  return m;
}

void require_square(const CMatrix& m, std::string_view what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(Errc::NonSquare, std::string(what) + " must be square, got " +
                                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

void require_finite(const CMatrix& m, std::string_view what) {
  if (!m.allFinite()) throw Error(Errc::ValueError, std::string(what) + " has non-finite entries");
}

double norm_inf(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double default_tol(const CMatrix& m) { return 1e-10 * std::max(1.0, norm_inf(m)); }

std::vector<int> sort_spectrum(std::vector<cplx>& values) {
  // Keys are quantized so that values differing only by rounding compare
  // equal in the leading components; this keeps branch indices stable.
  double scale = 1.0;
  for (const auto& v : values) scale = std::max(scale, std::abs(v));
  const double quantum = 1e-9 * scale;
  auto key = [quantum](cplx v) {
    return std::tuple(std::llround(v.real() / quantum), std::llround(v.imag() / quantum),
                      std::abs(v));
  };
  std::vector<int> perm(values.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int a, int b) { return key(values[a]) < key(values[b]); });
  std::vector<cplx> sorted(values.size());
  for (std::size_t k = 0; k < perm.size(); ++k) sorted[k] = values[perm[k]];
  values = std::move(sorted);
  return perm;
}

EigenDecomp eig(const CMatrix& m) {
  require_square(m, "eig input");
  require_finite(m, "eig input");
  Eigen::ComplexEigenSolver<CMatrix> solver(m, true);
  if (solver.info() != Eigen::Success) throw Error(Errc::NumericalFailure, "eigen iteration did not converge");

  EigenDecomp out;
  const auto& ev = solver.eigenvalues();
  out.values.assign(ev.data(), ev.data() + ev.size());
  const auto perm = sort_spectrum(out.values);
  out.vectors.resize(m.rows(), m.cols());
  for (std::size_t k = 0; k < perm.size(); ++k)
    out.vectors.col(static_cast<Eigen::Index>(k)) = solver.eigenvectors().col(perm[k]);

  out.rcond = rcond(out.vectors);
  CMatrix lambda = CMatrix::Zero(m.rows(), m.cols());
  for (std::size_t k = 0; k < out.values.size(); ++k)
    lambda(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = out.values[k];
  out.residual = norm_inf(m * out.vectors - out.vectors * lambda) / std::max(1.0, norm_inf(m));
  return out;
}

std::vector<cplx> eigenvalues(const CMatrix& m) {
  require_square(m, "eig input");
  require_finite(m, "eig input");
  Eigen::ComplexEigenSolver<CMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) throw Error(Errc::NumericalFailure, "eigen iteration did not converge");
  const auto& ev = solver.eigenvalues();
  std::vector<cplx> values(ev.data(), ev.data() + ev.size());
  sort_spectrum(values);
  return values;
}

CMatrix expm(const CMatrix& m) {
  require_square(m, "expm input");
  return m.exp();
}

CMatrix nilpotent_exp(const CMatrix& n, cplx scale) {
  require_square(n, "nilpotent part");
  const Eigen::Index dim = n.rows();
  CMatrix result = CMatrix::Identity(dim, dim);
  CMatrix term = CMatrix::Identity(dim, dim);
  for (Eigen::Index k = 1; k <= dim; ++k) {
    term = (term * n) * (scale / static_cast<double>(k));
    if (term.isZero(0.0)) break;
    result += term;
  }
  return result;
}

CMatrix PolyMatrix::coefficient(int h) const {
  if (h < 0 || h > degree()) return CMatrix::Zero(dim(), dim());
  return coeffs[static_cast<std::size_t>(h)];
}

CMatrix PolyMatrix::operator()(cplx x) const {
  CMatrix acc = CMatrix::Zero(dim(), dim());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

cplx poly_eval(const std::vector<cplx>& ascending, cplx x) {
  cplx acc = 0.0;
  for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) acc = acc * x + *it;
  return acc;
}

AdjugatePoly poly_adjugate(const CMatrix& m) {
  require_square(m, "poly_adjugate input");
  // adj(M + xI) = adj(xI - T) with T = -M; Faddeev-LeVerrier on T:
  //   N_1 = I, c_{n-1} = -tr(T N_1), N_k = T N_{k-1} + c_{n-k+1} I,
  //   c_{n-k} = -tr(T N_k) / k, adj(xI - T) = sum_k N_k x^{n-k}.
  const Eigen::Index n = m.rows();
  const CMatrix t = -m;
  const CMatrix id = CMatrix::Identity(n, n);

  AdjugatePoly out;
  out.det.assign(static_cast<std::size_t>(n) + 1, cplx{0.0});
  out.det[static_cast<std::size_t>(n)] = 1.0;
  out.adj.coeffs.assign(static_cast<std::size_t>(n), CMatrix::Zero(n, n));

  CMatrix nk = CMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    nk = t * nk + out.det[static_cast<std::size_t>(n - k + 1)] * id;
    out.adj.coeffs[static_cast<std::size_t>(n - k)] = nk;
    out.det[static_cast<std::size_t>(n - k)] = -(t * nk).trace() / static_cast<double>(k);
  }
  return out;
}

int numerical_rank(const CMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > tol * s(0)) ++rank;
  return rank;
}

double rcond(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

CMatrix range_basis(const CMatrix& m, Eigen::Index dim) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(dim);
}

CMatrix null_basis(const CMatrix& m, Eigen::Index dim) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(dim);
}

std::vector<Cluster> cluster_values(const std::vector<cplx>& values, double radius) {
  // Union-find over the (small) complete graph of values within `radius`.
  const int n = static_cast<int>(values.size());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (std::abs(values[a] - values[b]) <= radius) parent[find(b)] = find(a);

  std::vector<Cluster> clusters;
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a) {
    const int root = find(a);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(clusters.size());
      clusters.push_back({});
    }
    clusters[slot[root]].members.push_back(a);
  }
  for (auto& c : clusters) {
    cplx sum = 0.0;
    for (int idx : c.members) sum += values[idx];
    c.center = sum / static_cast<double>(c.members.size());
  }
  return clusters;
}

CMatrix spectral_projector(const CMatrix& m, cplx center, int mult) {
  require_square(m, "spectral_projector input");
  const Eigen::Index n = m.rows();
  if (mult <= 0 || mult > n) throw Error(Errc::InvalidArgument, "multiplicity out of range");
  if (mult == n) return CMatrix::Identity(n, n);

  CMatrix shifted = m - center * CMatrix::Identity(n, n);
  CMatrix power = shifted;
  for (int k = 1; k < mult; ++k) power = power * shifted;

  Eigen::JacobiSVD<CMatrix> svd(power, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CMatrix basis(n, n);
  basis.leftCols(mult) = svd.matrixV().rightCols(mult);   // ker
  basis.rightCols(n - mult) = svd.matrixU().leftCols(n - mult);  // ran
  Eigen::PartialPivLU<CMatrix> lu(basis);
  if (rcond(basis) < 1e-13)
    throw Error(Errc::NumericalFailure, "kernel and range of the shifted power are not complementary");
  CMatrix selector = CMatrix::Zero(n, n);
  selector.leftCols(mult) = basis.leftCols(mult);
  return selector * lu.inverse();
}

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != cost.rows()) throw Error(Errc::NonSquare, "assignment cost must be square");
  // Potentials-based Hungarian algorithm, 1-based internal indexing.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) col[p[j] - 1] = j - 1;
  return col;
}

bool is_nilpotent(const CMatrix& x, double rel) {
  const Eigen::Index n = x.rows();
  CMatrix power = CMatrix::Identity(n, n);
  for (Eigen::Index k = 0; k < n; ++k) power = power * x;
  const double bound = rel * std::pow(std::max(1.0, norm_inf(x)), static_cast<double>(n));
  return norm_inf(power) <= bound;
}

}  // namespace linalg
}  // namespace relaxwave
