#pragma once

// Dense complex linear algebra for the small systems handled by the library.
// Matrices are plain Eigen::MatrixXcd values; the helpers below add the
// deterministic spectral ordering, clustering and projector machinery the
// reduction code depends on.

#include <complex>
#include <initializer_list>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "relaxwave/error.hpp"

namespace relaxwave {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace linalg {

/// Row-major literal constructor; rejects ragged rows and non-finite entries.
CMatrix make_matrix(std::initializer_list<std::initializer_list<cplx>> rows);

void require_square(const CMatrix& m, std::string_view what);
void require_finite(const CMatrix& m, std::string_view what);

double norm_inf(const CMatrix& m);

/// 1e-10 * max(1, ||m||_inf), the tolerance used wherever none is given.
double default_tol(const CMatrix& m);

struct EigenDecomp {
  std::vector<cplx> values;  // sorted by real part, imaginary part, magnitude
  CMatrix vectors;           // column k pairs with values[k]
  double rcond = 0.0;        // sigma_min / sigma_max of `vectors`
  double residual = 0.0;     // ||M V - V Lambda||_inf / max(1, ||M||_inf)
};

EigenDecomp eig(const CMatrix& m);

/// Eigenvalues only, same ordering as eig().
std::vector<cplx> eigenvalues(const CMatrix& m);

/// Sorts in place with the deterministic spectral ordering; returns the
/// permutation that was applied (new position -> old index).
std::vector<int> sort_spectrum(std::vector<cplx>& values);

CMatrix expm(const CMatrix& m);

/// exp(scale * n) for nilpotent n, by the finite power series.
CMatrix nilpotent_exp(const CMatrix& n, cplx scale);

/// Matrix-valued polynomial M_0 + M_1 x + ... + M_d x^d.
struct PolyMatrix {
  std::vector<CMatrix> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Eigen::Index dim() const { return coeffs.empty() ? 0 : coeffs.front().rows(); }
  /// Coefficient of x^h; zero matrix above the stored degree.
  CMatrix coefficient(int h) const;
  CMatrix operator()(cplx x) const;
};

struct AdjugatePoly {
  PolyMatrix adj;          // adj(M + xI), degree n-1
  std::vector<cplx> det;   // det(M + xI) coefficients, ascending, degree n
};

/// Faddeev-LeVerrier expansion of adj(M + xI) and det(M + xI).
AdjugatePoly poly_adjugate(const CMatrix& m);

cplx poly_eval(const std::vector<cplx>& ascending, cplx x);

/// Number of singular values above tol * sigma_max (0 for the zero matrix).
int numerical_rank(const CMatrix& m, double tol);

/// Reciprocal 2-norm condition number, 0 for singular input.
double rcond(const CMatrix& m);

/// Orthonormal basis (columns) of the dominant `dim`-dimensional left
/// singular subspace, i.e. the range of a rank-`dim` matrix.
CMatrix range_basis(const CMatrix& m, Eigen::Index dim);

/// Orthonormal basis of the `dim` smallest right singular directions.
CMatrix null_basis(const CMatrix& m, Eigen::Index dim);

struct Cluster {
  cplx center;               // mean of the members
  std::vector<int> members;  // indices into the clustered list
};

/// Single-linkage clustering of values (in the given order) with the given
/// radius; clusters are returned in order of first member.
std::vector<Cluster> cluster_values(const std::vector<cplx>& values, double radius);

/// Riesz projector of m for the eigenvalue cluster at `center` with algebraic
/// multiplicity `mult`: projects onto ker (m - center)^mult along its range.
/// Works for defective eigenvalues.
CMatrix spectral_projector(const CMatrix& m, cplx center, int mult);

/// Minimum-cost perfect matching of a square cost matrix (Hungarian method).
/// Returns col[row].
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

/// ||x^k|| relative check used for nilpotent parts: ||x^n|| <= rel * max(1,||x||)^n.
bool is_nilpotent(const CMatrix& x, double rel);

}  // namespace linalg
}  // namespace relaxwave
