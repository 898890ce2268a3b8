#include "relaxwave/system.hpp"

namespace relaxwave {

namespace {

void require_real(const CMatrix& m, const char* what) {
  if (m.imag().cwiseAbs().maxCoeff() != 0.0)
    throw Error(Errc::ValueError, std::string(what) + " must have real entries");
}

}  // namespace

SystemDef SystemDef::make(std::string name, CMatrix a, CMatrix b, std::optional<CMatrix> s) {
  if (a.rows() == 0 || a.rows() != a.cols())
    throw Error(Errc::ShapeError, "A must be square and non-empty");
  if (b.rows() != a.rows() || b.cols() != a.cols())
    throw Error(Errc::ShapeError, "B must have the same shape as A");
  linalg::require_finite(a, "A");
  linalg::require_finite(b, "B");
  require_real(a, "A");
  require_real(b, "B");
  if (s) {
    if (s->rows() != a.rows() || s->cols() != a.cols())
      throw Error(Errc::ShapeError, "S must have the same shape as A");
    linalg::require_finite(*s, "S");
    require_real(*s, "S");
    const double tol = linalg::default_tol(*s);
    if (linalg::norm_inf(*s - s->transpose()) > tol) throw Error(Errc::ValueError, "S must be symmetric");
    if (linalg::rcond(*s) < 1e-12) throw Error(Errc::ValueError, "S must be invertible");
  }
  return SystemDef(std::move(name), std::move(a), std::move(b), std::move(s));
}

CMatrix SystemDef::E(double xi) const { return -(b_ + cplx(0.0, xi) * a_); }

namespace systems {

SystemDef damped_wave() {
  return SystemDef::make("damped_wave", linalg::make_matrix({{0, 1}, {1, 0}}),
                         linalg::make_matrix({{0, 0}, {0, 1}}), linalg::make_matrix({{1, 0}, {0, -1}}));
}

SystemDef goldstein_kac() {
  return SystemDef::make("goldstein_kac", linalg::make_matrix({{1, 0}, {0, -1}}),
                         linalg::make_matrix({{0.5, -0.5}, {-0.5, 0.5}}), linalg::make_matrix({{0, 1}, {1, 0}}));
}

SystemDef asymmetric_relaxation() {
  return SystemDef::make("asymmetric_relaxation", linalg::make_matrix({{1, 0}, {0, -1}}),
                         linalg::make_matrix({{1, -1}, {-2, 2}}));
}

}  // namespace systems
}  // namespace relaxwave
