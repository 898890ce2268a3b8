#include "relaxwave/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace relaxwave::structure {

namespace {

std::string format_spectrum(const std::vector<cplx>& values) {
  std::ostringstream os;
  os.precision(6);
  os << "{";
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) os << ", ";
    if (values[k].imag() == 0.0)
      os << values[k].real();
    else
      os << values[k].real() << (values[k].imag() < 0 ? "-" : "+") << std::abs(values[k].imag()) << "i";
  }
  os << "}";
  return os.str();
}

ConditionResult fail(std::string reason, std::string evidence, std::vector<cplx> spectrum = {}) {
  return {false, std::move(reason), std::move(evidence), std::move(spectrum)};
}

ConditionResult pass(std::string evidence, std::vector<cplx> spectrum = {}) {
  return {true, "", std::move(evidence), std::move(spectrum)};
}

// Diagonalizable-with-real-spectrum test shared by conditions A and C.
ConditionResult real_diagonalizable(const CMatrix& m, double tol, const std::string& label) {
  const auto dec = linalg::eig(m);
  for (const auto& v : dec.values)
    if (std::abs(v.imag()) > tol)
      return fail("complex-spectrum", label + " has non-real eigenvalues " + format_spectrum(dec.values),
                  dec.values);
  if (dec.rcond < 1e-8) {
    std::ostringstream os;
    os << label << " is not diagonalizable (eigenvector rcond " << dec.rcond << ")";
    return fail("defective", os.str(), dec.values);
  }
  return pass("sigma(" + label + ") = " + format_spectrum(dec.values), dec.values);
}

}  // namespace

ConditionResult check_condition_A(const SystemDef& sys) {
  return real_diagonalizable(sys.A(), linalg::default_tol(sys.A()), "A");
}

ConditionResult check_condition_B(const SystemDef& sys, int* m_out) {
  const CMatrix& b = sys.B();
  const auto values = linalg::eigenvalues(b);
  const double bnorm = std::max(1.0, linalg::norm_inf(b));
  const double radius = 1e-8 * bnorm;
  const double tol = linalg::default_tol(b);

  int m_alg = 0;
  for (const auto& v : values)
    if (std::abs(v) <= radius) ++m_alg;
  const int m_geo = static_cast<int>(sys.n()) - linalg::numerical_rank(b, 1e-10);
  if (m_out) *m_out = m_alg;

  std::ostringstream os;
  os << "sigma(B) = " << format_spectrum(values) << ", algebraic multiplicity of 0: " << m_alg
     << ", dim ker B: " << m_geo;
  if (m_alg == 0) return fail("no-kernel", os.str(), values);
  if (m_alg != m_geo) return fail("zero-not-semisimple", os.str(), values);
  for (const auto& v : values)
    if (std::abs(v) > radius && v.real() <= tol) return fail("spectrum-not-in-right-half-plane", os.str(), values);
  return pass(os.str(), values);
}

namespace {

std::vector<cplx> restricted_spectrum(const reduction::ChapmanEnskogData& red, linalg::EigenDecomp* dec_out) {
  const CMatrix basis = linalg::range_basis(red.P0, red.m);
  const CMatrix restricted = basis.adjoint() * red.C * basis;
  auto dec = linalg::eig(restricted);
  auto values = dec.values;
  if (dec_out) *dec_out = std::move(dec);
  return values;
}

}  // namespace

ConditionResult check_condition_C(const SystemDef& sys, const reduction::ChapmanEnskogData& red) {
  if (red.m == 0) throw Error(Errc::ReductionMissing, "no Chapman-Enskog data");
  const double tol = linalg::default_tol(sys.A());
  linalg::EigenDecomp dec;
  const auto values = restricted_spectrum(red, &dec);
  for (const auto& v : values)
    if (std::abs(v.imag()) > tol)
      return fail("complex-spectrum", "C on ker B has non-real eigenvalues " + format_spectrum(values), values);
  if (dec.rcond < 1e-8) return fail("defective", "C on ker B is not diagonalizable", values);
  return pass("sigma(C on ker B) = " + format_spectrum(values), values);
}

ConditionResult check_condition_Cprime(const SystemDef& sys, const reduction::ChapmanEnskogData& red) {
  auto c = check_condition_C(sys, red);
  if (!c.holds) return c;
  const double tol = linalg::default_tol(sys.A());
  const auto& values = c.spectrum;
  for (std::size_t a = 0; a < values.size(); ++a)
    for (std::size_t b = a + 1; b < values.size(); ++b)
      if (std::abs(values[a] - values[b]) <= tol)
        return fail("repeated-reduced-speed",
                    "C on ker B has a repeated eigenvalue: " + format_spectrum(values), values);
  return c;
}

std::vector<double> default_xi_grid() { return reduction::log_space(1e-3, 1e3, 400); }

ConditionDResult check_condition_D(const SystemDef& sys, const reduction::ChapmanEnskogData& red,
                                   const reduction::HighFreqData& hf,
                                   const std::vector<reduction::FastDecayGroup>& fast,
                                   const std::vector<double>& xi_grid) {
  ConditionDResult out;
  out.theta_est = std::numeric_limits<double>::infinity();
  for (double xi : xi_grid) {
    if (xi == 0.0) continue;
    const double weight = (1.0 + xi * xi) / (xi * xi);
    for (const auto& lambda : linalg::eigenvalues(sys.E(xi))) {
      const double ratio = -lambda.real() * weight;
      if (ratio < out.theta_est) {
        out.theta_est = ratio;
        out.argmin_xi = xi;
      }
    }
  }
  if (!std::isfinite(out.theta_est)) out.theta_est = 0.0;

  const double tol = linalg::default_tol(sys.B());
  std::ostringstream os;
  os.precision(6);
  os << "grid theta = " << out.theta_est << " at xi = " << out.argmin_xi << " (" << xi_grid.size()
     << " samples); ";
  std::string reason;
  double min_d = std::numeric_limits<double>::infinity();
  for (const auto& br : red.branches)
    for (const auto& s : br.sub) min_d = std::min(min_d, s.d.real());
  double min_beta = std::numeric_limits<double>::infinity();
  for (const auto& br : hf.branches)
    for (const auto& s : br.sub) min_beta = std::min(min_beta, s.beta.real());
  double min_e = std::numeric_limits<double>::infinity();
  for (const auto& g : fast) min_e = std::min(min_e, g.e.real());
  os << "min Re d = " << min_d << ", min Re beta = " << min_beta << ", min Re e = " << min_e
     << "; certified on grid and asymptotics only";

  if (!(out.theta_est > tol)) reason = "grid-theta-nonpositive";
  else if (!(min_d > tol)) reason = "low-frequency-certificate";
  else if (!(min_beta > tol)) reason = "high-frequency-certificate";
  else if (!(min_e > tol)) reason = "fast-group-certificate";

  out.result.holds = reason.empty();
  out.result.reason = reason;
  out.result.evidence = os.str();
  return out;
}

ConditionDResult check_condition_D(const SystemDef& sys, const std::vector<double>& xi_grid) {
  if (!check_condition_A(sys).holds || !check_condition_B(sys).holds)
    throw Error(Errc::ReductionMissing, "condition D needs the reductions, which require conditions A and B");
  const auto red = reduction::reduce_low(sys);
  const auto hf = reduction::reduce_high(sys);
  const auto fast = reduction::fast_groups(sys);
  return check_condition_D(sys, red, hf, fast, xi_grid);
}

ConditionResult check_condition_S(const SystemDef& sys) {
  if (!sys.S()) return fail("not-provided", "no symmetry matrix S supplied");
  const CMatrix& s = *sys.S();
  const double tol = 1e-10;
  const double an = std::max(1.0, linalg::norm_inf(sys.A()));
  const double bn = std::max(1.0, linalg::norm_inf(sys.B()));
  const double sn = std::max(1.0, linalg::norm_inf(s));
  const double anti = linalg::norm_inf(sys.A() * s + s * sys.A());
  const double comm = linalg::norm_inf(sys.B() * s - s * sys.B());
  std::ostringstream os;
  os << "||AS + SA|| = " << anti << ", ||BS - SB|| = " << comm;
  if (linalg::norm_inf(s - s.transpose()) > tol * sn) return fail("not-symmetric", os.str());
  if (linalg::rcond(s) < 1e-12) return fail("singular", os.str());
  if (anti > tol * an * sn) return fail("A-not-anticommuting", os.str());
  if (comm > tol * bn * sn) return fail("B-not-commuting", os.str());
  return pass(os.str());
}

ConditionReport check_all(const SystemDef& sys, const std::vector<double>& xi_grid) {
  ConditionReport rep;
  rep.condA = check_condition_A(sys);
  rep.condB = check_condition_B(sys, &rep.m);
  rep.condS = check_condition_S(sys);
  if (!rep.condA.holds || !rep.condB.holds) {
    const auto missing = fail("reduction-missing", "requires conditions A and B");
    rep.condC = rep.condCprime = rep.condD = missing;
    rep.theta_est = 0.0;
    return rep;
  }
  const auto red = reduction::reduce_low(sys);
  const auto hf = reduction::reduce_high(sys);
  const auto fast = reduction::fast_groups(sys);
  rep.condC = check_condition_C(sys, red);
  rep.condCprime = check_condition_Cprime(sys, red);
  const auto d = check_condition_D(sys, red, hf, fast, xi_grid);
  rep.condD = d.result;
  rep.theta_est = d.result.holds ? d.theta_est : 0.0;
  return rep;
}

}  // namespace relaxwave::structure
