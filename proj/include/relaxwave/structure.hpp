#pragma once

// Checkers for the structural hypotheses on (A, B):
//   A  - A diagonalizable with real spectrum
//   B  - 0 semi-simple eigenvalue of B, the rest of sigma(B) in Re > 0
//   C  - C = P0 A P0 diagonalizable with real spectrum on ker(B)
//   C' - as C, with dim ker(B) distinct eigenvalues
//   D  - Re lambda(i xi) <= -theta xi^2 / (1 + xi^2) for all xi != 0
//   S  - a symmetric invertible S with A S = -S A, B S = S B

#include <string>
#include <vector>

#include "relaxwave/reduction.hpp"
#include "relaxwave/system.hpp"

namespace relaxwave::structure {

struct ConditionResult {
  bool holds = false;
  std::string reason;    // short machine-friendly code, e.g. "complex-spectrum"
  std::string evidence;  // human-readable diagnostics
  std::vector<cplx> spectrum;
};

struct ConditionReport {
  ConditionResult condA, condB, condC, condCprime, condD, condS;
  double theta_est = 0.0;
  int m = 0;
};

ConditionResult check_condition_A(const SystemDef& sys);

/// Also reports the multiplicity of the eigenvalue 0 of B through `m`.
ConditionResult check_condition_B(const SystemDef& sys, int* m = nullptr);

ConditionResult check_condition_C(const SystemDef& sys, const reduction::ChapmanEnskogData& red);
ConditionResult check_condition_Cprime(const SystemDef& sys, const reduction::ChapmanEnskogData& red);

/// Default sampling: 400 log-spaced points in [1e-3, 1e3].
std::vector<double> default_xi_grid();

struct ConditionDResult {
  ConditionResult result;
  double theta_est = 0.0;
  double argmin_xi = 0.0;
};

/// Grid infimum of -Re lambda (1 + xi^2) / xi^2 plus the asymptotic
/// positivity certificates Re d > 0, Re beta > 0, Re e > 0.
ConditionDResult check_condition_D(const SystemDef& sys, const reduction::ChapmanEnskogData& red,
                                   const reduction::HighFreqData& hf,
                                   const std::vector<reduction::FastDecayGroup>& fast,
                                   const std::vector<double>& xi_grid);

/// Computes the reductions itself; throws ReductionMissing when condition A
/// or B fails.
ConditionDResult check_condition_D(const SystemDef& sys, const std::vector<double>& xi_grid = default_xi_grid());

ConditionResult check_condition_S(const SystemDef& sys);

/// All checks; C, C', D are reported as failing with reason
/// "reduction-missing" when A or B fails.
ConditionReport check_all(const SystemDef& sys, const std::vector<double>& xi_grid = default_xi_grid());

}  // namespace relaxwave::structure
