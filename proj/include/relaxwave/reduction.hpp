#pragma once

// Expansion coefficients of the eigenvalues and eigenprojections of
// E(i xi) = -(B + i xi A): the low-frequency convection-diffusion data on
// ker(B), the fast-decaying groups attached to the nonzero spectrum of B,
// and the high-frequency transport/damping data in the eigenbasis of A.

#include <optional>
#include <vector>

#include "relaxwave/linalg.hpp"
#include "relaxwave/system.hpp"

namespace relaxwave::reduction {

struct DiffusionSubBranch {
  cplx d;          // lambda(i xi) ~ -i c xi - d xi^2
  int mult = 1;    // algebraic multiplicity of d in P_j D P_j on ran(P_j)
  CMatrix Pjl0;    // eigenprojection of d inside ran(P_j)
  CMatrix Njl0;    // nilpotent part (P_j D P_j - d) P_jl
};

struct DiffusionBranch {
  double c = 0.0;          // reduced speed
  cplx c_shifted;          // eigenvalue of C' = C + alpha P0
  int mult = 1;
  bool semisimple = true;  // false when the closed-form projector broke down
  CMatrix Pj0;
  CMatrix Sj0;
  /// First-order coefficient of the eigenprojection, P_j(i xi) = P_j0 + i xi P_j1 + O(xi^2).
  /// Only for simple reduced speeds.
  std::optional<CMatrix> Pj1;
  /// The D-dependent part P_j D S_j + S_j D P_j of Pj1 alone; the full
  /// coefficient also carries -alpha (P_j P01 S_j + S_j P01 P_j).
  std::optional<CMatrix> Pj1_diffusive;
  std::vector<DiffusionSubBranch> sub;
};

struct ChapmanEnskogData {
  CMatrix P0;   // eigenprojection of B at 0
  CMatrix S0;   // reduced resolvent coefficient of B at 0
  CMatrix P01;  // first-order coefficient of the 0-group total projection
  CMatrix C;    // P0 A P0
  CMatrix D;    // -(P01 B P01 + P0 A P01 + P01 A P0)
  double alpha_shift = 0.0;
  CMatrix Cprime;
  std::vector<DiffusionBranch> branches;
  int m = 0;  // dim ker B
  int h = 0;  // number of distinct reduced speeds
};

struct FastDecayGroup {
  cplx e;       // nonzero eigenvalue of B, Re e > 0 under condition B
  int mult = 1;
  CMatrix Fj0;  // eigenprojection of B at e
  CMatrix Mj0;  // nilpotent part (B - e) F_j
  int k_index = 0;
};

struct HighFreqSubBranch {
  cplx beta;         // mu(i xi) ~ -i alpha xi - beta
  int mult = 1;
  CMatrix Pijl0;     // projector inside ran(Pi_j), in the eigenbasis of A
  CMatrix Thetajl0;  // nilpotent part
};

struct HighFreqBranch {
  double alpha = 0.0;        // eigenvalue of A
  std::vector<int> indices;  // positions on the diagonal of Abar
  CMatrix Pij0;              // 0/1 diagonal selector
  std::vector<HighFreqSubBranch> sub;
};

struct HighFreqData {
  CMatrix Q;     // columns: eigenvectors of A, in spectral order
  CMatrix Qinv;
  CMatrix Abar;  // exactly diagonal
  CMatrix Bbar;  // Q^{-1} B Q
  int s = 0;
  std::vector<HighFreqBranch> branches;
};

struct EigencurveSample {
  double xi = 0.0;
  std::vector<cplx> eigenvalues;  // continuation-ordered
  std::vector<std::pair<int, int>> coalescing;  // pairs closer than 1e-6
};

struct BranchSlope {
  int branch = 0;      // diffusion branch j or high-frequency branch j
  int sub = 0;         // sub-branch l
  double slope = 0.0;  // log-log slope of the residual
  bool fitted = true;  // false when residuals sat at the rounding floor
  std::vector<double> xi;
  std::vector<double> residual;
};

struct ExpansionOrderReport {
  std::vector<BranchSlope> low;
  std::vector<BranchSlope> high;
  bool symmetric_gain = false;
};

/// Throws ConditionViolation when condition A or B fails.
ChapmanEnskogData reduce_low(const SystemDef& sys);

std::vector<FastDecayGroup> fast_groups(const SystemDef& sys);

/// Throws ConditionViolation when condition A fails.
HighFreqData reduce_high(const SystemDef& sys);

std::vector<EigencurveSample> sample_eigencurves(const SystemDef& sys, const std::vector<double>& xi_values);

struct ExpansionOrderOptions {
  double low_min = 1e-3, low_max = 1e-1;
  double high_min = 1e1, high_max = 1e3;
  int points = 20;
};

ExpansionOrderReport expansion_order_check(const SystemDef& sys, const ChapmanEnskogData& red,
                                           const HighFreqData& hf, const ExpansionOrderOptions& opts = {});

/// Sum of the eigenprojections of E(i xi) for its m eigenvalues of smallest
/// modulus (the 0-group at small xi).
CMatrix zero_group_projection(const SystemDef& sys, double xi, int m);

/// Eigenprojection of E(i xi) for the single eigenvalue nearest `target`.
CMatrix eigenprojection_near(const SystemDef& sys, double xi, cplx target);

/// Ascending log-spaced values.
std::vector<double> log_space(double lo, double hi, int count);

}  // namespace relaxwave::reduction
