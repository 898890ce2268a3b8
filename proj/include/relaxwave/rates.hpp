#pragma once

// Discrete L^p norms, log-log and log-linear decay fits, and the numerical
// verification of the L^p-L^q decay estimates for u - U - V, U and V.

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "relaxwave/profiles.hpp"

namespace relaxwave::rates {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct NormValue {
  double p = 2.0;
  double value = 0.0;
};

/// (dx sum |u_i|^p)^{1/p} with |u_i| the Euclidean norm of the grid point;
/// p = inf gives the maximum. Requires p >= 1.
NormValue lp_norm(const profiles::GridSolution& solution, double p);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max absolute deviation of the logs from the line
};

/// Least squares on (log t, log norm). Needs >= 4 samples; throws
/// DegenerateFit when a norm falls below 1e-13 times the first one.
FitResult fit_rate(const std::vector<double>& times, const std::vector<double>& norms);

/// Least squares on (t, log value); slope < 0 means exponential decay.
FitResult fit_exponential(const std::vector<double>& times, const std::vector<double>& values);

/// -(1/2)(1/q - 1/p) - (1 if refined else 1/2).
double theorem_slope(double p, double q, bool refined);

/// -(1/2)(1/q - 1/p), the bound for the diffusion waves themselves.
double profile_slope(double p, double q);

/// "inf" for infinity, shortest decimal otherwise.
std::string format_exponent(double p);

/// Accepts "inf", "infinity" or a real >= 1.
double parse_exponent(const std::string& token);

struct RateEntry {
  double p = 2.0;
  double q = 2.0;
  std::string kind;  // "u-U-V", "U" or "V"
  std::string fit;   // "power" or "exponential"
  std::vector<double> times;
  std::vector<double> norms;
  double fitted_slope = 0.0;    // log-log slope, or the log-linear rate for "exponential"
  double intercept = 0.0;
  double fit_residual = 0.0;
  double theorem_slope = 0.0;   // NaN for exponential entries
  double margin = 0.0;
  double deviation = 0.0;       // fitted - theorem; sharpness diagnostic only
  bool monotone = true;
  bool pass = false;
};

struct RateReport {
  std::string system;
  bool refined = false;
  std::vector<RateEntry> entries;
  std::map<std::string, std::string> metadata;

  bool all_pass() const;
};

struct RateOptions {
  std::vector<double> times = {8, 16, 32, 64, 128, 256, 512, 1024};
  double margin = 0.15;
};

/// Evolves u, U (K-hat* when refined) and V over the ladder and fits the
/// decay of ||u - U - V||_p and ||U||_p for each (p, q), and of ||V||_2.
/// Requires q <= p (InvalidArgument) and conditions A, B, C, D, plus C'
/// and S when refined (ConditionViolation).
RateReport verify_theorem(const SystemDef& sys, const profiles::GridSpec& grid, const profiles::InitialData& u0,
                          const std::vector<std::pair<double, double>>& pq_list, bool refined,
                          const RateOptions& opts = {});

enum class Regime { Low, Mid, High };

std::string_view to_string(Regime r);

struct KernelScanOptions {
  double eps = 0.05;    // low regime |xi| < eps
  double R = 20.0;      // high regime |xi| > R
  double xi_max = 200;  // upper cutoff of the high regime
  int samples = 2001;   // xi samples per window
  bool refined = false; // low regime: G - K* instead of G - K
  std::vector<double> times;  // empty: regime default
  std::vector<double> short_times;  // K-hat in the high regime; empty: default
};

struct KernelNorms {
  std::string quantity;  // e.g. "G-K", "G", "K", "V", "G-V"
  std::string fit;       // "power" or "exponential"
  std::vector<double> times;
  std::vector<double> norms;
  FitResult result;
  bool fitted = true;
};

struct KernelScan {
  Regime regime = Regime::Low;
  double r = 1.0;
  std::vector<KernelNorms> rows;
};

/// Discrete L^r-in-xi norms (Frobenius norm per frequency) of the kernel
/// differences of each regime, with power-law fits in the low regime and
/// exponential fits otherwise.
KernelScan kernel_norm_scan(const SystemDef& sys, const reduction::ChapmanEnskogData& red,
                            const reduction::HighFreqData& hf, double r, Regime regime,
                            const KernelScanOptions& opts = {});

}  // namespace relaxwave::rates
