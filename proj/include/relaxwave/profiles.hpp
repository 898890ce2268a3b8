#pragma once

// Fourier-space kernels of the fundamental solution and of the asymptotic
// profiles, and a periodic pseudospectral solver that applies them to
// sampled initial data.

#include <memory>
#include <numbers>
#include <optional>
#include <string>

#include "relaxwave/reduction.hpp"
#include "relaxwave/system.hpp"

namespace relaxwave::profiles {

/// Periodic grid on [-L, L) with N points; frequencies xi_k = pi k / L.
struct GridSpec {
  double L = 2200.0;
  int N = 1 << 14;

  /// Validates N >= 16 power of two and L > 0 (InvalidArgument otherwise).
  static GridSpec make(double L, int N);

  double dx() const { return 2.0 * L / N; }
  double x(int i) const { return -L + i * dx(); }
  /// Frequency of DFT bin `idx` in the usual FFT ordering.
  double xi(int idx) const { return std::numbers::pi * (idx < N / 2 ? idx : idx - N) / L; }
};

struct InitialData {
  enum class Kind { Gaussian, Box, Custom };
  Kind kind = Kind::Gaussian;
  CVector amplitude;     // v in C^n (Gaussian, Box)
  double width = 1.0;    // sigma for the gaussian v exp(-(x - c)^2 / sigma^2), half-width for the box
  double center = 0.0;
  CMatrix samples;       // N x n, Custom only

  static InitialData gaussian(CVector v, double sigma = 1.0, double center = 0.0);
  static InitialData box(CVector v, double half_width, double center = 0.0);
  static InitialData custom(CMatrix samples);

  Eigen::Index n() const { return kind == Kind::Custom ? samples.cols() : amplitude.size(); }
  /// Radius of the region outside which the datum is negligible.
  double support(const GridSpec& grid) const;
  /// N x n samples on the grid.
  CMatrix sample(const GridSpec& grid) const;
};

struct GridSolution {
  GridSpec grid;
  double t = 0.0;
  CMatrix values;  // N x n
};

/// exp(E(i xi) t).
CMatrix Ghat(const SystemDef& sys, double xi, double t);

/// Diffusion-wave kernel: sum over branches and sub-branches of
/// exp((-i c xi - d xi^2) t) exp(-N xi^2 t) P_jl.
CMatrix Khat(const reduction::ChapmanEnskogData& red, double xi, double t);

/// Exponential-wave kernel: Q (sum exp((-i alpha xi - beta) t) exp(-Theta t) Pi_jl) Q^{-1}.
CMatrix Vhat(const reduction::HighFreqData& hf, double xi, double t);

/// Refined diffusion kernel: sum exp((-i c xi - d xi^2) t) (P_j + i xi P_j1).
/// Throws MissingPj1 unless every branch carries P_j1.
CMatrix Khat_star(const reduction::ChapmanEnskogData& red, double xi, double t);

enum class Profile { Exact, Diffusion, DiffusionRefined, ExpWave };

std::string_view to_string(Profile p);

/// u, U, V and u - U - V at one time, from a single pass over the frequencies.
struct Snapshot {
  GridSolution u, U, V, residual;
};

/// Holds the transformed datum and the reductions so that repeated solves
/// at different times reuse them. Not safe for concurrent use (the FFT
/// workspace is shared).
class Solver {
 public:
  /// The reductions are computed when conditions A and B hold; otherwise
  /// only the exact profile is available.
  Solver(SystemDef sys, GridSpec grid, const InitialData& u0);
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) noexcept;

  const SystemDef& system() const;
  const GridSpec& grid() const;
  const std::optional<reduction::ChapmanEnskogData>& low() const;
  const std::optional<reduction::HighFreqData>& high() const;

  /// Throws DomainTooSmall when L < support + max|alpha| t + 10 sqrt(max Re d t).
  void check_domain(double t) const;

  GridSolution solve(double t, Profile which) const;
  Snapshot snapshot(double t, bool refined) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace relaxwave::profiles
