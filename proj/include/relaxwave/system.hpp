#pragma once

#include <optional>
#include <string>

#include "relaxwave/linalg.hpp"

namespace relaxwave {

/// A linear system  u_t + A u_x + B u = 0  on the real line, with an optional
/// symmetry witness S (A S = -S A, B S = S B).
class SystemDef {
 public:
  /// Validates shapes, finiteness and realness of A and B; S, when present,
  /// must be symmetric and invertible. Throws ShapeError or ValueError.
  static SystemDef make(std::string name, CMatrix a, CMatrix b, std::optional<CMatrix> s = std::nullopt);

  const std::string& name() const { return name_; }
  Eigen::Index n() const { return a_.rows(); }
  const CMatrix& A() const { return a_; }
  const CMatrix& B() const { return b_; }
  const std::optional<CMatrix>& S() const { return s_; }

  /// E(i xi) = -(B + i xi A).
  CMatrix E(double xi) const;

 private:
  SystemDef(std::string name, CMatrix a, CMatrix b, std::optional<CMatrix> s)
      : name_(std::move(name)), a_(std::move(a)), b_(std::move(b)), s_(std::move(s)) {}

  std::string name_;
  CMatrix a_;
  CMatrix b_;
  std::optional<CMatrix> s_;
};

namespace systems {
// Bundled reference systems.
SystemDef damped_wave();
SystemDef goldstein_kac();
/// Non-symmetric two-speed relaxation system with a nonzero cubic term in
/// the kernel eigenvalue expansion.
SystemDef asymmetric_relaxation();
}  // namespace systems

}  // namespace relaxwave
