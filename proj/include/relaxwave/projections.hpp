#pragma once

// Eigenprojection P and reduced resolvent coefficient S of a semi-simple
// eigenvalue, computed two independent ways: from the Taylor coefficients of
// adj(A + xI) and det(A + xI) (closed-form route), and from an eigenvector
// decomposition (oracle route).

#include "relaxwave/linalg.hpp"

namespace relaxwave::projections {

struct ProjectorPair {
  CMatrix P;  // eigenprojection
  CMatrix S;  // reduced resolvent coefficient, S A = A S = I - P for semi-simple 0
  int m = 0;  // algebraic multiplicity
};

/// [A]^k: the x^k Taylor coefficient of adj(A + xI).
CMatrix bracket_power(const linalg::AdjugatePoly& expansion, int k);

/// Tr [A]^k = (k+1) * (x^{k+1} coefficient of det(A + xI)).
cplx bracket_trace(const linalg::AdjugatePoly& expansion, int k);

/// (k+1) [A]^k / Tr [A]^k.
CMatrix eigenprojection_formula(const CMatrix& a, int k);

/// ((k+1)(k+2)[A]^{k+1} Tr[A]^k - (k+1)^2 [A]^k Tr[A]^{k+1}) / ((k+2) (Tr[A]^k)^2).
CMatrix reduced_resolvent_formula(const CMatrix& a, int k);

/// P and S for the semi-simple eigenvalue 0 of multiplicity m, via the
/// closed-form route. Throws ZeroDenominator if Tr[A]^{m-1} vanishes and
/// PostconditionFailure if the result is not idempotent.
ProjectorPair proj_semisimple_zero(const CMatrix& a, int m);

/// Spectral-decomposition projector for the eigenvalues of `a` within
/// `radius` of `eigenvalue` (radius <= 0 selects 1e-8 * max(1, ||a||)).
/// Throws ClusterAmbiguous when another eigenvalue sits within 10 * radius
/// of the cluster.
ProjectorPair proj_oracle(const CMatrix& a, cplx eigenvalue, double radius = -1.0);

}  // namespace relaxwave::projections
