#pragma once

#include "galinv/invariants.hpp"

namespace galinv {

/// Constant target invariants w1 = ||x''||, w2 = ||x'''|| for
/// reconstruction. Admissible iff w1 > 0 and w2 > w1^2 (otherwise the
/// underlying curve is planar or worse and not an ST-curve).
struct ConstantInvariants {
  double w1;
  double w2;
};

/// Validates and returns the invariants. Throws InvalidInvariants.
ConstantInvariants make_invariants(double w1, double w2);

/// Curvature of the unit-speed curve with these invariants (= w1).
double invariant_kappa(const ConstantInvariants& inv);
/// Torsion: sqrt((w2/w1)^2 - w1^2).
double invariant_tau(const ConstantInvariants& inv);

/// The constant algebra matrix b with dα/ds = α b: entries
/// (1,5) = 1, (2,1) = w1, (2,4) = w2/w1, (4,2) = -w2/w1, rest zero.
AlgebraElement algebra_matrix(const ConstantInvariants& inv);

/// Frame of the canonical constant-invariant curve at s = 0
/// (a helix through (radius, 0, 0) with its axis along z).
Mat5 initial_frame(const ConstantInvariants& inv);

struct ReconstructionResult {
  CurveSamples samples;  // arc-length parameterized curve, t = s + const
  std::vector<Mat5> frames;
  double max_orth_defect = 0.0;
  int reorthonormalizations = 0;
};

/// Integrate dα/ds = α b with classical 4th-order Runge-Kutta from
/// alpha0 over the given length. The middle-block orthonormality is
/// monitored every step; above 1e-6 the frame columns are snapped back
/// by polar decomposition (counted), above 1e-3 StepTooLarge is thrown.
/// Requires h <= 1e-2 and an alpha0 with orthonormal frame columns.
ReconstructionResult integrate_frame(const ConstantInvariants& inv,
                                     const Mat5& alpha0, double length,
                                     double h);

/// Raw ODE driver behind integrate_frame, for an arbitrary constant
/// generator (test hook; b is not validated against the invariants).
ReconstructionResult integrate_frame_raw(const AlgebraElement& b,
                                         const Mat5& alpha0, double length,
                                         double h);

/// Reconstruct the canonical curve for the invariants, take its
/// finite-difference signature, and compare against the constant
/// target at the given tolerance.
EquivalenceReport roundtrip(const ConstantInvariants& inv, double h = 1e-3,
                            double tol = 1e-5);

}  // namespace galinv
