#pragma once

#include <span>
#include <string>
#include <vector>

#include "galinv/curve.hpp"

namespace galinv {

/// The moving frame attached to a curve point: a special Galilean
/// embedding with columns (1, x', 0), (0, e1, 0), (0, e2, 0),
/// (0, e3, 0), (t, x, 1), where
///   e1 = x''/||x''||,
///   e2 = (x'' x x''')/||x'' x x'''||,
///   e3 = x'' x (x'' x x''') normalized  (= e1 x e2).
struct Frame {
  Mat5 m = Mat5::Identity();
};

/// Builds the frame. Throws DegenerateJet when ||x''|| or the
/// nondegeneracy triple product is at or below kDegenTol.
Frame frame(const CurveJet& j);

/// Closed-form inverse of the frame built from the same jet, using the
/// group block structure. Agrees with numerical inversion.
Mat5 frame_inverse(const CurveJet& j);

/// Derivative of the frame along the curve: columns (0, x'', 0),
/// (0, de1, 0), (0, de2, 0), (0, de3, 0), (1, x', 0) with the unit
/// column derivatives expanded by the quotient rule.
Mat5 frame_derivative(const CurveJet& j);

/// Maurer-Cartan pullback along the frame: frame_inverse * frame_derivative.
/// Row 5 vanishes, entry (1,5) is 1, entry (2,1) is ||x''||, and the
/// middle 3x3 block is skew-symmetric.
AlgebraElement pullback(const CurveJet& j);

struct SignatureMeta {
  std::string source;
  double dt = 0.0;
  std::string method;  // "analytic" or "fd"
};

/// The differential-invariant signature: w1 = ||x''||, w2 = ||x'''||,
/// w3 = ||x'' x x'''|| tabulated against arc length (grid normalized
/// to start at 0).
struct Signature {
  std::vector<double> s;
  std::vector<double> w1;
  std::vector<double> w2;
  std::vector<double> w3;
  SignatureMeta meta;
};

/// Signature of an analytic curve over the base-curve parameter window
/// [t0, t1], evaluated at m uniform arc-length nodes. The base curve is
/// normalized to unit speed exactly (chain rule); wrapping group
/// elements act on the normalized jets, so the result is invariant
/// under them.
Signature signature(const AnalyticCurve& c, double t0, double t1, int m);

/// Signature of a sampled curve from finite-difference jets at every
/// interior node, gridded by the sample parameter (assumed to be arc
/// length up to a Galilean transformation; see README). Throws
/// DegenerateJet with the offending node index.
Signature signature(const CurveSamples& cs);

/// Normalize a sampled curve to unit speed first, then take the
/// signature on m nodes. For curves whose parameter is not related to
/// arc length by a group element.
Signature signature_reparameterized(const CurveSamples& cs, int m);

struct EquivalenceReport {
  bool equivalent = false;
  double max_dev_w1 = 0.0;
  double max_dev_w2 = 0.0;
  double max_dev_w3 = 0.0;  // reported, not used in the decision
  double overlap_lo = 0.0;
  double overlap_hi = 0.0;
};

/// Decide equivalence of two signatures: both grids aligned to start
/// at 0, resampled onto the common span by linear interpolation;
/// equivalent iff max|w1 - w1'| <= tol and max|w2 - w2'| <= tol.
/// Throws NoOverlap if the common span is shorter than 10 grid steps.
EquivalenceReport equivalent(const Signature& a, const Signature& b,
                             double tol);

struct RecoveryReport {
  GalileanElement g;
  double residual = 0.0;
  double orth_defect = 0.0;
};

/// Recover the group element mapping curve a onto curve b from the
/// frame quotient frame_b(anchor) * frame_a(anchor)^{-1}, decoded and
/// snapped to the group (NotInGroup if the quotient's orthogonality
/// defect exceeds 1e-6). The residual is the max over all node pairs
/// of ||embed(g) * frame_a - frame_b||_max. Frames are matched by
/// node ordinal, which corresponds parameter-to-parameter for curves
/// related by a group element.
RecoveryReport recover_from_frames(std::span<const Mat5> frames_a,
                                   std::span<const Mat5> frames_b,
                                   std::size_t anchor);

/// Sampled-curve recovery: frames at every interior node; the anchor
/// is the node of curve a nearest to parameter t0.
RecoveryReport recover_transformation(const CurveSamples& a,
                                      const CurveSamples& b, double t0);

/// Analytic recovery on n nodes of the shared evaluation parameter in
/// [t_lo, t_hi]; the anchor is the node nearest t0.
RecoveryReport recover_transformation(const AnalyticCurve& a,
                                      const AnalyticCurve& b, double t0,
                                      double t_lo, double t_hi, int n);

struct RelationDefect {
  std::string name;
  double defect;
};

/// Defects of the arc-length jet relations:
///   x'.x'' = 0,
///   x''.x''' = 0            (constant w1),
///   x'''.x'''' = 0          (constant w2),
///   x''.x'''' + ||x'''||^2 = 0,
///   [x''.(x''' x x'''')]^2 = det Gram(x'', x''', x'''').
/// The window reports how constant w1 and w2 actually are, so callers
/// can judge whether the constant-invariant relations apply.
std::vector<RelationDefect> invariant_relations_check(
    const CurveJet& j, std::span<const CurveJet> window);

/// Force-norm signature of a particle of the given mass: w1 and w2
/// scale by the mass. Throws NonPositiveMass.
Signature force_signature(double mass, Signature sig);

}  // namespace galinv
