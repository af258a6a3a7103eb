#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

#include "galinv/errors.hpp"

namespace galinv {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// Orthogonality tolerance for constructor validation.
inline constexpr double kOrthTol = 1e-12;
/// Determinant tolerance for the 5x5 embedding.
inline constexpr double kEmbedDetTol = 1e-10;

/// A space-time event (t, x) in R x R^3.
struct Event {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
};

/// An element of the special Galilean group SGal(4,R): a rotation
/// r in SO(3), a velocity boost v, a spatial translation y and a time
/// shift s, acting on events as (t, x) -> (t + s, r x + t v + y).
///
/// Elements are immutable values, validated on construction:
/// r must be orthogonal within kOrthTol and have det +1
/// (orientation-reversing rotations are rejected).
class GalileanElement {
 public:
  /// Identity transformation.
  GalileanElement();

  /// Validating constructor. Throws NotOrthogonal / NotSpecial.
  GalileanElement(const Mat3& rotation, const Vec3& boost,
                  const Vec3& translation, double time_shift);

  static GalileanElement pure_rotation(const Mat3& r);
  static GalileanElement pure_boost(const Vec3& v);
  static GalileanElement pure_translation(const Vec3& y);
  static GalileanElement pure_time_shift(double s);

  const Mat3& rotation() const { return r_; }
  const Vec3& boost() const { return v_; }
  const Vec3& translation() const { return y_; }
  double time_shift() const { return s_; }

  /// The 5x5 matrix embedding with block layout
  ///   [ 1  0  s ]
  ///   [ v  r  y ]
  ///   [ 0  0  1 ]
  /// (rows/cols ordered time, space x3, homogeneous).
  Mat5 embed() const;

  /// Closed-form group inverse (r^T, -r^T v, -r^T (y - s v), -s).
  GalileanElement inverse() const;

  /// Action on an event: (t + s, r x + t v + y).
  Event act(const Event& e) const;

 private:
  Mat3 r_;
  Vec3 v_;
  Vec3 y_;
  double s_;
};

/// Group composition; embed(compose(g1, g2)) == embed(g1) * embed(g2).
GalileanElement compose(const GalileanElement& g1, const GalileanElement& g2);

/// Deterministic random element for a given seed: rotation uniform on
/// SO(3) via the unit-quaternion method, boost/translation/time-shift
/// components uniform in [-5, 5].
GalileanElement random_special(std::uint64_t seed);

/// Nearest rotation to r in the Frobenius sense (polar decomposition).
Mat3 snap_to_so3(const Mat3& r);

/// Re-orthonormalize r by polar decomposition, then construct.
/// The only sanctioned way to build an element from noisy data.
GalileanElement snap_to_group(const Mat3& r, const Vec3& v, const Vec3& y,
                              double s);

/// Max-norm defect of the fixed entries of a 5x5 embedding
/// (row 1 = (1,0,0,0,*), row 5 = (0,0,0,0,1)).
double embedding_structure_defect(const Mat5& m);

/// Decode a 5x5 matrix into a group element. The rotation block is
/// snapped by polar decomposition if its orthogonality defect is at
/// most orth_tol; otherwise NotInGroup is thrown.
GalileanElement decode_embedding(const Mat5& m, double orth_tol = 1e-6);

/// A sgal(4,R)-valued matrix: the value of P^{-1} dP/dt along a
/// group-valued path, per unit of the path parameter. Structure:
/// row 1 is (0,0,0,0,c), row 5 is zero, middle 3x3 block skew.
struct AlgebraElement {
  Mat5 m = Mat5::Zero();

  /// Max-norm deviation of the middle 3x3 block from skew symmetry.
  double skew_defect() const;
  /// Max-norm defect of the fixed zero pattern (row 5 and row 1
  /// except its last entry).
  double structure_defect() const;
};

/// Central-difference left-logarithmic derivative of a matrix path:
/// path(t)^{-1} * (path(t+h) - path(t-h)) / (2h), error O(h^2).
/// Throws SingularMatrix if path(t) has condition number above 1e12.
AlgebraElement left_log_derivative(const std::function<Mat5(double)>& path,
                                   double t, double h = 1e-5);

}  // namespace galinv
