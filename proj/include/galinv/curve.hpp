#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "galinv/galilean.hpp"

namespace galinv {

/// Minimum sample count: interior 4th-derivative stencils plus margin.
inline constexpr int kMinSamples = 11;
/// Degeneracy tolerance for the ST-curve predicate.
inline constexpr double kDegenTol = 1e-9;

/// Position and derivatives of a space-time curve (t, x(t)) at one
/// parameter value, with respect to the curve's current parameter.
struct CurveJet {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
  Vec3 d1 = Vec3::Zero();
  Vec3 d2 = Vec3::Zero();
  Vec3 d3 = Vec3::Zero();
  Vec3 d4 = Vec3::Zero();
};

/// Transformation law for jets: t -> t + s, x -> r x + t v + y,
/// d1 -> r d1 + v, higher derivatives rotate.
CurveJet transform_jet(const GalileanElement& g, const CurveJet& j);

/// Scalar triple product d1 . (d2 x d3). An ST-curve has this positive.
double nondegeneracy(const CurveJet& j);

bool is_st_curve(const CurveJet& j, double tol = kDegenTol);

/// A uniformly sampled curve: positions xs[i] at parameter t0 + i*dt.
class CurveSamples {
 public:
  /// Throws DomainError unless dt > 0, xs.size() >= kMinSamples and
  /// all values are finite.
  CurveSamples(double t0, double dt, std::vector<Vec3> xs);

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  int size() const { return static_cast<int>(xs_.size()); }
  const std::vector<Vec3>& positions() const { return xs_; }
  double param(int i) const { return t0_ + i * dt_; }

  /// First and last index with a full centered 4th-derivative stencil
  /// plus one node of margin.
  int interior_first() const { return 4; }
  int interior_last() const { return size() - 5; }

 private:
  double t0_;
  double dt_;
  std::vector<Vec3> xs_;
};

/// Centered finite-difference jet at interior index i.
/// d1, d2 use 5-point stencils; d3, d4 use 7-point stencils; all are
/// 4th-order accurate on smooth curves. Throws IndexOutOfRange outside
/// [interior_first, interior_last].
CurveJet jet_fd(const CurveSamples& s, int i);

/// ||x'|| at every node; 4th-order one-sided first-derivative stencils
/// at the four edge nodes on each side.
std::vector<double> node_speeds(const CurveSamples& s);

struct ArcLengthEntry {
  double t;
  double s;
};

/// Cumulative arc length s(t_i) with s(t_0) = 0, by composite Simpson
/// quadrature of ||x'||. Throws RegularityError if any node speed is
/// below kDegenTol.
std::vector<ArcLengthEntry> arc_length_table(const CurveSamples& s);

/// Resample the spatial curve at m uniform arc-length nodes using
/// shape-preserving cubic Hermite interpolation of each coordinate
/// against s. The result is parameterized by arc length (t0 = 0,
/// dt = total/(m-1)) and has unit speed up to interpolation error.
CurveSamples reparameterize_by_arclength(const CurveSamples& s, int m);

/// Analytic curve families with exact jets.
///
/// helix(a, b) is (a cos t, a sin t, b t); polynomial holds coefficient
/// rows per coordinate up to degree 5; transformed wraps another curve
/// with a group element applied to its events (the parameter of the
/// inner curve is kept).
class AnalyticCurve {
 public:
  static AnalyticCurve helix(double a, double b);
  static AnalyticCurve polynomial(const Eigen::Matrix<double, 3, 6>& coeffs);
  /// Straight line x0 + t * dir (a degenerate curve fixture).
  static AnalyticCurve line(const Vec3& x0, const Vec3& dir);
  static AnalyticCurve transformed(AnalyticCurve inner, GalileanElement g);

  /// Exact jet with respect to the curve's own parameter.
  CurveJet jet(double t) const;

  /// Arc length of the base spatial curve from t_ref to t.
  double arclength(double t, double t_ref = 0.0) const;

  /// Inverse of arclength(): parameter value at arc length s.
  double param_at_arclength(double s, double t_ref = 0.0) const;

  /// Exact jet of the arc-length-normalized curve at arc length s.
  /// The base curve is rewritten as (s, x(s)) with unit speed; any
  /// transformations are applied on top of the normalized jet, so
  /// invariants read from this jet do not depend on how the base
  /// curve was parameterized.
  CurveJet arclength_jet(double s) const;

  /// Uniform sampling of the event curve. The time column carries the
  /// transformed time; spacing stays uniform because group elements
  /// only shift time.
  CurveSamples sample(double t_start, double dt, int n) const;

  bool is_transformed() const;
  /// Composition of all wrapping elements (identity if none).
  GalileanElement total_transform() const;

 private:
  struct Helix {
    double a;
    double b;
  };
  struct Polynomial {
    Eigen::Matrix<double, 3, 6> c;
  };
  struct Transformed {
    std::shared_ptr<const AnalyticCurve> inner;
    GalileanElement g;
  };
  using Node = std::variant<Helix, Polynomial, Transformed>;

  explicit AnalyticCurve(Node node) : node_(std::move(node)) {}

  const AnalyticCurve& base() const;
  CurveJet base_jet(double t) const;

  Node node_;
};

/// Rewrite a raw-parameter jet as a jet with respect to arc length,
/// given the arc-length coordinate s to stamp as the new time. Exact
/// chain rule through order four. Throws RegularityError if the speed
/// vanishes.
CurveJet jet_to_arclength(const CurveJet& raw, double s);

}  // namespace galinv
