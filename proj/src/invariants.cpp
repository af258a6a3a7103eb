#include "galinv/invariants.hpp"

#include <algorithm>
#include <cmath>

namespace galinv {

namespace {

struct FrameVectors {
  Vec3 e1, e2, e3;
};

// The frame needs ||x''|| > 0 and ||x'' x x'''|| > 0; both are
// invariant under the group action. The signed triple product of an
// ST-curve can change sign under a boost, so it is left to the
// is_st_curve predicate and not enforced here.
FrameVectors frame_vectors(const CurveJet& j, std::ptrdiff_t node = -1) {
  const double w1 = j.d2.norm();
  if (w1 <= kDegenTol) {
    throw DegenerateJet("||x''|| vanishes (straight or inflection point)",
                        node);
  }
  const Vec3 b = j.d2.cross(j.d3);
  const double w3 = b.norm();
  if (w3 <= kDegenTol) {
    throw DegenerateJet("x'' and x''' are parallel", node);
  }
  return {j.d2 / w1, b / w3, j.d2.cross(b) / (w1 * w3)};
}

}  // namespace

Frame frame(const CurveJet& j) {
  const FrameVectors e = frame_vectors(j);
  Frame f;
  f.m.setZero();
  f.m(0, 0) = 1.0;
  f.m(0, 4) = j.t;
  f.m.block<3, 1>(1, 0) = j.d1;
  f.m.block<3, 1>(1, 1) = e.e1;
  f.m.block<3, 1>(1, 2) = e.e2;
  f.m.block<3, 1>(1, 3) = e.e3;
  f.m.block<3, 1>(1, 4) = j.x;
  f.m(4, 4) = 1.0;
  return f;
}

Mat5 frame_inverse(const CurveJet& j) {
  const FrameVectors e = frame_vectors(j);
  Mat3 et;
  et.row(0) = e.e1;
  et.row(1) = e.e2;
  et.row(2) = e.e3;
  // Group inverse of (r=E, v=x', y=x, s=t):
  //   (E^T, -E^T x', -E^T (x - t x'), -t).
  Mat5 inv = Mat5::Zero();
  inv(0, 0) = 1.0;
  inv(0, 4) = -j.t;
  inv.block<3, 1>(1, 0) = -(et * j.d1);
  inv.block<3, 3>(1, 1) = et;
  inv.block<3, 1>(1, 4) = -(et * (j.x - j.t * j.d1));
  inv(4, 4) = 1.0;
  return inv;
}

Mat5 frame_derivative(const CurveJet& j) {
  const double w1 = j.d2.norm();
  if (w1 <= kDegenTol) throw DegenerateJet("||x''|| vanishes");
  const Vec3 b = j.d2.cross(j.d3);
  if (b.norm() <= kDegenTol) throw DegenerateJet("x'' and x''' are parallel");

  // d/dt of w/||w|| = (w' ||w||^2 - w (w.w')) / ||w||^3
  auto unit_derivative = [](const Vec3& w, const Vec3& wp) {
    const double n2 = w.squaredNorm();
    return (wp * n2 - w * w.dot(wp)) / (n2 * std::sqrt(n2));
  };
  const Vec3 w2 = b;
  const Vec3 w2p = j.d2.cross(j.d4);
  const Vec3 w3 = j.d2.cross(b);
  const Vec3 w3p = j.d3.cross(b) + j.d2.cross(w2p);

  Mat5 d = Mat5::Zero();
  d(0, 4) = 1.0;
  d.block<3, 1>(1, 0) = j.d2;
  d.block<3, 1>(1, 1) = unit_derivative(j.d2, j.d3);
  d.block<3, 1>(1, 2) = unit_derivative(w2, w2p);
  d.block<3, 1>(1, 3) = unit_derivative(w3, w3p);
  d.block<3, 1>(1, 4) = j.d1;
  return d;
}

AlgebraElement pullback(const CurveJet& j) {
  AlgebraElement out;
  out.m = frame_inverse(j) * frame_derivative(j);
  return out;
}

namespace {

void push_node(Signature& sig, double s, const CurveJet& j,
               std::ptrdiff_t node) {
  const double w1 = j.d2.norm();
  const double w3 = j.d2.cross(j.d3).norm();
  if (w1 <= kDegenTol || w3 <= kDegenTol) {
    throw DegenerateJet("degenerate jet in signature", node);
  }
  sig.s.push_back(s);
  sig.w1.push_back(w1);
  sig.w2.push_back(j.d3.norm());
  sig.w3.push_back(w3);
}

}  // namespace

Signature signature(const AnalyticCurve& c, double t0, double t1, int m) {
  if (!(t1 > t0) || m < 2) {
    throw DomainError("signature needs t1 > t0 and m >= 2");
  }
  const double s_lo = c.arclength(t0, 0.0);
  const double s_hi = c.arclength(t1, 0.0);
  Signature sig;
  sig.meta.method = "analytic";
  sig.meta.dt = (s_hi - s_lo) / (m - 1);
  for (int i = 0; i < m; ++i) {
    const double s = s_lo + (s_hi - s_lo) * i / (m - 1);
    push_node(sig, s - s_lo, c.arclength_jet(s), i);
  }
  return sig;
}

Signature signature(const CurveSamples& cs) {
  Signature sig;
  sig.meta.method = "fd";
  sig.meta.dt = cs.dt();
  const int first = cs.interior_first();
  for (int i = first; i <= cs.interior_last(); ++i) {
    push_node(sig, cs.param(i) - cs.param(first), jet_fd(cs, i), i);
  }
  return sig;
}

Signature signature_reparameterized(const CurveSamples& cs, int m) {
  Signature sig = signature(reparameterize_by_arclength(cs, m));
  sig.meta.method = "fd";
  return sig;
}

EquivalenceReport equivalent(const Signature& a, const Signature& b,
                             double tol) {
  if (a.s.size() < 2 || b.s.size() < 2) {
    throw NoOverlap("signature has fewer than two nodes");
  }
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const double len_a = a.s.back() - a.s.front();
  const double len_b = b.s.back() - b.s.front();
  const double step = std::max(a.s[1] - a.s[0], b.s[1] - b.s[0]);
  const double span = std::min(len_a, len_b);
  if (span < 10.0 * step) {
    throw NoOverlap("common arc-length span " + std::to_string(span) +
                    " shorter than 10 grid steps");
  }

  // Linear interpolation on the offset-normalized grid.
  auto interp = [](const Signature& sig, const std::vector<double>& vals,
                   double s) {
    const double s0 = sig.s.front();
    const auto it = std::upper_bound(sig.s.begin(), sig.s.end(), s + s0);
    std::size_t hi = static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(it - sig.s.begin(), 1,
                                   static_cast<std::ptrdiff_t>(sig.s.size()) - 1));
    const std::size_t lo = hi - 1;
    const double u = (s + s0 - sig.s[lo]) / (sig.s[hi] - sig.s[lo]);
    return vals[lo] + u * (vals[hi] - vals[lo]);
  };

  const int n = static_cast<int>(std::floor(span / step)) + 1;
  EquivalenceReport rep;
  rep.overlap_lo = 0.0;
  rep.overlap_hi = span;
  for (int i = 0; i < n; ++i) {
    const double s = std::min(i * step, span);
    rep.max_dev_w1 = std::max(
        rep.max_dev_w1, std::abs(interp(a, a.w1, s) - interp(b, b.w1, s)));
    rep.max_dev_w2 = std::max(
        rep.max_dev_w2, std::abs(interp(a, a.w2, s) - interp(b, b.w2, s)));
    rep.max_dev_w3 = std::max(
        rep.max_dev_w3, std::abs(interp(a, a.w3, s) - interp(b, b.w3, s)));
  }
  rep.equivalent = rep.max_dev_w1 <= tol && rep.max_dev_w2 <= tol;
  return rep;
}

RecoveryReport recover_from_frames(std::span<const Mat5> frames_a,
                                   std::span<const Mat5> frames_b,
                                   std::size_t anchor) {
  if (frames_a.empty() || frames_a.size() != frames_b.size() ||
      anchor >= frames_a.size()) {
    throw DomainError("recovery needs equal-length frame lists and a valid "
                      "anchor");
  }
  const Mat5 quotient =
      frames_b[anchor] * frames_a[anchor].partialPivLu().inverse();
  const Mat3 r = quotient.block<3, 3>(1, 1);
  RecoveryReport rep;
  rep.orth_defect = std::max(
      (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff(),
      embedding_structure_defect(quotient));
  rep.g = decode_embedding(quotient, 1e-6);
  const Mat5 ge = rep.g.embed();
  for (std::size_t i = 0; i < frames_a.size(); ++i) {
    rep.residual = std::max(
        rep.residual, (ge * frames_a[i] - frames_b[i]).cwiseAbs().maxCoeff());
  }
  return rep;
}

RecoveryReport recover_transformation(const CurveSamples& a,
                                      const CurveSamples& b, double t0) {
  const int shared = std::min(a.size(), b.size());
  const int last = shared - 5;
  if (last < a.interior_first()) {
    throw DomainError("curves too short for recovery");
  }
  std::vector<Mat5> fa, fb;
  for (int i = a.interior_first(); i <= last; ++i) {
    fa.push_back(frame(jet_fd(a, i)).m);
    fb.push_back(frame(jet_fd(b, i)).m);
  }
  const int i0 = std::clamp(
      static_cast<int>(std::lround((t0 - a.t0()) / a.dt())), a.interior_first(),
      last);
  return recover_from_frames(fa, fb,
                             static_cast<std::size_t>(i0 - a.interior_first()));
}

RecoveryReport recover_transformation(const AnalyticCurve& a,
                                      const AnalyticCurve& b, double t0,
                                      double t_lo, double t_hi, int n) {
  if (!(t_hi > t_lo) || n < 2) {
    throw DomainError("recovery needs t_hi > t_lo and n >= 2");
  }
  std::vector<Mat5> fa, fb;
  for (int i = 0; i < n; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (n - 1);
    fa.push_back(frame(a.jet(t)).m);
    fb.push_back(frame(b.jet(t)).m);
  }
  const double step = (t_hi - t_lo) / (n - 1);
  const int i0 = std::clamp(static_cast<int>(std::lround((t0 - t_lo) / step)),
                            0, n - 1);
  return recover_from_frames(fa, fb, static_cast<std::size_t>(i0));
}

std::vector<RelationDefect> invariant_relations_check(
    const CurveJet& j, std::span<const CurveJet> window) {
  std::vector<RelationDefect> out;
  out.push_back({"x1.x2", std::abs(j.d1.dot(j.d2))});
  out.push_back({"x2.x3", std::abs(j.d2.dot(j.d3))});
  out.push_back({"x3.x4", std::abs(j.d3.dot(j.d4))});
  out.push_back(
      {"x2.x4_plus_w2_sq", std::abs(j.d2.dot(j.d4) + j.d3.squaredNorm())});

  const double triple = j.d2.dot(j.d3.cross(j.d4));
  Eigen::Matrix3d gram;
  const Vec3 v[3] = {j.d2, j.d3, j.d4};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) gram(r, c) = v[r].dot(v[c]);
  }
  out.push_back({"gram_identity",
                 std::abs(triple * triple - gram.determinant())});

  double var1 = 0.0;
  double var2 = 0.0;
  const double w1 = j.d2.norm();
  const double w2 = j.d3.norm();
  for (const CurveJet& w : window) {
    var1 = std::max(var1, std::abs(w.d2.norm() - w1));
    var2 = std::max(var2, std::abs(w.d3.norm() - w2));
  }
  out.push_back({"w1_window_variation", var1});
  out.push_back({"w2_window_variation", var2});
  return out;
}

Signature force_signature(double mass, Signature sig) {
  if (!(mass > 0.0)) throw NonPositiveMass("mass must be positive");
  for (double& v : sig.w1) v *= mass;
  for (double& v : sig.w2) v *= mass;
  return sig;
}

}  // namespace galinv
