#include "galinv/galilean.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace galinv {

namespace {

void validate_rotation(const Mat3& r) {
  if (!r.allFinite()) {
    throw NotOrthogonal("rotation has non-finite entries");
  }
  const double defect = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (defect > kOrthTol) {
    throw NotOrthogonal("rotation fails r^T r = I, defect " + std::to_string(defect));
  }
  if (r.determinant() < 0.0) {
    throw NotSpecial("rotation is orientation-reversing (det < 0)");
  }
}

void validate_vectors(const Vec3& v, const Vec3& y, double s) {
  if (!v.allFinite() || !y.allFinite() || !std::isfinite(s)) {
    throw DomainError("galilean element has non-finite entries");
  }
}

// 53-bit uniform in [0, 1). uniform_real_distribution is
// implementation-defined, which would break seeded golden outputs.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

GalileanElement::GalileanElement()
    : r_(Mat3::Identity()), v_(Vec3::Zero()), y_(Vec3::Zero()), s_(0.0) {}

GalileanElement::GalileanElement(const Mat3& rotation, const Vec3& boost,
                                 const Vec3& translation, double time_shift)
    : r_(rotation), v_(boost), y_(translation), s_(time_shift) {
  validate_rotation(r_);
  validate_vectors(v_, y_, s_);
}

GalileanElement GalileanElement::pure_rotation(const Mat3& r) {
  return {r, Vec3::Zero(), Vec3::Zero(), 0.0};
}

GalileanElement GalileanElement::pure_boost(const Vec3& v) {
  return {Mat3::Identity(), v, Vec3::Zero(), 0.0};
}

GalileanElement GalileanElement::pure_translation(const Vec3& y) {
  return {Mat3::Identity(), Vec3::Zero(), y, 0.0};
}

GalileanElement GalileanElement::pure_time_shift(double s) {
  return {Mat3::Identity(), Vec3::Zero(), Vec3::Zero(), s};
}

Mat5 GalileanElement::embed() const {
  Mat5 m = Mat5::Identity();
  m(0, 4) = s_;
  m.block<3, 1>(1, 0) = v_;
  m.block<3, 3>(1, 1) = r_;
  m.block<3, 1>(1, 4) = y_;
  return m;
}

GalileanElement GalileanElement::inverse() const {
  const Mat3 rt = r_.transpose();
  return {rt, -(rt * v_), -(rt * (y_ - s_ * v_)), -s_};
}

Event GalileanElement::act(const Event& e) const {
  if (!std::isfinite(e.t) || !e.x.allFinite()) {
    throw DomainError("event has non-finite components");
  }
  return {e.t + s_, r_ * e.x + e.t * v_ + y_};
}

GalileanElement compose(const GalileanElement& g1, const GalileanElement& g2) {
  return {g1.rotation() * g2.rotation(),
          g1.boost() + g1.rotation() * g2.boost(),
          g1.translation() + g1.rotation() * g2.translation() +
              g2.time_shift() * g1.boost(),
          g1.time_shift() + g2.time_shift()};
}

GalileanElement random_special(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Shoemake's subgroup algorithm: uniform unit quaternion.
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  const double u3 = uniform01(rng);
  const double two_pi = 2.0 * std::numbers::pi;
  const Eigen::Quaterniond q(std::sqrt(u1) * std::cos(two_pi * u3),
                             std::sqrt(1.0 - u1) * std::sin(two_pi * u2),
                             std::sqrt(1.0 - u1) * std::cos(two_pi * u2),
                             std::sqrt(u1) * std::sin(two_pi * u3));
  const Mat3 r = snap_to_so3(q.toRotationMatrix());

  auto box = [&rng]() { return -5.0 + 10.0 * uniform01(rng); };
  const Vec3 v(box(), box(), box());
  const Vec3 y(box(), box(), box());
  const double s = box();
  return {r, v, y, s};
}

Mat3 snap_to_so3(const Mat3& r) {
  Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  Mat3 v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) {
    u.col(2) = -u.col(2);
  }
  return u * v.transpose();
}

GalileanElement snap_to_group(const Mat3& r, const Vec3& v, const Vec3& y,
                              double s) {
  return {snap_to_so3(r), v, y, s};
}

double embedding_structure_defect(const Mat5& m) {
  double d = std::abs(m(0, 0) - 1.0);
  for (int j = 1; j < 4; ++j) d = std::max(d, std::abs(m(0, j)));
  for (int j = 0; j < 4; ++j) d = std::max(d, std::abs(m(4, j)));
  d = std::max(d, std::abs(m(4, 4) - 1.0));
  return d;
}

GalileanElement decode_embedding(const Mat5& m, double orth_tol) {
  const Mat3 r = m.block<3, 3>(1, 1);
  const double orth_defect =
      (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (embedding_structure_defect(m) > orth_tol || orth_defect > orth_tol) {
    throw NotInGroup("matrix is not a special Galilean embedding, defect " +
                     std::to_string(std::max(orth_defect,
                                             embedding_structure_defect(m))));
  }
  return snap_to_group(r, m.block<3, 1>(1, 0), m.block<3, 1>(1, 4), m(0, 4));
}

double AlgebraElement::skew_defect() const {
  const Mat3 b = m.block<3, 3>(1, 1);
  return (b + b.transpose()).cwiseAbs().maxCoeff();
}

double AlgebraElement::structure_defect() const {
  double d = 0.0;
  for (int j = 0; j < 4; ++j) {
    d = std::max(d, std::abs(m(0, j)));
    d = std::max(d, std::abs(m(4, j)));
  }
  d = std::max(d, std::abs(m(4, 4)));
  return d;
}

AlgebraElement left_log_derivative(const std::function<Mat5(double)>& path,
                                   double t, double h) {
  if (!(h > 0.0) || !std::isfinite(t)) {
    throw DomainError("left_log_derivative needs finite t and h > 0");
  }
  const Mat5 p = path(t);
  const Eigen::FullPivLU<Mat5> lu(p);
  if (!lu.isInvertible() || lu.rcond() < 1e-12) {
    throw SingularMatrix("path value is singular at t = " + std::to_string(t));
  }
  const Mat5 diff = (path(t + h) - path(t - h)) / (2.0 * h);
  AlgebraElement out;
  out.m = lu.solve(diff);
  return out;
}

}  // namespace galinv
