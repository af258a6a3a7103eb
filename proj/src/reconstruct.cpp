#include "galinv/reconstruct.hpp"

#include <cmath>
#include <numbers>

namespace galinv {

namespace {
constexpr double kSnapThreshold = 1e-6;
constexpr double kFailThreshold = 1e-3;

double middle_block_defect(const Mat5& m) {
  const Mat3 e = m.block<3, 3>(1, 1);
  return (e.transpose() * e - Mat3::Identity()).cwiseAbs().maxCoeff();
}
}  // namespace

ConstantInvariants make_invariants(double w1, double w2) {
  if (!(w1 > 0.0) || !(w2 > 0.0) || !std::isfinite(w1) || !std::isfinite(w2)) {
    throw InvalidInvariants("invariants must be positive and finite");
  }
  if (!(w2 > w1 * w1)) {
    throw InvalidInvariants("need w2 > w1^2 (torsion would vanish): w1^2 = " +
                            std::to_string(w1 * w1) + ", w2 = " +
                            std::to_string(w2));
  }
  return {w1, w2};
}

double invariant_kappa(const ConstantInvariants& inv) { return inv.w1; }

double invariant_tau(const ConstantInvariants& inv) {
  const double q = inv.w2 / inv.w1;
  return std::sqrt(q * q - inv.w1 * inv.w1);
}

AlgebraElement algebra_matrix(const ConstantInvariants& inv) {
  make_invariants(inv.w1, inv.w2);
  AlgebraElement b;
  b.m(0, 4) = 1.0;
  b.m(1, 0) = inv.w1;
  b.m(1, 3) = inv.w2 / inv.w1;
  b.m(3, 1) = -inv.w2 / inv.w1;
  return b;
}

Mat5 initial_frame(const ConstantInvariants& inv) {
  make_invariants(inv.w1, inv.w2);
  // Canonical helix: curvature w1, torsion from the invariants,
  // 1/c = sqrt(kappa^2 + tau^2) = w2/w1.
  const double c = inv.w1 / inv.w2;
  const double radius = inv.w1 * c * c;
  const double pitch = invariant_tau(inv) * c * c;
  Mat5 m = Mat5::Zero();
  m(0, 0) = 1.0;
  m(4, 4) = 1.0;
  m.block<3, 1>(1, 0) = Vec3(0.0, radius / c, pitch / c);
  m.block<3, 1>(1, 1) = Vec3(-1.0, 0.0, 0.0);
  m.block<3, 1>(1, 2) = Vec3(0.0, 0.0, 1.0);
  m.block<3, 1>(1, 3) = Vec3(0.0, 1.0, 0.0);
  m.block<3, 1>(1, 4) = Vec3(radius, 0.0, 0.0);
  return m;
}

ReconstructionResult integrate_frame(const ConstantInvariants& inv,
                                     const Mat5& alpha0, double length,
                                     double h) {
  return integrate_frame_raw(algebra_matrix(inv), alpha0, length, h);
}

ReconstructionResult integrate_frame_raw(const AlgebraElement& gen,
                                         const Mat5& alpha0, double length,
                                         double h) {
  if (!(h > 0.0) || h > 1e-2) {
    throw StepTooLarge("step must satisfy 0 < h <= 1e-2");
  }
  if (!(length > 0.0)) throw DomainError("length must be positive");
  if (middle_block_defect(alpha0) > 1e-8) {
    throw DomainError("initial frame columns are not orthonormal");
  }
  const int n = static_cast<int>(std::lround(length / h));
  if (n + 1 < kMinSamples) {
    throw DomainError("too few integration steps for a valid curve");
  }
  const Mat5& b = gen.m;

  std::vector<Vec3> xs;
  std::vector<Mat5> frames;
  xs.reserve(n + 1);
  frames.reserve(n + 1);
  double max_defect = 0.0;
  int snaps = 0;

  Mat5 alpha = alpha0;
  xs.push_back(alpha.block<3, 1>(1, 4));
  frames.push_back(alpha);
  for (int i = 0; i < n; ++i) {
    const Mat5 k1 = alpha * b;
    const Mat5 k2 = (alpha + 0.5 * h * k1) * b;
    const Mat5 k3 = (alpha + 0.5 * h * k2) * b;
    const Mat5 k4 = (alpha + h * k3) * b;
    alpha += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double defect = middle_block_defect(alpha);
    max_defect = std::max(max_defect, defect);
    if (defect > kFailThreshold) {
      throw StepTooLarge("orthonormality defect " + std::to_string(defect) +
                         " at step " + std::to_string(i + 1));
    }
    if (defect > kSnapThreshold) {
      alpha.block<3, 3>(1, 1) = snap_to_so3(alpha.block<3, 3>(1, 1));
      ++snaps;
    }
    xs.push_back(alpha.block<3, 1>(1, 4));
    frames.push_back(alpha);
  }
  return {CurveSamples(alpha0(0, 4), h, std::move(xs)), std::move(frames),
          max_defect, snaps};
}

EquivalenceReport roundtrip(const ConstantInvariants& inv, double h,
                            double tol) {
  const ConstantInvariants v = make_invariants(inv.w1, inv.w2);
  const double length = 4.0 * std::numbers::pi * v.w1 / v.w2;  // two turns
  const ReconstructionResult rec =
      integrate_frame(v, initial_frame(v), length, h);
  const Signature measured = signature(rec.samples);
  Signature target;
  target.meta.method = "analytic";
  target.meta.source = "constant invariants";
  target.s = measured.s;
  target.w1.assign(target.s.size(), v.w1);
  target.w2.assign(target.s.size(), v.w2);
  // x'' and x''' are orthogonal at constant invariants, so
  // ||x'' x x'''|| = w1 w2.
  target.w3.assign(target.s.size(), v.w1 * v.w2);
  return equivalent(target, measured, tol);
}

}  // namespace galinv
