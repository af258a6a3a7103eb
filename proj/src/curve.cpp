#include "galinv/curve.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace galinv {

namespace {

bool finite(const Vec3& v) { return v.allFinite(); }

// Adaptive Simpson quadrature with Richardson acceptance.
double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

CurveJet transform_jet(const GalileanElement& g, const CurveJet& j) {
  CurveJet out;
  out.t = j.t + g.time_shift();
  out.x = g.rotation() * j.x + j.t * g.boost() + g.translation();
  out.d1 = g.rotation() * j.d1 + g.boost();
  out.d2 = g.rotation() * j.d2;
  out.d3 = g.rotation() * j.d3;
  out.d4 = g.rotation() * j.d4;
  return out;
}

double nondegeneracy(const CurveJet& j) { return j.d1.dot(j.d2.cross(j.d3)); }

bool is_st_curve(const CurveJet& j, double tol) {
  return nondegeneracy(j) > tol;
}

CurveSamples::CurveSamples(double t0, double dt, std::vector<Vec3> xs)
    : t0_(t0), dt_(dt), xs_(std::move(xs)) {
  if (static_cast<int>(xs_.size()) < kMinSamples) {
    throw DomainError("curve needs at least " + std::to_string(kMinSamples) +
                      " samples, got " + std::to_string(xs_.size()));
  }
  if (!(dt_ > 0.0) || !std::isfinite(dt_) || !std::isfinite(t0_)) {
    throw DomainError("curve spacing must be finite and positive");
  }
  for (const Vec3& x : xs_) {
    if (!finite(x)) throw DomainError("curve sample has non-finite coordinates");
  }
}

CurveJet jet_fd(const CurveSamples& s, int i) {
  if (i < s.interior_first() || i > s.interior_last()) {
    throw IndexOutOfRange("index " + std::to_string(i) +
                          " outside interior window [" +
                          std::to_string(s.interior_first()) + ", " +
                          std::to_string(s.interior_last()) + "]");
  }
  const auto& x = s.positions();
  const double h = s.dt();
  CurveJet j;
  j.t = s.param(i);
  j.x = x[i];
  j.d1 = (x[i - 2] - 8.0 * x[i - 1] + 8.0 * x[i + 1] - x[i + 2]) / (12.0 * h);
  j.d2 = (-x[i - 2] + 16.0 * x[i - 1] - 30.0 * x[i] + 16.0 * x[i + 1] -
          x[i + 2]) /
         (12.0 * h * h);
  j.d3 = (x[i - 3] - 8.0 * x[i - 2] + 13.0 * x[i - 1] - 13.0 * x[i + 1] +
          8.0 * x[i + 2] - x[i + 3]) /
         (8.0 * h * h * h);
  j.d4 = (-x[i - 3] + 12.0 * x[i - 2] - 39.0 * x[i - 1] + 56.0 * x[i] -
          39.0 * x[i + 1] + 12.0 * x[i + 2] - x[i + 3]) /
         (6.0 * h * h * h * h);
  return j;
}

namespace {

// First derivative at any node: centered 4th-order stencil inside,
// one-sided 4th-order stencils at the two edge nodes on each side.
Vec3 node_d1(const std::vector<Vec3>& x, int i, double h) {
  const int n = static_cast<int>(x.size());
  if (i >= 2 && i <= n - 3) {
    return (x[i - 2] - 8.0 * x[i - 1] + 8.0 * x[i + 1] - x[i + 2]) / (12.0 * h);
  }
  if (i == 0) {
    return (-25.0 * x[0] + 48.0 * x[1] - 36.0 * x[2] + 16.0 * x[3] -
            3.0 * x[4]) /
           (12.0 * h);
  }
  if (i == 1) {
    return (-3.0 * x[0] - 10.0 * x[1] + 18.0 * x[2] - 6.0 * x[3] + x[4]) /
           (12.0 * h);
  }
  if (i == n - 2) {
    return -(-3.0 * x[n - 1] - 10.0 * x[n - 2] + 18.0 * x[n - 3] -
             6.0 * x[n - 4] + x[n - 5]) /
           (12.0 * h);
  }
  return -(-25.0 * x[n - 1] + 48.0 * x[n - 2] - 36.0 * x[n - 3] +
           16.0 * x[n - 4] - 3.0 * x[n - 5]) /
         (12.0 * h);
}

}  // namespace

std::vector<double> node_speeds(const CurveSamples& s) {
  const int n = s.size();
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = node_d1(s.positions(), i, s.dt()).norm();
  }
  return out;
}

std::vector<ArcLengthEntry> arc_length_table(const CurveSamples& s) {
  const std::vector<double> f = node_speeds(s);
  const int n = s.size();
  const double h = s.dt();
  for (int i = 0; i < n; ++i) {
    if (f[i] <= kDegenTol) {
      throw RegularityError("curve speed vanishes at node " + std::to_string(i));
    }
  }
  // Prefix Simpson sums at even nodes; odd nodes close with the 3/8
  // rule (node 1 with a one-interval 4th-order formula).
  std::vector<double> even(n, 0.0);
  for (int k = 2; k < n; k += 2) {
    even[k] = even[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
  }
  std::vector<ArcLengthEntry> table(n);
  for (int i = 0; i < n; ++i) {
    double si;
    if (i == 0) {
      si = 0.0;
    } else if (i % 2 == 0) {
      si = even[i];
    } else if (i == 1) {
      si = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    } else {
      si = even[i - 3] +
           3.0 * h / 8.0 * (f[i - 3] + 3.0 * f[i - 2] + 3.0 * f[i - 1] + f[i]);
    }
    table[i] = {s.param(i), si};
  }
  for (int i = 1; i < n; ++i) {
    if (!(table[i].s > table[i - 1].s)) {
      throw RegularityError("arc length not strictly increasing at node " +
                            std::to_string(i));
    }
  }
  return table;
}

namespace {

// Fritsch-Carlson limiting of Hermite slopes, applied per coordinate.
void limit_slopes(const std::vector<double>& s, const std::vector<double>& y,
                  std::vector<double>& m) {
  const int n = static_cast<int>(y.size());
  for (int i = 0; i + 1 < n; ++i) {
    const double del = (y[i + 1] - y[i]) / (s[i + 1] - s[i]);
    if (del == 0.0) {
      m[i] = 0.0;
      m[i + 1] = 0.0;
      continue;
    }
    if (m[i] / del < 0.0) m[i] = 0.0;
    if (m[i + 1] / del < 0.0) m[i + 1] = 0.0;
    if (m[i] / del > 3.0) m[i] = 3.0 * del;
    if (m[i + 1] / del > 3.0) m[i + 1] = 3.0 * del;
  }
}

double hermite_eval(double s0, double s1, double y0, double y1, double m0,
                    double m1, double s) {
  const double h = s1 - s0;
  const double u = (s - s0) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2.0 * u3 - 3.0 * u2 + 1.0) * y0 + (u3 - 2.0 * u2 + u) * h * m0 +
         (-2.0 * u3 + 3.0 * u2) * y1 + (u3 - u2) * h * m1;
}

}  // namespace

CurveSamples reparameterize_by_arclength(const CurveSamples& in, int m) {
  if (m < kMinSamples) {
    throw DomainError("resample count must be at least " +
                      std::to_string(kMinSamples));
  }
  const auto table = arc_length_table(in);
  const std::vector<double> speed = node_speeds(in);
  const int n = in.size();
  const auto& x = in.positions();

  std::vector<double> sgrid(n);
  for (int i = 0; i < n; ++i) sgrid[i] = table[i].s;

  // Slopes dx/ds from the chain rule; x' comes from the same stencils
  // as node_speeds.
  std::vector<double> y[3], slope[3];
  for (int c = 0; c < 3; ++c) {
    y[c].resize(n);
    slope[c].resize(n);
  }
  for (int i = 0; i < n; ++i) {
    const Vec3 d1 = node_d1(x, i, in.dt());
    for (int c = 0; c < 3; ++c) {
      y[c][i] = x[i][c];
      slope[c][i] = d1[c] / speed[i];
    }
  }
  for (int c = 0; c < 3; ++c) limit_slopes(sgrid, y[c], slope[c]);

  const double total = sgrid[n - 1];
  const double ds = total / (m - 1);
  std::vector<Vec3> out(m);
  int k = 0;
  for (int j = 0; j < m; ++j) {
    double sj = std::min(j * ds, total);
    while (k < n - 2 && sgrid[k + 1] < sj) ++k;
    for (int c = 0; c < 3; ++c) {
      out[j][c] = hermite_eval(sgrid[k], sgrid[k + 1], y[c][k], y[c][k + 1],
                               slope[c][k], slope[c][k + 1], sj);
    }
  }
  return CurveSamples(0.0, ds, std::move(out));
}

CurveJet jet_to_arclength(const CurveJet& raw, double s) {
  const double sigma = raw.d1.norm();
  if (sigma <= kDegenTol) {
    throw RegularityError("cannot reparameterize: speed vanishes");
  }
  const double s1 = raw.d1.dot(raw.d2) / sigma;
  const double s2 =
      (raw.d2.squaredNorm() + raw.d1.dot(raw.d3) - s1 * s1) / sigma;
  const double s3 =
      (3.0 * raw.d2.dot(raw.d3) + raw.d1.dot(raw.d4) - 3.0 * s1 * s2) / sigma;
  const double p2 = sigma * sigma;
  const double p3 = p2 * sigma;
  const double p4 = p3 * sigma;
  const double p5 = p4 * sigma;
  const double p6 = p5 * sigma;
  const double p7 = p6 * sigma;

  CurveJet out;
  out.t = s;
  out.x = raw.x;
  out.d1 = raw.d1 / sigma;
  out.d2 = raw.d2 / p2 - raw.d1 * (s1 / p3);
  out.d3 = raw.d3 / p3 - raw.d2 * (3.0 * s1 / p4) +
           raw.d1 * (3.0 * s1 * s1 / p5 - s2 / p4);
  out.d4 = raw.d4 / p4 - raw.d3 * (6.0 * s1 / p5) +
           raw.d2 * (15.0 * s1 * s1 / p6 - 4.0 * s2 / p5) +
           raw.d1 * (10.0 * s1 * s2 / p6 - 15.0 * s1 * s1 * s1 / p7 - s3 / p5);
  return out;
}

AnalyticCurve AnalyticCurve::helix(double a, double b) {
  if (!(a > 0.0) || b == 0.0 || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("helix requires a > 0 and b != 0");
  }
  return AnalyticCurve(Node(Helix{a, b}));
}

AnalyticCurve AnalyticCurve::polynomial(
    const Eigen::Matrix<double, 3, 6>& coeffs) {
  if (!coeffs.allFinite()) {
    throw DomainError("polynomial coefficients must be finite");
  }
  return AnalyticCurve(Node(Polynomial{coeffs}));
}

AnalyticCurve AnalyticCurve::line(const Vec3& x0, const Vec3& dir) {
  Eigen::Matrix<double, 3, 6> c = Eigen::Matrix<double, 3, 6>::Zero();
  c.col(0) = x0;
  c.col(1) = dir;
  return polynomial(c);
}

AnalyticCurve AnalyticCurve::transformed(AnalyticCurve inner,
                                         GalileanElement g) {
  return AnalyticCurve(Node(
      Transformed{std::make_shared<const AnalyticCurve>(std::move(inner)),
                  std::move(g)}));
}

const AnalyticCurve& AnalyticCurve::base() const {
  if (const auto* t = std::get_if<Transformed>(&node_)) {
    return t->inner->base();
  }
  return *this;
}

bool AnalyticCurve::is_transformed() const {
  return std::holds_alternative<Transformed>(node_);
}

GalileanElement AnalyticCurve::total_transform() const {
  if (const auto* t = std::get_if<Transformed>(&node_)) {
    return compose(t->g, t->inner->total_transform());
  }
  return {};
}

CurveJet AnalyticCurve::base_jet(double t) const {
  if (!std::isfinite(t)) throw DomainError("curve parameter must be finite");
  if (const auto* h = std::get_if<Helix>(&node_)) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    CurveJet j;
    j.t = t;
    j.x = Vec3(h->a * c, h->a * s, h->b * t);
    j.d1 = Vec3(-h->a * s, h->a * c, h->b);
    j.d2 = Vec3(-h->a * c, -h->a * s, 0.0);
    j.d3 = Vec3(h->a * s, -h->a * c, 0.0);
    j.d4 = Vec3(h->a * c, h->a * s, 0.0);
    return j;
  }
  const auto& p = std::get<Polynomial>(node_);
  CurveJet j;
  j.t = t;
  for (int c = 0; c < 3; ++c) {
    // Horner evaluation of the polynomial and its first four derivatives.
    double v[5] = {0.0, 0.0, 0.0, 0.0, 0.0};
    for (int k = 5; k >= 0; --k) {
      v[4] = v[4] * t + v[3];
      v[3] = v[3] * t + v[2];
      v[2] = v[2] * t + v[1];
      v[1] = v[1] * t + v[0];
      v[0] = v[0] * t + p.c(c, k);
    }
    j.x[c] = v[0];
    j.d1[c] = v[1];
    j.d2[c] = 2.0 * v[2];
    j.d3[c] = 6.0 * v[3];
    j.d4[c] = 24.0 * v[4];
  }
  return j;
}

CurveJet AnalyticCurve::jet(double t) const {
  if (const auto* tr = std::get_if<Transformed>(&node_)) {
    return transform_jet(tr->g, tr->inner->jet(t));
  }
  return base_jet(t);
}

double AnalyticCurve::arclength(double t, double t_ref) const {
  const AnalyticCurve& b = base();
  if (const auto* h = std::get_if<Helix>(&b.node_)) {
    return std::hypot(h->a, h->b) * (t - t_ref);
  }
  return adaptive_simpson([&b](double u) { return b.base_jet(u).d1.norm(); },
                          t_ref, t, 1e-13);
}

double AnalyticCurve::param_at_arclength(double s, double t_ref) const {
  const AnalyticCurve& b = base();
  if (const auto* h = std::get_if<Helix>(&b.node_)) {
    return t_ref + s / std::hypot(h->a, h->b);
  }
  const double v0 = b.base_jet(t_ref).d1.norm();
  if (v0 <= kDegenTol) throw RegularityError("speed vanishes at t_ref");
  double t = t_ref + s / v0;
  for (int it = 0; it < 64; ++it) {
    const double err = arclength(t, t_ref) - s;
    const double v = b.base_jet(t).d1.norm();
    if (v <= kDegenTol) throw RegularityError("speed vanishes during inversion");
    const double step = err / v;
    t -= step;
    if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(t))) return t;
  }
  throw DomainError("arc length inversion did not converge");
}

CurveJet AnalyticCurve::arclength_jet(double s) const {
  const AnalyticCurve& b = base();
  const double t = b.param_at_arclength(s, 0.0);
  const CurveJet normalized = jet_to_arclength(b.base_jet(t), s);
  if (!is_transformed()) return normalized;
  return transform_jet(total_transform(), normalized);
}

CurveSamples AnalyticCurve::sample(double t_start, double dt, int n) const {
  if (!(dt > 0.0) || n < kMinSamples) {
    throw DomainError("sampling needs dt > 0 and n >= " +
                      std::to_string(kMinSamples));
  }
  std::vector<Vec3> xs(n);
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = jet(t_start + i * dt).x;
  }
  return CurveSamples(jet(t_start).t, dt, std::move(xs));
}

}  // namespace galinv
