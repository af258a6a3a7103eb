#include <doctest.h>

#include <cmath>

#include "galinv/curve.hpp"
#include "test_helpers.hpp"

using namespace galinv;
using namespace galinv::testing;

namespace {

CurveSamples sample_raw_helix(double a, double b, double t0, double dt, int n) {
  const AnalyticCurve c = AnalyticCurve::helix(a, b);
  return c.sample(t0, dt, n);
}

}  // namespace

TEST_CASE("analytic jets") {
  SUBCASE("raw helix jet by hand") {
    const CurveJet j = AnalyticCurve::helix(1.0, 1.0).jet(0.0);
    CHECK((j.x - Vec3(1, 0, 0)).norm() == 0.0);
    CHECK((j.d1 - Vec3(0, 1, 1)).norm() == 0.0);
    CHECK((j.d2 - Vec3(-1, 0, 0)).norm() == 0.0);
    CHECK((j.d3 - Vec3(0, -1, 0)).norm() == 0.0);
    CHECK((j.d4 - Vec3(1, 0, 0)).norm() == 0.0);
  }

  SUBCASE("linear motion has zero second derivative") {
    const CurveJet j = AnalyticCurve::line(Vec3(0, 0, 0), Vec3(1, 0, 0)).jet(2.0);
    CHECK(j.d2.norm() == 0.0);
    CHECK((j.x - Vec3(2, 0, 0)).norm() == 0.0);
  }

  SUBCASE("polynomial jets against hand differentiation") {
    Eigen::Matrix<double, 3, 6> c = Eigen::Matrix<double, 3, 6>::Zero();
    c.row(0) << 1, -2, 3, 0, 0, 0;        // 1 - 2t + 3t^2
    c.row(1) << 0, 0, 0, 1, 0, 0;         // t^3
    c.row(2) << 0, 0, 0, 0, 0.5, -0.25;   // t^4/2 - t^5/4
    const double t = 1.3;
    const CurveJet j = AnalyticCurve::polynomial(c).jet(t);
    CHECK(j.x[0] == doctest::Approx(1 - 2 * t + 3 * t * t).epsilon(1e-14));
    CHECK(j.d1[1] == doctest::Approx(3 * t * t).epsilon(1e-14));
    CHECK(j.d2[2] ==
          doctest::Approx(6 * t * t - 5 * t * t * t).epsilon(1e-14));
    CHECK(j.d3[1] == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(j.d4[2] == doctest::Approx(12 - 30 * t).epsilon(1e-14));
  }

  SUBCASE("identity transform leaves the jet alone") {
    const AnalyticCurve base = AnalyticCurve::helix(2.0, 1.0);
    const AnalyticCurve wrapped =
        AnalyticCurve::transformed(base, GalileanElement());
    const CurveJet a = base.jet(0.7);
    const CurveJet b = wrapped.jet(0.7);
    CHECK((a.x - b.x).norm() == 0.0);
    CHECK((a.d1 - b.d1).norm() == 0.0);
    CHECK((a.d4 - b.d4).norm() == 0.0);
  }

  SUBCASE("transform law") {
    const GalileanElement g = random_special(3);
    const CurveJet j = AnalyticCurve::helix(1.0, 2.0).jet(0.4);
    const CurveJet tj =
        AnalyticCurve::transformed(AnalyticCurve::helix(1.0, 2.0), g).jet(0.4);
    CHECK(tj.t == doctest::Approx(j.t + g.time_shift()).epsilon(1e-15));
    CHECK((tj.x - (g.rotation() * j.x + j.t * g.boost() + g.translation()))
              .norm() < 1e-14);
    CHECK((tj.d1 - (g.rotation() * j.d1 + g.boost())).norm() < 1e-14);
    CHECK((tj.d2 - g.rotation() * j.d2).norm() < 1e-14);
    CHECK((tj.d3 - g.rotation() * j.d3).norm() < 1e-14);
    CHECK((tj.d4 - g.rotation() * j.d4).norm() < 1e-14);
  }

  SUBCASE("domain validation") {
    CHECK_THROWS_AS(AnalyticCurve::helix(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(AnalyticCurve::helix(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(AnalyticCurve::helix(1.0, 1.0).jet(
                        std::numeric_limits<double>::quiet_NaN()),
                    DomainError);
  }
}

TEST_CASE("finite-difference jets") {
  SUBCASE("exact on low-degree polynomials") {
    std::vector<Vec3> xs;
    const double dt = 0.01;
    for (int i = 0; i < 21; ++i) {
      const double t = i * dt;
      xs.emplace_back(t * t, 0.0, 0.0);
    }
    const CurveSamples s(0.0, dt, xs);
    const CurveJet j = jet_fd(s, 10);
    CHECK((j.d2 - Vec3(2, 0, 0)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(j.d1[0] == doctest::Approx(2 * s.param(10)).epsilon(1e-10));
    CHECK(std::abs(j.d3[0]) < 1e-7);
    CHECK(std::abs(j.d4[0]) < 1e-4);
  }

  SUBCASE("index window") {
    const CurveSamples s = sample_raw_helix(1, 1, 0.0, 0.1, 15);
    CHECK_THROWS_AS(jet_fd(s, 0), IndexOutOfRange);
    CHECK_THROWS_AS(jet_fd(s, 3), IndexOutOfRange);
    CHECK_THROWS_AS(jet_fd(s, 11), IndexOutOfRange);
    CHECK_NOTHROW(jet_fd(s, 4));
    CHECK_NOTHROW(jet_fd(s, 10));
  }

  SUBCASE("matches analytic jets at 4th order on the helix") {
    const AnalyticCurve c = AnalyticCurve::helix(1.0, 1.0);
    double err[3];
    int lvl = 0;
    for (const double dt : {0.2, 0.1, 0.05}) {
      const int n = 41;
      const CurveSamples s = c.sample(-dt * (n / 2), dt, n);
      const int mid = n / 2;
      const CurveJet fd = jet_fd(s, mid);
      const CurveJet ex = c.jet(s.param(mid));
      double e = 0.0;
      e = std::max(e, (fd.d1 - ex.d1).cwiseAbs().maxCoeff());
      e = std::max(e, (fd.d2 - ex.d2).cwiseAbs().maxCoeff());
      err[lvl++] = e;
    }
    // observed order >= 3.5 when dt halves
    CHECK(err[0] / err[1] > std::pow(2.0, 3.5));
    CHECK(err[1] / err[2] > std::pow(2.0, 3.5));
  }

  SUBCASE("d3/d4 converge at 4th order too") {
    const AnalyticCurve c = AnalyticCurve::helix(1.0, 1.0);
    double err[3];
    int lvl = 0;
    for (const double dt : {0.2, 0.1, 0.05}) {
      const CurveSamples s = c.sample(0.0, dt, 41);
      const CurveJet fd = jet_fd(s, 20);
      const CurveJet ex = c.jet(s.param(20));
      err[lvl++] = std::max((fd.d3 - ex.d3).cwiseAbs().maxCoeff(),
                            (fd.d4 - ex.d4).cwiseAbs().maxCoeff());
    }
    CHECK(err[0] / err[1] > std::pow(2.0, 3.5));
    CHECK(err[1] / err[2] > std::pow(2.0, 3.5));
  }
}

TEST_CASE("nondegeneracy") {
  const AnalyticCurve helix = AnalyticCurve::helix(1.0, 1.0);
  // unit-speed helix: det(x', x'', x''') = kappa^2 tau = 1/8
  CHECK(nondegeneracy(helix.arclength_jet(0.3)) ==
        doctest::Approx(0.125).epsilon(1e-12));

  const CurveJet line = AnalyticCurve::line(Vec3(1, 2, 3), Vec3(0, 1, 0)).jet(0.5);
  CHECK(nondegeneracy(line) == 0.0);
  CHECK_FALSE(is_st_curve(line));

  // planar circle: x''' is parallel to x', triple product vanishes
  CurveJet circle;
  circle.t = 0.7;
  circle.x = Vec3(std::cos(0.7), std::sin(0.7), 0.0);
  circle.d1 = Vec3(-std::sin(0.7), std::cos(0.7), 0.0);
  circle.d2 = -circle.x;
  circle.d3 = -circle.d1;
  circle.d4 = circle.x;
  CHECK(std::abs(nondegeneracy(circle)) < 1e-15);

  // invariant under rotation + translation (no boost)
  std::mt19937_64 rng(17);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const CurveJet j = random_st_jet(rng);
    GalileanElement g = random_special(static_cast<std::uint64_t>(k) + 100);
    const GalileanElement rt(g.rotation(), Vec3::Zero(), g.translation(),
                             g.time_shift());
    worst = std::max(worst, std::abs(nondegeneracy(transform_jet(rt, j)) -
                                     nondegeneracy(j)));
  }
  CHECK(worst < 1e-10);

  // The signed triple product is NOT boost-invariant: a large boost can
  // flip it. What survives any group element is the frame
  // constructibility (||x''|| and ||x'' x x'''|| are rotation norms).
  bool sign_flipped = false;
  for (int k = 0; k < 200; ++k) {
    const CurveJet j = AnalyticCurve::helix(1.0, 1.0).arclength_jet(0.1 * k);
    const GalileanElement g = random_special(static_cast<std::uint64_t>(k));
    const CurveJet tj = transform_jet(g, j);
    CHECK(tj.d2.norm() > 0.1);
    CHECK(tj.d2.cross(tj.d3).norm() > 0.01);
    if (!is_st_curve(tj)) sign_flipped = true;
  }
  CHECK(sign_flipped);  // documents the gap: boosts can break Def-4.1 positivity
}

TEST_CASE("arc length table") {
  SUBCASE("unit-speed line") {
    std::vector<Vec3> xs;
    for (int i = 0; i < 21; ++i) xs.emplace_back(i * 0.05, 0.0, 0.0);
    const auto table = arc_length_table(CurveSamples(0.0, 0.05, xs));
    for (const auto& [t, s] : table) {
      CHECK(std::abs(s - t) < 1e-10);
    }
  }

  SUBCASE("helix has constant speed sqrt(a^2+b^2)") {
    const CurveSamples s = sample_raw_helix(1, 1, 0.0, 0.01, 201);
    const auto table = arc_length_table(s);
    CHECK(std::abs(table.back().s - std::sqrt(2.0) * 2.0) < 1e-8);
  }

  SUBCASE("nearly planar circle of radius 2") {
    std::vector<Vec3> xs;
    const int n = 629;
    const double dt = 2.0 * M_PI / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double t = i * dt;
      xs.emplace_back(2.0 * std::cos(t), 2.0 * std::sin(t), 0.001 * t);
    }
    const auto table = arc_length_table(CurveSamples(0.0, dt, xs));
    CHECK(std::abs(table.back().s - 4.0 * M_PI) < 1e-4);
  }

  SUBCASE("stationary curve is rejected") {
    std::vector<Vec3> xs(15, Vec3(1, 1, 1));
    CHECK_THROWS_AS(arc_length_table(CurveSamples(0.0, 0.1, xs)),
                    RegularityError);
  }

  SUBCASE("quadrature converges at 4th order on a variable-speed curve") {
    Eigen::Matrix<double, 3, 6> c = Eigen::Matrix<double, 3, 6>::Zero();
    c(0, 1) = 1.0;
    c(1, 2) = 1.0;
    c(2, 3) = 1.0;
    const AnalyticCurve cubic = AnalyticCurve::polynomial(c);
    const double want = cubic.arclength(1.0, 0.0);  // adaptive oracle
    double err[2];
    int lvl = 0;
    for (const int n : {51, 101}) {
      const CurveSamples s = cubic.sample(0.0, 1.0 / (n - 1), n);
      err[lvl++] = std::abs(arc_length_table(s).back().s - want);
    }
    CHECK(err[0] / err[1] > 12.0);
  }
}

TEST_CASE("arc-length reparameterization") {
  SUBCASE("already unit-speed line is unchanged") {
    std::vector<Vec3> xs;
    for (int i = 0; i < 21; ++i) xs.emplace_back(0.05 * i, 1.0, -2.0);
    const CurveSamples out =
        reparameterize_by_arclength(CurveSamples(0.0, 0.05, xs), 21);
    for (int i = 0; i < 21; ++i) {
      CHECK((out.positions()[i] - xs[i]).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  SUBCASE("raw helix gains unit speed and kappa = 1/2") {
    const CurveSamples raw = sample_raw_helix(1, 1, 0.0, 0.005, 1401);
    const CurveSamples out = reparameterize_by_arclength(raw, 1401);
    const std::vector<double> v = node_speeds(out);
    for (int i = out.interior_first(); i <= out.interior_last(); ++i) {
      CHECK(std::abs(v[i] - 1.0) < 5e-3);
    }
    double worst = 0.0;
    for (int i = out.interior_first(); i <= out.interior_last(); ++i) {
      worst = std::max(worst, std::abs(jet_fd(out, i).d2.norm() - 0.5));
    }
    CHECK(worst < 1e-3);
  }

  SUBCASE("resample count below the sample minimum is rejected") {
    const CurveSamples raw = sample_raw_helix(1, 1, 0.0, 0.01, 101);
    CHECK_THROWS_AS(reparameterize_by_arclength(raw, 10), DomainError);
  }

  SUBCASE("idempotent within 1e-6") {
    const CurveSamples raw = sample_raw_helix(1, 1, 0.0, 0.005, 1401);
    const CurveSamples once = reparameterize_by_arclength(raw, 1201);
    const auto table = arc_length_table(once);
    for (const auto& [t, s] : table) {
      CHECK(std::abs(s - t) < 1e-6);
    }
  }
}

TEST_CASE("chain rule to arc length matches the independent closed form") {
  for (const auto& [a, b] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {0.5, -0.8}}) {
    const AnalyticCurve c = AnalyticCurve::helix(a, b);
    for (const double s : {0.0, 0.37, 2.4}) {
      const CurveJet got = c.arclength_jet(s);
      const CurveJet want = helix_arclength_jet_reference(a, b, s);
      CHECK((got.x - want.x).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((got.d1 - want.d1).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((got.d2 - want.d2).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((got.d3 - want.d3).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((got.d4 - want.d4).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(got.t == doctest::Approx(s).epsilon(1e-14));
    }
  }

  // polynomial route exercises quadrature + Newton inversion
  const AnalyticCurve tw = AnalyticCurve::polynomial([] {
    Eigen::Matrix<double, 3, 6> c = Eigen::Matrix<double, 3, 6>::Zero();
    c(0, 1) = 1.0;   // x = t
    c(1, 2) = 1.0;   // y = t^2
    c(2, 3) = 1.0;   // z = t^3
    return c;
  }());
  const double s = tw.arclength(0.8, 0.0);
  const double t_back = tw.param_at_arclength(s, 0.0);
  CHECK(t_back == doctest::Approx(0.8).epsilon(1e-12));
  const CurveJet aj = tw.arclength_jet(s);
  CHECK(aj.d1.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(aj.d1.dot(aj.d2)) < 1e-12);  // unit speed => x'.x'' = 0
}

TEST_CASE("samples validation") {
  std::vector<Vec3> xs(10, Vec3::Zero());
  CHECK_THROWS_AS(CurveSamples(0.0, 0.1, xs), DomainError);
  xs.resize(11, Vec3::Zero());
  CHECK_THROWS_AS(CurveSamples(0.0, -0.1, xs), DomainError);
  xs[3][1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(CurveSamples(0.0, 0.1, xs), DomainError);
}
