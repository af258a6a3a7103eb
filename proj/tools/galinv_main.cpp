// galinv: differential invariants of space-time trajectories under the
// special Galilean group. Subcommands: generate, invariants, equiv,
// recover, pullback, reconstruct.
//
// Exit codes: 0 ok/equivalent, 1 not-equivalent, 2 configuration or
// input error, 3 degenerate curve, 4 no overlap, 5 not in group.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "galinv/io.hpp"

using namespace galinv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotEquivalent = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitNoOverlap = 4;
constexpr int kExitNotInGroup = 5;

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    io::write_text_file(path, content);
  }
}

double tol_from_env_or(double fallback) {
  if (const char* env = std::getenv("GALINV_TOL")) {
    try {
      return std::stod(env);
    } catch (...) {
      throw DomainError("GALINV_TOL is not a number: " + std::string(env));
    }
  }
  return fallback;
}

// Uniform sampling of the arc-length presentation: the time column is
// the (possibly shifted) time of the unit-speed base curve.
CurveSamples sample_arclength(const AnalyticCurve& c, double s0, double ds,
                              int n) {
  std::vector<Vec3> xs(n);
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = c.arclength_jet(s0 + i * ds).x;
  }
  return CurveSamples(c.arclength_jet(s0).t, ds, std::move(xs));
}

struct GenerateConfig {
  std::string family;
  double a = 1.0;
  double b = 1.0;
  std::vector<double> x0{0.0, 0.0, 0.0};
  std::vector<double> dir{1.0, 0.0, 0.0};
  std::vector<double> cx, cy, cz;
  int n = 4001;
  double dt = 0.005;
  double t0 = 0.0;
  std::string output;
  std::string transform_file;
  std::optional<std::uint64_t> transform_seed;
  std::string transform_out;
};

int run_generate(const GenerateConfig& cfg) {
  AnalyticCurve base = [&cfg] {
    if (cfg.family == "helix") return AnalyticCurve::helix(cfg.a, cfg.b);
    if (cfg.family == "line") {
      const Vec3 dir(cfg.dir[0], cfg.dir[1], cfg.dir[2]);
      if (dir.norm() <= kDegenTol) throw DomainError("line needs a direction");
      return AnalyticCurve::line(Vec3(cfg.x0[0], cfg.x0[1], cfg.x0[2]),
                                 dir.normalized());
    }
    Eigen::Matrix<double, 3, 6> coeffs = Eigen::Matrix<double, 3, 6>::Zero();
    auto fill = [&coeffs](int row, const std::vector<double>& c) {
      if (c.size() > 6) throw DomainError("polynomial degree is at most 5");
      for (std::size_t k = 0; k < c.size(); ++k) {
        coeffs(row, static_cast<int>(k)) = c[k];
      }
    };
    fill(0, cfg.cx);
    fill(1, cfg.cy);
    fill(2, cfg.cz);
    return AnalyticCurve::polynomial(coeffs);
  }();

  std::optional<GalileanElement> g;
  if (cfg.transform_seed) g = random_special(*cfg.transform_seed);
  if (!cfg.transform_file.empty()) {
    g = io::element_from_json_file(cfg.transform_file);
  }

  const AnalyticCurve curve = g ? AnalyticCurve::transformed(base, *g) : base;

  // helix and line are emitted in their unit-speed presentation;
  // polynomials keep their own parameter.
  const CurveSamples samples =
      cfg.family == "polynomial"
          ? curve.sample(cfg.t0, cfg.dt, cfg.n)
          : sample_arclength(curve, cfg.t0, cfg.dt, cfg.n);
  io::write_curve_csv(cfg.output, samples);

  if (g) {
    const std::string out = cfg.transform_out.empty()
                                ? cfg.output + ".transform.json"
                                : cfg.transform_out;
    io::write_text_file(out, io::to_json(*g));
  }
  return kExitOk;
}

struct InvariantsConfig {
  std::string input;
  std::string family;
  double a = 1.0;
  double b = 1.0;
  double t0 = 0.0;
  double t1 = 4.0;
  int m = 64;
  bool reparam = false;
  std::string output;
  std::string plot;
};

int run_invariants(const InvariantsConfig& cfg) {
  Signature sig;
  if (!cfg.family.empty()) {
    if (cfg.family != "helix") {
      throw DomainError("analytic invariants support --family helix");
    }
    sig = signature(AnalyticCurve::helix(cfg.a, cfg.b), cfg.t0, cfg.t1, cfg.m);
    sig.meta.source = "helix(a=" + io::format_double(cfg.a) +
                      ",b=" + io::format_double(cfg.b) + ")";
  } else {
    const CurveSamples samples = io::read_curve_csv(cfg.input);
    sig = cfg.reparam ? signature_reparameterized(samples, cfg.m)
                      : signature(samples);
    sig.meta.source = cfg.input;
  }
  emit(cfg.output, io::to_json(sig));
  if (!cfg.plot.empty()) io::write_signature_plot_csv(cfg.plot, sig);
  return kExitOk;
}

struct EquivConfig {
  std::string a, b;
  double tol = -1.0;
  bool reparam = false;
  int m = 0;
  std::string output;
};

int run_equiv(const EquivConfig& cfg) {
  const double tol = cfg.tol > 0.0 ? cfg.tol : tol_from_env_or(1e-3);
  const CurveSamples sa = io::read_curve_csv(cfg.a);
  const CurveSamples sb = io::read_curve_csv(cfg.b);
  const Signature sig_a =
      cfg.reparam ? signature_reparameterized(sa, cfg.m > 0 ? cfg.m : sa.size())
                  : signature(sa);
  const Signature sig_b =
      cfg.reparam ? signature_reparameterized(sb, cfg.m > 0 ? cfg.m : sb.size())
                  : signature(sb);
  const EquivalenceReport rep = equivalent(sig_a, sig_b, tol);
  emit(cfg.output, io::to_json(rep));
  return rep.equivalent ? kExitOk : kExitNotEquivalent;
}

struct RecoverConfig {
  std::string a, b;
  double t0 = std::numeric_limits<double>::quiet_NaN();
  double tol = -1.0;
  std::string output;
};

int run_recover(const RecoverConfig& cfg) {
  const double tol = cfg.tol > 0.0 ? cfg.tol : tol_from_env_or(1e-2);
  const CurveSamples sa = io::read_curve_csv(cfg.a);
  const CurveSamples sb = io::read_curve_csv(cfg.b);
  const double anchor =
      std::isnan(cfg.t0) ? sa.param(sa.interior_first()) : cfg.t0;
  RecoveryReport rep;
  try {
    rep = recover_transformation(sa, sb, anchor);
  } catch (const NotInGroup& e) {
    // still leave a machine-readable record of the rejection
    emit(cfg.output, std::string("{\n  \"error\": \"not_in_group\",\n") +
                         "  \"message\": \"" + e.what() + "\"\n}\n");
    std::cerr << "galinv: " << e.what() << "\n";
    return kExitNotInGroup;
  }
  emit(cfg.output, io::to_json(rep));
  if (rep.residual > tol) {
    std::cerr << "galinv: residual " << io::format_double(rep.residual)
              << " exceeds tolerance " << io::format_double(tol)
              << "; curves are not related by a group element\n";
    return kExitNotInGroup;
  }
  return kExitOk;
}

struct PullbackConfig {
  std::string input;
  double at = std::numeric_limits<double>::quiet_NaN();
  std::string output;
};

int run_pullback(const PullbackConfig& cfg) {
  const CurveSamples s = io::read_curve_csv(cfg.input);
  int i = (s.interior_first() + s.interior_last()) / 2;
  if (!std::isnan(cfg.at)) {
    i = std::clamp(static_cast<int>(std::lround((cfg.at - s.t0()) / s.dt())),
                   s.interior_first(), s.interior_last());
  }
  const AlgebraElement a = pullback(jet_fd(s, i));
  emit(cfg.output, io::pullback_json(s.param(i), a));
  return kExitOk;
}

struct ReconstructConfig {
  double w1 = 0.0;
  double w2 = 0.0;
  double length = 0.0;
  double h = 1e-3;
  std::string output;
  std::string sidecar;
};

int run_reconstruct(const ReconstructConfig& cfg) {
  const ConstantInvariants inv = make_invariants(cfg.w1, cfg.w2);
  const double length = cfg.length > 0.0
                            ? cfg.length
                            : 4.0 * std::numbers::pi * inv.w1 / inv.w2;
  const ReconstructionResult rec =
      integrate_frame(inv, initial_frame(inv), length, cfg.h);
  io::write_curve_csv(cfg.output, rec.samples);
  const std::string sidecar =
      cfg.sidecar.empty() ? cfg.output + ".json" : cfg.sidecar;
  io::write_text_file(sidecar, io::reconstruction_sidecar_json(inv, cfg.h, rec));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differential invariants of space-time trajectories under "
               "the special Galilean group"};
  app.require_subcommand(1);

  GenerateConfig gen;
  CLI::App* cmd_gen = app.add_subcommand(
      "generate", "sample a curve family to CSV, optionally transformed");
  cmd_gen->add_option("family", gen.family, "helix | line | polynomial")
      ->required()
      ->check(CLI::IsMember({"helix", "line", "polynomial"}));
  cmd_gen->add_option("--a", gen.a, "helix radius (default 1)");
  cmd_gen->add_option("--b", gen.b, "helix pitch (default 1)");
  cmd_gen->add_option("--x0", gen.x0, "line origin")->expected(3);
  cmd_gen->add_option("--dir", gen.dir, "line direction")->expected(3);
  cmd_gen->add_option("--cx", gen.cx, "x(t) coefficients, low degree first")
      ->delimiter(',');
  cmd_gen->add_option("--cy", gen.cy, "y(t) coefficients")->delimiter(',');
  cmd_gen->add_option("--cz", gen.cz, "z(t) coefficients")->delimiter(',');
  cmd_gen->add_option("--n", gen.n, "sample count")
      ->check(CLI::Range(11, 10000000));
  cmd_gen->add_option("--dt", gen.dt, "sample spacing")
      ->check(CLI::PositiveNumber);
  cmd_gen->add_option("--t0", gen.t0, "start parameter");
  cmd_gen->add_option("-o,--output", gen.output, "output CSV")->required();
  auto* seed_opt = cmd_gen->add_option("--transform-seed", gen.transform_seed,
                                       "apply random_special(seed)");
  cmd_gen->add_option("--transform", gen.transform_file,
                      "apply the element in this JSON file")
      ->excludes(seed_opt);
  cmd_gen->add_option("--transform-out", gen.transform_out,
                      "where to write the applied element "
                      "(default <output>.transform.json)");

  InvariantsConfig inv;
  CLI::App* cmd_inv = app.add_subcommand(
      "invariants", "signature (w1, w2, w3 vs arc length) of a curve");
  cmd_inv->add_option("-i,--input", inv.input, "curve CSV");
  cmd_inv->add_option("--family", inv.family,
                      "analytic family instead of CSV (helix)");
  cmd_inv->add_option("--a", inv.a, "helix radius");
  cmd_inv->add_option("--b", inv.b, "helix pitch");
  cmd_inv->add_option("--t0", inv.t0, "analytic window start");
  cmd_inv->add_option("--t1", inv.t1, "analytic window end");
  cmd_inv->add_option("--m", inv.m, "node count (analytic / --reparam)")
      ->check(CLI::Range(11, 10000000));
  cmd_inv->add_flag("--reparam", inv.reparam,
                    "normalize the curve to unit speed first");
  cmd_inv->add_option("-o,--output", inv.output, "signature JSON (stdout)");
  cmd_inv->add_option("--plot", inv.plot, "also write s,w1,w2,w3 CSV");

  EquivConfig eq;
  CLI::App* cmd_eq =
      app.add_subcommand("equiv", "decide Galilean equivalence of two curves");
  cmd_eq->add_option("-a", eq.a, "first curve CSV")->required();
  cmd_eq->add_option("-b", eq.b, "second curve CSV")->required();
  cmd_eq->add_option("--tol", eq.tol,
                     "decision tolerance (default 1e-3 or GALINV_TOL)");
  cmd_eq->add_flag("--reparam", eq.reparam,
                   "normalize both curves to unit speed first");
  cmd_eq->add_option("--m", eq.m, "resample count for --reparam");
  cmd_eq->add_option("-o,--output", eq.output, "report JSON (stdout)");

  RecoverConfig rec;
  CLI::App* cmd_rec = app.add_subcommand(
      "recover", "recover the group element mapping curve a onto curve b");
  cmd_rec->add_option("-a", rec.a, "first curve CSV")->required();
  cmd_rec->add_option("-b", rec.b, "second curve CSV")->required();
  cmd_rec->add_option("--t0", rec.t0, "anchor parameter on curve a");
  cmd_rec->add_option("--tol", rec.tol,
                      "residual gate (default 1e-2 or GALINV_TOL)");
  cmd_rec->add_option("-o,--output", rec.output, "report JSON (stdout)");

  PullbackConfig pb;
  CLI::App* cmd_pb = app.add_subcommand(
      "pullback", "Maurer-Cartan pullback matrix at one curve node");
  cmd_pb->add_option("-i,--input", pb.input, "curve CSV")->required();
  cmd_pb->add_option("--at", pb.at, "parameter value (default: middle node)");
  cmd_pb->add_option("-o,--output", pb.output, "matrix JSON (stdout)");

  ReconstructConfig rc;
  CLI::App* cmd_rc = app.add_subcommand(
      "reconstruct", "integrate the frame ODE for constant invariants");
  cmd_rc->set_help_flag("--help", "print help");  // frees -h / --h for the step
  cmd_rc->add_option("--w1", rc.w1, "target ||x''||")->required();
  cmd_rc->add_option("--w2", rc.w2, "target ||x'''||")->required();
  cmd_rc->add_option("--length", rc.length,
                     "arc length to integrate (default: two turns)");
  cmd_rc->add_option("--h", rc.h, "step size")->check(CLI::PositiveNumber);
  cmd_rc->add_option("-o,--output", rc.output, "curve CSV")->required();
  cmd_rc->add_option("--sidecar", rc.sidecar,
                     "metadata JSON (default <output>.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (cmd_gen->parsed()) return run_generate(gen);
    if (cmd_inv->parsed()) {
      if (inv.family.empty() && inv.input.empty()) {
        throw DomainError("invariants needs -i CSV or --family");
      }
      return run_invariants(inv);
    }
    if (cmd_eq->parsed()) return run_equiv(eq);
    if (cmd_rec->parsed()) return run_recover(rec);
    if (cmd_pb->parsed()) return run_pullback(pb);
    if (cmd_rc->parsed()) return run_reconstruct(rc);
    return kExitConfig;
  } catch (const DegenerateJet& e) {
    std::cerr << "galinv: degenerate curve";
    if (e.node() >= 0) std::cerr << " at node " << e.node();
    std::cerr << ": " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const RegularityError& e) {
    std::cerr << "galinv: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const IndexOutOfRange& e) {
    std::cerr << "galinv: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const NoOverlap& e) {
    std::cerr << "galinv: " << e.what() << "\n";
    return kExitNoOverlap;
  } catch (const NotInGroup& e) {
    std::cerr << "galinv: " << e.what() << "\n";
    return kExitNotInGroup;
  } catch (const Error& e) {
    std::cerr << "galinv: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "galinv: " << e.what() << "\n";
    return kExitConfig;
  }
}
