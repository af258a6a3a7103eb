// Python bindings for the galinv core: group elements, curves, jets,
// invariant signatures, equivalence/recovery and reconstruction.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "galinv/io.hpp"
#include "galinv/reconstruct.hpp"

namespace py = pybind11;
using namespace galinv;

namespace {

py::array_t<double> positions_array(const CurveSamples& s) {
  py::array_t<double> out({s.size(), 3});
  auto r = out.mutable_unchecked<2>();
  for (int i = 0; i < s.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      r(i, c) = s.positions()[static_cast<std::size_t>(i)][c];
    }
  }
  return out;
}

CurveSamples samples_from_array(double t0, double dt,
                                const py::array_t<double>& xs) {
  const auto buf = xs.unchecked<2>();
  if (buf.shape(1) != 3) {
    throw DomainError("positions must have shape (n, 3)");
  }
  std::vector<Vec3> v(static_cast<std::size_t>(buf.shape(0)));
  for (py::ssize_t i = 0; i < buf.shape(0); ++i) {
    v[static_cast<std::size_t>(i)] = Vec3(buf(i, 0), buf(i, 1), buf(i, 2));
  }
  return CurveSamples(t0, dt, std::move(v));
}

}  // namespace

PYBIND11_MODULE(galinv, m) {
  m.doc() = "Differential invariants of space-time trajectories under the "
            "special Galilean group";

  py::register_exception<NotOrthogonal>(m, "NotOrthogonal");
  py::register_exception<NotSpecial>(m, "NotSpecial");
  py::register_exception<SingularMatrix>(m, "SingularMatrix");
  py::register_exception<DomainError>(m, "DomainError");
  py::register_exception<IndexOutOfRange>(m, "IndexOutOfRange");
  py::register_exception<RegularityError>(m, "RegularityError");
  py::register_exception<DegenerateJet>(m, "DegenerateJetError");
  py::register_exception<NoOverlap>(m, "NoOverlapError");
  py::register_exception<NotInGroup>(m, "NotInGroupError");
  py::register_exception<InvalidInvariants>(m, "InvalidInvariantsError");
  py::register_exception<StepTooLarge>(m, "StepTooLargeError");
  py::register_exception<NonPositiveMass>(m, "NonPositiveMassError");
  py::register_exception<ParseError>(m, "ParseError");

  py::class_<GalileanElement>(m, "GalileanElement")
      .def(py::init<>())
      .def(py::init<const Mat3&, const Vec3&, const Vec3&, double>(),
           py::arg("r"), py::arg("v"), py::arg("y"), py::arg("s"))
      .def_property_readonly("r", &GalileanElement::rotation)
      .def_property_readonly("v", &GalileanElement::boost)
      .def_property_readonly("y", &GalileanElement::translation)
      .def_property_readonly("s", &GalileanElement::time_shift)
      .def("embed", &GalileanElement::embed)
      .def("inverse", &GalileanElement::inverse)
      .def("act",
           [](const GalileanElement& g, double t, const Vec3& x) {
             const Event e = g.act({t, x});
             return py::make_tuple(e.t, e.x);
           },
           py::arg("t"), py::arg("x"))
      .def("__matmul__",
           [](const GalileanElement& a, const GalileanElement& b) {
             return compose(a, b);
           })
      .def_static("pure_rotation", &GalileanElement::pure_rotation)
      .def_static("pure_boost", &GalileanElement::pure_boost)
      .def_static("pure_translation", &GalileanElement::pure_translation)
      .def_static("pure_time_shift", &GalileanElement::pure_time_shift)
      .def("__repr__", [](const GalileanElement& g) {
        return "<GalileanElement s=" + std::to_string(g.time_shift()) + ">";
      });

  m.def("compose", &compose);
  m.def("random_special", &random_special, py::arg("seed"));
  m.def("snap_to_group", &snap_to_group, py::arg("r"), py::arg("v"),
        py::arg("y"), py::arg("s"));

  py::class_<AlgebraElement>(m, "AlgebraElement")
      .def_readonly("m", &AlgebraElement::m)
      .def("skew_defect", &AlgebraElement::skew_defect)
      .def("structure_defect", &AlgebraElement::structure_defect);

  m.def("left_log_derivative",
        [](const std::function<Mat5(double)>& path, double t, double h) {
          return left_log_derivative(path, t, h);
        },
        py::arg("path"), py::arg("t"), py::arg("h") = 1e-5);

  py::class_<CurveJet>(m, "CurveJet")
      .def(py::init<>())
      .def_readwrite("t", &CurveJet::t)
      .def_readwrite("x", &CurveJet::x)
      .def_readwrite("d1", &CurveJet::d1)
      .def_readwrite("d2", &CurveJet::d2)
      .def_readwrite("d3", &CurveJet::d3)
      .def_readwrite("d4", &CurveJet::d4);

  m.def("transform_jet", &transform_jet, py::arg("g"), py::arg("jet"));
  m.def("nondegeneracy", &nondegeneracy);
  m.def("is_st_curve", &is_st_curve, py::arg("jet"),
        py::arg("tol") = kDegenTol);

  py::class_<CurveSamples>(m, "CurveSamples")
      .def(py::init(&samples_from_array), py::arg("t0"), py::arg("dt"),
           py::arg("positions"))
      .def_property_readonly("t0", &CurveSamples::t0)
      .def_property_readonly("dt", &CurveSamples::dt)
      .def_property_readonly("positions", &positions_array)
      .def("__len__", &CurveSamples::size)
      .def("param", &CurveSamples::param)
      .def_property_readonly("interior_first", &CurveSamples::interior_first)
      .def_property_readonly("interior_last", &CurveSamples::interior_last);

  m.def("jet_fd", &jet_fd, py::arg("samples"), py::arg("i"));
  m.def("arc_length_table", [](const CurveSamples& s) {
    const auto table = arc_length_table(s);
    py::array_t<double> out({static_cast<py::ssize_t>(table.size()),
                             static_cast<py::ssize_t>(2)});
    auto r = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < table.size(); ++i) {
      r(static_cast<py::ssize_t>(i), 0) = table[i].t;
      r(static_cast<py::ssize_t>(i), 1) = table[i].s;
    }
    return out;
  });
  m.def("reparameterize_by_arclength", &reparameterize_by_arclength,
        py::arg("samples"), py::arg("m"));

  py::class_<AnalyticCurve>(m, "AnalyticCurve")
      .def_static("helix", &AnalyticCurve::helix, py::arg("a"), py::arg("b"))
      .def_static("polynomial", &AnalyticCurve::polynomial, py::arg("coeffs"))
      .def_static("line", &AnalyticCurve::line, py::arg("x0"), py::arg("dir"))
      .def_static("transformed", &AnalyticCurve::transformed, py::arg("inner"),
                  py::arg("g"))
      .def("jet", &AnalyticCurve::jet, py::arg("t"))
      .def("arclength_jet", &AnalyticCurve::arclength_jet, py::arg("s"))
      .def("arclength", &AnalyticCurve::arclength, py::arg("t"),
           py::arg("t_ref") = 0.0)
      .def("sample", &AnalyticCurve::sample, py::arg("t_start"), py::arg("dt"),
           py::arg("n"));

  py::class_<Frame>(m, "Frame").def_readonly("m", &Frame::m);
  m.def("frame", &frame, py::arg("jet"));
  m.def("frame_inverse", &frame_inverse, py::arg("jet"));
  m.def("frame_derivative", &frame_derivative, py::arg("jet"));
  m.def("pullback", &pullback, py::arg("jet"));

  py::class_<SignatureMeta>(m, "SignatureMeta")
      .def_readonly("source", &SignatureMeta::source)
      .def_readonly("dt", &SignatureMeta::dt)
      .def_readonly("method", &SignatureMeta::method);

  py::class_<Signature>(m, "Signature")
      .def_property_readonly(
          "s", [](const Signature& sig) { return py::array(py::cast(sig.s)); })
      .def_property_readonly(
          "w1",
          [](const Signature& sig) { return py::array(py::cast(sig.w1)); })
      .def_property_readonly(
          "w2",
          [](const Signature& sig) { return py::array(py::cast(sig.w2)); })
      .def_property_readonly(
          "w3",
          [](const Signature& sig) { return py::array(py::cast(sig.w3)); })
      .def_readonly("meta", &Signature::meta);

  m.def("signature",
        py::overload_cast<const AnalyticCurve&, double, double, int>(&signature),
        py::arg("curve"), py::arg("t0"), py::arg("t1"), py::arg("m"));
  m.def("signature", py::overload_cast<const CurveSamples&>(&signature),
        py::arg("samples"));
  m.def("signature_reparameterized", &signature_reparameterized,
        py::arg("samples"), py::arg("m"));
  m.def("force_signature", &force_signature, py::arg("mass"),
        py::arg("signature"));

  py::class_<EquivalenceReport>(m, "EquivalenceReport")
      .def_readonly("equivalent", &EquivalenceReport::equivalent)
      .def_readonly("max_dev_w1", &EquivalenceReport::max_dev_w1)
      .def_readonly("max_dev_w2", &EquivalenceReport::max_dev_w2)
      .def_readonly("max_dev_w3", &EquivalenceReport::max_dev_w3)
      .def_readonly("overlap_lo", &EquivalenceReport::overlap_lo)
      .def_readonly("overlap_hi", &EquivalenceReport::overlap_hi);

  m.def("equivalent", &equivalent, py::arg("a"), py::arg("b"), py::arg("tol"));

  py::class_<RecoveryReport>(m, "RecoveryReport")
      .def_readonly("g", &RecoveryReport::g)
      .def_readonly("residual", &RecoveryReport::residual)
      .def_readonly("orth_defect", &RecoveryReport::orth_defect);

  m.def("recover_transformation",
        py::overload_cast<const CurveSamples&, const CurveSamples&, double>(
            &recover_transformation),
        py::arg("a"), py::arg("b"), py::arg("t0"));
  m.def("recover_transformation",
        py::overload_cast<const AnalyticCurve&, const AnalyticCurve&, double,
                          double, double, int>(&recover_transformation),
        py::arg("a"), py::arg("b"), py::arg("t0"), py::arg("t_lo"),
        py::arg("t_hi"), py::arg("n"));

  m.def("invariant_relations_check",
        [](const CurveJet& j, const std::vector<CurveJet>& window) {
          py::dict out;
          for (const auto& d : invariant_relations_check(j, window)) {
            out[py::str(d.name)] = d.defect;
          }
          return out;
        },
        py::arg("jet"), py::arg("window") = std::vector<CurveJet>{});

  py::class_<ConstantInvariants>(m, "ConstantInvariants")
      .def_readonly("w1", &ConstantInvariants::w1)
      .def_readonly("w2", &ConstantInvariants::w2);

  m.def("make_invariants", &make_invariants, py::arg("w1"), py::arg("w2"));
  m.def("invariant_kappa", &invariant_kappa);
  m.def("invariant_tau", &invariant_tau);
  m.def("algebra_matrix", &algebra_matrix);
  m.def("initial_frame", &initial_frame);

  py::class_<ReconstructionResult>(m, "ReconstructionResult")
      .def_readonly("samples", &ReconstructionResult::samples)
      .def_readonly("max_orth_defect", &ReconstructionResult::max_orth_defect)
      .def_readonly("reorthonormalizations",
                    &ReconstructionResult::reorthonormalizations)
      .def_property_readonly("frames", [](const ReconstructionResult& r) {
        py::list out;
        for (const Mat5& f : r.frames) out.append(f);
        return out;
      });

  m.def("integrate_frame", &integrate_frame, py::arg("inv"), py::arg("alpha0"),
        py::arg("length"), py::arg("h"));
  m.def("roundtrip", &roundtrip, py::arg("inv"), py::arg("h") = 1e-3,
        py::arg("tol") = 1e-5);

  m.def("read_curve_csv", &io::read_curve_csv, py::arg("path"));
  m.def("write_curve_csv", &io::write_curve_csv, py::arg("path"),
        py::arg("samples"));
}
