#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcbound/propsuite.hpp"
#include "mcbound/serialize.hpp"

namespace py = pybind11;
using namespace mcb;

namespace {

ExactScalar scalar_from_py(const py::object& v) {
  if (py::isinstance<ExactScalar>(v)) return v.cast<ExactScalar>();
  if (py::isinstance<py::int_>(v)) return ExactScalar(parse_rational(py::str(v)));
  return ExactScalar(parse_rational(v.cast<std::string>()));
}

FoliationVec foliation_from_py(const py::object& p, const py::object& q) {
  return FoliationVec(scalar_from_py(p), scalar_from_py(q));
}

py::dict classification_dict(const Classification& c) {
  py::dict out;
  switch (c.kind) {
    case Classification::Kind::Periodic:
      out["kind"] = "periodic";
      out["order"] = c.order;
      break;
    case Classification::Kind::Reducible:
      out["kind"] = "reducible";
      out["curve"] = c.curve->slope_str();
      out["power"] = py::int_(py::str(c.power.get_str()));
      break;
    case Classification::Kind::PseudoAnosov:
      out["kind"] = "pseudo-anosov";
      out["lambda"] = c.lambda;
      out["unstable"] = *c.unstable;
      out["stable"] = *c.stable;
      break;
  }
  return out;
}

py::dict report_dict(const LimitReport& r) {
  py::dict out;
  switch (r.outcome) {
    case LimitReport::Outcome::ConstantSubsequence:
      out["outcome"] = "constant-subsequence";
      out["constant"] = *r.constant;
      break;
    case LimitReport::Outcome::BoundaryLimit:
      out["outcome"] = "boundary-limit";
      out["limit"] = *r.limit;
      out["E"] = *r.factor_e;
      out["F"] = *r.factor_f;
      out["final_gap"] = *r.final_gap;
      break;
    case LimitReport::Outcome::NoConvergenceWithinBudget:
      out["outcome"] = "no-convergence";
      break;
  }
  out["witness"] = r.witness;
  py::list lines;
  for (const std::string& l : limit_record_lines(r)) lines.append(l);
  out["records"] = lines;
  return out;
}

}  // namespace

PYBIND11_MODULE(_mcbound, m) {
  m.doc() = "exact mapping class group boundary computations on the complexity-one surfaces";

  py::enum_<SurfaceKind>(m, "SurfaceKind")
      .value("T11", SurfaceKind::OncePuncturedTorus)
      .value("S04", SurfaceKind::FourPuncturedSphere);
  m.def("parse_surface", &parse_surface, py::arg("token"));

  py::class_<ExactScalar>(m, "ExactScalar")
      .def(py::init([](const std::string& text) { return ExactScalar(parse_rational(text)); }))
      .def("__str__", &ExactScalar::str)
      .def("__repr__", [](const ExactScalar& s) { return "ExactScalar(" + s.str() + ")"; })
      .def("__float__", &ExactScalar::to_double)
      .def("__eq__", [](const ExactScalar& a, const ExactScalar& b) { return a == b; })
      .def("sign", &ExactScalar::sign);

  py::class_<FoliationVec>(m, "FoliationVec")
      .def(py::init(&foliation_from_py), py::arg("p"), py::arg("q"))
      .def_property_readonly("p", &FoliationVec::p)
      .def_property_readonly("q", &FoliationVec::q)
      .def("is_zero", &FoliationVec::is_zero)
      .def("__eq__", [](const FoliationVec& a, const FoliationVec& b) { return a == b; })
      .def("__repr__", [](const FoliationVec& v) { return "FoliationVec" + v.str(); });

  m.def(
      "intersection",
      [](const FoliationVec& x, const FoliationVec& y, SurfaceKind s) { return intersection(x, y, s); },
      py::arg("x"), py::arg("y"), py::arg("surface") = SurfaceKind::OncePuncturedTorus);

  py::class_<MappingClassWord>(m, "Word")
      .def(py::init([](const std::string& text) { return MappingClassWord::parse(text); }))
      .def_static("identity", [] { return MappingClassWord(); })
      .def("__str__", &MappingClassWord::str)
      .def("__repr__", [](const MappingClassWord& w) { return "Word('" + w.str() + "')"; })
      .def("__eq__", [](const MappingClassWord& a, const MappingClassWord& b) { return a == b; })
      .def("__mul__", [](const MappingClassWord& a, const MappingClassWord& b) { return compose(a, b); })
      .def("inverse", [](const MappingClassWord& w) { return invert(w); })
      .def("power", [](const MappingClassWord& w, long n) { return power(w, n); })
      .def("matrix_str", [](const MappingClassWord& w) { return w.matrix().str(); })
      .def("letter_length", &MappingClassWord::letter_length);

  m.def("dehn_twist", [](long p, long q, long n) { return dehn_twist(CurveClass(p, q), n); },
        py::arg("p"), py::arg("q"), py::arg("n") = 1);
  m.def("act", [](const MappingClassWord& w, const FoliationVec& x) { return act(w, x); });
  m.def(
      "classify",
      [](const MappingClassWord& w, SurfaceKind s) { return classification_dict(classify(w, s)); },
      py::arg("word"), py::arg("surface") = SurfaceKind::OncePuncturedTorus);

  py::class_<HomMap>(m, "HomMap")
      .def_static("zero", &HomMap::zero)
      .def_static("group",
                  [](SurfaceKind s, const py::object& scale, const MappingClassWord& w) {
                    return HomMap::group(s, scalar_from_py(scale), w);
                  })
      .def_static("rank_one", &HomMap::rank_one)
      .def("kind",
           [](const HomMap& f) {
             switch (f.kind()) {
               case HomMap::Kind::Zero: return "zero";
               case HomMap::Kind::Group: return "group";
               default: return "rank-one";
             }
           })
      .def("eval", &HomMap::eval)
      .def("__eq__", [](const HomMap& a, const HomMap& b) { return a == b; })
      .def("__repr__", [](const HomMap& f) { return "HomMap(" + f.str() + ")"; });

  m.def("conjugate", [](const HomMap& f) { return conjugate(f); });
  m.def("compose_maps", [](const HomMap& f, const HomMap& g) { return compose(f, g); });
  m.def("sup_length", &sup_length);

  py::class_<ProjClass>(m, "ProjClass")
      .def(py::init<const HomMap&>())
      .def("__eq__", [](const ProjClass& a, const ProjClass& b) { return a == b; })
      .def("__repr__", [](const ProjClass& c) { return "ProjClass(" + c.str() + ")"; });

  py::class_<Distance>(m, "Distance")
      .def("__float__", &Distance::approx)
      .def("__repr__", [](const Distance& d) { return "Distance(" + d.str(20) + ")"; })
      .def("is_zero", &Distance::is_zero)
      .def_property_readonly("exact_squared",
                             [](const Distance& d) -> py::object {
                               if (!d.squared) return py::none();
                               return py::cast(*d.squared);
                             })
      .def("less_than", [](const Distance& d, const std::string& thr) {
        return d.less_than(parse_rational(thr));
      });

  m.def(
      "distance",
      [](const ProjClass& a, const ProjClass& b, unsigned bits) { return distance(a, b, bits); },
      py::arg("a"), py::arg("b"), py::arg("bits") = 128);

  m.def(
      "projective_limit",
      [](const std::vector<MappingClassWord>& words, size_t budget, const std::string& gap,
         SurfaceKind s, unsigned bits) {
        return report_dict(projective_limit(words, budget, parse_rational(gap), s, bits));
      },
      py::arg("words"), py::arg("budget"), py::arg("gap") = "2^-20",
      py::arg("surface") = SurfaceKind::OncePuncturedTorus, py::arg("bits") = 128);

  m.def(
      "twist_limit",
      [](long p, long q, long k, SurfaceKind s) { return twist_limit(CurveClass(p, q), k, s); },
      py::arg("p"), py::arg("q"), py::arg("k") = 1,
      py::arg("surface") = SurfaceKind::OncePuncturedTorus);
  m.def(
      "pa_limit",
      [](const MappingClassWord& w, bool forward, SurfaceKind s) { return pa_limit(w, forward, s); },
      py::arg("word"), py::arg("forward") = true,
      py::arg("surface") = SurfaceKind::OncePuncturedTorus);
  m.def(
      "min_pairwise_distance",
      [](int len, SurfaceKind s, unsigned bits) { return min_pairwise_distance(len, s, bits); },
      py::arg("max_word_length"), py::arg("surface") = SurfaceKind::OncePuncturedTorus,
      py::arg("bits") = 128);

  py::class_<TeichPoint>(m, "TeichPoint")
      .def(py::init([](const py::object& x, const py::object& y) {
        return TeichPoint(scalar_from_py(x), scalar_from_py(y));
      }))
      .def_static("parse", &TeichPoint::parse)
      .def_property_readonly("x", &TeichPoint::x)
      .def_property_readonly("y", &TeichPoint::y)
      .def("__eq__", [](const TeichPoint& a, const TeichPoint& b) { return a == b; })
      .def("__repr__", [](const TeichPoint& t) { return "TeichPoint(" + t.str() + ")"; });

  m.def("flat_length",
        [](const TeichPoint& tau, const FoliationVec& v, unsigned bits) {
          return flat_length(tau, v, bits);
        },
        py::arg("tau"), py::arg("v"), py::arg("bits") = 128);
  m.def("moebius_act",
        [](const MappingClassWord& w, const TeichPoint& tau) { return moebius_act(w, tau); });
  m.def("systole", [](const TeichPoint& tau) {
    const SystoleResult r = systole(tau);
    return py::make_tuple(r.value, r.shortest.slope_str());
  });
  m.def("reduce_to_fundamental_domain", [](const TeichPoint& tau) {
    auto [w, t] = reduce_to_fundamental_domain(tau);
    return py::make_tuple(w, t);
  });
  m.def(
      "orbit_boundary_limit",
      [](const TeichPoint& x0, const std::vector<MappingClassWord>& words, size_t budget,
         const std::string& gap, SurfaceKind s) {
        const OrbitLimit o = orbit_boundary_limit(x0, words, budget, parse_rational(gap), s);
        py::dict out;
        out["ray"] = o.ray;
        out["ray_slope"] = ray_slope(o.ray);
        out["report"] = report_dict(o.report);
        return out;
      },
      py::arg("x0"), py::arg("words"), py::arg("budget"), py::arg("gap") = "2^-20",
      py::arg("surface") = SurfaceKind::OncePuncturedTorus);
  m.def(
      "orbit_closure_scan",
      [](const TeichPoint& x0, int max_len, SurfaceKind s) {
        const OrbitScan scan = orbit_closure_scan(x0, max_len, s);
        py::list rays;
        for (const ScanRay& r : scan.rays) rays.append(ray_slope(r.direction));
        py::dict out;
        out["rays"] = rays;
        out["largest_gap_radians"] = scan.largest_gap_radians;
        return out;
      },
      py::arg("x0"), py::arg("max_word_length"), py::arg("surface") = SurfaceKind::OncePuncturedTorus);
  m.def(
      "thick_sequence_limit",
      [](const std::vector<TeichPoint>& points, const std::string& gap, SurfaceKind s) {
        const ThickLimit t = thick_sequence_limit(points, parse_rational(gap), s);
        py::dict out;
        out["outcome"] = t.outcome == ThickLimit::Outcome::Boundary ? "boundary" : "interior-accumulation";
        out["cluster"] = t.cluster;
        if (t.functional && t.functional->kind() == BoundaryFunctional::Kind::Ray)
          out["ray_slope"] = ray_slope(t.functional->direction());
        return out;
      },
      py::arg("points"), py::arg("gap") = "2^-20", py::arg("surface") = SurfaceKind::OncePuncturedTorus);

  m.def(
      "run_property_suites",
      [](std::uint64_t seed, size_t iterations, SurfaceKind s, const std::string& filter) {
        py::list out;
        for (const SuiteResult& r : run_property_suites(seed, iterations, s, filter)) {
          py::dict d;
          d["name"] = r.name;
          d["checked"] = r.checked;
          d["failed"] = r.failed;
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = 20240901, py::arg("iterations") = 200,
      py::arg("surface") = SurfaceKind::OncePuncturedTorus, py::arg("filter") = "");

  m.attr("__version__") = "0.1.0";
}
