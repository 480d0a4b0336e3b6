#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pscgeom/cones.hpp"
#include "pscgeom/curvature.hpp"
#include "pscgeom/error.hpp"
#include "pscgeom/experiment.hpp"
#include "pscgeom/oracle.hpp"
#include "pscgeom/profiles.hpp"
#include "pscgeom/report_io.hpp"
#include "pscgeom/submersion.hpp"
#include "pscgeom/torpedo_boot.hpp"

namespace py = pybind11;
using namespace pscgeom;

namespace {

py::tuple jet_tuple(const Jet& j) { return py::make_tuple(j.value, j.d1, j.d2); }

}  // namespace

PYBIND11_MODULE(_pscgeom, m) {
  m.doc() = "Warped-product, torpedo, boot and submersion curvature engines";
  m.attr("__version__") = kVersion;

  static py::exception<Error> exc(m, "PscgeomError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(exc.ptr())(e.what());
      py::setattr(err, "kind", py::str(std::string(to_string(e.kind()))));
      PyErr_SetObject(exc.ptr(), err.ptr());
    }
  });

  py::class_<Link>(m, "Link")
      .def_readonly("dim", &Link::dim)
      .def_readonly("s", &Link::s)
      .def_readonly("name", &Link::name)
      .def("__repr__", [](const Link& l) {
        return "Link(" + l.name + ", dim=" + std::to_string(l.dim) + ", s=" + format_double(l.s) +
               ")";
      });
  m.def("make_link", &make_link, py::arg("dim"), py::arg("s"), py::arg("name") = "");
  m.def("link_from_name", &link_from_name);
  m.def("unit_sphere", &unit_sphere);

  py::class_<Profile>(m, "Profile")
      .def_property_readonly("domain",
                             [](const Profile& p) {
                               return py::make_tuple(p.domain().lo, p.domain().hi);
                             })
      .def("eval", [](const Profile& p, double t) { return jet_tuple(p.eval(t)); })
      .def("__call__", [](const Profile& p, double t) { return p(t); })
      .def("max_junction_residual", &Profile::max_junction_residual)
      .def("powered", &Profile::powered)
      .def("to_json", [](const Profile& p) { return profile_to_json(p).dump(); })
      .def_static("from_json", [](const std::string& s) { return profile_from_spec(Json::parse(s)); });

  m.def("transition", [](double e0, double e1) { return make_transition(e0, e1).profile; },
        py::arg("eps0"), py::arg("eps1"));
  m.def("torpedo_profile", [](double d, double l) { return make_torpedo_profile(d, l).profile; },
        py::arg("delta"), py::arg("lambda_"));
  m.def("rescale_curve",
        [](double t0, double t, double b) { return make_rescale_curve(t0, t, b).profile; },
        py::arg("tau0"), py::arg("tau"), py::arg("b"));

  py::class_<CurvatureReport>(m, "CurvatureReport")
      .def_readonly("s_min", &CurvatureReport::s_min)
      .def_readonly("s_max", &CurvatureReport::s_max)
      .def_readonly("scale", &CurvatureReport::scale)
      .def_readonly("crosscheck", &CurvatureReport::crosscheck)
      .def_readonly("coordinate_names", &CurvatureReport::coordinate_names)
      .def_property_readonly("verdict",
                             [](const CurvatureReport& r) { return to_string(r.verdict.kind); })
      .def_property_readonly("samples",
                             [](const CurvatureReport& r) {
                               py::list out;
                               for (const auto& s : r.samples)
                                 out.append(py::make_tuple(s.coords, s.s));
                               return out;
                             })
      .def("bounded_below", &CurvatureReport::bounded_below)
      .def("to_json", [](const CurvatureReport& r, bool samples) { return to_json(r, samples).dump(); },
           py::arg("samples") = false);

  m.def("warped_scalar",
        [](const Link& l, const Profile& p, int points, bool tip) {
          Grid1D g;
          g.points = points;
          return scalar_single_warped({l, p, tip}, g);
        },
        py::arg("link"), py::arg("profile"), py::arg("points") = 4096, py::arg("tip") = false);
  m.def("cone_report",
        [](const Link& l, int points) {
          Grid1D g;
          g.points = points;
          return cone_report(build_cone(l), g);
        },
        py::arg("link"), py::arg("points") = 4096);
  m.def("attaching_report",
        [](const Link& l, double e0, double e1, int points) {
          Grid1D g;
          g.points = points;
          return scalar_single_warped(build_attaching(normalize_link(l).link, make_transition(e0, e1)), g);
        },
        py::arg("link"), py::arg("eps0") = 0.1, py::arg("eps1") = 0.1, py::arg("points") = 4096);
  m.def("torpedo_report",
        [](int n, double d, double l, int points) { return torpedo_report(build_torpedo(n, d, l), points); },
        py::arg("n"), py::arg("delta"), py::arg("lambda_"), py::arg("points") = 4096);
  m.def("delta_for_bound", &delta_for_bound, py::arg("n"), py::arg("b"), py::arg("lambda_"),
        py::arg("points") = 4096);
  m.def("boot_report",
        [](int n, double d, double L, double l1, double l4, int x_points, int theta_points) {
          Grid2D g;
          g.x_points = x_points;
          g.theta_points = theta_points;
          return boot_report(build_boot(n, d, L, l1, l4), g);
        },
        py::arg("n"), py::arg("delta"), py::arg("Lambda"), py::arg("l1") = 1.0,
        py::arg("l4") = 1.0, py::arg("x_points") = 256, py::arg("theta_points") = 2);
  m.def("lambda_for_psc",
        [](int n, double d, double l1, double l4) {
          const BootSearch s = lambda_for_psc(n, d, l1, l4);
          return py::make_tuple(s.Lambda, s.hit_floor, s.evaluations);
        },
        py::arg("n"), py::arg("delta"), py::arg("l1") = 1.0, py::arg("l4") = 1.0);
  m.def("boot_margin", &boot_margin);

  m.def("oneill_scalar",
        [](std::vector<double> base, const Link& fibre, std::vector<double> a, double tau) {
          return oneill_scalar({std::move(base), fibre, std::move(a), tau});
        },
        py::arg("base_s"), py::arg("fibre"), py::arg("a_norm_sq"), py::arg("tau"));
  m.def("tau_bar",
        [](const std::vector<double>& base, const std::vector<double>& a) { return tau_bar(base, a); },
        py::arg("base_s"), py::arg("a_norm_sq"));
  m.def("lift_over_bordism",
        [](std::vector<std::vector<double>> base, std::vector<std::vector<double>> a,
           const Link& fibre, double tau0, double tau_target) {
          const LiftResult r = lift_over_bordism({std::move(base), std::move(a), {}}, fibre, tau0,
                                                 tau_target);
          py::dict out;
          out["report"] = r.report;
          out["b"] = r.b;
          out["tau_effective"] = r.tau_effective;
          out["clamped"] = r.clamped;
          return out;
        },
        py::arg("base_s"), py::arg("a_norm_sq"), py::arg("fibre"), py::arg("tau0"),
        py::arg("tau_target"));

  m.def("fixture_ids", &fixture_ids);
  m.def("validate_engine",
        [](const std::string& id, bool corrupt) {
          ValidationOptions o;
          o.corrupt_engine = corrupt;
          const ValidationReport r = validate_engine(id, o);
          py::dict out;
          out["passed"] = r.passed();
          out["max_diff"] = r.max_diff;
          out["min_richardson_ratio"] = r.min_richardson_ratio;
          out["points"] = r.points;
          return out;
        },
        py::arg("fixture"), py::arg("corrupt") = false);
  m.def("fd_scalar",
        [](const std::string& chart, const std::vector<double>& x, double tau, double h) {
          return fd_scalar_curvature(named_chart(chart, tau), x, h).richardson;
        },
        py::arg("chart"), py::arg("point"), py::arg("tau") = 1.0, py::arg("h") = 1e-3);

  m.def("run_config_json",
        [](const std::string& text, const std::string& base_dir) {
          const ExperimentConfig cfg = parse_config(Json::parse(text), base_dir);
          const ExperimentResult r = run_experiment(cfg);
          return py::make_tuple(r.passed, r.report.dump());
        },
        py::arg("config"), py::arg("base_dir") = ".");
}
