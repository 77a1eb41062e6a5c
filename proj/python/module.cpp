#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "riskrev/asymptotics.hpp"
#include "riskrev/cones.hpp"
#include "riskrev/errors.hpp"
#include "riskrev/exact_risk.hpp"
#include "riskrev/gaussfn.hpp"
#include "riskrev/montecarlo.hpp"
#include "riskrev/projection.hpp"

namespace py = pybind11;
using namespace riskrev;

namespace {

MCConfig config(std::uint64_t n, std::uint64_t seed) {
  MCConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  return cfg;
}

py::dict breakdown_dict(const RegionRiskBreakdown& b) {
  py::dict d;
  for (RegionLabel r : kAllRegions) d[py::str(std::string(to_string(r)))] = b[r];
  return d;
}

}  // namespace

PYBIND11_MODULE(_riskrev, m) {
  m.doc() = "Risk of constrained least squares over convex polytopes";

  static py::exception<NumericalFailure> numerical(m, "NumericalFailure", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NumericalFailure& e) {
      py::set_error(numerical, e.what());
    }
  });

  m.attr("DEFAULT_SEED") = kDefaultSeed;

  // Gaussian special functions.
  m.def("std_normal_cdf", &gaussfn::std_normal_cdf, py::arg("x"));
  m.def("std_normal_pdf", &gaussfn::std_normal_pdf, py::arg("x"));
  m.def("std_normal_quantile", &gaussfn::std_normal_quantile, py::arg("p"));
  m.def("owens_t", py::overload_cast<double, double>(&gaussfn::owens_t), py::arg("h"), py::arg("a"));
  m.def("truncated_second_moment", &gaussfn::truncated_second_moment, py::arg("a"), py::arg("b"));
  m.def(
      "int_phi_cdf",
      [](double mm, double a, double b) { return gaussfn::int_phi_cdf({mm, a, b}); }, py::arg("m"),
      py::arg("a"), py::arg("b"));
  m.def(
      "int_z_phi_phi",
      [](double mm, double a, double b) { return gaussfn::int_z_phi_phi({mm, a, b}); }, py::arg("m"),
      py::arg("a"), py::arg("b"));

  // Geometry.
  py::class_<ConvexPolytope>(m, "ConvexPolytope")
      .def(py::init<std::vector<Point>>(), py::arg("vertices"))
      .def_property_readonly("dim", &ConvexPolytope::dim)
      .def_property_readonly("vertices", &ConvexPolytope::vertices)
      .def("__len__", &ConvexPolytope::size)
      .def("contains", &ConvexPolytope::contains, py::arg("point"), py::arg("tol") = kMembershipTol)
      .def("diameter", &ConvexPolytope::diameter)
      .def("project", [](const ConvexPolytope& p, const Point& y) { return Projector(p).project(y); },
           py::arg("y"))
      .def("__repr__", [](const ConvexPolytope& p) {
        return "<ConvexPolytope dim=" + std::to_string(p.dim()) + " vertices=" + std::to_string(p.size()) + ">";
      });

  py::class_<ExampleGeometry>(m, "ExampleGeometry")
      .def(py::init<double, std::optional<double>>(), py::arg("c"), py::arg("x") = py::none())
      .def_property_readonly("c", &ExampleGeometry::c)
      .def_property_readonly("x", &ExampleGeometry::x)
      .def_property_readonly("alpha", &ExampleGeometry::alpha)
      .def_property_readonly("v1", &ExampleGeometry::v1)
      .def_property_readonly("v2", &ExampleGeometry::v2)
      .def_property_readonly("v3", &ExampleGeometry::v3)
      .def_property_readonly("vx", &ExampleGeometry::vx)
      .def("segment", &ExampleGeometry::segment)
      .def("triangle", &ExampleGeometry::triangle)
      .def("theta_x", &ExampleGeometry::theta_x);

  m.def("statistical_dimension", [](const ConvexPolytope& p, const Point& theta) {
    return statistical_dimension_2d(tangent_cone_2d(p, theta));
  }, py::arg("polytope"), py::arg("theta"), "Statistical dimension of the tangent cone (planar).");

  // Exact risks.
  m.def("risk_segment_exact", &risk_segment_exact, py::arg("geometry"), py::arg("t_star"), py::arg("sigma"));
  m.def("risk_triangle_exact",
        [](const ExampleGeometry& g, double sigma) { return risk_triangle_exact(g, sigma).total; },
        py::arg("geometry"), py::arg("sigma"));
  m.def("risk_triangle_breakdown",
        [](const ExampleGeometry& g, double sigma) { return breakdown_dict(risk_triangle_exact(g, sigma)); },
        py::arg("geometry"), py::arg("sigma"));
  m.def("risk_difference", &risk_difference, py::arg("geometry"), py::arg("sigma"));
  m.def("small_noise_diff_coeff", &small_noise_diff_coeff, py::arg("c"));
  m.def("large_noise_limit_diff", &large_noise_limit_diff, py::arg("c"));

  // Monte Carlo.
  py::class_<RiskEstimate>(m, "RiskEstimate")
      .def_readonly("mean", &RiskEstimate::mean)
      .def_readonly("std_error", &RiskEstimate::std_error)
      .def_readonly("n", &RiskEstimate::n)
      .def_readonly("seed", &RiskEstimate::seed)
      .def("__repr__", [](const RiskEstimate& r) {
        return "<RiskEstimate mean=" + brief(r.mean) + " std_error=" + brief(r.std_error) +
               " n=" + std::to_string(r.n) + ">";
      });

  m.def(
      "mc_risk",
      [](const ConvexPolytope& p, const Point& theta, double sigma, std::uint64_t n, std::uint64_t seed,
         std::uint64_t n_obs) { return mc_risk_effective(p, theta, sigma, n_obs, config(n, seed)); },
      py::arg("polytope"), py::arg("theta_star"), py::arg("sigma"), py::arg("n") = 1'000'000,
      py::arg("seed") = kDefaultSeed, py::arg("n_obs") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("statistical_dimension_mc", &statistical_dimension_mc, py::arg("generators"), py::arg("n"),
        py::arg("seed") = kDefaultSeed, py::call_guard<py::gil_scoped_release>());

  // Asymptotics.
  py::class_<VertexDistribution>(m, "VertexDistribution")
      .def_readonly("probs", &VertexDistribution::probs)
      .def_readonly("std_errors", &VertexDistribution::std_errors)
      .def_readonly("n", &VertexDistribution::n);
  m.def("vertex_probabilities_2d", &vertex_probabilities_2d, py::arg("polytope"));
  m.def("vertex_probabilities_mc", &vertex_probabilities_mc, py::arg("polytope"), py::arg("n"),
        py::arg("seed") = kDefaultSeed, py::call_guard<py::gil_scoped_release>());
  m.def("limiting_risk", &limiting_risk, py::arg("polytope"), py::arg("theta"), py::arg("distribution"));
  m.def(
      "worst_case_limiting_risk",
      [](const ConvexPolytope& p, const VertexDistribution& d) {
        const WorstCase w = worst_case_limiting_risk(p, d);
        return py::make_tuple(w.value, w.vertex);
      },
      py::arg("polytope"), py::arg("distribution"), "Returns (value, vertex index).");
  m.def("delta_x", &delta_x, py::arg("c"), py::arg("x"));

  py::class_<EnvelopePoint>(m, "EnvelopePoint")
      .def_readonly("x", &EnvelopePoint::x)
      .def_readonly("risk_v1", &EnvelopePoint::risk_v1)
      .def_readonly("risk_v2", &EnvelopePoint::risk_v2)
      .def_readonly("risk_vx", &EnvelopePoint::risk_vx)
      .def_readonly("envelope", &EnvelopePoint::envelope);
  m.def("envelope_point", &envelope_point, py::arg("c"), py::arg("x"));
  m.def("envelope_curve", &envelope_curve, py::arg("c"), py::arg("x_grid"));
  m.def("envelope_argmin", &envelope_argmin, py::arg("curve"));

  m.def(
      "detect_finite_sigma_reversal",
      [](double c, double x_small, double x_large, const std::vector<double>& sigmas, std::uint64_t n,
         std::uint64_t seed, int edge_points) {
        ReversalReport rep;
        {
          py::gil_scoped_release release;
          rep = detect_finite_sigma_reversal(ExampleGeometry(c, x_small), ExampleGeometry(c, x_large), sigmas,
                                             n, seed, edge_points);
        }
        py::list steps;
        for (const auto& s : rep.steps) {
          py::dict d;
          d["sigma"] = s.sigma;
          d["sup_small"] = s.small.value;
          d["sup_large"] = s.large.value;
          d["stderr_small"] = s.small.std_error;
          d["stderr_large"] = s.large.std_error;
          d["threshold"] = s.threshold;
          d["reversed"] = s.reversed;
          steps.append(d);
        }
        py::dict out;
        out["reversal_sigma"] = rep.reversal_sigma ? py::object(py::float_(*rep.reversal_sigma)) : py::none();
        out["steps"] = steps;
        return out;
      },
      py::arg("c"), py::arg("x_small"), py::arg("x_large"), py::arg("sigmas"), py::arg("n") = 1'000'000,
      py::arg("seed") = kDefaultSeed, py::arg("edge_points") = 32);
}
