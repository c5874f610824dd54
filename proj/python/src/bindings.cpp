#include <fstream>
#include <sstream>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "jsflow/mesh.hpp"
#include "jsflow/rheology.hpp"
#include "jsflow/shear1d.hpp"
#include "jsflow/sim.hpp"
#include "jsflow/sphere.hpp"
#include "jsflow/tensor.hpp"

namespace py = pybind11;
using namespace jsflow;

namespace {

py::dict report_dict(const sim::OscillationReport& r) {
  auto extrema = [](const std::vector<sim::Extremum>& v) {
    py::list out;
    for (const auto& e : v) out.append(py::make_tuple(e.t, e.U));
    return out;
  };
  py::dict d;
  d["peaks"] = extrema(r.peaks);
  d["troughs"] = extrema(r.troughs);
  d["cycles"] = r.cycles;
  d["amplitude"] = r.amplitude;
  d["first_half_amplitude"] = r.first_half_amplitude;
  d["period"] = r.period;
  d["asymmetry"] = r.asymmetry;
  d["sustained"] = r.sustained;
  return d;
}

const char* branch_name(shear1d::Branch b) {
  switch (b) {
    case shear1d::Branch::Low: return "low";
    case shear1d::Branch::Unstable: return "unstable";
    case shear1d::Branch::High: return "high";
    case shear1d::Branch::Single: return "single";
  }
  return "?";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Johnson-Segalman falling-sphere toolkit";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", error.ptr());
  py::register_exception<StepTooLarge>(m, "StepTooLarge", error.ptr());
  py::register_exception<PositivityLoss>(m, "PositivityLoss", error.ptr());
  py::register_exception<SolverError>(m, "SolverError", error.ptr());
  py::register_exception<FormatError>(m, "FormatError", error.ptr());

  py::class_<JsParams>(m, "JsParams")
      .def(py::init([](double Re, double Wi, double mu_s, double xi, double q) {
             JsParams p{Re, Wi, mu_s, xi, q};
             p.validate();
             return p;
           }),
           py::arg("Re") = 0.0325, py::arg("Wi") = 0.45, py::arg("mu_s") = 0.03, py::arg("xi") = 0.7,
           py::arg("q") = 1.0)
      .def_readwrite("Re", &JsParams::Re)
      .def_readwrite("Wi", &JsParams::Wi)
      .def_readwrite("mu_s", &JsParams::mu_s)
      .def_readwrite("xi", &JsParams::xi)
      .def_readwrite("q", &JsParams::q)
      .def_property_readonly("mu_p", &JsParams::mu_p)
      .def_property_readonly("a", &JsParams::a)
      .def("validate", &JsParams::validate)
      .def("__repr__", [](const JsParams& p) {
        std::ostringstream os;
        os << "JsParams(Re=" << p.Re << ", Wi=" << p.Wi << ", mu_s=" << p.mu_s << ", xi=" << p.xi << ", q=" << p.q
           << ")";
        return os.str();
      });

  // Rheology
  m.def("shear_stress", &rheology::shear_stress, py::arg("params"), py::arg("kappa"));
  m.def("stress_to_shear_rates", &rheology::stress_to_shear_rates, py::arg("params"), py::arg("tau"));
  m.def(
      "classify_curve",
      [](const JsParams& p) -> py::object {
        const auto c = rheology::classify_curve(p);
        if (!c.extrema) return py::none();
        py::dict d;
        d["kappa_max"] = c.extrema->kappa_max;
        d["tau_max"] = c.extrema->tau_max;
        d["kappa_min"] = c.extrema->kappa_min;
        d["tau_min"] = c.extrema->tau_min;
        return std::move(d);
      },
      py::arg("params"), "Extrema of a non-monotone curve as a dict, or None when monotone.");

  // Constitutive step. Tensors are (rr, rz, zz, tt); grad is ((du_r/dr, du_r/dz), (du_z/dr, du_z/dz)).
  m.def(
      "lyapunov_step",
      [](std::array<double, 4> c, std::array<std::array<double, 2>, 2> grad, double hoop, const JsParams& p,
         double h_t) {
        tensor::AxiTensor foot{{c[0], c[1], c[2]}, c[3]};
        tensor::VelGrad L;
        L.grad << grad[0][0], grad[0][1], grad[1][0], grad[1][1];
        L.hoop = hoop;
        const auto out = tensor::lyapunov_step(foot, L, p, h_t);
        return std::array<double, 4>{out.rr(), out.rz(), out.zz(), out.tt};
      },
      py::arg("c_foot"), py::arg("grad"), py::arg("hoop"), py::arg("params"), py::arg("h_t"));

  // Channel flow
  m.def(
      "channel_to_steady",
      [](const JsParams& p, double wall_speed, int n_nodes, double h_t, double tol, double t_max,
         double ramp_time) {
        auto res = shear1d::run_to_steady(shear1d::make_channel(n_nodes, wall_speed, p, 1e-2, ramp_time), p, h_t,
                                          tol, t_max);
        const auto& ch = res.channel;
        std::vector<double> y, kappa, sigma;
        for (int i = 0; i < ch.n_cells(); ++i) {
          y.push_back(ch.cell_center(i));
          kappa.push_back(ch.shear_rate(i));
          sigma.push_back(ch.total_stress(i, p));
        }
        py::dict d;
        d["converged"] = res.converged;
        d["t"] = ch.t;
        d["y"] = y;
        d["kappa"] = kappa;
        d["sigma_total"] = sigma;
        if (res.converged) {
          const auto bands = shear1d::detect_bands(ch, p);
          py::list bl;
          for (const auto& b : bands.bands) {
            py::dict bd;
            bd["y_begin"] = b.y_begin;
            bd["y_end"] = b.y_end;
            bd["kappa"] = b.kappa;
            bd["branch"] = branch_name(b.branch);
            bl.append(bd);
          }
          d["bands"] = bl;
          d["sigma_spread"] = bands.sigma_spread;
        }
        return d;
      },
      py::arg("params"), py::arg("wall_speed"), py::arg("n_nodes") = 101, py::arg("h_t") = 5e-4,
      py::arg("tol") = 1e-9, py::arg("t_max") = 400.0, py::arg("ramp_time") = 10.0);

  // Meshes
  py::class_<mesh::TriMesh>(m, "TriMesh")
      .def_property_readonly("num_vertices", &mesh::TriMesh::num_vertices)
      .def_property_readonly("num_triangles", &mesh::TriMesh::num_triangles)
      .def_property_readonly("vertices",
                             [](const mesh::TriMesh& t) {
                               std::vector<std::array<double, 2>> out;
                               for (const auto& v : t.vertices()) out.push_back({v.x(), v.y()});
                               return out;
                             })
      .def_property_readonly("triangles", &mesh::TriMesh::triangles)
      .def("area", &mesh::TriMesh::area)
      .def("weighted_area", &mesh::TriMesh::weighted_area)
      .def("check_invariants", &mesh::TriMesh::check_invariants)
      .def("fingerprint", &mesh::TriMesh::fingerprint);

  m.def(
      "build_mesh",
      [](double alpha, double height, double h_near, double h_far, int refine, unsigned seed) {
        mesh::SphereMeshOptions o;
        o.alpha = alpha;
        o.height = height;
        o.h_near = h_near;
        o.h_far = h_far;
        o.seed = seed;
        return mesh::refine(mesh::build_sphere_in_cylinder(o), refine);
      },
      py::arg("alpha") = 4.115, py::arg("height") = 16.0, py::arg("h_near") = 0.1, py::arg("h_far") = 0.5,
      py::arg("refine") = 0, py::arg("seed") = 12345u);
  m.def(
      "write_mesh",
      [](const mesh::TriMesh& t, const std::filesystem::path& path) {
        std::ofstream os(path);
        if (!os) throw FormatError("cannot open " + path.string());
        mesh::write_mesh(os, t);
      },
      py::arg("mesh"), py::arg("path"));
  m.def(
      "read_mesh",
      [](const std::filesystem::path& path) {
        std::ifstream is(path);
        if (!is) throw FormatError("cannot open " + path.string());
        return mesh::read_mesh(is);
      },
      py::arg("path"));

  // Falling sphere
  m.def("wall_correction", &sphere::wall_correction, py::arg("alpha"));

  m.def(
      "derive_dimensionless",
      [](const std::map<std::string, double>& in, double xi, double q) {
        sim::DimensionalInputs d;
        const std::map<std::string, double*> fields = {{"r_s", &d.r_s},     {"r_c", &d.r_c},     {"rho_s", &d.rho_s},
                                                       {"rho_f", &d.rho_f}, {"eta_s", &d.eta_s}, {"eta_p", &d.eta_p},
                                                       {"lambda", &d.lambda}, {"g", &d.g}};
        for (const auto& [k, v] : in) {
          auto it = fields.find(k);
          if (it == fields.end()) throw InvalidParameter("unknown dimensional input '" + k + "'");
          *it->second = v;
        }
        const auto g = sim::derive_dimensionless(d, xi, q);
        py::dict out;
        out["params"] = g.params;
        out["rho_ratio"] = g.rho_ratio;
        out["alpha"] = g.alpha;
        out["K"] = g.K;
        out["U_N"] = g.U_N;
        return out;
      },
      py::arg("inputs"), py::arg("xi"), py::arg("q") = 1.0);

  py::class_<sim::RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def(py::init([](const std::map<std::string, std::string>& kv) {
             sim::RunConfig c;
             for (const auto& [k, v] : kv) c.set(k, v);
             return c;
           }),
           py::arg("values"))
      .def("set", &sim::RunConfig::set, py::arg("key"), py::arg("value"))
      .def("get", &sim::RunConfig::get, py::arg("key"))
      .def("load_file", &sim::RunConfig::load_file, py::arg("path"))
      .def("to_text", &sim::RunConfig::to_text)
      .def("validate", &sim::RunConfig::validate);

  m.def(
      "analyze_oscillations",
      [](const std::vector<double>& t, const std::vector<double>& U) {
        return report_dict(sim::analyze_oscillations(t, U));
      },
      py::arg("t"), py::arg("U"));

  m.def(
      "run_falling_sphere",
      [](const sim::RunConfig& cfg) {
        sim::RunResult r;
        {
          py::gil_scoped_release release;
          r = sim::run_falling_sphere(cfg);
        }
        py::dict d;
        d["t"] = r.t;
        d["U"] = r.U;
        d["dU"] = r.dU;
        d["F_d"] = r.F_d;
        d["min_eig"] = r.min_eig;
        d["wake_t"] = r.wake_t;
        d["wake_min"] = r.wake_min;
        py::dict probes;
        for (const auto& s : r.probes) {
          py::dict pd;
          pd["t"] = s.t;
          pd["u_r"] = s.u_r;
          pd["u_z"] = s.u_z;
          pd["p"] = s.p;
          probes[py::str(s.probe.name)] = pd;
        }
        d["probes"] = probes;
        d["report"] = r.has_report ? py::object(report_dict(r.report)) : py::none();
        return d;
      },
      py::arg("config"), "Runs to t_end, writing the configured outputs; returns the sampled series.");
}
