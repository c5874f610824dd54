#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "jsflow/errors.hpp"
#include "jsflow/rheology.hpp"
#include "jsflow/shear1d.hpp"
#include "jsflow/sim.hpp"

namespace fs = std::filesystem;

namespace jsflow::sim {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::ofstream open_csv(const fs::path& path, const char* header) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out << header << '\n';
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
      throw InvalidParameter("bad number '" + item + "' in list");
    out.push_back(x);
  }
  return out;
}

void apply_threads(const RunConfig& cfg) {
#ifdef _OPENMP
  if (const long n = cfg.integer("threads"); n > 0) omp_set_num_threads(int(n));
#else
  (void)cfg;
#endif
}

}  // namespace

mesh::TriMesh build_mesh(const RunConfig& cfg) {
  const std::string file = cfg.get("mesh_file");
  mesh::TriMesh m;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw FormatError("cannot open mesh file " + file);
    m = mesh::read_mesh(in);
  } else {
    m = mesh::build_sphere_in_cylinder(cfg.mesh_options());
  }
  return mesh::refine(m, int(cfg.integer("refine")));
}

RunResult run_falling_sphere(const RunConfig& cfg, const std::function<void(const FallingSphere&)>& progress) {
  return run_falling_sphere(cfg, build_mesh(cfg), progress);
}

RunResult run_falling_sphere(const RunConfig& cfg, const mesh::TriMesh& mesh,
                             const std::function<void(const FallingSphere&)>& progress) {
  cfg.validate();
  apply_threads(cfg);
  const DerivedGroups g = cfg.groups();
  if (std::abs(mesh.domain().r_max - g.alpha) > 1e-9 * g.alpha)
    throw InvalidParameter("mesh cylinder radius does not match alpha");
  const double h_t = cfg.number("h_t");
  FallingSphere sim(mesh, g.params, g.rho_ratio, g.K, h_t, cfg.gradient_recovery());

  RunResult res;
  for (const auto& p : cfg.probes()) {
    (void)sim.sample(p.x);  // rejects probes outside the fluid
    res.probes.push_back({p, {}, {}, {}, {}});
  }
  if (const std::string restart = cfg.get("restart"); !restart.empty()) read_checkpoint(restart, sim);

  const std::string out_dir = cfg.get("out_dir");
  const bool write = !out_dir.empty();
  const fs::path dir(out_dir);
  if (write) fs::create_directories(dir);

  const long series_every = cfg.integer("series_every"), probe_every = cfg.integer("probe_every");
  const long wake_every = cfg.integer("wake_every"), vtk_every = cfg.integer("vtk_every");
  const long ckpt_every = cfg.integer("checkpoint_every");
  const auto n_end = std::int64_t(std::llround(cfg.number("t_end") / h_t));

  std::ofstream series, wake;
  std::vector<std::ofstream> probe_files;
  if (write) {
    series = open_csv(dir / "timeseries.csv", "t,U,dU,F_d,min_eig_c");
    if (wake_every > 0) wake = open_csv(dir / "wake.csv", "t,min_fall_velocity,z");
    if (probe_every > 0)
      for (const auto& p : res.probes) probe_files.push_back(open_csv(dir / ("probes_" + p.probe.name + ".csv"), "t,u_r,u_z,p"));
  }

  auto record = [&]() {
    const auto k = sim.step_count();
    const double t = sim.state().t;
    if (k % series_every == 0) {
      const auto& sp = sim.sphere();
      res.t.push_back(t);
      res.U.push_back(sp.U);
      res.dU.push_back(sp.dU);
      res.F_d.push_back(sim.last_drag());
      res.min_eig.push_back(sim.min_eig());
      if (write)
        series << fmt(t) << ',' << fmt(sp.U) << ',' << fmt(sp.dU) << ',' << fmt(sim.last_drag()) << ','
               << fmt(sim.min_eig()) << '\n';
    }
    if (probe_every > 0 && k % probe_every == 0) {
      for (size_t i = 0; i < res.probes.size(); ++i) {
        auto& ps = res.probes[i];
        const auto s = sim.sample(ps.probe.x);
        ps.t.push_back(t);
        ps.u_r.push_back(s.u_r);
        ps.u_z.push_back(s.u_z);
        ps.p.push_back(s.p);
        if (write) probe_files[i] << fmt(t) << ',' << fmt(s.u_r) << ',' << fmt(s.u_z) << ',' << fmt(s.p) << '\n';
      }
    }
    if (wake_every > 0 && k % wake_every == 0) {
      const auto w = sim.wake();
      res.wake_t.push_back(t);
      res.wake_min.push_back(w.min_velocity);
      if (write) wake << fmt(t) << ',' << fmt(w.min_velocity) << ',' << fmt(w.z_at_min) << '\n';
    }
    if (write && vtk_every > 0 && k % vtk_every == 0) {
      char name[48];
      std::snprintf(name, sizeof name, "fields_%06lld.vtk", static_cast<long long>(k));
      std::ofstream vtk(dir / name);
      fem::write_vtk(vtk, sim.space(), sim.state());
    }
    if (write && ckpt_every > 0 && k % ckpt_every == 0 && k > 0) write_checkpoint(dir / "checkpoint.bin", sim);
  };

  record();
  while (sim.step_count() < n_end) {
    try {
      sim.step();
    } catch (const Error&) {
      if (write) {
        series.flush();
        write_checkpoint(dir / "failed_state.bin", sim);
      }
      throw;
    }
    record();
    if (progress) progress(sim);
  }

  if (res.t.size() >= 100) {
    res.report = analyze_oscillations(res.t, res.U);
    res.has_report = true;
    if (write) {
      std::ofstream rep(dir / "oscillation.txt");
      write_report(rep, res.report);
    }
  }
  return res;
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "xi") return SweepAxis::Xi;
  if (name == "alpha") return SweepAxis::Alpha;
  if (name == "rho_ratio") return SweepAxis::RhoRatio;
  throw InvalidParameter("sweep axis must be xi, alpha or rho_ratio (got '" + name + "')");
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg, SweepAxis axis, const std::vector<double>& values) {
  if (values.empty()) throw InvalidParameter("sweep needs at least one value");
  const char* key = axis == SweepAxis::Xi ? "xi" : axis == SweepAxis::Alpha ? "alpha" : "rho_ratio";
  if (axis == SweepAxis::Alpha && !cfg.get("r_s").empty())
    throw InvalidParameter("alpha sweeps need the dimensionless parameter block");

  // Validate every member before spending time on any run.
  std::vector<RunConfig> members;
  for (double v : values) {
    RunConfig c = cfg;
    c.set(key, fmt(v));
    (void)c.groups();
    members.push_back(c);
  }

  std::optional<mesh::TriMesh> shared;
  if (axis != SweepAxis::Alpha) shared = build_mesh(cfg);

  const std::string out_dir = cfg.get("out_dir");
  std::vector<SweepRow> rows;
  for (size_t i = 0; i < values.size(); ++i) {
    RunConfig c = members[i];
    if (!out_dir.empty()) c.set("out_dir", (fs::path(out_dir) / (std::string(key) + "_" + fmt(values[i]))).string());
    const RunResult r = shared ? run_falling_sphere(c, *shared) : run_falling_sphere(c);
    rows.push_back({values[i], r.report});
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    auto out = open_csv(fs::path(out_dir) / "summary.csv", "value,amplitude,period,sustained,cycles,asymmetry");
    for (const auto& row : rows)
      out << fmt(row.value) << ',' << fmt(row.report.amplitude) << ',' << fmt(row.report.period) << ','
          << (row.report.sustained ? 1 : 0) << ',' << row.report.cycles << ',' << fmt(row.report.asymmetry) << '\n';
  }
  return rows;
}

void run_rheology(const RunConfig& cfg) {
  const JsParams p = cfg.groups().params;
  const fs::path dir(cfg.get("out_dir"));
  fs::create_directories(dir);
  const double k_end = cfg.number("kappa_end");
  const long n = cfg.integer("kappa_points");
  if (!(k_end > 0.0) || n < 2) throw InvalidParameter("need kappa_end > 0 and kappa_points >= 2");

  auto curve = open_csv(dir / "curve.csv", "kappa,tau,dtau_dkappa");
  for (long i = 0; i < n; ++i) {
    const double k = k_end * double(i) / double(n - 1);
    curve << fmt(k) << ',' << fmt(rheology::shear_stress(p, k)) << ',' << fmt(rheology::shear_stress_slope(p, k)) << '\n';
  }

  auto ext = open_csv(dir / "extrema.csv", "xi,kappa_max,tau_max,kappa_min,tau_min");
  for (double xi : parse_list(cfg.get("xi_list"))) {
    JsParams q = p;
    q.xi = xi;
    q.validate();
    const auto c = rheology::classify_curve(q);
    if (!c.extrema) continue;
    ext << fmt(xi) << ',' << fmt(c.extrema->kappa_max) << ',' << fmt(c.extrema->tau_max) << ','
        << fmt(c.extrema->kappa_min) << ',' << fmt(c.extrema->tau_min) << '\n';
  }
}

void run_shear1d(const RunConfig& cfg) {
  const JsParams p = cfg.groups().params;
  const fs::path dir(cfg.get("out_dir"));
  fs::create_directories(dir);
  auto ch = shear1d::make_channel(int(cfg.integer("channel_nodes")), cfg.number("wall_speed"), p,
                                  cfg.number("channel_Re"), cfg.number("ramp_time"));
  const auto res = shear1d::run_to_steady(std::move(ch), p, cfg.number("shear_h"), cfg.number("steady_tol"),
                                          cfg.number("shear_t_max"));
  {
    std::ofstream out(dir / "profile.csv");
    shear1d::write_profile_csv(out, res.channel, p);
  }
  if (!res.converged)
    throw SolverError("channel did not reach a steady state by t = " + fmt(res.channel.t) + "; profile.csv holds the last state");
  const auto bands = shear1d::detect_bands(res.channel, p);
  std::ofstream out(dir / "bands.csv");
  shear1d::write_bands_csv(out, bands);
}

}  // namespace jsflow::sim
