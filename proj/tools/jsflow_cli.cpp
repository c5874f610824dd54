// jsflow command-line front end.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "jsflow/errors.hpp"
#include "jsflow/sim.hpp"

namespace fs = std::filesystem;
using namespace jsflow;

namespace {

struct Common {
  std::string config_file;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("-c,--config", c.config_file, "key = value configuration file")->check(CLI::ExistingFile);
  app->add_option("-s,--set", c.overrides, "override one key (key=value); repeatable");
}

sim::RunConfig resolve(const Common& c) {
  sim::RunConfig cfg;
  if (!c.config_file.empty()) cfg.load_file(c.config_file);
  for (const auto& o : c.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw InvalidParameter("--set expects key=value, got '" + o + "'");
    cfg.set(o.substr(0, eq), o.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
      throw InvalidParameter("bad sweep value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidParameter("sweep needs at least one value");
  return out;
}

void print_report(const sim::OscillationReport& r) {
  std::ostringstream os;
  sim::write_report(os, r);
  std::cout << os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Johnson-Segalman falling-sphere toolkit"};
  app.require_subcommand(1);

  Common common;
  auto* rheology = app.add_subcommand("rheology", "steady shear curves and their extrema (curve.csv, extrema.csv)");
  auto* shear = app.add_subcommand("shear1d", "channel start-up to steady banded flow (profile.csv, bands.csv)");
  auto* sphere = app.add_subcommand("sphere", "falling sphere from rest to t_end");
  auto* sweep = app.add_subcommand("sweep", "one falling-sphere run per parameter value plus summary.csv");
  auto* mesh = app.add_subcommand("mesh", "build the configured mesh and write it in text form");
  auto* print = app.add_subcommand("print-config", "print the resolved configuration");
  for (auto* sc : {rheology, shear, sphere, sweep, mesh, print}) add_common(sc, common);

  bool quiet = false;
  sphere->add_flag("-q,--quiet", quiet, "no progress output");
  std::string axis_name, values;
  sweep->add_option("axis", axis_name, "xi, alpha or rho_ratio")->required();
  sweep->add_option("values", values, "comma-separated values")->required();
  std::string mesh_out;
  mesh->add_option("-o,--output", mesh_out, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = resolve(common);
    if (*print) {
      std::cout << cfg.to_text();
      const auto g = cfg.groups();
      std::printf("\n# resolved\n# Re = %.9g, Wi = %.9g, mu_s = %.9g, rho_ratio = %.9g, alpha = %.9g, K = %.9g\n",
                  g.params.Re, g.params.Wi, g.params.mu_s, g.rho_ratio, g.alpha, g.K);
    } else if (*rheology) {
      sim::run_rheology(cfg);
      std::cout << "wrote curve.csv and extrema.csv in " << cfg.get("out_dir") << '\n';
    } else if (*shear) {
      sim::run_shear1d(cfg);
      std::cout << "wrote profile.csv and bands.csv in " << cfg.get("out_dir") << '\n';
    } else if (*sphere) {
      const double t_end = cfg.number("t_end");
      double next = 0.0;
      const auto progress = [&](const sim::FallingSphere& s) {
        if (quiet || s.state().t + 1e-12 < next) return;
        std::fprintf(stderr, "t = %8.3f  U = %.6f  F_d = %.6f  min eig = %.3e\n", s.state().t, s.sphere().U,
                     s.last_drag(), s.min_eig());
        next += std::max(t_end / 100.0, s.time_step());
      };
      const auto res = sim::run_falling_sphere(cfg, progress);
      if (res.has_report) print_report(res.report);
    } else if (*sweep) {
      const auto rows = sim::run_sweep(cfg, sim::parse_sweep_axis(axis_name), parse_values(values));
      std::printf("%-12s %-12s %-12s %-9s %s\n", axis_name.c_str(), "amplitude", "period", "sustained", "cycles");
      for (const auto& r : rows)
        std::printf("%-12.6g %-12.6g %-12.6g %-9s %d\n", r.value, r.report.amplitude, r.report.period,
                    r.report.sustained ? "yes" : "no", r.report.cycles);
    } else if (*mesh) {
      const auto m = sim::build_mesh(cfg);
      if (mesh_out.empty()) {
        mesh::write_mesh(std::cout, m);
      } else {
        std::ofstream os(mesh_out);
        if (!os) throw FormatError("cannot write " + mesh_out);
        mesh::write_mesh(os, m);
        std::fprintf(stderr, "%d vertices, %d triangles -> %s\n", m.num_vertices(), m.num_triangles(),
                     mesh_out.c_str());
      }
    }
  } catch (const PositivityLoss& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
