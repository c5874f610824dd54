#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "jsflow/errors.hpp"
#include "jsflow/sim.hpp"

using namespace jsflow;
using namespace jsflow::sim;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("jsflow_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Small, fast falling-sphere configuration.
RunConfig small_run(const fs::path& out) {
  RunConfig c;
  c.set("alpha", "2.5");
  c.set("height", "8");
  c.set("h_near", "0.2");
  c.set("h_far", "0.6");
  c.set("t_end", "0.05");
  c.set("out_dir", out.string());
  c.set("probe_every", "5");
  c.set("wake_every", "10");
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("dimensional inputs map onto the dimensionless groups") {
  SUBCASE("identity scaling") {
    // r_s = 1, eta = 1 and U_N = 1 give Re = rho_f and Wi = lambda.
    const double alpha = 4.115, K = sphere::wall_correction(alpha);
    DimensionalInputs in{1.0, alpha, 3.0, 0.5, 0.25, 0.75, 0.45, 0.0};
    in.g = 9.0 * K / (2.0 * (in.rho_s - in.rho_f));
    const auto d = derive_dimensionless(in, 0.7);
    CHECK(d.U_N == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.params.Re == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d.params.Wi == doctest::Approx(0.45).epsilon(1e-14));
    CHECK(d.params.mu_s == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(d.rho_ratio == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(d.K == doctest::Approx(K).epsilon(1e-15));
  }
  SUBCASE("doubling g doubles U_N, Re and Wi") {
    const DimensionalInputs in{0.002, 0.00823, 6300, 1000, 0.03, 0.97, 0.1, 9.81};
    DimensionalInputs in2 = in;
    in2.g *= 2.0;
    const auto a = derive_dimensionless(in, 0.7), b = derive_dimensionless(in2, 0.7);
    CHECK(b.U_N == doctest::Approx(2.0 * a.U_N).epsilon(1e-14));
    CHECK(b.params.Re == doctest::Approx(2.0 * a.params.Re).epsilon(1e-14));
    CHECK(b.params.Wi == doctest::Approx(2.0 * a.params.Wi).epsilon(1e-14));
  }
  SUBCASE("hitting the oscillation parameter set") {
    // Invert the definitions: r_s = 1, eta = 1, rho_f chosen so Re = 0.0325.
    const double alpha = 4.115, K = sphere::wall_correction(alpha);
    const double rho_f = 0.0325, rho_s = 6.3 * rho_f;
    const double g = 9.0 * K / (2.0 * (rho_s - rho_f));
    const auto d = derive_dimensionless({1.0, alpha, rho_s, rho_f, 0.03, 0.97, 0.45, g}, 0.7);
    CHECK(std::abs(d.params.Re - 0.0325) < 1e-12);
    CHECK(std::abs(d.params.Wi - 0.45) < 1e-12);
    CHECK(std::abs(d.params.mu_s - 0.03) < 1e-12);
    CHECK(std::abs(d.rho_ratio - 6.3) < 1e-12);
    CHECK(std::abs(d.alpha - 4.115) < 1e-12);
  }
  CHECK_THROWS_AS((void)derive_dimensionless({1, 4, 1.0, 1.0, 0.1, 0.9, 1, 9.81}, 0.5), InvalidParameter);
  CHECK_THROWS_AS((void)derive_dimensionless({1, 4, 0.5, 1.0, 0.1, 0.9, 1, 9.81}, 0.5), InvalidParameter);
  CHECK_THROWS_AS((void)derive_dimensionless({-1, 4, 2.0, 1.0, 0.1, 0.9, 1, 9.81}, 0.5), InvalidParameter);
}

TEST_CASE("run configuration") {
  RunConfig c;
  const std::string text = c.to_text();
  CHECK(text.find("Re = 0.0325") != std::string::npos);
  CHECK(text.find("h_t = 0.001") != std::string::npos);
  CHECK(text.find("t_end = 30") != std::string::npos);

  std::istringstream in("# comment\nWi = 0.5   # trailing\n\n mu_s=0.59\nxi = 0.2\n");
  c.load(in);
  const auto g = c.groups();
  CHECK(g.params.Wi == 0.5);
  CHECK(g.params.mu_s == 0.59);
  CHECK(g.params.xi == doctest::Approx(0.2));
  CHECK(g.K == doctest::Approx(sphere::wall_correction(4.115)));

  // Round trip through the printed form.
  RunConfig d;
  std::istringstream again(c.to_text());
  d.load(again);
  CHECK(d.to_text() == c.to_text());

  CHECK_THROWS_AS(c.set("no_such_key", "1"), InvalidParameter);
  std::istringstream bad("Wi 0.5\n");
  CHECK_THROWS_AS(c.load(bad), FormatError);

  RunConfig e;
  e.set("h_t", "0");
  CHECK_THROWS_AS(e.validate(), InvalidParameter);
  RunConfig f;
  f.set("Wi", "abc");
  CHECK_THROWS_AS((void)f.groups(), InvalidParameter);

  SUBCASE("dimensional block") {
    RunConfig m;
    for (auto [k, v] : {std::pair{"r_s", "1"}, {"r_c", "4.115"}, {"rho_s", "6.3"}, {"rho_f", "1"}, {"eta_s", "0.03"},
                        {"eta_p", "0.97"}, {"lambda", "0.45"}, {"g", "1"}})
      m.set(k, v);
    const auto gm = m.groups();
    CHECK(gm.rho_ratio == doctest::Approx(6.3));
    CHECK(gm.alpha == doctest::Approx(4.115));
    m.set("Re", "0.1");
    CHECK_THROWS_AS(m.validate(), InvalidParameter);
    RunConfig partial;
    partial.set("r_s", "1");
    CHECK_THROWS_AS(partial.validate(), InvalidParameter);
  }
  SUBCASE("probes") {
    RunConfig p;
    const auto std_probes = p.probes();
    REQUIRE(std_probes.size() == 2);
    CHECK(std_probes[0].x.x() == doctest::Approx(1.2293));
    CHECK(std_probes[1].x.y() == doctest::Approx(7.5));
    p.set("probes", "a@1.5,0; b@0.2,3");
    const auto custom = p.probes();
    REQUIRE(custom.size() == 2);
    CHECK(custom[1].name == "b");
    CHECK(custom[1].x.y() == 3.0);
    p.set("probes", "broken");
    CHECK_THROWS_AS((void)p.probes(), InvalidParameter);
  }
}

TEST_CASE("oscillation analysis") {
  std::vector<double> t(3000), U(3000);
  for (size_t i = 0; i < t.size(); ++i) t[i] = 0.01 * double(i);

  SUBCASE("constant series") {
    std::fill(U.begin(), U.end(), 1.0);
    const auto r = analyze_oscillations(t, U);
    CHECK(r.peaks.empty());
    CHECK(r.troughs.empty());
    CHECK_FALSE(r.sustained);
  }
  SUBCASE("steady sinusoid") {
    for (size_t i = 0; i < t.size(); ++i) U[i] = 2.0 + 0.3 * std::sin(2.0 * M_PI * t[i] / 3.0);
    const auto r = analyze_oscillations(t, U);
    CHECK(r.cycles >= 8);
    CHECK(r.sustained);
    CHECK(r.period == doctest::Approx(3.0).epsilon(0.01));
    CHECK(r.amplitude == doctest::Approx(0.6).epsilon(0.01));
    CHECK(r.asymmetry == doctest::Approx(1.0).epsilon(0.05));
  }
  SUBCASE("decaying sinusoid") {
    const double half_life = 0.2 * t.back();
    for (size_t i = 0; i < t.size(); ++i)
      U[i] = 2.0 + 0.3 * std::exp(-std::log(2.0) * t[i] / half_life) * std::sin(2.0 * M_PI * t[i] / 3.0);
    CHECK_FALSE(analyze_oscillations(t, U).sustained);
  }
  SUBCASE("sawtooth: slow fall, fast rise") {
    const double period = 2.5, rise = 0.4;
    for (size_t i = 0; i < t.size(); ++i) {
      const double ph = std::fmod(t[i], period);
      U[i] = ph < period - rise ? 3.0 - 0.5 * ph / (period - rise) : 2.5 + 0.5 * (ph - (period - rise)) / rise;
    }
    const auto r = analyze_oscillations(t, U);
    CHECK(r.sustained);
    CHECK(r.asymmetry > 1.0);
    CHECK(r.asymmetry == doctest::Approx((period - rise) / rise).epsilon(0.1));
  }
  SUBCASE("start-up overshoot and a secondary bump per cycle") {
    // Slow fall over 4.2, fast rise over 0.8, a 0.02 bump early in each fall,
    // on top of a start-up from rest with a large overshoot.
    const auto cycle = [](double time, double amp) {
      const double ph = std::fmod(time, 5.0);
      const double base = ph < 4.2 ? 2.83 - amp * ph / 4.2 : 2.83 - amp + amp * (ph - 4.2) / 0.8;
      return base + 0.02 * std::exp(-std::pow((ph - 1.0) / 0.15, 2));
    };
    for (double decay : {0.0, 1.0 / 8.0}) {
      for (size_t i = 0; i < t.size(); ++i) {
        const double ti = t[i];
        U[i] = (1.0 - std::exp(-ti / 0.05)) * cycle(ti + 2.0, 0.46 * std::exp(-decay * ti)) +
               1.1 * std::exp(-std::pow((ti - 0.3) / 0.2, 2));
      }
      const auto r = analyze_oscillations(t, U);
      if (decay == 0.0) {
        CHECK(r.sustained);
        CHECK(r.cycles >= 5);
        CHECK(r.amplitude == doctest::Approx(0.46).epsilon(0.05));
        CHECK(r.period == doctest::Approx(5.0).epsilon(0.02));
        CHECK(r.asymmetry > 3.0);
      } else {
        CHECK_FALSE(r.sustained);
      }
    }
  }
  CHECK_THROWS_AS((void)analyze_oscillations(std::vector<double>(50, 0.0), std::vector<double>(50, 0.0)),
                  InvalidParameter);
}

TEST_CASE("falling-sphere run writes its outputs deterministically") {
  const auto dir1 = scratch_dir("run1"), dir2 = scratch_dir("run2");
  const auto r1 = run_falling_sphere(small_run(dir1));
  const auto r2 = run_falling_sphere(small_run(dir2));
  REQUIRE(r1.t.size() == 51);
  CHECK(r1.U.front() == 0.0);
  CHECK(r1.U.back() > 0.0);  // accelerates from rest
  for (size_t i = 1; i < r1.U.size(); ++i) CHECK(r1.U[i] > r1.U[i - 1]);
  for (double m : r1.min_eig) CHECK(m > 0.0);

  for (const char* f : {"timeseries.csv", "probes_x1.csv", "probes_x2.csv", "wake.csv"}) {
    CHECK(fs::exists(dir1 / f));
    CHECK(slurp(dir1 / f) == slurp(dir2 / f));
  }
  CHECK(slurp(dir1 / "timeseries.csv").rfind("t,U,dU,F_d,min_eig_c\n", 0) == 0);
  CHECK(slurp(dir1 / "probes_x1.csv").rfind("t,u_r,u_z,p\n", 0) == 0);
}

TEST_CASE("probes on the boundaries see the boundary data") {
  RunConfig c = small_run("");
  c.set("probes", "surface@0,1;wall@2.5,1");
  c.set("probe_every", "1");
  c.set("t_end", "0.02");
  const auto r = run_falling_sphere(c);
  REQUIRE(r.probes.size() == 2);
  for (size_t k = 0; k < r.probes[0].t.size(); ++k) {
    CHECK(std::abs(r.probes[0].u_r[k]) < 1e-3);
    CHECK(std::abs(r.probes[0].u_z[k]) < 1e-3);
  }
  // The wall moves with the extrapolated speed used as the step's boundary value.
  for (size_t k = 1; k < r.probes[1].t.size(); ++k) {
    CHECK(r.probes[1].u_z[k] == doctest::Approx(r.U[k - 1] + 1e-3 * r.dU[k - 1]).epsilon(1e-9));
    CHECK(std::abs(r.probes[1].u_r[k]) < 1e-12);
  }
  RunConfig outside = small_run("");
  outside.set("probes", "bad@0.2,0.2");
  CHECK_THROWS_AS((void)run_falling_sphere(outside), InvalidParameter);
}

TEST_CASE("checkpoints") {
  const auto dir = scratch_dir("ckpt");
  RunConfig c = small_run(dir);
  const auto mesh = build_mesh(c);
  const auto g = c.groups();
  FallingSphere a(mesh, g.params, g.rho_ratio, g.K, 1e-3);
  for (int k = 0; k < 20; ++k) a.step();
  write_checkpoint(dir / "a.bin", a);

  SUBCASE("round trip is exact and resumes identically") {
    FallingSphere b(mesh, g.params, g.rho_ratio, g.K, 1e-3);
    read_checkpoint(dir / "a.bin", b);
    CHECK(b.step_count() == 20);
    CHECK(b.state().t == a.state().t);
    CHECK((b.state().u - a.state().u).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((b.state().p - a.state().p).lpNorm<Eigen::Infinity>() == 0.0);
    for (size_t v = 0; v < a.state().c.size(); ++v) {
      CHECK(b.state().c[v].rr() == a.state().c[v].rr());
      CHECK(b.state().c[v].tt == a.state().c[v].tt);
    }
    CHECK(b.sphere().U == a.sphere().U);
    for (int k = 0; k < 100; ++k) {
      a.step();
      b.step();
      CHECK(std::abs(a.sphere().U - b.sphere().U) <= 1e-8);
    }
  }
  SUBCASE("corruption is detected without touching the state") {
    std::string bytes = slurp(dir / "a.bin");
    bytes[bytes.size() / 2] ^= 0x5a;
    std::ofstream(dir / "bad.bin", std::ios::binary) << bytes;
    FallingSphere b(mesh, g.params, g.rho_ratio, g.K, 1e-3);
    CHECK_THROWS_AS(read_checkpoint(dir / "bad.bin", b), FormatError);
    CHECK(b.step_count() == 0);
    CHECK(b.state().u.lpNorm<Eigen::Infinity>() == 0.0);

    std::ofstream(dir / "short.bin", std::ios::binary) << bytes.substr(0, 30);
    CHECK_THROWS_AS(read_checkpoint(dir / "short.bin", b), FormatError);
    std::ofstream(dir / "junk.bin", std::ios::binary) << "not a checkpoint at all";
    CHECK_THROWS_AS(read_checkpoint(dir / "junk.bin", b), FormatError);
    CHECK_THROWS_AS(read_checkpoint(dir / "missing.bin", b), FormatError);
  }
  SUBCASE("mesh mismatch is rejected") {
    RunConfig other = c;
    other.set("h_near", "0.25");
    FallingSphere b(build_mesh(other), g.params, g.rho_ratio, g.K, 1e-3);
    CHECK_THROWS_AS(read_checkpoint(dir / "a.bin", b), FormatError);
  }
  SUBCASE("restart key resumes a run") {
    RunConfig r = c;
    r.set("restart", (dir / "a.bin").string());
    r.set("out_dir", "");
    r.set("t_end", "0.03");
    const auto res = run_falling_sphere(r);
    CHECK(res.t.front() == doctest::Approx(0.02));
    CHECK(res.t.size() == 11);
  }
}

TEST_CASE("rheology and channel drivers") {
  const auto dir = scratch_dir("drivers");
  RunConfig c;
  c.set("out_dir", dir.string());
  run_rheology(c);
  const std::string curve = slurp(dir / "curve.csv");
  CHECK(curve.rfind("kappa,tau,dtau_dkappa\n", 0) == 0);
  std::istringstream ext(slurp(dir / "extrema.csv"));
  std::string line;
  int rows = 0;
  std::getline(ext, line);
  while (std::getline(ext, line)) {
    ++rows;
    CHECK(line.rfind("0,", 0) != 0);  // xi = 0 is monotone, so it has no row
  }
  CHECK(rows == 8);

  c.set("channel_nodes", "41");
  c.set("shear_t_max", "100");
  run_shear1d(c);
  CHECK(fs::exists(dir / "profile.csv"));
  CHECK(slurp(dir / "bands.csv").find("kappa") != std::string::npos);
}
