#include <cmath>

#include "doctest.h"
#include "jsflow/errors.hpp"
#include "jsflow/sphere.hpp"

using namespace jsflow;
using namespace jsflow::sphere;

namespace {

// The series evaluated directly, kept independent of the library code.
double bohlin(double alpha) {
  const double l = 1.0 / alpha;
  return (1 - 0.75857 * std::pow(l, 5)) /
         (1 - 2.1050 * l + 2.0865 * std::pow(l, 3) - 1.7068 * std::pow(l, 5) + 0.72603 * std::pow(l, 6));
}

JsParams newtonian() {
  JsParams p;
  p.mu_s = 1.0 - 1e-9;
  p.Wi = 0.45;
  p.xi = 0.0;
  p.Re = 0.0;
  return p;
}

// Steady Stokes drag with the walls translating at speed 1 past the fixed sphere.
double stokes_drag(const mesh::TriMesh& m) {
  const fem::P2Space space(m);
  const JsParams p = newtonian();
  const auto op = fem::assemble_momentum_operator(space, p, 1.0);
  auto s = fem::FieldState::at_rest(space, p);
  const fem::FootValues foot{s.u, s.c};
  const auto sol = fem::solve_momentum_step(op, s, foot, 0.0, 1.0);
  s.u = sol.u;
  s.p = sol.p;
  return drag_force(space, s, p);
}

}  // namespace

TEST_CASE("wall correction series") {
  CHECK(wall_correction(4.115) == doctest::Approx(bohlin(4.115)).epsilon(1e-14));
  CHECK(wall_correction(4.115) == doctest::Approx(1.933).epsilon(1e-3));
  CHECK(wall_correction(4.115) > wall_correction(6.115));
  CHECK(wall_correction(6.115) > wall_correction(8.115));
  CHECK(wall_correction(8.115) > 1.0);
  CHECK(wall_correction(1e6) == doctest::Approx(1.0).epsilon(1e-5));
  double prev = 1e300;
  for (double a = 1.02; a < 100.0; a *= 1.05) {
    const double k = wall_correction(a);
    CHECK(k >= 1.0);
    CHECK(k < prev);
    prev = k;
  }
  CHECK_THROWS_AS((void)wall_correction(1.01), InvalidParameter);
  CHECK_THROWS_AS((void)wall_correction(0.5), InvalidParameter);
}

TEST_CASE("sphere equation of motion") {
  const JsParams p;
  SphereState s{0.3, 0.0, wall_correction(4.115), 6.3};
  const auto balanced = advance_sphere(s, -3.0 * s.K, p, 1e-3);
  CHECK(balanced.dU == 0.0);
  CHECK(balanced.U == 0.3);

  const SphereState rest{0.0, 0.0, s.K, 6.3};
  const auto first = advance_sphere(rest, 0.0, p, 1e-3);
  CHECK(first.dU == doctest::Approx(9.0 * s.K / (2.0 * p.Re * 6.3)));
  CHECK(first.U == doctest::Approx(1e-3 * first.dU));

  JsParams bad = p;
  bad.Re = 0.0;
  CHECK_THROWS_AS((void)advance_sphere(rest, 0.0, bad, 1e-3), InvalidParameter);
}

TEST_CASE("drag vanishes at rest") {
  const auto m = mesh::build_sphere_in_cylinder({2.5, 8.0, 0.2, 0.6});
  const fem::P2Space space(m);
  const JsParams p;
  const auto s = fem::FieldState::at_rest(space, p);
  CHECK(std::abs(drag_force(space, s, p)) < 1e-12);
}

TEST_CASE("Stokes drag with wall correction") {
  const double alpha = 4.115;
  const auto coarse = mesh::build_sphere_in_cylinder({alpha, 16.0, 0.05, 0.5});
  const double K = wall_correction(alpha);
  const double fc = stokes_drag(coarse);
  const double ff = stokes_drag(mesh::refine(coarse, 1));
  MESSAGE("F_d coarse " << fc << ", refined " << ff << ", -3K = " << -3.0 * K);
  CHECK(fc < 0.0);
  CHECK(std::abs(ff + 3.0 * K) <= 0.05 * 3.0 * K);
}
