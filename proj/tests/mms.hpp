#pragma once

// Manufactured axisymmetric Stokes-type solution shared by the unit and acceptance tests.

#include <array>
#include <cmath>

#include "jsflow/fem.hpp"

namespace mms {

using jsflow::mesh::Vec2;
using jsflow::fem::P2Space;
using jsflow::fem::Vector;
using jsflow::mesh::MeshPoint;

// Divergence-free axisymmetric field from the stream function r^2 cos(r) sin(z).
inline Vec2 mms_u(const Vec2& x) {
  const double r = x.x(), z = x.y();
  return {-r * std::cos(r) * std::cos(z), (2.0 * std::cos(r) - r * std::sin(r)) * std::sin(z)};
}

// (c u - mu Lap u + grad p) for p = r^2 cos(z).
inline Vec2 mms_f(const Vec2& x, double c, double mu) {
  const double r = x.x(), z = x.y();
  const double fr = (-mu * (2 * r * std::cos(r) + 3 * std::sin(r)) + r * (-c * std::cos(r) + 2)) * std::cos(z);
  const double fz = (-mu * (2 * r * r * std::sin(r) - 7 * r * std::cos(r) - 3 * std::sin(r)) +
                     r * (-c * r * std::sin(r) + 2 * c * std::cos(r) - r * r)) *
                    std::sin(z) / r;
  return {fr, fz};
}

// r-weighted L2 error of the P2 velocity against mms_u, with a 7-point rule
// independent of the assembly quadrature.
inline double velocity_error(const P2Space& space, const Vector& u) {
  static const double a1 = 0.059715871789770, b1 = 0.470142064105115;
  static const double a2 = 0.797426985353087, b2 = 0.101286507323456;
  static const double w0 = 0.225, w1 = 0.132394152788506, w2 = 0.125939180544827;
  const std::array<std::array<double, 4>, 7> pts = {{{1. / 3, 1. / 3, 1. / 3, w0},
                                                     {a1, b1, b1, w1},
                                                     {b1, a1, b1, w1},
                                                     {b1, b1, a1, w1},
                                                     {a2, b2, b2, w2},
                                                     {b2, a2, b2, w2},
                                                     {b2, b2, a2, w2}}};
  const auto& m = space.mesh();
  const int N = space.num_nodes();
  double err = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    for (const auto& q : pts) {
      MeshPoint mp{t, {q[0], q[1], q[2]}};
      const Vec2 x = m.from_barycentric(mp);
      const Vec2 d = Vec2(space.eval(u, 0, mp), space.eval(u, N, mp)) - mms_u(x);
      err += q[3] * m.triangle_area(t) * x.x() * d.squaredNorm();
    }
  }
  return std::sqrt(err);
}

struct Result {
  double error;
  double relative_residual;
};

// Solves (Re/h) u - mu_s Lap u + grad p = f on an n x n split square next to the axis.
inline Result solve(int n) {
  const auto m = jsflow::mesh::build_rectangle(1.0, 0.0, 1.0, n, n);
  const P2Space space(m);
  jsflow::JsParams p;
  p.Re = 0.01;
  p.mu_s = 0.5;
  const double h = 0.01, c = p.Re / h;
  const auto op = jsflow::fem::assemble_momentum_operator(space, p, h);
  const auto rhs = op.load([&](const Vec2& x) { return mms_f(x, c, p.mu_s); });
  const auto sol = op.solve(rhs, [](const Vec2& x, unsigned) { return mms_u(x); });
  return {velocity_error(space, sol.u), sol.relative_residual};
}

}  // namespace mms
