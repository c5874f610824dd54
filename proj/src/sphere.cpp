#include "jsflow/sphere.hpp"

#include <cmath>
#include <sstream>

#include "jsflow/errors.hpp"

namespace jsflow::sphere {

double wall_correction(double alpha) {
  if (!(alpha > 1.01) || !std::isfinite(alpha)) {
    std::ostringstream msg;
    msg << "wall correction series needs alpha > 1.01 (got " << alpha << "); supply K directly";
    throw InvalidParameter(msg.str());
  }
  const double l = 1.0 / alpha;
  const double l3 = l * l * l, l5 = l3 * l * l, l6 = l5 * l;
  return (1.0 - 0.75857 * l5) / (1.0 - 2.1050 * l + 2.0865 * l3 - 1.7068 * l5 + 0.72603 * l6);
}

double drag_force(const fem::P2Space& space, const fem::FieldState& s, const JsParams& p) {
  const auto& m = space.mesh();
  const int N = space.num_nodes();
  const double mu = p.mu_s;
  const double traction = mesh::boundary_line_integral(m, mesh::BoundaryTag::Sphere, [&](const mesh::BoundaryPoint& bp) {
    const auto& tri = m.triangles()[bp.element];
    double pr = 0.0, crz = 0.0, czz = 0.0;
    for (int k = 0; k < 3; ++k) {
      pr += bp.bary[k] * s.p[tri[k]];
      crz += bp.bary[k] * s.c[tri[k]].rz();
      czz += bp.bary[k] * s.c[tri[k]].zz();
    }
    const auto gr = space.grad(s.u, 0, bp.element, bp.bary);
    const auto gz = space.grad(s.u, N, bp.element, bp.bary);
    const double s_zr = mu * (gz.x() + gr.y()) + crz;
    const double s_zz = -pr + 2.0 * mu * gz.y() + czz;
    // bp.normal points out of the fluid, i.e. into the sphere.
    return s_zr * bp.normal.x() + s_zz * bp.normal.y();
  });
  return traction;
}

SphereState advance_sphere(const SphereState& s, double F_d, const JsParams& p, double h_t) {
  if (!(p.Re > 0.0)) throw InvalidParameter("sphere equation of motion needs Re > 0");
  if (!(h_t > 0.0)) throw InvalidParameter("time step must be positive");
  if (!(s.rho_ratio > 0.0)) throw InvalidParameter("density ratio must be positive");
  SphereState out = s;
  out.dU = (3.0 * s.K + F_d) * 3.0 / (2.0 * p.Re * s.rho_ratio);
  out.U = s.U + h_t * out.dU;
  return out;
}

}  // namespace jsflow::sphere
