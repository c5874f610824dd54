#pragma once

#include "jsflow/fem.hpp"
#include "jsflow/params.hpp"

namespace jsflow::sphere {

struct SphereState {
  double U = 0.0;          // speed, positive when falling, in units of the Stokes terminal speed
  double dU = 0.0;         // dU/dt
  double K = 1.0;          // wall correction factor
  double rho_ratio = 1.0;  // sphere density / fluid density
};

/// Drag amplification of a sphere settling on the axis of a cylinder whose
/// radius is alpha sphere radii (Bohlin/Haberman series). Requires alpha > 1.01.
[[nodiscard]] double wall_correction(double alpha);

/// Axial traction on the sphere per radian, -int (sigma n_sphere) . e_z r dl,
/// with sigma = -p I + mu_s (grad u + grad u^T) + c. The conformation enters
/// unshifted because the pressure carries the matching isotropic part; the
/// difference integrates to zero over the closed surface.
[[nodiscard]] double drag_force(const fem::P2Space& space, const fem::FieldState& state, const JsParams& p);

/// Explicit update of (2 Re rho/3) dU/dt = 3K + F_d.
[[nodiscard]] SphereState advance_sphere(const SphereState& s, double F_d, const JsParams& p, double h_t);

}  // namespace jsflow::sphere
