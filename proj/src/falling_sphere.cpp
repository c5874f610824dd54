#include <cmath>
#include <limits>
#include <sstream>

#include "jsflow/errors.hpp"
#include "jsflow/sim.hpp"

namespace jsflow::sim {

FallingSphere::FallingSphere(mesh::TriMesh mesh, const JsParams& params, double rho_ratio, double K, double h_t,
                             fem::GradientRecovery recovery)
    : mesh_(std::move(mesh)),
      space_(mesh_),
      params_(params),
      h_t_(h_t),
      op_(fem::assemble_momentum_operator(space_, params, h_t, recovery)) {
  params_.validate();
  if (!(params.Re > 0.0)) throw InvalidParameter("falling-sphere runs need Re > 0");
  if (!(rho_ratio > 1.0)) throw InvalidParameter("density ratio must exceed 1 for the sphere to fall");
  if (!(K >= 1.0)) throw InvalidParameter("wall correction factor must be >= 1");
  if (!mesh_.domain().has_sphere) throw InvalidParameter("mesh has no sphere boundary");
  state_ = fem::FieldState::at_rest(space_, params_);
  sphere_ = sphere::SphereState{0.0, 0.0, K, rho_ratio};
  min_eig_ = fem::min_eigenvalue(state_.c);

  const double dz = 0.05;
  // Stop one radius short of the top wall, whose boundary layer is not part of the wake.
  for (double z = 1.0 + dz; z < mesh_.domain().z_max - 1.0 + 0.5 * dz; z += dz) {
    const auto loc = mesh_.locate(Vec2(0.0, z));
    if (const auto* mp = std::get_if<mesh::MeshPoint>(&loc)) {
      wake_points_.push_back(*mp);
      wake_z_.push_back(z);
    }
  }
}

void FallingSphere::step() {
  const auto feet = fem::backtrack_feet(space_, state_.u, h_t_);
  const auto foot = fem::interpolate_at_feet(space_, state_, feet);
  const double U_wall = sphere_.U + h_t_ * sphere_.dU;
  auto sol = fem::solve_momentum_step(op_, state_, foot, sphere_.dU, U_wall);
  auto c = fem::advance_conformation_field(op_, sol.u, foot, params_, h_t_);
  fem::FieldState next{std::move(sol.u), std::move(sol.p), std::move(c), state_.t + h_t_};
  const double drag = sphere::drag_force(space_, next, params_);
  const auto sp = sphere::advance_sphere(sphere_, drag, params_, h_t_);
  const double me = fem::min_eigenvalue(next.c);
  if (!(me > 0.0)) {
    std::ostringstream msg;
    msg << "conformation lost positive definiteness at t=" << next.t << " (min eigenvalue " << me << ")";
    throw PositivityLoss(msg.str());
  }
  if (!std::isfinite(sp.U) || !std::isfinite(drag)) throw SolverError("sphere speed became non-finite");
  state_ = std::move(next);
  sphere_ = sp;
  drag_ = drag;
  min_eig_ = me;
  ++step_;
}

FallingSphere::Sample FallingSphere::sample(const Vec2& x) const {
  const auto loc = mesh_.locate(x);
  const auto* mp = std::get_if<mesh::MeshPoint>(&loc);
  if (!mp) {
    std::ostringstream msg;
    msg << "point (" << x.x() << ", " << x.y() << ") is outside the fluid domain";
    throw InvalidParameter(msg.str());
  }
  const int N = space_.num_nodes();
  const auto& tri = mesh_.triangles()[mp->element];
  double p = 0.0;
  for (int k = 0; k < 3; ++k) p += mp->bary[k] * state_.p[tri[k]];
  return {space_.eval(state_.u, 0, *mp), space_.eval(state_.u, N, *mp), p};
}

FallingSphere::Wake FallingSphere::wake() const {
  const int N = space_.num_nodes();
  Wake w{std::numeric_limits<double>::infinity(), 0.0};
  for (size_t i = 0; i < wake_points_.size(); ++i) {
    const double v = sphere_.U - space_.eval(state_.u, N, wake_points_[i]);
    if (v < w.min_velocity) w = {v, wake_z_[i]};
  }
  return w;
}

void FallingSphere::set_state(fem::FieldState s, sphere::SphereState sp, std::int64_t step, double drag) {
  if (s.u.size() != 2 * space_.num_nodes() || s.p.size() != space_.num_vertices() ||
      int(s.c.size()) != space_.num_vertices())
    throw InvalidParameter("state does not match the mesh");
  state_ = std::move(s);
  sphere_ = sp;
  step_ = step;
  drag_ = drag;
  min_eig_ = fem::min_eigenvalue(state_.c);
}

}  // namespace jsflow::sim
