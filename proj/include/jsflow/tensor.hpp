#pragma once

#include <Eigen/Core>

#include "jsflow/params.hpp"

namespace jsflow::tensor {

using Mat2 = Eigen::Matrix2d;

/// Symmetric 2x2 tensor stored by its three independent components.
struct SymTensor2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  [[nodiscard]] Mat2 matrix() const {
    Mat2 m;
    m << xx, xy, xy, yy;
    return m;
  }
  [[nodiscard]] static SymTensor2 from_matrix(const Mat2& m) {
    return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)};
  }
  [[nodiscard]] static SymTensor2 identity(double s = 1.0) { return {s, 0.0, s}; }
  [[nodiscard]] double determinant() const { return xx * yy - xy * xy; }
  [[nodiscard]] double frobenius_norm() const;
};

/// Axisymmetric tensor: in-plane (r,z) block plus the decoupled hoop (theta-theta) component.
struct AxiTensor {
  SymTensor2 plane;
  double tt = 0.0;

  [[nodiscard]] double rr() const { return plane.xx; }
  [[nodiscard]] double rz() const { return plane.xy; }
  [[nodiscard]] double zz() const { return plane.yy; }

  [[nodiscard]] static AxiTensor identity(double s = 1.0) { return {SymTensor2::identity(s), s}; }
  [[nodiscard]] bool is_spd() const;
};

/// Velocity gradient, grad(i, j) = d u_i / d x_j, plus the hoop rate u_r / r
/// (zero for planar flows).
struct VelGrad {
  Mat2 grad = Mat2::Zero();
  double hoop = 0.0;
};

struct Rotation {
  Mat2 plane;
  double tt;
};

/// Gordon-Schowalter operator R = ((a+1) L + (a-1) L^T) / 2, hoop part a u_r/r.
[[nodiscard]] Rotation gs_rotation(const VelGrad& L, double a);

/// (mu_p / (a Wi)) times the identity.
[[nodiscard]] AxiTensor equilibrium_conformation(const JsParams& p);

/// One backward-Euler semi-Lagrangian conformation step: solves
/// A c + c A^T = C with A = (1 + Wi/h_t)/2 I - Wi R(L_new) and
/// C = mu_p/(a Wi) I + (Wi/h_t) c_foot.
///
/// Throws StepTooLarge when the 3x3 system is singular and PositivityLoss if
/// the result is not SPD.
[[nodiscard]] AxiTensor lyapunov_step(const AxiTensor& c_foot, const VelGrad& L_new,
                                      const JsParams& p, double h_t);

/// In-plane part only; used by planar solvers.
[[nodiscard]] SymTensor2 lyapunov_step_plane(const SymTensor2& c_foot, const Mat2& L_new,
                                             const JsParams& p, double h_t);

/// Solves A X + X A^T = C for symmetric X by eliminating on (x11, x12, x22).
[[nodiscard]] SymTensor2 solve_lyapunov(const Mat2& A, const SymTensor2& C);

/// Polymer stress tau_p = c - mu_p/(a Wi) I.
[[nodiscard]] AxiTensor stress_from_conformation(const AxiTensor& c, const JsParams& p);

[[nodiscard]] double min_eigenvalue(const SymTensor2& c);
[[nodiscard]] double min_eigenvalue(const AxiTensor& c);

}  // namespace jsflow::tensor
