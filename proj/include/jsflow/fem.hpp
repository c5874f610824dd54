#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "jsflow/mesh.hpp"
#include "jsflow/params.hpp"
#include "jsflow/tensor.hpp"

namespace jsflow::fem {

using mesh::MeshPoint;
using mesh::TriMesh;
using mesh::Vec2;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Continuous P2 nodes: mesh vertices first, then one node per edge midpoint.
class P2Space {
public:
  explicit P2Space(const TriMesh& m);

  [[nodiscard]] const TriMesh& mesh() const { return *mesh_; }
  [[nodiscard]] int num_nodes() const { return int(coords_.size()); }
  [[nodiscard]] int num_vertices() const { return mesh_->num_vertices(); }
  [[nodiscard]] const Vec2& node(int i) const { return coords_[i]; }
  /// Local nodes of element t: three vertices, then the midpoints of the edges opposite them.
  [[nodiscard]] const std::array<int, 6>& element_nodes(int t) const { return elem_nodes_[t]; }
  /// An element containing node i.
  [[nodiscard]] int node_element(int i) const { return node_elem_[i]; }
  /// Boundary tags touching node i, as a bit set over mesh::BoundaryTag.
  [[nodiscard]] unsigned node_tags(int i) const { return node_tags_[i]; }

  /// P2 interpolation of a nodal scalar field at a located point.
  [[nodiscard]] double eval(const Vector& field, int offset, const MeshPoint& mp) const;
  /// Gradient (d/dr, d/dz) of a nodal P2 scalar field inside element t at barycentric bary.
  [[nodiscard]] Eigen::Vector2d grad(const Vector& field, int offset, int t, const std::array<double, 3>& bary) const;

private:
  const TriMesh* mesh_;
  std::vector<Vec2> coords_;
  std::vector<std::array<int, 6>> elem_nodes_;
  std::vector<int> node_elem_;
  std::vector<unsigned> node_tags_;
};

/// Discrete fields at one time level.
///
/// Velocity is stored component-blocked: u[i] = u_r at node i, u[N + i] = u_z.
struct FieldState {
  Vector u;
  Vector p;                                  // one value per vertex
  std::vector<tensor::AxiTensor> c;          // one tensor per vertex
  double t = 0.0;

  [[nodiscard]] static FieldState at_rest(const P2Space& space, const JsParams& params);
};

/// Values of the previous time level carried to the current nodes along characteristics.
struct FootValues {
  Vector u;                                  // P2 nodes, component-blocked
  std::vector<tensor::AxiTensor> c;          // vertices
};

struct MomentumSolution {
  Vector u;
  Vector p;
  double relative_residual = 0.0;
};

/// Dirichlet data: velocity (u_r, u_z) prescribed at a boundary node.
using DirichletFn = std::function<Vec2(const Vec2& x, unsigned tags)>;

/// How grad u reaches the conformation vertices: L2 projection with the
/// lumped (diagonal) or the full r-weighted P1 mass matrix.
enum class GradientRecovery { Lumped, Consistent };

/// The constant-coefficient saddle-point operator of one backward-Euler step,
///   (Re/h_t) u - mu_s Lap u + grad p = f,  div u = 0,
/// in r-weighted axisymmetric form, factored once and reused every step.
class MomentumOperator {
public:
  MomentumOperator(const P2Space& space, const JsParams& params, double h_t,
                   GradientRecovery recovery = GradientRecovery::Consistent);
  ~MomentumOperator();
  MomentumOperator(MomentumOperator&&) noexcept;
  MomentumOperator& operator=(MomentumOperator&&) noexcept;

  [[nodiscard]] const P2Space& space() const { return *space_; }
  [[nodiscard]] const JsParams& params() const { return params_; }
  [[nodiscard]] double time_step() const { return h_t_; }
  [[nodiscard]] GradientRecovery gradient_recovery() const { return recovery_; }

  /// Full saddle-point matrix before boundary elimination (velocity then pressure unknowns).
  [[nodiscard]] const SparseMatrix& system_matrix() const { return system_; }
  /// Number of unknowns remaining after Dirichlet elimination and pressure pinning.
  [[nodiscard]] int num_free() const { return int(free_.size()); }
  [[nodiscard]] bool is_velocity_dirichlet(int dof) const { return is_dirichlet_[dof] != 0; }

  /// r-weighted P2 mass matrix for one velocity component.
  [[nodiscard]] const SparseMatrix& mass() const { return mass_; }
  /// Discrete divergence B (pressure rows of the system, velocity columns).
  [[nodiscard]] const SparseMatrix& divergence() const { return divergence_; }

  /// Load vector int f . v r dA for a body force f(x) = (f_r, f_z).
  [[nodiscard]] Vector load(const std::function<Vec2(const Vec2&)>& f) const;
  /// Weak divergence int (div c) . v r dA of the P1 conformation field.
  [[nodiscard]] Vector conformation_load(const std::vector<tensor::AxiTensor>& c) const;
  /// Solves the saddle-point system for a velocity right-hand side and Dirichlet data.
  [[nodiscard]] MomentumSolution solve(const Vector& rhs, const DirichletFn& dirichlet) const;

  /// L2 projection of grad u (and u_r / r) onto the vertices.
  [[nodiscard]] std::vector<tensor::VelGrad> nodal_gradients(const Vector& u) const;

private:
  struct Factorization;

  const P2Space* space_;
  JsParams params_;
  double h_t_;
  GradientRecovery recovery_;
  SparseMatrix system_;
  SparseMatrix mass_;
  SparseMatrix divergence_;
  Vector pressure_weight_;               // normalized r-weighted P1 lumped mass
  SparseMatrix conf_load_;               // 2N x 4V
  SparseMatrix free_free_, free_fixed_;
  std::vector<int> free_, fixed_;        // global unknown indices
  std::vector<int> global_to_free_;
  std::vector<char> is_dirichlet_;
  int pinned_pressure_ = -1;
  SparseMatrix grad_proj_[5];            // dr ur, dz ur, dr uz, dz uz, ur/r (V x N); lumped inverse applied if Lumped
  std::unique_ptr<Factorization> lu_;
};

/// Assembles and factors the operator (the expensive, once-per-run part).
[[nodiscard]] MomentumOperator assemble_momentum_operator(const P2Space& space, const JsParams& params, double h_t,
                                                          GradientRecovery recovery = GradientRecovery::Consistent);

/// Midpoint-rule characteristic feet of every P2 node; feet leaving the domain
/// are projected onto the nearest boundary point.
[[nodiscard]] std::vector<MeshPoint> backtrack_feet(const P2Space& space, const Vector& u_old, double h_t);

/// Quadratic interpolation of u_old and linear interpolation of c_old at the feet.
[[nodiscard]] FootValues interpolate_at_feet(const P2Space& space, const FieldState& old,
                                             const std::vector<MeshPoint>& feet);

/// Momentum step with the (Re/h_t) u o y, div c_old and frame-acceleration
/// right-hand sides; sphere no-slip and u = U e_z on the container walls.
[[nodiscard]] MomentumSolution solve_momentum_step(const MomentumOperator& op, const FieldState& old,
                                                   const FootValues& foot, double dU_old, double U_wall);

/// Nodewise Lyapunov update of the conformation at the new velocity.
[[nodiscard]] std::vector<tensor::AxiTensor> advance_conformation_field(const MomentumOperator& op, const Vector& u_new,
                                                                       const FootValues& foot, const JsParams& params,
                                                                       double h_t);

/// Smallest eigenvalue over all nodal conformation tensors.
[[nodiscard]] double min_eigenvalue(const std::vector<tensor::AxiTensor>& c);

/// r-weighted L2 norm of the P1 pressure-space divergence residual B u.
[[nodiscard]] double divergence_residual(const MomentumOperator& op, const Vector& u);

/// Legacy-ASCII VTK snapshot of the vertex values (u, p, c, min eigenvalue).
void write_vtk(std::ostream& os, const P2Space& space, const FieldState& state);

}  // namespace jsflow::fem
