#include "jsflow/fem.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "jsflow/errors.hpp"
#include "quadrature.hpp"

namespace jsflow::fem {

using mesh::BoundaryTag;
using tensor::AxiTensor;
using tensor::VelGrad;

namespace {

constexpr unsigned bit(BoundaryTag t) { return 1u << int(t); }
constexpr unsigned kFullDirichlet =
    bit(BoundaryTag::Sphere) | bit(BoundaryTag::SideWall) | bit(BoundaryTag::Top) | bit(BoundaryTag::Bottom);

struct ElementGeometry {
  std::array<Vec2, 3> x;
  std::array<Vec2, 3> grad_lambda;
  double area;
};

ElementGeometry geometry(const TriMesh& m, int t) {
  ElementGeometry g;
  const auto& tri = m.triangles()[t];
  for (int k = 0; k < 3; ++k) g.x[k] = m.vertices()[tri[k]];
  const Vec2 e1 = g.x[1] - g.x[0], e2 = g.x[2] - g.x[0];
  const double det = e1.x() * e2.y() - e1.y() * e2.x();
  g.area = 0.5 * det;
  for (int k = 0; k < 3; ++k) {
    const Vec2& a = g.x[(k + 1) % 3];
    const Vec2& b = g.x[(k + 2) % 3];
    g.grad_lambda[k] = Vec2(a.y() - b.y(), b.x() - a.x()) / det;
  }
  return g;
}

struct P2Basis {
  std::array<double, 6> phi;
  std::array<Vec2, 6> grad;
};

P2Basis p2_basis(const std::array<double, 3>& l, const std::array<Vec2, 3>& gl) {
  P2Basis b;
  for (int k = 0; k < 3; ++k) {
    const int i = (k + 1) % 3, j = (k + 2) % 3;
    b.phi[k] = l[k] * (2.0 * l[k] - 1.0);
    b.grad[k] = (4.0 * l[k] - 1.0) * gl[k];
    b.phi[3 + k] = 4.0 * l[i] * l[j];
    b.grad[3 + k] = 4.0 * (l[i] * gl[j] + l[j] * gl[i]);
  }
  return b;
}

std::array<double, 6> p2_values(const std::array<double, 3>& l) {
  std::array<double, 6> phi;
  for (int k = 0; k < 3; ++k) {
    phi[k] = l[k] * (2.0 * l[k] - 1.0);
    phi[3 + k] = 4.0 * l[(k + 1) % 3] * l[(k + 2) % 3];
  }
  return phi;
}

// Runs body(i) for i in [0, n) in parallel and rethrows the first exception.
template <class F>
void parallel_for(int n, F&& body) {
  std::exception_ptr err;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(jsflow_parallel_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace

// ---------------------------------------------------------------------------
// P2Space

P2Space::P2Space(const TriMesh& m) : mesh_(&m) {
  const int nv = m.num_vertices(), ne = m.num_edges(), nt = m.num_triangles();
  coords_.reserve(nv + ne);
  for (const auto& v : m.vertices()) coords_.push_back(v);
  for (int e = 0; e < ne; ++e) coords_.push_back(m.edge_midpoint(e));

  elem_nodes_.resize(nt);
  node_elem_.assign(nv + ne, -1);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = m.triangles()[t];
    const auto& te = m.triangle_edges()[t];
    elem_nodes_[t] = {tri[0], tri[1], tri[2], nv + te[0], nv + te[1], nv + te[2]};
    for (int k = 0; k < 6; ++k)
      if (node_elem_[elem_nodes_[t][k]] < 0) node_elem_[elem_nodes_[t][k]] = t;
  }

  node_tags_.assign(nv + ne, 0u);
  for (const auto& be : m.boundary()) {
    const unsigned b = bit(be.tag);
    node_tags_[m.edges()[be.edge][0]] |= b;
    node_tags_[m.edges()[be.edge][1]] |= b;
    node_tags_[nv + be.edge] |= b;
  }
}

double P2Space::eval(const Vector& field, int offset, const MeshPoint& mp) const {
  const auto phi = p2_values(mp.bary);
  const auto& nodes = elem_nodes_[mp.element];
  double s = 0.0;
  for (int k = 0; k < 6; ++k) s += phi[k] * field[offset + nodes[k]];
  return s;
}

Eigen::Vector2d P2Space::grad(const Vector& field, int offset, int t, const std::array<double, 3>& bary) const {
  const auto g = geometry(*mesh_, t);
  const auto b = p2_basis(bary, g.grad_lambda);
  const auto& nodes = elem_nodes_[t];
  Vec2 s = Vec2::Zero();
  for (int k = 0; k < 6; ++k) s += field[offset + nodes[k]] * b.grad[k];
  return s;
}

FieldState FieldState::at_rest(const P2Space& space, const JsParams& params) {
  FieldState s;
  s.u = Vector::Zero(2 * space.num_nodes());
  s.p = Vector::Zero(space.num_vertices());
  s.c.assign(space.num_vertices(), tensor::equilibrium_conformation(params));
  return s;
}

// ---------------------------------------------------------------------------
// MomentumOperator

struct MomentumOperator::Factorization {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  Eigen::SimplicialLDLT<SparseMatrix> p1_mass;  // only for consistent gradient recovery
};

MomentumOperator::~MomentumOperator() = default;
MomentumOperator::MomentumOperator(MomentumOperator&&) noexcept = default;
MomentumOperator& MomentumOperator::operator=(MomentumOperator&&) noexcept = default;

MomentumOperator::MomentumOperator(const P2Space& space, const JsParams& params, double h_t,
                                   GradientRecovery recovery)
    : space_(&space), params_(params), h_t_(h_t), recovery_(recovery) {
  if (!(params.Re >= 0.0)) throw InvalidParameter("Re must be non-negative");
  if (!(params.mu_s > 0.0)) throw InvalidParameter("mu_s must be positive");
  if (!(h_t > 0.0)) throw InvalidParameter("time step must be positive");

  const TriMesh& m = space.mesh();
  const int N = space.num_nodes(), V = space.num_vertices(), nt = m.num_triangles();
  const int n = 2 * N + V;
  const double mass_coef = params.Re / h_t, mu = params.mu_s;

  std::vector<Eigen::Triplet<double>> sys, mass, conf, p1mass;
  std::array<std::vector<Eigen::Triplet<double>>, 5> gp;
  sys.reserve(size_t(nt) * (2 * 36 + 4 * 18));
  mass.reserve(size_t(nt) * 36);
  conf.reserve(size_t(nt) * 5 * 18);
  for (auto& g : gp) g.reserve(size_t(nt) * 18);
  Vector lumped = Vector::Zero(V);

  for (int t = 0; t < nt; ++t) {
    const auto g = geometry(m, t);
    const auto& nodes = space.element_nodes(t);
    const auto& tri = m.triangles()[t];
    double K[6][6] = {}, M[6][6] = {}, H[6][6] = {};
    double Br[3][6] = {}, Bz[3][6] = {};
    double Cr_rr[6][3] = {}, Cr_rz[6][3] = {}, Cr_tt[6][3] = {}, Cz_rz[6][3] = {}, Cz_zz[6][3] = {};
    double Gr[3][6] = {}, Gz[3][6] = {}, Gh[3][6] = {};
    double lump[3] = {}, p1m[3][3] = {};
    for (const auto& q : detail::kTriQuad4) {
      const std::array<double, 3> l{q.l0, q.l1, q.l2};
      const double r = l[0] * g.x[0].x() + l[1] * g.x[1].x() + l[2] * g.x[2].x();
      const double w = q.w * g.area;
      const auto b = p2_basis(l, g.grad_lambda);
      for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
          K[i][j] += w * r * b.grad[i].dot(b.grad[j]);
          M[i][j] += w * r * b.phi[i] * b.phi[j];
          H[i][j] += w * b.phi[i] * b.phi[j] / r;
        }
      }
      for (int v = 0; v < 3; ++v) {
        const double psi = l[v];
        lump[v] += w * r * psi;
        for (int u = 0; u < 3; ++u) p1m[v][u] += w * r * psi * l[u];
        for (int j = 0; j < 6; ++j) {
          Br[v][j] -= w * psi * (r * b.grad[j].x() + b.phi[j]);
          Bz[v][j] -= w * psi * r * b.grad[j].y();
          Cr_rr[j][v] -= w * r * psi * b.grad[j].x();
          Cr_rz[j][v] -= w * r * psi * b.grad[j].y();
          Cr_tt[j][v] -= w * psi * b.phi[j];
          Cz_rz[j][v] -= w * r * psi * b.grad[j].x();
          Cz_zz[j][v] -= w * r * psi * b.grad[j].y();
          Gr[v][j] += w * r * psi * b.grad[j].x();
          Gz[v][j] += w * r * psi * b.grad[j].y();
          Gh[v][j] += w * psi * b.phi[j];
        }
      }
    }
    for (int i = 0; i < 6; ++i) {
      const int I = nodes[i];
      for (int j = 0; j < 6; ++j) {
        const int J = nodes[j];
        sys.emplace_back(I, J, mass_coef * M[i][j] + mu * (K[i][j] + H[i][j]));
        sys.emplace_back(N + I, N + J, mass_coef * M[i][j] + mu * K[i][j]);
        mass.emplace_back(I, J, M[i][j]);
      }
    }
    for (int v = 0; v < 3; ++v) {
      const int P = 2 * N + tri[v];
      for (int j = 0; j < 6; ++j) {
        const int J = nodes[j];
        sys.emplace_back(P, J, Br[v][j]);
        sys.emplace_back(J, P, Br[v][j]);
        sys.emplace_back(P, N + J, Bz[v][j]);
        sys.emplace_back(N + J, P, Bz[v][j]);
        conf.emplace_back(J, tri[v], Cr_rr[j][v]);
        conf.emplace_back(J, V + tri[v], Cr_rz[j][v]);
        conf.emplace_back(J, 3 * V + tri[v], Cr_tt[j][v]);
        conf.emplace_back(N + J, V + tri[v], Cz_rz[j][v]);
        conf.emplace_back(N + J, 2 * V + tri[v], Cz_zz[j][v]);
        gp[0].emplace_back(tri[v], J, Gr[v][j]);
        gp[1].emplace_back(tri[v], J, Gz[v][j]);
        gp[4].emplace_back(tri[v], J, Gh[v][j]);
      }
      lumped[tri[v]] += lump[v];
      for (int u = 0; u < 3; ++u) p1mass.emplace_back(tri[v], tri[u], p1m[v][u]);
    }
  }
  // Both velocity components share the scalar gradient operators.
  gp[2] = gp[0];
  gp[3] = gp[1];

  system_.resize(n, n);
  system_.setFromTriplets(sys.begin(), sys.end());
  mass_.resize(N, N);
  mass_.setFromTriplets(mass.begin(), mass.end());
  conf_load_.resize(2 * N, 4 * V);
  conf_load_.setFromTriplets(conf.begin(), conf.end());
  for (int k = 0; k < 5; ++k) {
    grad_proj_[k].resize(V, N);
    grad_proj_[k].setFromTriplets(gp[k].begin(), gp[k].end());
    if (recovery == GradientRecovery::Lumped) grad_proj_[k] = lumped.cwiseInverse().asDiagonal() * grad_proj_[k];
  }
  pressure_weight_ = lumped / lumped.sum();

  // Dirichlet classification.
  is_dirichlet_.assign(2 * N, 0);
  for (int i = 0; i < N; ++i) {
    const unsigned tags = space.node_tags(i);
    if (tags & kFullDirichlet) {
      is_dirichlet_[i] = is_dirichlet_[N + i] = 1;
    } else if (tags & bit(BoundaryTag::Axis)) {
      is_dirichlet_[i] = 1;
    }
  }
  pinned_pressure_ = 2 * N;
  global_to_free_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    const bool fixed = (i < 2 * N) ? is_dirichlet_[i] != 0 : i == pinned_pressure_;
    if (fixed) {
      fixed_.push_back(i);
    } else {
      global_to_free_[i] = int(free_.size());
      free_.push_back(i);
    }
  }
  std::vector<int> global_to_fixed(n, -1);
  for (size_t k = 0; k < fixed_.size(); ++k) global_to_fixed[fixed_[k]] = int(k);

  std::vector<Eigen::Triplet<double>> ff, fd;
  for (int col = 0; col < n; ++col) {
    for (SparseMatrix::InnerIterator it(system_, col); it; ++it) {
      const int row = int(it.row());
      const int fr = global_to_free_[row];
      if (fr < 0) continue;
      if (global_to_free_[col] >= 0)
        ff.emplace_back(fr, global_to_free_[col], it.value());
      else
        fd.emplace_back(fr, global_to_fixed[col], it.value());
    }
  }
  free_free_.resize(int(free_.size()), int(free_.size()));
  free_free_.setFromTriplets(ff.begin(), ff.end());
  free_fixed_.resize(int(free_.size()), int(fixed_.size()));
  free_fixed_.setFromTriplets(fd.begin(), fd.end());

  divergence_ = system_.bottomLeftCorner(V, 2 * N);

  lu_ = std::make_unique<Factorization>();
  if (recovery == GradientRecovery::Consistent) {
    SparseMatrix mp(V, V);
    mp.setFromTriplets(p1mass.begin(), p1mass.end());
    lu_->p1_mass.compute(mp);
    if (lu_->p1_mass.info() != Eigen::Success) throw SolverError("P1 mass matrix factorization failed");
  }
  lu_->lu.compute(free_free_);
  if (lu_->lu.info() != Eigen::Success)
    throw SolverError("factorization of the momentum operator failed (singular system?): " + lu_->lu.lastErrorMessage());
}

Vector MomentumOperator::load(const std::function<Vec2(const Vec2&)>& f) const {
  const TriMesh& m = space_->mesh();
  const int N = space_->num_nodes();
  Vector b = Vector::Zero(2 * N);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto g = geometry(m, t);
    const auto& nodes = space_->element_nodes(t);
    for (const auto& q : detail::kTriQuad4) {
      const std::array<double, 3> l{q.l0, q.l1, q.l2};
      const Vec2 x = l[0] * g.x[0] + l[1] * g.x[1] + l[2] * g.x[2];
      const double w = q.w * g.area * x.x();
      const Vec2 fx = f(x);
      const auto phi = p2_values(l);
      for (int i = 0; i < 6; ++i) {
        b[nodes[i]] += w * fx.x() * phi[i];
        b[N + nodes[i]] += w * fx.y() * phi[i];
      }
    }
  }
  return b;
}

Vector MomentumOperator::conformation_load(const std::vector<AxiTensor>& c) const {
  const int V = space_->num_vertices();
  if (int(c.size()) != V) throw InvalidParameter("conformation field has the wrong size");
  Vector cv(4 * V);
  for (int v = 0; v < V; ++v) {
    cv[v] = c[v].rr();
    cv[V + v] = c[v].rz();
    cv[2 * V + v] = c[v].zz();
    cv[3 * V + v] = c[v].tt;
  }
  return conf_load_ * cv;
}

MomentumSolution MomentumOperator::solve(const Vector& rhs, const DirichletFn& dirichlet) const {
  const int N = space_->num_nodes(), V = space_->num_vertices();
  if (rhs.size() != 2 * N) throw InvalidParameter("momentum right-hand side has the wrong size");

  Vector xd(int(fixed_.size()));
  for (size_t k = 0; k < fixed_.size(); ++k) {
    const int g = fixed_[k];
    if (g >= 2 * N) {
      xd[k] = 0.0;
      continue;
    }
    const int node = g < N ? g : g - N;
    const Vec2 val = dirichlet(space_->node(node), space_->node_tags(node));
    xd[k] = g < N ? val.x() : val.y();
  }

  Vector bf(int(free_.size()));
  for (size_t k = 0; k < free_.size(); ++k) bf[k] = free_[k] < 2 * N ? rhs[free_[k]] : 0.0;
  bf -= free_fixed_ * xd;

  Vector xf = Vector::Zero(bf.size());
  const double bnorm = bf.norm();
  double rel = 0.0;
  if (bnorm > 0.0) {
    xf = lu_->lu.solve(bf);
    Vector res = bf - free_free_ * xf;
    rel = res.norm() / bnorm;
    for (int it = 0; it < 3 && rel > 1e-12; ++it) {
      xf += lu_->lu.solve(res);
      res = bf - free_free_ * xf;
      rel = res.norm() / bnorm;
    }
    if (!std::isfinite(rel) || rel > 1e-8) {
      std::ostringstream msg;
      msg << "momentum solve did not converge: relative residual " << rel;
      throw SolverError(msg.str());
    }
  }

  Vector x(2 * N + V);
  for (size_t k = 0; k < free_.size(); ++k) x[free_[k]] = xf[k];
  for (size_t k = 0; k < fixed_.size(); ++k) x[fixed_[k]] = xd[k];

  MomentumSolution sol;
  sol.u = x.head(2 * N);
  sol.p = x.tail(V);
  sol.p.array() -= pressure_weight_.dot(sol.p);
  sol.relative_residual = rel;
  return sol;
}

std::vector<VelGrad> MomentumOperator::nodal_gradients(const Vector& u) const {
  const int N = space_->num_nodes(), V = space_->num_vertices();
  const Vector ur = u.head(N), uz = u.tail(N);
  const auto project = [&](int k, const Vector& x) -> Vector {
    if (recovery_ == GradientRecovery::Lumped) return grad_proj_[k] * x;
    return lu_->p1_mass.solve(grad_proj_[k] * x);
  };
  const Vector drr = project(0, ur), dzr = project(1, ur);
  const Vector drz = project(2, uz), dzz = project(3, uz);
  const Vector hoop = project(4, ur);
  std::vector<VelGrad> out(V);
  for (int v = 0; v < V; ++v) {
    out[v].grad << drr[v], dzr[v], drz[v], dzz[v];
    out[v].hoop = hoop[v];
    // Regularity on the axis: the patch average only sees r > 0, so impose
    // du_r/dz = du_z/dr = 0 and u_r/r = du_r/dr (keeping their sum).
    if (space_->node_tags(v) & bit(BoundaryTag::Axis)) {
      const double radial = 0.5 * (drr[v] + hoop[v]);
      out[v].grad << radial, 0.0, 0.0, dzz[v];
      out[v].hoop = radial;
    }
  }
  return out;
}

MomentumOperator assemble_momentum_operator(const P2Space& space, const JsParams& params, double h_t,
                                            GradientRecovery recovery) {
  return MomentumOperator(space, params, h_t, recovery);
}

// ---------------------------------------------------------------------------
// Time-step pieces

std::vector<MeshPoint> backtrack_feet(const P2Space& space, const Vector& u_old, double h_t) {
  const TriMesh& m = space.mesh();
  const int N = space.num_nodes();
  if (u_old.size() != 2 * N) throw InvalidParameter("velocity field has the wrong size");
  std::vector<MeshPoint> feet(N);
  parallel_for(N, [&](int i) {
    const Vec2& X = space.node(i);
    const Vec2 w(u_old[i], u_old[N + i]);
    const int hint = space.node_element(i);
    if (w.x() == 0.0 && w.y() == 0.0) {
      feet[i] = m.locate_or_project(X, hint);
      return;
    }
    const MeshPoint mid = m.locate_or_project(X - 0.5 * h_t * w, hint);
    const Vec2 wm(space.eval(u_old, 0, mid), space.eval(u_old, N, mid));
    feet[i] = m.locate_or_project(X - h_t * wm, mid.element);
  });
  return feet;
}

FootValues interpolate_at_feet(const P2Space& space, const FieldState& old, const std::vector<MeshPoint>& feet) {
  const TriMesh& m = space.mesh();
  const int N = space.num_nodes(), V = space.num_vertices();
  if (int(feet.size()) != N) throw InvalidParameter("one foot per velocity node is required");
  FootValues fv;
  fv.u.resize(2 * N);
  fv.c.resize(V);
  parallel_for(N, [&](int i) {
    fv.u[i] = space.eval(old.u, 0, feet[i]);
    fv.u[N + i] = space.eval(old.u, N, feet[i]);
    if (i >= V) return;
    const auto& tri = m.triangles()[feet[i].element];
    const auto& l = feet[i].bary;
    AxiTensor c{};
    for (int k = 0; k < 3; ++k) {
      const AxiTensor& ck = old.c[tri[k]];
      c.plane.xx += l[k] * ck.plane.xx;
      c.plane.xy += l[k] * ck.plane.xy;
      c.plane.yy += l[k] * ck.plane.yy;
      c.tt += l[k] * ck.tt;
    }
    fv.c[i] = c;
  });
  return fv;
}

MomentumSolution solve_momentum_step(const MomentumOperator& op, const FieldState& old, const FootValues& foot,
                                     double dU_old, double U_wall) {
  const int N = op.space().num_nodes();
  const JsParams& p = op.params();
  const double coef = p.Re / op.time_step();
  Vector rhs(2 * N);
  rhs.head(N) = coef * (op.mass() * foot.u.head(N));
  rhs.tail(N) = coef * (op.mass() * foot.u.tail(N)) + (p.Re * dU_old) * (op.mass() * Vector::Ones(N));
  rhs += op.conformation_load(old.c);
  return op.solve(rhs, [U_wall](const Vec2&, unsigned tags) -> Vec2 {
    if (tags & bit(BoundaryTag::Sphere)) return Vec2::Zero();
    if (tags & kFullDirichlet) return Vec2(0.0, U_wall);
    return Vec2::Zero();
  });
}

std::vector<AxiTensor> advance_conformation_field(const MomentumOperator& op, const Vector& u_new,
                                                  const FootValues& foot, const JsParams& params, double h_t) {
  const auto L = op.nodal_gradients(u_new);
  const int V = int(L.size());
  std::vector<AxiTensor> c(V);
  parallel_for(V, [&](int v) {
    try {
      c[v] = tensor::lyapunov_step(foot.c[v], L[v], params, h_t);
    } catch (const PositivityLoss& e) {
      const Vec2& x = op.space().node(v);
      std::ostringstream msg;
      msg << e.what() << " at vertex " << v << " (r=" << x.x() << ", z=" << x.y() << ")";
      throw PositivityLoss(msg.str());
    } catch (const StepTooLarge& e) {
      const Vec2& x = op.space().node(v);
      std::ostringstream msg;
      msg << e.what() << " at vertex " << v << " (r=" << x.x() << ", z=" << x.y() << ")";
      throw StepTooLarge(msg.str());
    }
  });
  return c;
}

double min_eigenvalue(const std::vector<AxiTensor>& c) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& t : c) m = std::min(m, tensor::min_eigenvalue(t));
  return m;
}

double divergence_residual(const MomentumOperator& op, const Vector& u) {
  return (op.divergence() * u).norm();
}

void write_vtk(std::ostream& os, const P2Space& space, const FieldState& s) {
  const TriMesh& m = space.mesh();
  const int V = m.num_vertices(), T = m.num_triangles(), N = space.num_nodes();
  os.precision(10);
  os << "# vtk DataFile Version 3.0\njsflow fields t=" << s.t << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << V << " double\n";
  for (const auto& x : m.vertices()) os << x.x() << ' ' << x.y() << " 0\n";
  os << "CELLS " << T << ' ' << 4 * T << '\n';
  for (const auto& t : m.triangles()) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "CELL_TYPES " << T << '\n';
  for (int t = 0; t < T; ++t) os << "5\n";
  os << "POINT_DATA " << V << '\n';
  os << "VECTORS velocity double\n";
  for (int v = 0; v < V; ++v) os << s.u[v] << ' ' << s.u[N + v] << " 0\n";
  auto scalar = [&](const char* name, auto&& f) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < V; ++v) os << f(v) << '\n';
  };
  scalar("pressure", [&](int v) { return s.p[v]; });
  scalar("c_rr", [&](int v) { return s.c[v].rr(); });
  scalar("c_rz", [&](int v) { return s.c[v].rz(); });
  scalar("c_zz", [&](int v) { return s.c[v].zz(); });
  scalar("c_tt", [&](int v) { return s.c[v].tt; });
  scalar("min_eig_c", [&](int v) { return tensor::min_eigenvalue(s.c[v]); });
}

}  // namespace jsflow::fem
