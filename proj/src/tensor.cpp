#include "jsflow/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace jsflow::tensor {

double SymTensor2::frobenius_norm() const {
  return std::sqrt(xx * xx + 2.0 * xy * xy + yy * yy);
}

bool AxiTensor::is_spd() const {
  return plane.xx > 0.0 && plane.yy > 0.0 && plane.determinant() > 0.0 && tt > 0.0;
}

Rotation gs_rotation(const VelGrad& L, double a) {
  Rotation r;
  r.plane = 0.5 * ((a + 1.0) * L.grad + (a - 1.0) * L.grad.transpose());
  r.tt = a * L.hoop;
  return r;
}

AxiTensor equilibrium_conformation(const JsParams& p) {
  if (!(p.a() > 0.0)) throw InvalidParameter("equilibrium_conformation: slip coefficient a must be > 0");
  if (!(p.Wi > 0.0)) throw InvalidParameter("equilibrium_conformation: Wi must be > 0");
  return AxiTensor::identity(p.equilibrium_value());
}

SymTensor2 solve_lyapunov(const Mat2& A, const SymTensor2& C) {
  // Rows: (1,1), (1,2), (2,2) components of A X + X A^T.
  std::array<std::array<double, 4>, 3> m{{
      {2.0 * A(0, 0), 2.0 * A(0, 1), 0.0, C.xx},
      {A(1, 0), A(0, 0) + A(1, 1), A(0, 1), C.xy},
      {0.0, 2.0 * A(1, 0), 2.0 * A(1, 1), C.yy},
  }};
  const double scale = std::max({std::abs(A(0, 0)), std::abs(A(0, 1)), std::abs(A(1, 0)),
                                 std::abs(A(1, 1)), 1e-300});
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int row = col + 1; row < 3; ++row)
      if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
    if (std::abs(m[piv][col]) <= 1e-14 * scale) {
      throw StepTooLarge("lyapunov: singular system (A and -A^T share an eigenvalue); reduce h_t");
    }
    std::swap(m[col], m[piv]);
    for (int row = col + 1; row < 3; ++row) {
      const double f = m[row][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[row][k] -= f * m[col][k];
    }
  }
  std::array<double, 3> x{};
  for (int row = 2; row >= 0; --row) {
    double s = m[row][3];
    for (int k = row + 1; k < 3; ++k) s -= m[row][k] * x[k];
    x[row] = s / m[row][row];
  }
  return {x[0], x[1], x[2]};
}

namespace {

Mat2 lyapunov_matrix(const Mat2& R, const JsParams& p, double h_t) {
  return 0.5 * (1.0 + p.Wi / h_t) * Mat2::Identity() - p.Wi * R;
}

SymTensor2 lyapunov_rhs(const SymTensor2& c_foot, const JsParams& p, double h_t) {
  const double k = p.equilibrium_value();
  const double w = p.Wi / h_t;
  return {k + w * c_foot.xx, w * c_foot.xy, k + w * c_foot.yy};
}

[[noreturn]] void positivity_loss(const SymTensor2& c, const char* extra = "") {
  std::ostringstream os;
  os << "lyapunov: conformation lost positive definiteness (xx=" << c.xx << ", xy=" << c.xy
     << ", yy=" << c.yy << extra << ")";
  throw PositivityLoss(os.str());
}

}  // namespace

SymTensor2 lyapunov_step_plane(const SymTensor2& c_foot, const Mat2& L_new, const JsParams& p,
                               double h_t) {
  if (!(h_t > 0.0)) throw InvalidParameter("lyapunov_step: h_t must be > 0");
  VelGrad L;
  L.grad = L_new;
  const Rotation R = gs_rotation(L, p.a());
  const SymTensor2 c = solve_lyapunov(lyapunov_matrix(R.plane, p, h_t), lyapunov_rhs(c_foot, p, h_t));
  if (!(c.xx > 0.0 && c.yy > 0.0 && c.determinant() > 0.0)) positivity_loss(c);
  return c;
}

AxiTensor lyapunov_step(const AxiTensor& c_foot, const VelGrad& L_new, const JsParams& p,
                        double h_t) {
  if (!(h_t > 0.0)) throw InvalidParameter("lyapunov_step: h_t must be > 0");
  const Rotation R = gs_rotation(L_new, p.a());
  AxiTensor out;
  out.plane = solve_lyapunov(lyapunov_matrix(R.plane, p, h_t), lyapunov_rhs(c_foot.plane, p, h_t));

  const double a_tt = 0.5 * (1.0 + p.Wi / h_t) - p.Wi * R.tt;
  if (a_tt == 0.0) throw StepTooLarge("lyapunov: singular hoop equation; reduce h_t");
  out.tt = (p.equilibrium_value() + (p.Wi / h_t) * c_foot.tt) / (2.0 * a_tt);

  if (!out.is_spd()) positivity_loss(out.plane, out.tt > 0.0 ? "" : ", tt <= 0");
  return out;
}

AxiTensor stress_from_conformation(const AxiTensor& c, const JsParams& p) {
  const double k = p.equilibrium_value();
  return {{c.plane.xx - k, c.plane.xy, c.plane.yy - k}, c.tt - k};
}

double min_eigenvalue(const SymTensor2& c) {
  const double mean = 0.5 * (c.xx + c.yy);
  const double half_diff = 0.5 * (c.xx - c.yy);
  return mean - std::hypot(half_diff, c.xy);
}

double min_eigenvalue(const AxiTensor& c) { return std::min(min_eigenvalue(c.plane), c.tt); }

}  // namespace jsflow::tensor
