#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "jsflow/rheology.hpp"
#include "jsflow/tensor.hpp"

using namespace jsflow;
using namespace jsflow::tensor;

namespace {

Mat2 random_spd(std::mt19937_64& rng, double max_cond) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double th = 2.0 * M_PI * U(rng);
  const double l1 = std::exp(std::log(0.1) + std::log(100.0) * U(rng));
  const double l2 = l1 * std::exp(std::log(max_cond) * U(rng));
  Mat2 Q;
  Q << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return Q * Eigen::Vector2d(l1, l2).asDiagonal() * Q.transpose();
}

Eigen::Matrix4d kron(const Mat2& a, const Mat2& b) {
  Eigen::Matrix4d k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

// Kronecker-product solve of A X + X A^T = C; independent of the 3x3 elimination.
Mat2 kron_lyapunov(const Mat2& A, const Mat2& C) {
  const Eigen::Matrix4d K = kron(Mat2::Identity(), A) + kron(A, Mat2::Identity());
  Eigen::Vector4d rhs(C(0, 0), C(1, 0), C(0, 1), C(1, 1));
  Eigen::Vector4d x = K.fullPivLu().solve(rhs);
  Mat2 X;
  X << x(0), x(2), x(1), x(3);
  return X;
}

double residual(const Mat2& A, const Mat2& X, const Mat2& C) {
  return (A * X + X * A.transpose() - C).norm();
}

}  // namespace


TEST_CASE("gs_rotation") {
  VelGrad zero;
  CHECK(gs_rotation(zero, 0.3).plane.isZero());

  VelGrad L;
  L.grad << 0.3, -1.2, 0.7, -0.3;
  L.hoop = 0.4;
  const auto ob = gs_rotation(L, 1.0);
  CHECK((ob.plane - L.grad).norm() == 0.0);
  CHECK(ob.tt == doctest::Approx(0.4));

  VelGrad shear;
  shear.grad(0, 1) = 2.0;
  const auto r = gs_rotation(shear, 0.3);
  CHECK(r.plane(0, 1) == doctest::Approx(0.65 * 2.0));
  CHECK(r.plane(1, 0) == doctest::Approx(-0.35 * 2.0));

  const double a = 0.37;
  const auto rr = gs_rotation(L, a);
  CHECK(((rr.plane + rr.plane.transpose()) - a * (L.grad + L.grad.transpose())).norm() < 1e-15);
}

TEST_CASE("equilibrium_conformation") {
  const auto c = equilibrium_conformation(JsParams::from_a(0.0, 0.45, 0.03, 0.3));
  CHECK(c.rr() == doctest::Approx(0.97 / 0.135));
  CHECK(c.rr() == doctest::Approx(7.185).epsilon(1e-3));
  CHECK(c.rz() == 0.0);
  CHECK(c.tt == c.zz());
  const auto one = equilibrium_conformation(JsParams::from_a(0.0, 0.5, 0.5, 1.0));
  CHECK(one.rr() == doctest::Approx(1.0));
  CHECK(one.tt == doctest::Approx(1.0));

  JsParams bad{0.0, 0.45, 0.03, 1.0, 1.0};
  CHECK_THROWS_AS((void)equilibrium_conformation(bad), InvalidParameter);

  const auto p = JsParams::from_a(0.0, 0.45, 0.03, 0.3);
  const auto tau = stress_from_conformation(equilibrium_conformation(p), p);
  CHECK(tau.rr() == 0.0);
  CHECK(tau.rz() == 0.0);
  CHECK(tau.zz() == 0.0);
  CHECK(tau.tt == 0.0);
}

TEST_CASE("equilibrium is a fixed point of the step") {
  const auto p = JsParams::from_a(0.0325, 0.45, 0.03, 0.3);
  const auto eq = equilibrium_conformation(p);
  for (double h : {1e-4, 1e-3, 0.1, 10.0}) {
    const auto c = lyapunov_step(eq, VelGrad{}, p, h);
    CHECK(c.rr() == doctest::Approx(eq.rr()).epsilon(1e-14));
    CHECK(std::abs(c.rz()) < 1e-14);
    CHECK(c.tt == doctest::Approx(eq.tt).epsilon(1e-14));
  }
}

TEST_CASE("lyapunov residual and SPD on random inputs") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto p = JsParams::from_a(0.0325, 0.2 + 0.5 * (U(rng) + 1.0), 0.03, 0.2 + 0.4 * (U(rng) + 1.0));
    AxiTensor foot{SymTensor2::from_matrix(random_spd(rng, 1e4)), 0.5 + U(rng) * 0.4};
    VelGrad L;
    L.grad << 5 * U(rng), 5 * U(rng), 5 * U(rng), 5 * U(rng);
    L.hoop = 5 * U(rng);
    const double h = 1e-3;
    const auto c = lyapunov_step(foot, L, p, h);
    const Mat2 A = 0.5 * (1.0 + p.Wi / h) * Mat2::Identity() - p.Wi * gs_rotation(L, p.a()).plane;
    Mat2 C = p.equilibrium_value() * Mat2::Identity() + (p.Wi / h) * foot.plane.matrix();
    CHECK(residual(A, c.plane.matrix(), C) <= 1e-12 * C.norm());
    CHECK(c.is_spd());
    CHECK(min_eigenvalue(c) > 0.0);
  }
}

TEST_CASE("Oldroyd-B step matches an independent Kronecker solve") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = JsParams::from_a(0.0, 0.5, 0.4, 1.0);
    const double h = 1e-3;
    Mat2 foot = random_spd(rng, 100.0);
    VelGrad L;
    L.grad << 3 * U(rng), 3 * U(rng), 3 * U(rng), 3 * U(rng);
    const auto c = lyapunov_step_plane(SymTensor2::from_matrix(foot), L.grad, p, h);
    const Mat2 A = 0.5 * (1.0 + p.Wi / h) * Mat2::Identity() - p.Wi * L.grad;
    const Mat2 C = p.equilibrium_value() * Mat2::Identity() + (p.Wi / h) * foot;
    const Mat2 ref = kron_lyapunov(A, C);
    CHECK((c.matrix() - ref).norm() <= 1e-14 * ref.norm());
  }
}

TEST_CASE("homogeneous shear fixed point reproduces the steady curve") {
  for (double xi : {0.0, 0.5, 0.7}) {
    JsParams p{0.0, 0.45, 0.03, xi, 1.0};
    for (double kappa : {0.1, 1.0, 5.0, 20.0}) {
      Mat2 L = Mat2::Zero();
      L(0, 1) = kappa;
      SymTensor2 c = equilibrium_conformation(p).plane;
      for (int it = 0; it < 100000; ++it) {
        const auto next = lyapunov_step_plane(c, L, p, 0.05);
        const double change = std::abs(next.xx - c.xx) + std::abs(next.xy - c.xy) + std::abs(next.yy - c.yy);
        c = next;
        if (change < 1e-13) break;
      }
      const double expected = p.mu_p() * kappa / (1.0 + xi * (2.0 - xi) * p.Wi * p.Wi * kappa * kappa);
      CHECK(c.xy == doctest::Approx(expected).epsilon(1e-10));
      CHECK(p.mu_s * kappa + c.xy == doctest::Approx(rheology::shear_stress(p, kappa)).epsilon(1e-10));
    }
  }
}

TEST_CASE("relaxation to equilibrium from a random SPD start") {
  std::mt19937_64 rng(9);
  const auto p = JsParams::from_a(0.0, 0.45, 0.03, 0.3);
  const auto eq = equilibrium_conformation(p);
  AxiTensor c{SymTensor2::from_matrix(random_spd(rng, 1e3)), 3.0};
  double prev = 1e300;
  for (int n = 0; n < 400; ++n) {
    c = lyapunov_step(c, VelGrad{}, p, 0.05);
    const double err = std::abs(c.rr() - eq.rr()) + std::abs(c.rz()) + std::abs(c.zz() - eq.zz()) +
                       std::abs(c.tt - eq.tt);
    CHECK(err <= prev);
    prev = err;
  }
  CHECK(prev < 1e-10);
}

TEST_CASE("min_eigenvalue") {
  CHECK(min_eigenvalue(AxiTensor::identity()) == doctest::Approx(1.0));
  CHECK(min_eigenvalue(AxiTensor{{2.0, 0.0, 0.5}, 3.0}) == doctest::Approx(0.5));
  CHECK(min_eigenvalue(AxiTensor{{1.0, 1.0, 1.0}, 1.0}) == doctest::Approx(0.0));
  CHECK(min_eigenvalue(AxiTensor{{4.0, 0.0, 5.0}, -1.0}) == -1.0);
}

TEST_CASE("stress_from_conformation passes shear through") {
  const auto p = JsParams::from_a(0.0, 0.45, 0.03, 0.3);
  const AxiTensor c{{9.0, 1.25, 8.0}, 7.0};
  const auto t = stress_from_conformation(c, p);
  CHECK(t.rz() == 1.25);
  CHECK(t.rr() == doctest::Approx(9.0 - p.equilibrium_value()));
}

TEST_CASE("step errors") {
  const auto p = JsParams::from_a(0.0, 1.0, 0.1, 0.5);
  CHECK_THROWS_AS((void)lyapunov_step(AxiTensor::identity(), VelGrad{}, p, 0.0), InvalidParameter);
  // Large stretching with a huge step drives the symmetric part of A indefinite.
  VelGrad L;
  L.grad << 50.0, 0.0, 0.0, -50.0;
  CHECK_THROWS_AS((void)lyapunov_step(AxiTensor::identity(), L, p, 10.0), Error);
}
