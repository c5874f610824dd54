// Property acceptance suite: rheology, constitutive kernel, channel banding, FEM order.
#include <algorithm>
#include <cmath>
#include <random>

#include "acceptance.hpp"
#include "jsflow/rheology.hpp"
#include "jsflow/shear1d.hpp"
#include "jsflow/tensor.hpp"
#include "mms.hpp"
#include "oracles.hpp"

using namespace jsflow;
using acceptance::fmt;

namespace {

// Tolerances.
constexpr int kRheologyDraws = 1000;
constexpr long kScanSamples = 200000;
constexpr double kInvariantTol = 1e-8;
constexpr int kLyapunovTrials = 10000;
constexpr double kLyapunovResidualTol = 1e-12;
constexpr double kMaxGradNorm = 5.0;
constexpr double kFixedPointTol = 1e-8;
constexpr double kStressUniformTol = 1e-6;
constexpr double kBandRateTol = 1e-2;
constexpr double kMinOrder = 2.0;

std::pair<bool, std::string> rheology_criterion() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int disagree_scan = 0, disagree_rule = 0, non_monotone = 0;
  for (int k = 0; k < kRheologyDraws; ++k) {
    const double q = k % 2 == 0 ? 1.0 : 0.5 + 8.5 * U(rng);
    // mu_s straddles the threshold 1/(1+8q) on both sides.
    const double threshold = 1.0 / (1.0 + 8.0 * q);
    const double mu_s = threshold * std::exp(std::log(4.0) * (2.0 * U(rng) - 1.0));
    const double xi = k % 10 == 0 ? 0.0 : 0.02 + 0.96 * U(rng);
    const JsParams p{0.0, 0.1 + 2.0 * U(rng), std::min(mu_s, 0.95), xi, q};
    const double s = std::max(p.xi * (2.0 - p.xi), 1e-12);
    const double kc = std::sqrt(p.q / s) / p.Wi;
    const auto scan = oracle::scan(p.Wi, p.mu_s, p.xi, p.q, 1e-4 * kc, 1e4 * kc, kScanSamples);
    const bool nm = rheology::classify_curve(p).non_monotone();
    non_monotone += nm;
    disagree_scan += nm != scan.decreasing_somewhere;
    disagree_rule += nm != (p.mu_s < 1.0 / (1.0 + 8.0 * p.q) && p.xi > 0.0);
  }

  // Extrema across xi for the reference non-monotone fluid.
  JsParams ref_fluid{0.0, 0.45, 0.03, 0.1, 1.0};
  const auto e0 = *rheology::classify_curve(ref_fluid).extrema;
  const double invariant = e0.kappa_max * std::sqrt(0.1 * 1.9);
  double spread = 0.0, prev_k = e0.kappa_max, prev_t = e0.tau_max;
  bool decreasing = true;
  for (int i = 2; i <= 8; ++i) {
    ref_fluid.xi = 0.1 * i;
    const auto e = *rheology::classify_curve(ref_fluid).extrema;
    spread = std::max(spread, std::abs(e.kappa_max * std::sqrt(ref_fluid.xi * (2.0 - ref_fluid.xi)) / invariant - 1.0));
    decreasing &= e.kappa_max < prev_k && e.tau_max < prev_t;
    prev_k = e.kappa_max;
    prev_t = e.tau_max;
  }
  const bool pass = disagree_scan == 0 && disagree_rule == 0 && spread <= kInvariantTol && decreasing;
  return {pass, fmt("%d draws (%d non-monotone), %d disagree with brute force, %d with the mu_s rule; "
                    "kappa_max*sqrt(xi(2-xi)) relative spread %.2e; kappa_max and tau_max decreasing in xi: %s",
                    kRheologyDraws, non_monotone, disagree_scan, disagree_rule, spread, decreasing ? "yes" : "no")};
}

std::pair<bool, std::string> spd_preservation() {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double h = 1e-3;
  double worst = 0.0, min_eig = 1e300;
  int bad = 0;
  for (int k = 0; k < kLyapunovTrials; ++k) {
    const auto p = JsParams::from_a(0.0325, 0.2 + 0.8 * std::abs(U(rng)), 0.01 + 0.5 * std::abs(U(rng)),
                                    0.05 + 0.9 * std::abs(U(rng)));
    // Random SPD foot.
    const double th = M_PI * U(rng), l1 = std::exp(3.0 * U(rng)), l2 = std::exp(3.0 * U(rng));
    tensor::Mat2 Q;
    Q << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    const tensor::Mat2 foot = Q * Eigen::Vector2d(l1, l2).asDiagonal() * Q.transpose();
    tensor::AxiTensor c_foot{tensor::SymTensor2::from_matrix(foot), std::exp(3.0 * U(rng))};
    // Random L scaled to a norm of at most 5 (in-plane block plus hoop rate).
    tensor::VelGrad L;
    L.grad << U(rng), U(rng), U(rng), U(rng);
    L.hoop = U(rng);
    const double norm = std::sqrt(L.grad.squaredNorm() + L.hoop * L.hoop);
    const double scale = kMaxGradNorm * std::abs(U(rng)) / norm;
    L.grad *= scale;
    L.hoop *= scale;

    const auto c = tensor::lyapunov_step(c_foot, L, p, h);
    const auto R = tensor::gs_rotation(L, p.a());
    const tensor::Mat2 A = 0.5 * (1.0 + p.Wi / h) * tensor::Mat2::Identity() - p.Wi * R.plane;
    const tensor::Mat2 C = p.equilibrium_value() * tensor::Mat2::Identity() + (p.Wi / h) * foot;
    const double Att = 0.5 * (1.0 + p.Wi / h) - p.Wi * R.tt;
    const double Ctt = p.equilibrium_value() + (p.Wi / h) * c_foot.tt;
    const tensor::Mat2 X = c.plane.matrix();
    const double res = std::hypot((A * X + X * A.transpose() - C).norm(), 2.0 * Att * c.tt - Ctt);
    const double rel = res / std::hypot(C.norm(), Ctt);
    worst = std::max(worst, rel);
    min_eig = std::min(min_eig, tensor::min_eigenvalue(c));
    bad += !(c.is_spd() && rel <= kLyapunovResidualTol);
  }
  return {bad == 0, fmt("%d trials, %d failures; worst residual / ||C||_F %.2e; smallest eigenvalue %.3e",
                        kLyapunovTrials, bad, worst, min_eig)};
}

std::pair<bool, std::string> constitutive_cross_validation() {
  double worst = 0.0;
  for (double xi : {0.2, 0.5, 0.7}) {
    const JsParams p{0.0, 0.45, 0.03, xi, 1.0};
    for (double kappa : {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
      tensor::Mat2 L = tensor::Mat2::Zero();
      L(0, 1) = kappa;
      auto c = tensor::equilibrium_conformation(p).plane;
      for (int it = 0; it < 200000; ++it) {
        const auto next = tensor::lyapunov_step_plane(c, L, p, 0.05);
        const double change = std::abs(next.xx - c.xx) + std::abs(next.xy - c.xy) + std::abs(next.yy - c.yy);
        c = next;
        if (change < 1e-12) break;
      }
      const double analytic = p.mu_p() * kappa / (1.0 + xi * (2.0 - xi) * p.Wi * p.Wi * kappa * kappa);
      worst = std::max(worst, std::abs(c.xy - analytic) / analytic);
      // The shear curve with q = 1 must agree with the same fixed point.
      worst = std::max(worst, std::abs(p.mu_s * kappa + c.xy - rheology::shear_stress(p, kappa)) /
                                  rheology::shear_stress(p, kappa));
    }
  }
  // With q = 9 the curve cannot match the constitutive law.
  const JsParams p9{0.0, 0.45, 0.03, 0.7, 9.0}, p1{0.0, 0.45, 0.03, 0.7, 1.0};
  const double q9_gap = std::abs(rheology::shear_stress(p9, 1.0) / rheology::shear_stress(p1, 1.0) - 1.0);
  return {worst <= kFixedPointTol,
          fmt("worst relative mismatch %.2e over kappa in [0.1, 20] and xi in {0.2, 0.5, 0.7}; "
              "q = 9 curve differs by %.0f%% at kappa = 1",
              worst, 100.0 * q9_gap)};
}

std::pair<bool, std::string> banding() {
  const JsParams p{0.0, 0.45, 0.03, 0.5, 1.0};
  const auto e = *rheology::classify_curve(p).extrema;
  bool pass = true;
  std::string detail;
  for (double frac : {0.35, 0.5}) {
    const double mean = e.kappa_max + frac * (e.kappa_min - e.kappa_max);
    const auto res = shear1d::run_to_steady(shear1d::make_channel(101, mean, p, 1e-2, 10.0), p, 5e-4, 1e-9, 400.0);
    if (!res.converged) return {false, fmt("channel at mean shear %.3f did not reach a steady state", mean)};
    const auto rep = shear1d::detect_bands(res.channel, p);
    const auto roots = rheology::stress_to_shear_rates(p, rep.sigma_total);
    bool ok = rep.sigma_spread <= kStressUniformTol && rep.bands.size() == 2 && roots.size() == 3;
    double err_lo = 1.0, err_hi = 1.0;
    if (ok) {
      const auto& lo = rep.bands.front().branch == shear1d::Branch::Low ? rep.bands.front() : rep.bands.back();
      const auto& hi = rep.bands.front().branch == shear1d::Branch::High ? rep.bands.front() : rep.bands.back();
      ok = lo.branch == shear1d::Branch::Low && hi.branch == shear1d::Branch::High;
      err_lo = std::abs(lo.kappa / roots.front() - 1.0);
      err_hi = std::abs(hi.kappa / roots.back() - 1.0);
      ok = ok && err_lo <= kBandRateTol && err_hi <= kBandRateTol;
    }
    pass &= ok;
    detail += fmt("%smean %.3f: %zu bands, stress spread %.1e, band rate errors %.2e / %.2e", detail.empty() ? "" : "; ",
                  mean, rep.bands.size(), rep.sigma_spread, err_lo, err_hi);
  }
  return {pass, detail};
}

std::pair<bool, std::string> fem_order() {
  const double e4 = mms::solve(4).error, e8 = mms::solve(8).error, e16 = mms::solve(16).error,
               e32 = mms::solve(32).error;
  const double o1 = std::log2(e4 / e8), o2 = std::log2(e8 / e16), o3 = std::log2(e16 / e32);
  return {std::min({o1, o2, o3}) >= kMinOrder,
          fmt("velocity L2 errors %.2e %.2e %.2e %.2e, observed orders %.2f %.2f %.2f", e4, e8, e16, e32, o1, o2, o3)};
}

}  // namespace

int main() {
  acceptance::Report report;
  report.run(1, "rheology criterion", rheology_criterion);
  report.run(2, "SPD preservation", spd_preservation);
  report.run(3, "constitutive cross-validation", constitutive_cross_validation);
  report.run(4, "1-D banding", banding);
  report.run(5, "FEM manufactured solution", fem_order);
  return report.exit_code();
}
