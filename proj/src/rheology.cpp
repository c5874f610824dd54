#include "jsflow/rheology.hpp"

#include <algorithm>
#include <cmath>

namespace jsflow::rheology {

namespace {

// xi (2 - xi), the coefficient of kappa^2 in the denominator.
double slip_factor(const JsParams& p) { return p.xi * (2.0 - p.xi); }

// Bisection on [lo, hi] for shear_stress == tau, given f(lo) and f(hi) bracket it.
double bisect(const JsParams& p, double tau, double lo, double hi) {
  double flo = shear_stress(p, lo) - tau;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= 1e-12 * std::max(1.0, hi)) break;
    const double fmid = shear_stress(p, mid) - tau;
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  // Return the endpoint with the smaller residual.
  const double rlo = std::abs(shear_stress(p, lo) - tau);
  const double rhi = std::abs(shear_stress(p, hi) - tau);
  return rlo <= rhi ? lo : hi;
}

// Root of an increasing branch starting at lo with shear_stress(lo) <= tau.
double solve_rising_tail(const JsParams& p, double tau, double lo) {
  double hi = std::max(2.0 * lo, 1.0);
  while (shear_stress(p, hi) < tau) hi *= 2.0;
  return bisect(p, tau, lo, hi);
}

}  // namespace

double shear_stress(const JsParams& p, double kappa) {
  const double z = p.zeta();
  return p.mu_s * kappa + z * p.mu() * kappa / (p.q * z * z + slip_factor(p) * kappa * kappa);
}

double shear_stress_slope(const JsParams& p, double kappa) {
  const double z = p.zeta();
  const double qz2 = p.q * z * z;
  const double x = slip_factor(p) * kappa * kappa;
  const double den = qz2 + x;
  return p.mu_s + z * p.mu() * (qz2 - x) / (den * den);
}

CurveClassification classify_curve(const JsParams& p) {
  CurveClassification out;
  const double s = slip_factor(p);
  if (s <= 0.0) return out;

  // Stationary points solve mu_s x^2 + b x + c = 0 in x = s kappa^2.
  const double z = p.zeta();
  const double mu = p.mu();
  const double a2 = p.mu_s;
  const double b = 2.0 * p.q * p.mu_s * z * z - z * mu;
  const double c = p.q * p.q * p.mu_s * z * z * z * z + p.q * z * z * z * mu;
  const double disc = b * b - 4.0 * a2 * c;
  if (!(disc > 0.0) || b >= 0.0) return out;

  const double qq = -0.5 * (b - std::sqrt(disc));  // b < 0, so this is the large-magnitude form
  const double x_big = qq / a2;
  const double x_small = c / qq;

  Extrema e{};
  e.kappa_max = std::sqrt(x_small / s);
  e.kappa_min = std::sqrt(x_big / s);
  e.tau_max = shear_stress(p, e.kappa_max);
  e.tau_min = shear_stress(p, e.kappa_min);
  out.kind = CurveKind::NonMonotone;
  out.extrema = e;
  return out;
}

std::vector<double> stress_to_shear_rates(const JsParams& p, double tau) {
  std::vector<double> roots;
  if (tau <= 0.0) {
    if (tau == 0.0) roots.push_back(0.0);
    return roots;
  }
  const auto cls = classify_curve(p);
  if (!cls.non_monotone()) {
    roots.push_back(solve_rising_tail(p, tau, 0.0));
    return roots;
  }
  const Extrema& e = *cls.extrema;
  if (tau <= e.tau_max) {
    roots.push_back(tau == e.tau_max ? e.kappa_max : bisect(p, tau, 0.0, e.kappa_max));
  }
  if (tau < e.tau_max && tau > e.tau_min) {
    roots.push_back(bisect(p, tau, e.kappa_max, e.kappa_min));
  }
  if (tau >= e.tau_min) {
    roots.push_back(tau == e.tau_min ? e.kappa_min : solve_rising_tail(p, tau, e.kappa_min));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double scan_limit(const JsParams& p) {
  const auto cls = classify_curve(p);
  if (cls.non_monotone()) return 10.0 * cls.extrema->kappa_min;
  return 100.0 * p.zeta();
}

}  // namespace jsflow::rheology
