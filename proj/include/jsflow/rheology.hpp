#pragma once

#include <optional>
#include <vector>

#include "jsflow/params.hpp"

namespace jsflow::rheology {

enum class CurveKind { Monotone, NonMonotone };

struct Extrema {
  double kappa_max;
  double tau_max;
  double kappa_min;
  double tau_min;
};

struct CurveClassification {
  CurveKind kind = CurveKind::Monotone;
  /// Present only for non-monotone curves.
  std::optional<Extrema> extrema;

  [[nodiscard]] bool non_monotone() const { return kind == CurveKind::NonMonotone; }
};

/// Steady simple-shear stress tau(kappa) = mu_s kappa + zeta mu kappa / (q zeta^2 + xi(2-xi) kappa^2).
[[nodiscard]] double shear_stress(const JsParams& p, double kappa);

/// Analytic d tau / d kappa.
[[nodiscard]] double shear_stress_slope(const JsParams& p, double kappa);

/// Locates the local max/min of tau(kappa) from the quadratic in s = xi(2-xi) kappa^2.
[[nodiscard]] CurveClassification classify_curve(const JsParams& p);

/// All shear rates with shear_stress(p, kappa) == tau, ascending. Tangent
/// (double) roots are reported once.
[[nodiscard]] std::vector<double> stress_to_shear_rates(const JsParams& p, double tau);

/// Upper end of the kappa range that contains every feature of the curve.
[[nodiscard]] double scan_limit(const JsParams& p);

}  // namespace jsflow::rheology
