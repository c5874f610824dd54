#pragma once

#include "jsflow/errors.hpp"

namespace jsflow {

/// Dimensionless Johnson-Segalman model parameters.
///
/// The polymer viscosity ratio is not stored: it is always 1 - mu_s, and
/// the slip coefficient a is always 1 - xi.
struct JsParams {
  double Re = 0.0325;
  double Wi = 0.45;
  double mu_s = 0.03;
  double xi = 0.7;
  /// Denominator coefficient of the steady shear curve; 1 matches the
  /// constitutive law exactly.
  double q = 1.0;

  [[nodiscard]] double mu_p() const { return 1.0 - mu_s; }
  [[nodiscard]] double a() const { return 1.0 - xi; }
  [[nodiscard]] double zeta() const { return 1.0 / Wi; }
  [[nodiscard]] double mu() const { return (1.0 - mu_s) / Wi; }
  /// Diagonal value of the equilibrium conformation, mu_p / (a Wi).
  [[nodiscard]] double equilibrium_value() const { return mu_p() / (a() * Wi); }

  /// Throws InvalidParameter unless every documented invariant holds.
  void validate() const;

  /// Convenience builder from the slip coefficient a instead of xi.
  static JsParams from_a(double Re, double Wi, double mu_s, double a, double q = 1.0) {
    return JsParams{Re, Wi, mu_s, 1.0 - a, q};
  }
};

}  // namespace jsflow
