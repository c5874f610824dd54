#pragma once

#include <iosfwd>
#include <vector>

#include "jsflow/params.hpp"
#include "jsflow/tensor.hpp"

namespace jsflow::shear1d {

/// Planar Couette flow on y in [0, 1]: bottom plate fixed, top plate moving.
///
/// Velocity lives on n_nodes grid nodes; conformation (and hence shear rate
/// and stress) lives on the n_nodes - 1 cells between them.
struct Channel1D {
  int n_nodes = 0;
  double wall_speed = 0.0;
  double Re_channel = 1e-2;
  /// Top-plate speed rises linearly from 0 to wall_speed over this time (0: impulsive start).
  double ramp_time = 0.0;
  double t = 0.0;
  std::vector<double> v;                  // n_nodes
  std::vector<tensor::SymTensor2> c;      // n_nodes - 1

  [[nodiscard]] int n_cells() const { return n_nodes - 1; }
  [[nodiscard]] double dy() const { return 1.0 / double(n_nodes - 1); }
  [[nodiscard]] double cell_center(int i) const { return (double(i) + 0.5) * dy(); }
  [[nodiscard]] double shear_rate(int i) const { return (v[i + 1] - v[i]) / dy(); }
  /// mu_s kappa + c_xy on cell i.
  [[nodiscard]] double total_stress(int i, const JsParams& p) const;
  /// Top-plate speed at time t.
  [[nodiscard]] double plate_speed(double time) const;
};

/// Fluid at rest in conformational equilibrium; the top plate starts moving at t=0+.
[[nodiscard]] Channel1D make_channel(int n_nodes, double wall_speed, const JsParams& p,
                                     double Re_channel = 1e-2, double ramp_time = 0.0);

/// Implicit viscous diffusion with explicit elastic stress for v, followed by
/// a cellwise Lyapunov update of c at the new shear rate.
[[nodiscard]] Channel1D step_channel(const Channel1D& ch, const JsParams& p, double h_t);

struct SteadyResult {
  Channel1D channel;
  bool converged = false;
  long steps = 0;
};

/// Steps until the largest nodal rate of change drops below tol or t_max elapses.
[[nodiscard]] SteadyResult run_to_steady(Channel1D ch, const JsParams& p, double h_t, double tol,
                                         double t_max);

enum class Branch { Low, Unstable, High, Single };

struct Band {
  double y_begin;
  double y_end;
  double kappa;
  Branch branch;

  [[nodiscard]] double width() const { return y_end - y_begin; }
};

struct BandReport {
  std::vector<Band> bands;
  double sigma_total;      // mean total shear stress
  double sigma_spread;     // max - min over cells
};

/// Segments a steady profile into shear bands. Throws InvalidParameter if the
/// channel is not at a steady state.
[[nodiscard]] BandReport detect_bands(const Channel1D& ch, const JsParams& p);

/// Width-weighted mean of the band shear rates.
[[nodiscard]] double lever_rule_mean(const BandReport& r);

/// Profile CSV: y, v, kappa, c_xx, c_xy, c_yy, sigma_total (one row per cell).
void write_profile_csv(std::ostream& os, const Channel1D& ch, const JsParams& p);
void write_bands_csv(std::ostream& os, const BandReport& r);

}  // namespace jsflow::shear1d
