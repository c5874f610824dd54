#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jsflow/fem.hpp"
#include "jsflow/mesh.hpp"
#include "jsflow/params.hpp"
#include "jsflow/sphere.hpp"

namespace jsflow::sim {

using mesh::Vec2;

// ---------------------------------------------------------------------------
// Parameters

struct DimensionalInputs {
  double r_s = 0.0;     // sphere radius
  double r_c = 0.0;     // cylinder radius
  double rho_s = 0.0;   // sphere density
  double rho_f = 0.0;   // fluid density
  double eta_s = 0.0;   // solvent viscosity
  double eta_p = 0.0;   // polymer viscosity
  double lambda = 0.0;  // relaxation time
  double g = 0.0;       // gravitational acceleration
};

struct DerivedGroups {
  JsParams params;
  double rho_ratio = 0.0;
  double alpha = 0.0;
  double K = 0.0;
  double U_N = 0.0;  // Stokes terminal speed with wall correction
};

/// Dimensionless groups from physical inputs; xi and q are model constants.
[[nodiscard]] DerivedGroups derive_dimensionless(const DimensionalInputs& in, double xi, double q = 1.0);

struct Probe {
  std::string name;
  Vec2 x;
};

/// Flat key = value run configuration.
///
/// Model parameters come either from the dimensionless block (Re, Wi, mu_s,
/// rho_ratio, alpha) or from the dimensional block (r_s, r_c, rho_s, rho_f,
/// eta_s, eta_p, lambda, g); setting keys from both is an error.
class RunConfig {
public:
  RunConfig();

  /// Sets one key; throws InvalidParameter for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  /// Reads `key = value` lines; '#' starts a comment.
  void load(std::istream& is);
  void load_file(const std::filesystem::path& path);
  /// Every key with its current value, one per line, in a stable order.
  [[nodiscard]] std::string to_text() const;
  [[nodiscard]] std::string get(const std::string& key) const;
  [[nodiscard]] double number(const std::string& key) const;
  [[nodiscard]] long integer(const std::string& key) const;
  [[nodiscard]] bool flag(const std::string& key) const;
  [[nodiscard]] bool is_set(const std::string& key) const { return explicit_.count(key) != 0; }

  /// Resolved model parameters (derived from the dimensional block if that is the one in use).
  [[nodiscard]] DerivedGroups groups() const;
  [[nodiscard]] mesh::SphereMeshOptions mesh_options() const;
  /// Probe list; "standard" expands to x1 near the sphere and x2 near the top wall.
  [[nodiscard]] std::vector<Probe> probes() const;
  [[nodiscard]] fem::GradientRecovery gradient_recovery() const;
  /// Checks ranges and block exclusivity.
  void validate() const;

private:
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> explicit_;
};

// ---------------------------------------------------------------------------
// Time stepping

/// Mesh, discrete spaces, factored operator and state of one falling-sphere run.
class FallingSphere {
public:
  FallingSphere(mesh::TriMesh mesh, const JsParams& params, double rho_ratio, double K, double h_t,
                fem::GradientRecovery recovery = fem::GradientRecovery::Consistent);
  FallingSphere(const FallingSphere&) = delete;
  FallingSphere& operator=(const FallingSphere&) = delete;

  /// One step of the scheme: feet, interpolation, momentum, conformation, drag, sphere.
  /// On error the state is left at the last completed step.
  void step();

  [[nodiscard]] const mesh::TriMesh& mesh() const { return mesh_; }
  [[nodiscard]] const fem::P2Space& space() const { return space_; }
  [[nodiscard]] const fem::MomentumOperator& op() const { return op_; }
  [[nodiscard]] const JsParams& params() const { return params_; }
  [[nodiscard]] double time_step() const { return h_t_; }
  [[nodiscard]] const fem::FieldState& state() const { return state_; }
  [[nodiscard]] const sphere::SphereState& sphere() const { return sphere_; }
  [[nodiscard]] std::int64_t step_count() const { return step_; }
  [[nodiscard]] double last_drag() const { return drag_; }
  [[nodiscard]] double min_eig() const { return min_eig_; }

  /// Velocity (u_r, u_z) and pressure at a point in the sphere frame.
  struct Sample {
    double u_r, u_z, p;
  };
  [[nodiscard]] Sample sample(const Vec2& x) const;

  /// Minimum over the axis behind the sphere (1 < z <= z_max - 1) of the lab-frame
  /// fluid velocity along the direction of fall; negative values mark a negative wake.
  struct Wake {
    double min_velocity;
    double z_at_min;
  };
  [[nodiscard]] Wake wake() const;

  void set_state(fem::FieldState s, sphere::SphereState sp, std::int64_t step, double drag);

private:
  mesh::TriMesh mesh_;
  fem::P2Space space_;
  JsParams params_;
  double h_t_;
  fem::MomentumOperator op_;
  fem::FieldState state_;
  sphere::SphereState sphere_;
  std::int64_t step_ = 0;
  double drag_ = 0.0;
  double min_eig_ = 0.0;
  std::vector<mesh::MeshPoint> wake_points_;
  std::vector<double> wake_z_;
};

// ---------------------------------------------------------------------------
// Checkpoints

/// Binary layout (little-endian): "JSFLOWCK" magic, u32 version, u64 mesh
/// fingerprint, i64 step, f64 t, f64 h_t, 5 x f64 JsParams, 4 x f64 sphere
/// state, f64 last drag, then u64-length-prefixed f64 arrays u, p and c
/// (rr, rz, zz, tt per vertex), and a trailing u64 FNV-1a checksum of all
/// preceding bytes.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(const std::filesystem::path& path, const FallingSphere& sim);
/// Restores into `sim`; throws FormatError on corruption, version or mesh
/// mismatch, leaving `sim` untouched.
void read_checkpoint(const std::filesystem::path& path, FallingSphere& sim);

// ---------------------------------------------------------------------------
// Oscillation analysis

struct Extremum {
  double t;
  double U;
};

/// Statistics skip the first peak (the start-up overshoot from rest).
struct OscillationReport {
  std::vector<Extremum> peaks;         // every retained peak, start-up included
  std::vector<Extremum> troughs;
  int cycles = 0;                      // peak-to-peak intervals after start-up
  double amplitude = 0.0;              // mean peak-to-next-trough drop, last half of the run
  double first_half_amplitude = 0.0;   // same, first half after start-up
  double period = 0.0;                 // mean peak-to-peak interval, last half
  double asymmetry = 0.0;              // mean deceleration / mean acceleration duration
  bool sustained = false;
};

inline constexpr int kSmoothingWindow = 25;
/// Turning-point pairs smaller than this fraction of the late-time range are merged away.
inline constexpr double kProminence = 0.1;

/// Peaks and troughs from sign changes of the derivative of the moving-average
/// (window 25) series. sustained: at least 5 cycles and a last-half amplitude
/// no less than 0.8 of the first-half one. Needs at least 100 samples.
[[nodiscard]] OscillationReport analyze_oscillations(const std::vector<double>& t, const std::vector<double>& U);

void write_report(std::ostream& os, const OscillationReport& r);

// ---------------------------------------------------------------------------
// Drivers

struct ProbeSeries {
  Probe probe;
  std::vector<double> t, u_r, u_z, p;
};

struct RunResult {
  std::vector<double> t, U, dU, F_d, min_eig;  // every series_every steps, starting at the initial state
  std::vector<double> wake_t, wake_min;
  std::vector<ProbeSeries> probes;
  OscillationReport report;
  bool has_report = false;
};

/// Builds the mesh named by the configuration (or reads mesh_file).
[[nodiscard]] mesh::TriMesh build_mesh(const RunConfig& cfg);

/// Full run from rest (or from `restart` when set) to t_end, writing the
/// configured outputs under out_dir. `progress`, when given, is called after
/// every step.
[[nodiscard]] RunResult run_falling_sphere(const RunConfig& cfg,
                                           const std::function<void(const FallingSphere&)>& progress = {});
/// Same, on a prebuilt mesh (whose cylinder radius must match alpha).
[[nodiscard]] RunResult run_falling_sphere(const RunConfig& cfg, const mesh::TriMesh& mesh,
                                           const std::function<void(const FallingSphere&)>& progress = {});

enum class SweepAxis { Xi, Alpha, RhoRatio };
[[nodiscard]] SweepAxis parse_sweep_axis(const std::string& name);

struct SweepRow {
  double value;
  OscillationReport report;
};

/// One run per value (each in its own subdirectory of out_dir), summary.csv in out_dir.
[[nodiscard]] std::vector<SweepRow> run_sweep(const RunConfig& cfg, SweepAxis axis, const std::vector<double>& values);

/// curve.csv (kappa, tau, dtau_dkappa) and extrema.csv (one row per xi in xi_list).
void run_rheology(const RunConfig& cfg);

/// Channel start-up to steady state; profile.csv and bands.csv.
void run_shear1d(const RunConfig& cfg);

}  // namespace jsflow::sim
