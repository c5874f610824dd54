#include "jsflow/shear1d.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "jsflow/rheology.hpp"

namespace jsflow::shear1d {

using tensor::SymTensor2;

double Channel1D::total_stress(int i, const JsParams& p) const {
  return p.mu_s * shear_rate(i) + c[i].xy;
}

double Channel1D::plate_speed(double time) const {
  if (ramp_time <= 0.0 || time >= ramp_time) return wall_speed;
  return wall_speed * time / ramp_time;
}

Channel1D make_channel(int n_nodes, double wall_speed, const JsParams& p, double Re_channel,
                       double ramp_time) {
  p.validate();
  if (n_nodes < 3) throw InvalidParameter("shear1d: need at least 3 nodes");
  if (!(Re_channel > 0.0)) throw InvalidParameter("shear1d: Re_channel must be > 0");
  Channel1D ch;
  ch.n_nodes = n_nodes;
  ch.wall_speed = wall_speed;
  ch.Re_channel = Re_channel;
  ch.ramp_time = std::max(0.0, ramp_time);
  ch.v.assign(n_nodes, 0.0);
  ch.v.back() = ch.plate_speed(0.0);
  ch.c.assign(n_nodes - 1, tensor::equilibrium_conformation(p).plane);
  return ch;
}

Channel1D step_channel(const Channel1D& ch, const JsParams& p, double h_t) {
  if (!(h_t > 0.0)) throw InvalidParameter("shear1d: h_t must be > 0");
  const int n = ch.n_nodes;
  const double dy = ch.dy();
  const double diff = p.mu_s / (dy * dy);
  const double mass = ch.Re_channel / h_t;
  const double top = ch.plate_speed(ch.t + h_t);

  // Tridiagonal system for interior nodes 1..n-2 (Thomas algorithm).
  const int m = n - 2;
  std::vector<double> lower(m, -diff), diag(m, mass + 2.0 * diff), upper(m, -diff), rhs(m);
  for (int k = 0; k < m; ++k) {
    const int i = k + 1;
    rhs[k] = mass * ch.v[i] + (ch.c[i].xy - ch.c[i - 1].xy) / dy;
  }
  rhs[m - 1] += diff * top;
  for (int k = 1; k < m; ++k) {
    const double w = lower[k] / diag[k - 1];
    diag[k] -= w * upper[k - 1];
    rhs[k] -= w * rhs[k - 1];
  }
  Channel1D out = ch;
  out.v[0] = 0.0;
  out.v[n - 1] = top;
  out.v[m] = rhs[m - 1] / diag[m - 1];
  for (int k = m - 2; k >= 0; --k) out.v[k + 1] = (rhs[k] - upper[k] * out.v[k + 2]) / diag[k];

  tensor::Mat2 L = tensor::Mat2::Zero();
  for (int i = 0; i < ch.n_cells(); ++i) {
    L(0, 1) = out.shear_rate(i);
    out.c[i] = tensor::lyapunov_step_plane(ch.c[i], L, p, h_t);
  }
  out.t = ch.t + h_t;
  return out;
}

SteadyResult run_to_steady(Channel1D ch, const JsParams& p, double h_t, double tol, double t_max) {
  if (!(tol > 0.0)) throw InvalidParameter("shear1d: tol must be > 0");
  SteadyResult res;
  const double t_end = ch.t + t_max;
  while (ch.t < t_end) {
    Channel1D next = step_channel(ch, p, h_t);
    ++res.steps;
    double rate = 0.0;
    for (int i = 0; i < ch.n_nodes; ++i) rate = std::max(rate, std::abs(next.v[i] - ch.v[i]));
    for (int i = 0; i < ch.n_cells(); ++i) {
      rate = std::max({rate, std::abs(next.c[i].xx - ch.c[i].xx), std::abs(next.c[i].xy - ch.c[i].xy),
                       std::abs(next.c[i].yy - ch.c[i].yy)});
    }
    ch = std::move(next);
    if (rate / h_t < tol) {
      res.converged = true;
      break;
    }
  }
  res.channel = std::move(ch);
  return res;
}

namespace {

Branch classify_branch(const rheology::CurveClassification& cls, double kappa) {
  if (!cls.non_monotone()) return Branch::Single;
  if (kappa <= cls.extrema->kappa_max) return Branch::Low;
  if (kappa >= cls.extrema->kappa_min) return Branch::High;
  return Branch::Unstable;
}

}  // namespace

BandReport detect_bands(const Channel1D& ch, const JsParams& p) {
  const int nc = ch.n_cells();
  BandReport rep{};
  double lo = 1e300, hi = -1e300, sum = 0.0;
  for (int i = 0; i < nc; ++i) {
    const double s = ch.total_stress(i, p);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    sum += s;
  }
  rep.sigma_total = sum / nc;
  rep.sigma_spread = hi - lo;

  // Steadiness: uniform stress and every cell at its local constitutive fixed point.
  const double scale = std::max(1.0, std::abs(rep.sigma_total));
  if (rep.sigma_spread > 1e-6 * scale) {
    throw InvalidParameter("detect_bands: channel is not steady (total stress not uniform)");
  }
  tensor::Mat2 L = tensor::Mat2::Zero();
  for (int i = 0; i < nc; ++i) {
    L(0, 1) = ch.shear_rate(i);
    const auto relaxed = tensor::lyapunov_step_plane(ch.c[i], L, p, 1.0);
    const double defect = std::abs(relaxed.xx - ch.c[i].xx) + std::abs(relaxed.xy - ch.c[i].xy) +
                          std::abs(relaxed.yy - ch.c[i].yy);
    if (defect > 1e-6 * std::max(1.0, ch.c[i].frobenius_norm())) {
      throw InvalidParameter("detect_bands: channel is not steady (conformation still evolving)");
    }
  }

  // Segment where the shear rate jumps between neighbouring cells.
  const auto cls = rheology::classify_curve(p);
  double kmin = 1e300, kmax = -1e300;
  for (int i = 0; i < nc; ++i) {
    kmin = std::min(kmin, ch.shear_rate(i));
    kmax = std::max(kmax, ch.shear_rate(i));
  }
  const double jump = std::max(1e-3 * std::max(1.0, std::abs(kmax)), 0.05 * (kmax - kmin));

  struct Segment {
    int begin, end;  // cell range [begin, end)
  };
  std::vector<Segment> segs{{0, 1}};
  for (int i = 1; i < nc; ++i) {
    if (std::abs(ch.shear_rate(i) - ch.shear_rate(i - 1)) > jump) {
      segs.push_back({i, i + 1});
    } else {
      segs.back().end = i + 1;
    }
  }
  // Segments shorter than 3 cells belong to the interface; fold them into a neighbour.
  std::vector<Segment> kept;
  for (const auto& s : segs) {
    if (s.end - s.begin < 3 && !kept.empty()) {
      kept.back().end = s.end;
    } else if (!kept.empty() && s.end - s.begin >= 3 && kept.back().end - kept.back().begin < 3) {
      kept.back().end = s.end;
    } else {
      kept.push_back(s);
    }
  }
  for (const auto& s : kept) {
    // Band shear rate: the width-weighted mean over its cells, i.e. the velocity jump over the band.
    const double y0 = s.begin * ch.dy();
    const double y1 = s.end * ch.dy();
    const double kappa = (ch.v[s.end] - ch.v[s.begin]) / (y1 - y0);
    rep.bands.push_back({y0, y1, kappa, classify_branch(cls, kappa)});
  }
  return rep;
}

double lever_rule_mean(const BandReport& r) {
  double num = 0.0, den = 0.0;
  for (const auto& b : r.bands) {
    num += b.width() * b.kappa;
    den += b.width();
  }
  return num / den;
}

void write_profile_csv(std::ostream& os, const Channel1D& ch, const JsParams& p) {
  os << "y,v,kappa,c_xx,c_xy,c_yy,sigma_total\n";
  os.precision(12);
  for (int i = 0; i < ch.n_cells(); ++i) {
    os << ch.cell_center(i) << ',' << 0.5 * (ch.v[i] + ch.v[i + 1]) << ',' << ch.shear_rate(i) << ','
       << ch.c[i].xx << ',' << ch.c[i].xy << ',' << ch.c[i].yy << ',' << ch.total_stress(i, p) << '\n';
  }
}

void write_bands_csv(std::ostream& os, const BandReport& r) {
  static constexpr const char* names[] = {"low", "unstable", "high", "single"};
  os << "band,y_begin,y_end,width,kappa,branch,sigma_total\n";
  os.precision(12);
  for (std::size_t i = 0; i < r.bands.size(); ++i) {
    const auto& b = r.bands[i];
    os << i << ',' << b.y_begin << ',' << b.y_end << ',' << b.width() << ',' << b.kappa << ','
       << names[int(b.branch)] << ',' << r.sigma_total << '\n';
  }
}

}  // namespace jsflow::shear1d
