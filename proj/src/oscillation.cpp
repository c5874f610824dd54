#include <algorithm>
#include <cmath>
#include <ostream>

#include "jsflow/errors.hpp"
#include "jsflow/sim.hpp"

namespace jsflow::sim {

namespace {

struct Turn {
  bool peak;
  double t;
  double U;
};

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

}  // namespace

OscillationReport analyze_oscillations(const std::vector<double>& t, const std::vector<double>& U) {
  const int n = int(U.size());
  if (int(t.size()) != n) throw InvalidParameter("time and speed series differ in length");
  if (n < 100) throw InvalidParameter("oscillation analysis needs at least 100 samples");

  const int half = kSmoothingWindow / 2;
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) {
    const int w = std::min({half, i, n - 1 - i});
    double sum = 0.0;
    for (int j = i - w; j <= i + w; ++j) sum += U[j];
    s[i] = sum / double(2 * w + 1);
  }

  // Turning points of the smoothed series; the reported value is the raw
  // extreme inside the smoothing window.
  std::vector<Turn> turns;
  int last_sign = 0;
  for (int i = 0; i + 1 < n; ++i) {
    const double d = s[i + 1] - s[i];
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) {
      const bool peak = last_sign > 0;
      int best = i;
      for (int j = std::max(0, i - half); j <= std::min(n - 1, i + half); ++j)
        if (peak ? U[j] > U[best] : U[j] < U[best]) best = j;
      turns.push_back({peak, t[best], U[best]});
    }
    last_sign = sign;
  }

  // Drop turning-point pairs less prominent than a tenth of the late-time
  // range (secondary bumps inside a cycle, numerical wiggles).
  const auto late = U.begin() + n / 2;
  const auto [lo, hi] = std::minmax_element(late, U.end());
  double scale = 0.0;
  for (auto it = late; it != U.end(); ++it) scale = std::max(scale, std::abs(*it));
  const double tol = std::max(1e-6 * scale, kProminence * (*hi - *lo));
  for (bool changed = true; changed;) {
    changed = false;
    size_t best = 0;
    double best_d = tol;
    for (size_t k = 1; k < turns.size(); ++k) {
      const double d = std::abs(turns[k].U - turns[k - 1].U);
      if (turns[k].peak != turns[k - 1].peak && d < best_d) {
        best_d = d;
        best = k;
        changed = true;
      }
    }
    if (changed) turns.erase(turns.begin() + long(best) - 1, turns.begin() + long(best) + 1);
    for (size_t k = 1; k < turns.size();) {
      if (turns[k].peak == turns[k - 1].peak) {
        const bool keep_later = turns[k].peak ? turns[k].U > turns[k - 1].U : turns[k].U < turns[k - 1].U;
        turns.erase(turns.begin() + long(keep_later ? k - 1 : k));
        changed = true;
      } else {
        ++k;
      }
    }
  }

  OscillationReport r;
  for (const auto& x : turns) (x.peak ? r.peaks : r.troughs).push_back({x.t, x.U});

  // The first peak is the start-up overshoot from rest; statistics start after it.
  size_t first = 0;
  while (first < turns.size() && !turns[first].peak) ++first;
  const std::vector<Turn> osc(turns.begin() + long(std::min(first + 1, turns.size())), turns.end());
  std::vector<Extremum> osc_peaks;
  for (const auto& x : osc)
    if (x.peak) osc_peaks.push_back({x.t, x.U});
  r.cycles = std::max(0, int(osc_peaks.size()) - 1);

  const double t_mid = 0.5 * (t.front() + t.back());
  std::vector<double> drops_first, drops_last, decel, accel;
  for (size_t k = 0; k + 1 < osc.size(); ++k) {
    const Turn& a = osc[k];
    const Turn& b = osc[k + 1];
    if (a.peak) {
      (a.t < t_mid ? drops_first : drops_last).push_back(a.U - b.U);
      decel.push_back(b.t - a.t);
    } else {
      accel.push_back(b.t - a.t);
    }
  }
  r.amplitude = mean(drops_last);
  r.first_half_amplitude = mean(drops_first);

  std::vector<double> periods_last, periods_all;
  for (size_t k = 1; k < osc_peaks.size(); ++k) {
    const double dt = osc_peaks[k].t - osc_peaks[k - 1].t;
    periods_all.push_back(dt);
    if (osc_peaks[k - 1].t >= t_mid) periods_last.push_back(dt);
  }
  r.period = periods_last.empty() ? mean(periods_all) : mean(periods_last);
  r.asymmetry = (decel.empty() || accel.empty()) ? 0.0 : mean(decel) / mean(accel);
  r.sustained = r.cycles >= 5 && r.amplitude > 0.0 && r.amplitude >= 0.8 * r.first_half_amplitude;
  return r;
}

void write_report(std::ostream& os, const OscillationReport& r) {
  os << "cycles = " << r.cycles << '\n'
     << "amplitude = " << r.amplitude << '\n'
     << "first_half_amplitude = " << r.first_half_amplitude << '\n'
     << "period = " << r.period << '\n'
     << "asymmetry = " << r.asymmetry << '\n'
     << "sustained = " << (r.sustained ? "true" : "false") << '\n';
  os << "# peaks (t U)\n";
  for (const auto& e : r.peaks) os << "peak " << e.t << ' ' << e.U << '\n';
  os << "# troughs (t U)\n";
  for (const auto& e : r.troughs) os << "trough " << e.t << ' ' << e.U << '\n';
}

}  // namespace jsflow::sim
