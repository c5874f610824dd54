// Graded triangulation of the meridian half-plane around the sphere by a
// force-equilibrium (truss) iteration on a Delaunay triangulation.

#include <algorithm>
#include <cmath>
#include <random>

#include "delaunay.hpp"
#include "jsflow/errors.hpp"
#include "jsflow/mesh.hpp"

namespace jsflow::mesh {

double target_size(const SphereMeshOptions& opt, const Vec2& x) {
  const double gap = std::max(0.0, x.norm() - 1.0);
  const double s = std::min(gap / 3.0, 1.0);
  return opt.h_near * std::pow(opt.h_far / opt.h_near, s);
}

namespace {

struct Bar {
  int a, b;
};

std::vector<Bar> unique_bars(const std::vector<std::array<int, 3>>& tris) {
  std::vector<std::pair<int, int>> e;
  e.reserve(3 * tris.size());
  for (const auto& t : tris) {
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      e.emplace_back(a, b);
    }
  }
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  std::vector<Bar> bars;
  bars.reserve(e.size());
  for (auto [a, b] : e) bars.push_back({a, b});
  return bars;
}

Vec2 distance_gradient(const Domain& d, const Vec2& x, double eps) {
  const double d0 = d.signed_distance(x);
  return {(d.signed_distance(x + Vec2(eps, 0)) - d0) / eps, (d.signed_distance(x + Vec2(0, eps)) - d0) / eps};
}

// Delaunay triangles with centroid inside the domain.
std::vector<std::array<int, 3>> interior_triangles(const std::vector<Vec2>& p, const Domain& dom, double geps) {
  auto tris = detail::delaunay(p);
  std::vector<std::array<int, 3>> keep;
  keep.reserve(tris.size());
  for (const auto& t : tris) {
    const Vec2 c = (p[t[0]] + p[t[1]] + p[t[2]]) / 3.0;
    if (dom.signed_distance(c) < -geps) keep.push_back(t);
  }
  return keep;
}

}  // namespace

TriMesh build_sphere_in_cylinder(const SphereMeshOptions& opt) {
  if (!(opt.alpha > 1.0)) throw InvalidParameter("build_sphere_in_cylinder: alpha must exceed 1");
  if (!(opt.height > 2.0)) throw InvalidParameter("build_sphere_in_cylinder: height must exceed 2");
  if (!(opt.h_near > 0.0 && opt.h_near <= opt.h_far))
    throw InvalidParameter("build_sphere_in_cylinder: need 0 < h_near <= h_far");
  if (opt.h_near > M_PI / 8.0) throw InvalidParameter("build_sphere_in_cylinder: h_near too coarse for the sphere");
  const double gap = opt.alpha - 1.0;
  if (opt.h_near > gap) throw InvalidParameter("build_sphere_in_cylinder: h_near larger than the sphere-wall gap");

  const Domain dom{opt.alpha, -0.5 * opt.height, 0.5 * opt.height, true};
  const double h0 = opt.h_near;
  const double geps = 1e-3 * h0;
  const double deps = std::sqrt(2.2e-16) * h0;
  auto hsize = [&opt](const Vec2& x) { return target_size(opt, x); };

  // Fixed corner points.
  std::vector<Vec2> fixed{{0.0, dom.z_min}, {opt.alpha, dom.z_min}, {opt.alpha, dom.z_max},
                          {0.0, dom.z_max}, {0.0, -1.0},           {0.0, 1.0}};

  // Equilateral start grid at spacing h0, thinned with probability (h0/h)^2.
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Vec2> p = fixed;
  const int nf = int(fixed.size());
  const double dz = h0 * std::sqrt(3.0) / 2.0;
  int row = 0;
  for (double z = dom.z_min; z <= dom.z_max + 1e-12; z += dz, ++row) {
    for (double r = (row % 2) * h0 / 2.0; r <= opt.alpha + 1e-12; r += h0) {
      const Vec2 x(r, z);
      if (dom.signed_distance(x) >= -geps) continue;
      const double keep = std::pow(h0 / hsize(x), 2);
      if (U(rng) < keep) p.push_back(x);
    }
  }

  const double ttol = 0.1, fscale = 1.2, dt = 0.2, dptol = 1e-3;
  std::vector<Vec2> pold(p.size(), Vec2(1e300, 1e300));
  std::vector<std::array<int, 3>> tris;
  std::vector<Bar> bars;
  std::vector<Vec2> force(p.size());

  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    double moved = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) moved = std::max(moved, (p[i] - pold[i]).norm() / hsize(p[i]));
    if (moved > ttol) {
      pold = p;
      tris = interior_triangles(p, dom, geps);
      bars = unique_bars(tris);
    }

    double sum_l2 = 0.0, sum_h2 = 0.0;
    std::vector<double> len(bars.size()), hb(bars.size());
    for (std::size_t k = 0; k < bars.size(); ++k) {
      len[k] = (p[bars[k].a] - p[bars[k].b]).norm();
      hb[k] = hsize(0.5 * (p[bars[k].a] + p[bars[k].b]));
      sum_l2 += len[k] * len[k];
      sum_h2 += hb[k] * hb[k];
    }
    const double scale = fscale * std::sqrt(sum_l2 / sum_h2);
    std::fill(force.begin(), force.end(), Vec2::Zero());
    for (std::size_t k = 0; k < bars.size(); ++k) {
      const double f = std::max(hb[k] * scale - len[k], 0.0);
      const Vec2 fv = (f / len[k]) * (p[bars[k].a] - p[bars[k].b]);
      force[bars[k].a] += fv;
      force[bars[k].b] -= fv;
    }
    for (int i = 0; i < nf; ++i) force[i].setZero();

    double max_move = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] += dt * force[i];
      const double d = dom.signed_distance(p[i]);
      if (d > 0.0) p[i] -= d * distance_gradient(dom, p[i], deps);
      if (d < -geps) max_move = std::max(max_move, dt * force[i].norm() / hsize(p[i]));
    }
    if (max_move < dptol) break;
  }

  tris = interior_triangles(p, dom, geps);

  // Drop points not used by any triangle and renumber.
  std::vector<int> remap(p.size(), -1);
  std::vector<Vec2> verts;
  for (auto& t : tris)
    for (int& k : t) {
      if (remap[k] < 0) {
        remap[k] = int(verts.size());
        verts.push_back(p[k]);
      }
      k = remap[k];
    }

  // Snap boundary vertices exactly onto the boundary piece they lie on.
  TriMesh rough(verts, tris, dom);
  for (const auto& be : rough.boundary()) {
    for (int k : rough.edges()[be.edge]) {
      const Vec2 snapped = dom.project(be.tag, verts[k]);
      if ((snapped - verts[k]).norm() > 0.5 * hsize(verts[k]))
        throw Error("build_sphere_in_cylinder: boundary vertex too far from its boundary");
      verts[k] = snapped;
    }
  }
  std::vector<std::pair<std::array<int, 2>, BoundaryTag>> tags;
  for (const auto& be : rough.boundary()) tags.push_back({rough.edges()[be.edge], be.tag});
  TriMesh out(std::move(verts), rough.triangles(), dom, tags);
  if (auto msg = out.check_invariants(); !msg.empty()) throw Error("build_sphere_in_cylinder: " + msg);
  return out;
}

}  // namespace jsflow::mesh
