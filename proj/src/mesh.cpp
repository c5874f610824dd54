#include "jsflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "jsflow/errors.hpp"

namespace jsflow::mesh {

namespace {

constexpr double kBaryTol = 1e-12;

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

std::array<int, 2> edge_key(int a, int b) { return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a}; }

Vec2 closest_on_segment(const Vec2& a, const Vec2& b, const Vec2& x) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  const double s = len2 > 0.0 ? clamp((x - a).dot(d) / len2, 0.0, 1.0) : 0.0;
  return a + s * d;
}

}  // namespace

std::string_view tag_name(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Axis: return "axis";
    case BoundaryTag::Sphere: return "sphere";
    case BoundaryTag::SideWall: return "sidewall";
    case BoundaryTag::Top: return "top";
    case BoundaryTag::Bottom: return "bottom";
  }
  return "?";
}

std::optional<BoundaryTag> parse_tag(std::string_view name) {
  for (int t = 0; t < kNumTags; ++t)
    if (tag_name(BoundaryTag(t)) == name) return BoundaryTag(t);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Domain

Vec2 Domain::project(BoundaryTag tag, const Vec2& x) const {
  switch (tag) {
    case BoundaryTag::Axis: {
      double z = clamp(x.y(), z_min, z_max);
      if (has_sphere && std::abs(z) < 1.0) z = z >= 0.0 ? 1.0 : -1.0;
      return {0.0, z};
    }
    case BoundaryTag::Sphere: {
      Vec2 y(std::max(x.x(), 0.0), x.y());
      const double n = y.norm();
      if (n == 0.0) return {1.0, 0.0};
      return y / n;
    }
    case BoundaryTag::SideWall: return {r_max, clamp(x.y(), z_min, z_max)};
    case BoundaryTag::Top: return {clamp(x.x(), 0.0, r_max), z_max};
    case BoundaryTag::Bottom: return {clamp(x.x(), 0.0, r_max), z_min};
  }
  return x;
}

double Domain::distance(BoundaryTag tag, const Vec2& x) const { return (project(tag, x) - x).norm(); }

double Domain::signed_distance(const Vec2& x) const {
  const double r = x.x(), z = x.y();
  double d = -std::min({r, r_max - r, z - z_min, z_max - z});
  if (has_sphere) d = std::max(d, 1.0 - x.norm());
  return d;
}

// ---------------------------------------------------------------------------
// PointLocator

PointLocator::PointLocator(const TriMesh& m) {
  const auto& V = m.vertices();
  if (V.empty()) return;
  Vec2 lo = V.front(), hi = V.front();
  for (const auto& v : V) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double area = std::max((hi - lo).prod(), 1e-300);
  cell_ = std::sqrt(area / std::max(1, m.num_triangles() / 2));
  lo_ = lo;
  nx_ = std::max(1, int(std::ceil((hi.x() - lo.x()) / cell_)) + 1);
  ny_ = std::max(1, int(std::ceil((hi.y() - lo.y()) / cell_)) + 1);
  cells_.assign(std::size_t(nx_) * ny_, {});
  for (int t = 0; t < m.num_triangles(); ++t) {
    Vec2 tlo = V[m.triangles()[t][0]], thi = tlo;
    for (int k = 1; k < 3; ++k) {
      tlo = tlo.cwiseMin(V[m.triangles()[t][k]]);
      thi = thi.cwiseMax(V[m.triangles()[t][k]]);
    }
    const int i0 = std::clamp(int(std::floor((tlo.x() - lo_.x()) / cell_)), 0, nx_ - 1);
    const int i1 = std::clamp(int(std::floor((thi.x() - lo_.x()) / cell_)), 0, nx_ - 1);
    const int j0 = std::clamp(int(std::floor((tlo.y() - lo_.y()) / cell_)), 0, ny_ - 1);
    const int j1 = std::clamp(int(std::floor((thi.y() - lo_.y()) / cell_)), 0, ny_ - 1);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) cells_[std::size_t(j) * nx_ + i].push_back(t);
  }
}

const std::vector<int>* PointLocator::candidates(const Vec2& x) const {
  if (cells_.empty()) return nullptr;
  const int i = int(std::floor((x.x() - lo_.x()) / cell_));
  const int j = int(std::floor((x.y() - lo_.y()) / cell_));
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return nullptr;
  return &cells_[std::size_t(j) * nx_ + i];
}

// ---------------------------------------------------------------------------
// TriMesh

TriMesh::TriMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles, Domain domain,
                 const std::vector<std::pair<std::array<int, 2>, BoundaryTag>>& edge_tags)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), domain_(domain) {
  const int nv = num_vertices();
  for (auto& t : triangles_) {
    for (int k : t)
      if (k < 0 || k >= nv) throw FormatError("TriMesh: triangle references a missing vertex");
    const Vec2 a = vertices_[t[0]], b = vertices_[t[1]], c = vertices_[t[2]];
    const double cross = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    if (cross < 0.0) std::swap(t[1], t[2]);
  }

  std::map<std::array<int, 2>, int> edge_index;
  tri_edges_.resize(triangles_.size());
  std::vector<std::array<int, 2>> edge_owner;  // up to two triangles per edge
  for (int t = 0; t < num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const auto key = edge_key(triangles_[t][(k + 1) % 3], triangles_[t][(k + 2) % 3]);
      auto [it, inserted] = edge_index.try_emplace(key, int(edges_.size()));
      if (inserted) {
        edges_.push_back(key);
        edge_owner.push_back({t, -1});
      } else {
        auto& own = edge_owner[it->second];
        if (own[1] != -1) throw FormatError("TriMesh: edge shared by more than two triangles");
        own[1] = t;
      }
      tri_edges_[t][k] = it->second;
    }
  }

  neighbors_.assign(triangles_.size(), {-1, -1, -1});
  for (int t = 0; t < num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const auto& own = edge_owner[tri_edges_[t][k]];
      neighbors_[t][k] = own[0] == t ? own[1] : own[0];
    }
  }

  std::map<std::array<int, 2>, BoundaryTag> given;
  for (const auto& [k, tag] : edge_tags) given[edge_key(k[0], k[1])] = tag;

  edge_tag_.assign(edges_.size(), -1);
  vertex_on_boundary_.assign(vertices_.size(), 0);
  for (int t = 0; t < num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      if (neighbors_[t][k] != -1) continue;
      const int e = tri_edges_[t][k];
      BoundaryTag tag{};
      if (auto it = given.find(edges_[e]); it != given.end()) {
        tag = it->second;
      } else {
        const Vec2 mid = edge_midpoint(e);
        double best = 1e300;
        for (int g = 0; g < kNumTags; ++g) {
          if (!domain_.has_tag(BoundaryTag(g))) continue;
          const double d = domain_.distance(BoundaryTag(g), mid);
          if (d < best) {
            best = d;
            tag = BoundaryTag(g);
          }
        }
      }
      edge_tag_[e] = std::int8_t(tag);
      boundary_.push_back({e, t, k, tag});
      vertex_on_boundary_[edges_[e][0]] = 1;
      vertex_on_boundary_[edges_[e][1]] = 1;
    }
  }

  vertex_tri_.assign(vertices_.size(), -1);
  for (int t = 0; t < num_triangles(); ++t)
    for (int k : triangles_[t])
      if (vertex_tri_[k] < 0) vertex_tri_[k] = t;

  locator_ = PointLocator(*this);
}

double TriMesh::triangle_area(int t) const {
  const auto& tr = triangles_[t];
  const Vec2 a = vertices_[tr[0]], b = vertices_[tr[1]], c = vertices_[tr[2]];
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

Vec2 TriMesh::centroid(int t) const {
  const auto& tr = triangles_[t];
  return (vertices_[tr[0]] + vertices_[tr[1]] + vertices_[tr[2]]) / 3.0;
}

std::array<double, 3> TriMesh::barycentric(int t, const Vec2& x) const {
  const auto& tr = triangles_[t];
  const Vec2 a = vertices_[tr[0]], b = vertices_[tr[1]], c = vertices_[tr[2]];
  const double det = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
  const Vec2 d = x - a;
  const double l1 = (d.x() * (c - a).y() - d.y() * (c - a).x()) / det;
  const double l2 = ((b - a).x() * d.y() - (b - a).y() * d.x()) / det;
  return {1.0 - l1 - l2, l1, l2};
}

Vec2 TriMesh::from_barycentric(const MeshPoint& mp) const {
  const auto& tr = triangles_[mp.element];
  return mp.bary[0] * vertices_[tr[0]] + mp.bary[1] * vertices_[tr[1]] + mp.bary[2] * vertices_[tr[2]];
}

std::optional<MeshPoint> TriMesh::walk(const Vec2& x, int start) const {
  int t = start;
  for (int steps = 0; steps < 64; ++steps) {
    const auto b = barycentric(t, x);
    int worst = 0;
    for (int k = 1; k < 3; ++k)
      if (b[k] < b[worst]) worst = k;
    if (b[worst] >= -kBaryTol) return MeshPoint{t, b};
    const int next = neighbors_[t][worst];
    if (next < 0) return std::nullopt;
    t = next;
  }
  return std::nullopt;
}

Outside TriMesh::nearest_boundary(const Vec2& x) const {
  Outside out{};
  double best = 1e300;
  for (const auto& be : boundary_) {
    const Vec2 a = vertices_[edges_[be.edge][0]], b = vertices_[edges_[be.edge][1]];
    const Vec2 y = closest_on_segment(a, b, x);
    const double d = (y - x).squaredNorm();
    if (d < best) {
      best = d;
      out.nearest = y;
      out.location.element = be.triangle;
    }
  }
  auto bary = barycentric(out.location.element, out.nearest);
  for (double& l : bary) l = std::max(l, 0.0);
  const double s = bary[0] + bary[1] + bary[2];
  for (double& l : bary) l /= s;
  out.location.bary = bary;
  return out;
}

Location TriMesh::locate(const Vec2& x, int hint) const {
  if (hint >= 0 && hint < num_triangles()) {
    if (auto mp = walk(x, hint)) return *mp;
  }
  if (const auto* cand = locator_.candidates(x)) {
    for (int t : *cand) {
      const auto b = barycentric(t, x);
      if (b[0] >= -kBaryTol && b[1] >= -kBaryTol && b[2] >= -kBaryTol) return MeshPoint{t, b};
    }
  }
  return nearest_boundary(x);
}

MeshPoint TriMesh::locate_or_project(const Vec2& x, int hint) const {
  auto loc = locate(x, hint);
  if (auto* mp = std::get_if<MeshPoint>(&loc)) return *mp;
  return std::get<Outside>(loc).location;
}

double TriMesh::area() const {
  double a = 0.0;
  for (int t = 0; t < num_triangles(); ++t) a += triangle_area(t);
  return a;
}

double TriMesh::weighted_area() const {
  double a = 0.0;
  for (int t = 0; t < num_triangles(); ++t) a += triangle_area(t) * centroid(t).x();
  return a;
}

std::string TriMesh::check_invariants() const {
  std::ostringstream err;
  for (int v = 0; v < num_vertices(); ++v) {
    if (vertices_[v].x() < 0.0) {
      err << "vertex " << v << " has r < 0";
      return err.str();
    }
  }
  for (int t = 0; t < num_triangles(); ++t) {
    if (!(triangle_area(t) > 0.0)) {
      err << "triangle " << t << " is not positively oriented";
      return err.str();
    }
  }
  for (const auto& be : boundary_) {
    for (int k : edges_[be.edge]) {
      const Vec2& x = vertices_[k];
      if (be.tag == BoundaryTag::Axis && x.x() != 0.0) {
        err << "axis vertex " << k << " has r = " << x.x();
        return err.str();
      }
      if (be.tag == BoundaryTag::Sphere && std::abs(x.squaredNorm() - 1.0) > 1e-12) {
        err << "sphere vertex " << k << " off the unit circle by " << x.squaredNorm() - 1.0;
        return err.str();
      }
      const double d = domain_.distance(be.tag, x);
      if (d > 1e-10) {
        err << "vertex " << k << " of a " << tag_name(be.tag) << " edge is " << d << " off its boundary";
        return err.str();
      }
    }
  }
  // Closed boundary: every boundary vertex touches exactly two boundary edges.
  std::vector<int> deg(vertices_.size(), 0);
  for (const auto& be : boundary_) {
    ++deg[edges_[be.edge][0]];
    ++deg[edges_[be.edge][1]];
  }
  for (int v = 0; v < num_vertices(); ++v) {
    if (deg[v] != 0 && deg[v] != 2) {
      err << "boundary vertex " << v << " has " << deg[v] << " boundary edges (non-manifold)";
      return err.str();
    }
  }
  // Euler characteristic of a disc (no sphere) or an annulus-like region whose
  // hole touches the axis (still simply connected): V - E + F = 1.
  if (num_vertices() - num_edges() + num_triangles() != 1) {
    err << "Euler characteristic " << num_vertices() - num_edges() + num_triangles() << " != 1";
    return err.str();
  }
  return {};
}

std::uint64_t TriMesh::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& v : vertices_) mix(v.data(), 2 * sizeof(double));
  for (const auto& t : triangles_) mix(t.data(), 3 * sizeof(int));
  return h;
}

// ---------------------------------------------------------------------------
// Builders and refinement

TriMesh build_rectangle(double r_max, double z_min, double z_max, int n_r, int n_z) {
  if (!(r_max > 0.0) || !(z_max > z_min) || n_r < 1 || n_z < 1)
    throw InvalidParameter("build_rectangle: invalid extents or resolution");
  std::vector<Vec2> v;
  for (int j = 0; j <= n_z; ++j)
    for (int i = 0; i <= n_r; ++i)
      v.emplace_back(r_max * i / n_r, z_min + (z_max - z_min) * j / n_z);
  auto id = [n_r](int i, int j) { return j * (n_r + 1) + i; };
  std::vector<std::array<int, 3>> t;
  for (int j = 0; j < n_z; ++j) {
    for (int i = 0; i < n_r; ++i) {
      // Alternate the diagonal to avoid a directional bias.
      if ((i + j) % 2 == 0) {
        t.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        t.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      } else {
        t.push_back({id(i, j), id(i + 1, j), id(i, j + 1)});
        t.push_back({id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
      }
    }
  }
  return TriMesh(std::move(v), std::move(t), Domain{r_max, z_min, z_max, false});
}

TriMesh refine_regular(const TriMesh& m) {
  std::vector<Vec2> v = m.vertices();
  const int nv = m.num_vertices();
  for (int e = 0; e < m.num_edges(); ++e) {
    Vec2 mid = m.edge_midpoint(e);
    if (m.edge_tags()[e] == std::int8_t(BoundaryTag::Sphere)) mid = m.domain().project(BoundaryTag::Sphere, mid);
    if (m.edge_tags()[e] == std::int8_t(BoundaryTag::Axis)) mid.x() = 0.0;
    v.push_back(mid);
  }
  std::vector<std::array<int, 3>> t;
  t.reserve(4 * m.triangles().size());
  for (int k = 0; k < m.num_triangles(); ++k) {
    const auto& tr = m.triangles()[k];
    const auto& te = m.triangle_edges()[k];
    const int a = tr[0], b = tr[1], c = tr[2];
    const int ma = nv + te[0], mb = nv + te[1], mc = nv + te[2];  // opposite a, b, c
    t.push_back({a, mc, mb});
    t.push_back({mc, b, ma});
    t.push_back({mb, ma, c});
    t.push_back({ma, mb, mc});
  }
  std::vector<std::pair<std::array<int, 2>, BoundaryTag>> tags;
  for (const auto& be : m.boundary()) {
    const auto& ed = m.edges()[be.edge];
    tags.push_back({{ed[0], nv + be.edge}, be.tag});
    tags.push_back({{nv + be.edge, ed[1]}, be.tag});
  }
  return TriMesh(std::move(v), std::move(t), m.domain(), tags);
}

TriMesh refine(const TriMesh& m, int levels) {
  TriMesh out = m;
  for (int l = 0; l < levels; ++l) out = refine_regular(out);
  return out;
}

// ---------------------------------------------------------------------------
// Boundary integrals

double boundary_line_integral(const TriMesh& m, BoundaryTag tag,
                              const std::function<double(const BoundaryPoint&)>& f) {
  if (!m.domain().has_tag(tag)) {
    throw InvalidParameter("boundary_line_integral: mesh has no " + std::string(tag_name(tag)) + " boundary");
  }
  // 5-point Gauss-Legendre on [0, 1].
  static constexpr double gx[5] = {0.04691007703066800, 0.23076534494715845, 0.5, 0.76923465505284155,
                                   0.95308992296933200};
  static constexpr double gw[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                                   0.23931433524968324, 0.11846344252809454};
  double sum = 0.0;
  for (const auto& be : m.boundary()) {
    if (be.tag != tag) continue;
    const auto& tr = m.triangles()[be.triangle];
    // Edge runs from local vertex (k+1) to (k+2), counter-clockwise around the element,
    // so the outward normal is the edge direction rotated clockwise.
    const Vec2 a = m.vertices()[tr[(be.local + 1) % 3]];
    const Vec2 b = m.vertices()[tr[(be.local + 2) % 3]];
    const Vec2 d = b - a;
    const double len = d.norm();
    const Vec2 n(d.y() / len, -d.x() / len);
    for (int q = 0; q < 5; ++q) {
      BoundaryPoint bp;
      bp.x = a + gx[q] * d;
      bp.normal = n;
      bp.element = be.triangle;
      bp.bary = {0.0, 0.0, 0.0};
      bp.bary[(be.local + 1) % 3] = 1.0 - gx[q];
      bp.bary[(be.local + 2) % 3] = gx[q];
      sum += gw[q] * len * f(bp) * bp.x.x();
    }
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Text I/O

void write_mesh(std::ostream& os, const TriMesh& m) {
  os.precision(17);
  const auto& d = m.domain();
  os << "jsflow-mesh 1\n";
  os << "domain " << d.r_max << ' ' << d.z_min << ' ' << d.z_max << ' ' << (d.has_sphere ? 1 : 0) << '\n';
  os << "vertices " << m.num_vertices() << '\n';
  for (const auto& v : m.vertices()) os << v.x() << ' ' << v.y() << '\n';
  os << "triangles " << m.num_triangles() << '\n';
  for (const auto& t : m.triangles()) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "boundary " << m.boundary().size() << '\n';
  for (const auto& be : m.boundary()) {
    const auto& e = m.edges()[be.edge];
    os << e[0] << ' ' << e[1] << ' ' << tag_name(be.tag) << '\n';
  }
}

TriMesh read_mesh(std::istream& is) {
  auto expect = [&is](const char* word) {
    std::string w;
    if (!(is >> w) || w != word) throw FormatError(std::string("read_mesh: expected '") + word + "'");
  };
  expect("jsflow-mesh");
  int version = 0;
  if (!(is >> version) || version != 1) throw FormatError("read_mesh: unsupported version");
  expect("domain");
  Domain d;
  int sphere = 0;
  if (!(is >> d.r_max >> d.z_min >> d.z_max >> sphere)) throw FormatError("read_mesh: bad domain line");
  d.has_sphere = sphere != 0;
  std::size_t n = 0;
  expect("vertices");
  if (!(is >> n)) throw FormatError("read_mesh: bad vertex count");
  std::vector<Vec2> v(n);
  for (auto& x : v)
    if (!(is >> x.x() >> x.y())) throw FormatError("read_mesh: truncated vertex list");
  expect("triangles");
  if (!(is >> n)) throw FormatError("read_mesh: bad triangle count");
  std::vector<std::array<int, 3>> t(n);
  for (auto& x : t)
    if (!(is >> x[0] >> x[1] >> x[2])) throw FormatError("read_mesh: truncated triangle list");
  expect("boundary");
  if (!(is >> n)) throw FormatError("read_mesh: bad boundary count");
  std::vector<std::pair<std::array<int, 2>, BoundaryTag>> tags(n);
  for (auto& [e, tag] : tags) {
    std::string name;
    if (!(is >> e[0] >> e[1] >> name)) throw FormatError("read_mesh: truncated boundary list");
    auto parsed = parse_tag(name);
    if (!parsed) throw FormatError("read_mesh: unknown boundary tag '" + name + "'");
    tag = *parsed;
  }
  return TriMesh(std::move(v), std::move(t), d, tags);
}

}  // namespace jsflow::mesh
