#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace jsflow::mesh {

/// (r, z) coordinates in units of the sphere radius.
using Vec2 = Eigen::Vector2d;

enum class BoundaryTag : std::int8_t { Axis = 0, Sphere = 1, SideWall = 2, Top = 3, Bottom = 4 };
inline constexpr int kNumTags = 5;

[[nodiscard]] std::string_view tag_name(BoundaryTag tag);
[[nodiscard]] std::optional<BoundaryTag> parse_tag(std::string_view name);

/// The analytic domain a mesh discretizes: {0 <= r <= r_max, z_min <= z <= z_max},
/// minus the unit half-disc at the origin when has_sphere is set.
struct Domain {
  double r_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
  bool has_sphere = false;

  /// Closest point of the boundary piece `tag` to x.
  [[nodiscard]] Vec2 project(BoundaryTag tag, const Vec2& x) const;
  /// Distance from x to the boundary piece `tag` (segments/arc, not lines).
  [[nodiscard]] double distance(BoundaryTag tag, const Vec2& x) const;
  /// Negative inside, positive outside (approximate away from the boundary).
  [[nodiscard]] double signed_distance(const Vec2& x) const;
  [[nodiscard]] bool has_tag(BoundaryTag tag) const { return tag != BoundaryTag::Sphere || has_sphere; }
};

struct BoundaryEdge {
  int edge;        // index into TriMesh::edges
  int triangle;    // the one triangle owning the edge
  int local;       // local index of the triangle vertex opposite the edge
  BoundaryTag tag;
};

/// Element index plus barycentric coordinates of a point.
struct MeshPoint {
  int element = -1;
  std::array<double, 3> bary{};
};

/// Result of a failed location: the nearest point of the (discrete) domain boundary.
struct Outside {
  Vec2 nearest;
  MeshPoint location;
};

using Location = std::variant<MeshPoint, Outside>;

class TriMesh;

/// Uniform background grid with per-cell candidate element lists.
class PointLocator {
public:
  PointLocator() = default;
  explicit PointLocator(const TriMesh& m);

  /// Candidate elements whose bounding box overlaps the cell containing x.
  [[nodiscard]] const std::vector<int>* candidates(const Vec2& x) const;

private:
  Vec2 lo_{0, 0};
  double cell_ = 1.0;
  int nx_ = 0, ny_ = 0;
  std::vector<std::vector<int>> cells_;
};

/// Conforming, positively oriented triangulation with tagged boundary edges.
class TriMesh {
public:
  TriMesh() = default;
  /// Builds connectivity and the point-location index. `edge_tags` maps each
  /// boundary edge (as an unordered vertex pair) to its tag; untagged boundary
  /// edges are classified geometrically against `domain`.
  TriMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles, Domain domain,
          const std::vector<std::pair<std::array<int, 2>, BoundaryTag>>& edge_tags = {});

  [[nodiscard]] const std::vector<Vec2>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  [[nodiscard]] const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  /// triangle_edges()[t][k] is the edge opposite local vertex k.
  [[nodiscard]] const std::vector<std::array<int, 3>>& triangle_edges() const { return tri_edges_; }
  /// neighbors()[t][k] is the triangle across the edge opposite vertex k, or -1.
  [[nodiscard]] const std::vector<std::array<int, 3>>& neighbors() const { return neighbors_; }
  [[nodiscard]] const std::vector<BoundaryEdge>& boundary() const { return boundary_; }
  /// Tag of each edge, or -1 for interior edges.
  [[nodiscard]] const std::vector<std::int8_t>& edge_tags() const { return edge_tag_; }
  [[nodiscard]] const Domain& domain() const { return domain_; }

  [[nodiscard]] int num_vertices() const { return int(vertices_.size()); }
  [[nodiscard]] int num_triangles() const { return int(triangles_.size()); }
  [[nodiscard]] int num_edges() const { return int(edges_.size()); }

  [[nodiscard]] Vec2 edge_midpoint(int e) const {
    return 0.5 * (vertices_[edges_[e][0]] + vertices_[edges_[e][1]]);
  }
  [[nodiscard]] double edge_length(int e) const {
    return (vertices_[edges_[e][0]] - vertices_[edges_[e][1]]).norm();
  }
  [[nodiscard]] double triangle_area(int t) const;
  [[nodiscard]] Vec2 centroid(int t) const;
  [[nodiscard]] std::array<double, 3> barycentric(int t, const Vec2& x) const;
  [[nodiscard]] Vec2 from_barycentric(const MeshPoint& mp) const;

  /// A triangle containing vertex v.
  [[nodiscard]] int vertex_triangle(int v) const { return vertex_tri_[v]; }
  /// True if v is an endpoint of a boundary edge.
  [[nodiscard]] bool on_boundary(int v) const { return vertex_on_boundary_[v] != 0; }

  /// Point location; `hint` seeds a neighbour walk before the grid lookup.
  [[nodiscard]] Location locate(const Vec2& x, int hint = -1) const;
  /// Like locate(), but maps outside points to their nearest boundary point.
  [[nodiscard]] MeshPoint locate_or_project(const Vec2& x, int hint = -1) const;

  [[nodiscard]] double area() const;
  /// Sum over triangles of the r-weighted area (i.e. volume / 2 pi).
  [[nodiscard]] double weighted_area() const;

  /// Checks every documented invariant; returns an empty string when valid,
  /// otherwise a description of the first violation.
  [[nodiscard]] std::string check_invariants() const;

  /// Hash of the connectivity and coordinates, used to match checkpoints to meshes.
  [[nodiscard]] std::uint64_t fingerprint() const;

private:
  [[nodiscard]] std::optional<MeshPoint> walk(const Vec2& x, int start) const;
  [[nodiscard]] Outside nearest_boundary(const Vec2& x) const;

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<std::array<int, 3>> neighbors_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<std::int8_t> edge_tag_;
  std::vector<int> vertex_tri_;
  std::vector<std::uint8_t> vertex_on_boundary_;
  Domain domain_;
  PointLocator locator_;
};

struct SphereMeshOptions {
  double alpha = 4.115;   // cylinder radius / sphere radius
  double height = 16.0;   // cylinder height / sphere radius, sphere centred at z = 0
  double h_near = 0.1;    // target edge length on the sphere
  double h_far = 0.5;     // target edge length 3+ radii away from the sphere
  unsigned seed = 12345;
  int max_iterations = 1500;
};

/// Target edge length at x: geometric from h_near on the sphere to h_far three radii out.
[[nodiscard]] double target_size(const SphereMeshOptions& opt, const Vec2& x);

/// Graded unstructured triangulation of the sphere-in-cylinder meridian plane.
[[nodiscard]] TriMesh build_sphere_in_cylinder(const SphereMeshOptions& opt);

/// Structured triangulation of [0, r_max] x [z_min, z_max] (no sphere); r = 0 is the axis.
[[nodiscard]] TriMesh build_rectangle(double r_max, double z_min, double z_max, int n_r, int n_z);

/// Splits each triangle into four; new Sphere-boundary vertices are projected onto the sphere.
[[nodiscard]] TriMesh refine_regular(const TriMesh& m);

/// Applies refine_regular `levels` times.
[[nodiscard]] TriMesh refine(const TriMesh& m, int levels);

struct BoundaryPoint {
  Vec2 x;           // quadrature point
  Vec2 normal;      // outward unit normal of the fluid domain
  int element;      // owning triangle
  std::array<double, 3> bary;
};

/// Integral of f * r dl over the edges tagged `tag` (5-point Gauss per edge).
[[nodiscard]] double boundary_line_integral(const TriMesh& m, BoundaryTag tag,
                                            const std::function<double(const BoundaryPoint&)>& f);

/// Plain-text mesh format; see README for the layout.
void write_mesh(std::ostream& os, const TriMesh& m);
[[nodiscard]] TriMesh read_mesh(std::istream& is);

}  // namespace jsflow::mesh
