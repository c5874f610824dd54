#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

namespace jsflow::mesh::detail {

/// Delaunay triangulation of a point set (Bowyer-Watson with neighbour-walk
/// location). Returns counter-clockwise triangles indexing into `points`.
std::vector<std::array<int, 3>> delaunay(const std::vector<Eigen::Vector2d>& points);

}  // namespace jsflow::mesh::detail
