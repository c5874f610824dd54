#pragma once

#include <array>

namespace jsflow::detail {

struct TriQuadPoint {
  double l0, l1, l2, w;  // barycentric coordinates, weight relative to the triangle area
};

// Six-point rule exact for polynomials of degree 4.
inline constexpr std::array<TriQuadPoint, 6> kTriQuad4 = {{
    {0.108103018168070, 0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.445948490915965, 0.108103018168070, 0.223381589678011},
    {0.816847572980459, 0.091576213509771, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.091576213509771, 0.816847572980459, 0.109951743655322},
}};

}  // namespace jsflow::detail
