#include "delaunay.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace jsflow::mesh::detail {

namespace {

using Vec2 = Eigen::Vector2d;

struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> nbr;  // across the edge opposite v[k]
  bool alive = true;
};

long double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (static_cast<long double>(b.x()) - a.x()) * (static_cast<long double>(c.y()) - a.y()) -
         (static_cast<long double>(b.y()) - a.y()) * (static_cast<long double>(c.x()) - a.x());
}

// Positive when d lies strictly inside the circumcircle of the CCW triangle abc.
long double in_circle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const long double adx = a.x() - d.x(), ady = a.y() - d.y();
  const long double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const long double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const long double ad = adx * adx + ady * ady;
  const long double bd = bdx * bdx + bdy * bdy;
  const long double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

class Triangulator {
public:
  explicit Triangulator(const std::vector<Vec2>& input) : pts_(input) {
    Vec2 lo = pts_.front(), hi = pts_.front();
    for (const auto& p : pts_) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Vec2 c = 0.5 * (lo + hi);
    const double span = std::max((hi - lo).maxCoeff(), 1e-12);
    n_real_ = int(pts_.size());
    pts_.push_back(c + Vec2(-20.0 * span, -20.0 * span));
    pts_.push_back(c + Vec2(20.0 * span, -20.0 * span));
    pts_.push_back(c + Vec2(0.0, 20.0 * span));
    tris_.push_back({{n_real_, n_real_ + 1, n_real_ + 2}, {-1, -1, -1}, true});
  }

  void insert(int p) {
    const int start = locate(pts_[p]);
    // Grow the cavity of triangles whose circumcircle contains p.
    cavity_.clear();
    stack_.clear();
    stack_.push_back(start);
    mark_.resize(tris_.size(), 0);
    ++stamp_;
    mark(start);
    while (!stack_.empty()) {
      const int t = stack_.back();
      stack_.pop_back();
      cavity_.push_back(t);
      for (int k = 0; k < 3; ++k) {
        const int n = tris_[t].nbr[k];
        if (n < 0 || marked(n)) continue;
        const auto& v = tris_[n].v;
        if (in_circle(pts_[v[0]], pts_[v[1]], pts_[v[2]], pts_[p]) > 0) {
          mark(n);
          stack_.push_back(n);
        }
      }
    }
    // Boundary edges of the cavity, CCW as seen from inside.
    rim_.clear();
    for (int t : cavity_) {
      for (int k = 0; k < 3; ++k) {
        const int n = tris_[t].nbr[k];
        if (n >= 0 && marked(n)) continue;
        rim_.push_back({tris_[t].v[(k + 1) % 3], tris_[t].v[(k + 2) % 3], n});
      }
      tris_[t].alive = false;
    }
    // New fan around p. Triangle (a, b, p): edge opposite p is (a, b).
    first_.clear();
    for (const auto& r : rim_) {
      int id;
      if (!free_.empty()) {
        id = free_.back();
        free_.pop_back();
        tris_[id] = Tri{{r.a, r.b, p}, {-1, -1, r.outer}, true};
      } else {
        id = int(tris_.size());
        tris_.push_back(Tri{{r.a, r.b, p}, {-1, -1, r.outer}, true});
      }
      if (r.outer >= 0) {
        auto& on = tris_[r.outer].nbr;
        for (int k = 0; k < 3; ++k) {
          const auto& ov = tris_[r.outer].v;
          if ((ov[(k + 1) % 3] == r.b && ov[(k + 2) % 3] == r.a)) on[k] = id;
        }
      }
      first_.emplace_back(r.a, id);
    }
    for (const auto& [a, id] : first_) {
      auto& t = tris_[id];
      // Edge opposite a is (b, p): shared with the fan triangle that starts at b.
      // Edge opposite b is (p, a): shared with the fan triangle that ends at a.
      const int b = t.v[1];
      for (const auto& [a2, id2] : first_) {
        if (a2 == b) t.nbr[0] = id2;
        if (tris_[id2].v[1] == a) t.nbr[1] = id2;
      }
    }
    for (int t : cavity_) free_.push_back(t);
    last_ = first_.empty() ? last_ : first_.front().second;
    mark_.resize(tris_.size(), 0);
  }

  std::vector<std::array<int, 3>> result() const {
    std::vector<std::array<int, 3>> out;
    for (const auto& t : tris_) {
      if (!t.alive) continue;
      if (t.v[0] >= n_real_ || t.v[1] >= n_real_ || t.v[2] >= n_real_) continue;
      out.push_back(t.v);
    }
    return out;
  }

private:
  int locate(const Vec2& x) {
    int t = last_;
    if (t < 0 || !tris_[t].alive) {
      t = 0;
      while (!tris_[t].alive) ++t;
    }
    for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
      const auto& tr = tris_[t];
      int next = -1;
      const int off = int(rng_() % 3);
      for (int j = 0; j < 3; ++j) {
        const int k = (j + off) % 3;
        if (orient(pts_[tr.v[(k + 1) % 3]], pts_[tr.v[(k + 2) % 3]], x) < 0) {
          next = tr.nbr[k];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    throw std::runtime_error("delaunay: point location did not terminate");
  }

  void mark(int t) { mark_[t] = stamp_; }
  bool marked(int t) const { return mark_[t] == stamp_; }

  std::vector<Vec2> pts_;
  std::vector<Tri> tris_;
  std::vector<int> free_;
  std::vector<int> cavity_, stack_;
  std::vector<unsigned> mark_;
  unsigned stamp_ = 0;
  struct RimEdge {
    int a, b, outer;
  };
  std::vector<RimEdge> rim_;
  std::vector<std::pair<int, int>> first_;
  int n_real_ = 0;
  int last_ = 0;
  std::minstd_rand rng_{1};
};

}  // namespace

std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& points) {
  if (points.size() < 3) return {};
  Triangulator tr(points);
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937(42));
  for (int p : order) tr.insert(p);
  return tr.result();
}

}  // namespace jsflow::mesh::detail
