#ifndef HBI_GEOMETRY_HPP
#define HBI_GEOMETRY_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include "hbi/errors.hpp"

namespace hbi {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

/// Flat simple polygon. Vertices follow the right-hand rule about `normal`.
template <typename Scalar>
struct Panel {
  std::vector<Vec3<Scalar>> vertices;
  Vec3<Scalar> normal;
  Vec3<Scalar> centroid;  // area centroid
  Scalar area{};
  Scalar diameter{};  // largest vertex-to-vertex distance
  std::vector<Scalar> edge_lengths;

  std::size_t size() const { return vertices.size(); }
  const Vec3<Scalar>& vertex(std::size_t j) const { return vertices[j % vertices.size()]; }
};

/// Edge-local right-handed frame: ix along the edge, iy the panel normal,
/// iz = ix x iy the in-plane outward edge normal.
template <typename Scalar>
struct EdgeFrame {
  Vec3<Scalar> origin;
  Vec3<Scalar> ix;
  Vec3<Scalar> iy;
  Vec3<Scalar> iz;
  Scalar length{};

  Eigen::Matrix<Scalar, 3, 3> basis() const {
    Eigen::Matrix<Scalar, 3, 3> b;
    b << ix, iy, iz;
    return b;
  }
};

/// Evaluation point in edge-local coordinates. `y` is |h|.
template <typename Scalar>
struct LocalPoint {
  Scalar x{};
  Scalar y{};
  Scalar z{};
  Scalar h{};
};

struct GeometryOptions {
  double planarity_tol = 1e-10;  // relative to the panel diameter
};

namespace detail {

template <typename Scalar>
Scalar orient2d(const Vec2<Scalar>& a, const Vec2<Scalar>& b, const Vec2<Scalar>& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

template <typename Scalar>
bool on_segment(const Vec2<Scalar>& a, const Vec2<Scalar>& b, const Vec2<Scalar>& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

// Closed-segment intersection test with an absolute orientation tolerance.
template <typename Scalar>
bool segments_intersect(const Vec2<Scalar>& p1, const Vec2<Scalar>& p2, const Vec2<Scalar>& q1,
                        const Vec2<Scalar>& q2, Scalar tol) {
  auto sgn = [tol](Scalar v) { return v > tol ? 1 : (v < -tol ? -1 : 0); };
  const int d1 = sgn(orient2d(q1, q2, p1));
  const int d2 = sgn(orient2d(q1, q2, p2));
  const int d3 = sgn(orient2d(p1, p2, q1));
  const int d4 = sgn(orient2d(p1, p2, q2));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

}  // namespace detail

/// Validates the vertex loop and fills in normal, area, centroid and edge
/// lengths. The normal comes from Newell's method.
template <typename Scalar>
Panel<Scalar> build_panel(std::vector<Vec3<Scalar>> vertices, const GeometryOptions& opts = {}) {
  using std::abs;
  using std::sqrt;
  const std::size_t n = vertices.size();
  if (n < 3) throw Degenerate("panel needs at least 3 vertices");

  Scalar diameter = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const Scalar d = (vertices[a] - vertices[b]).norm();
      if (d == Scalar(0)) {
        std::ostringstream msg;
        msg << "vertices " << a << " and " << b << " coincide";
        throw Degenerate(msg.str());
      }
      diameter = std::max(diameter, d);
    }
  }

  Vec3<Scalar> newell = Vec3<Scalar>::Zero();
  for (std::size_t j = 0; j < n; ++j) {
    const Vec3<Scalar>& a = vertices[j];
    const Vec3<Scalar>& b = vertices[(j + 1) % n];
    newell.x() += (a.y() - b.y()) * (a.z() + b.z());
    newell.y() += (a.z() - b.z()) * (a.x() + b.x());
    newell.z() += (a.x() - b.x()) * (a.y() + b.y());
  }
  const Scalar twice_area = newell.norm();
  if (!(twice_area > Scalar(1e-14) * diameter * diameter)) {
    throw Degenerate("panel has zero area (collinear vertices)");
  }

  Panel<Scalar> panel;
  panel.normal = newell / twice_area;
  panel.diameter = diameter;

  const Scalar plane_tol = Scalar(opts.planarity_tol) * diameter;
  for (std::size_t j = 0; j < n; ++j) {
    const Scalar dev = abs(panel.normal.dot(vertices[j] - vertices[0]));
    if (dev > plane_tol) {
      std::ostringstream msg;
      msg << "vertex " << j << " deviates " << dev << " from the panel plane";
      throw NonPlanar(msg.str());
    }
  }

  // In-plane 2-D coordinates for the shoelace sums and the simplicity test.
  Vec3<Scalar> u = vertices[1] - vertices[0];
  u -= panel.normal.dot(u) * panel.normal;
  u.normalize();
  const Vec3<Scalar> v = panel.normal.cross(u);
  std::vector<Vec2<Scalar>> flat(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec3<Scalar> d = vertices[j] - vertices[0];
    flat[j] = Vec2<Scalar>(d.dot(u), d.dot(v));
  }

  Scalar area2 = 0;
  Vec2<Scalar> c = Vec2<Scalar>::Zero();
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2<Scalar>& a = flat[j];
    const Vec2<Scalar>& b = flat[(j + 1) % n];
    const Scalar cross = a.x() * b.y() - b.x() * a.y();
    area2 += cross;
    c += (a + b) * cross;
  }
  // Newell orientation makes the shoelace sum positive.
  panel.area = area2 / 2;
  c /= (3 * area2);
  panel.centroid = vertices[0] + c.x() * u + c.y() * v;

  const Scalar seg_tol = Scalar(1e-12) * diameter * diameter;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const bool adjacent = (b == a + 1) || (a == 0 && b == n - 1);
      if (adjacent) continue;
      if (detail::segments_intersect(flat[a], flat[(a + 1) % n], flat[b], flat[(b + 1) % n],
                                     seg_tol)) {
        std::ostringstream msg;
        msg << "edges " << a << " and " << b << " intersect";
        throw SelfIntersecting(msg.str());
      }
    }
  }
  // Adjacent edges folding back onto each other.
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2<Scalar>& prev = flat[(j + n - 1) % n];
    const Vec2<Scalar>& cur = flat[j];
    const Vec2<Scalar>& next = flat[(j + 1) % n];
    if (abs(detail::orient2d(prev, cur, next)) <= seg_tol && (prev - cur).dot(next - cur) > 0) {
      std::ostringstream msg;
      msg << "edges meeting at vertex " << j << " overlap";
      throw SelfIntersecting(msg.str());
    }
  }

  panel.edge_lengths.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    panel.edge_lengths[j] = (vertices[(j + 1) % n] - vertices[j]).norm();
  }
  panel.vertices = std::move(vertices);
  return panel;
}

template <typename Scalar>
EdgeFrame<Scalar> edge_frame(const Panel<Scalar>& panel, std::size_t j) {
  if (j >= panel.size()) throw std::out_of_range("edge index out of range");
  EdgeFrame<Scalar> f;
  f.origin = panel.vertex(j);
  Vec3<Scalar> e = panel.vertex(j + 1) - f.origin;
  f.length = e.norm();
  // Remove the sub-tolerance out-of-plane part so the frame is exactly orthonormal.
  e -= panel.normal.dot(e) * panel.normal;
  f.ix = e.normalized();
  f.iy = panel.normal;
  f.iz = f.ix.cross(f.iy);
  return f;
}

template <typename Scalar>
LocalPoint<Scalar> localize(const EdgeFrame<Scalar>& frame, const Vec3<Scalar>& r) {
  const Vec3<Scalar> d = r - frame.origin;
  LocalPoint<Scalar> p;
  p.x = d.dot(frame.ix);
  p.h = d.dot(frame.iy);
  p.y = std::abs(p.h);
  p.z = d.dot(frame.iz);
  return p;
}

template <typename Scalar>
Vec3<Scalar> to_global(const EdgeFrame<Scalar>& frame, const LocalPoint<Scalar>& p) {
  return frame.origin + p.x * frame.ix + p.h * frame.iy + p.z * frame.iz;
}

/// Signed distance from the panel plane along the normal.
template <typename Scalar>
Scalar height(const Panel<Scalar>& panel, const Vec3<Scalar>& r) {
  return panel.normal.dot(r - panel.vertices.front());
}

}  // namespace hbi

#endif  // HBI_GEOMETRY_HPP
