#ifndef HBI_ORACLE_HPP
#define HBI_ORACLE_HPP

// Reference quadrature for the panel integrals. Deliberately self-contained:
// it depends on the panel geometry only and shares no code with the analytic
// series path it is used to check.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hbi/errors.hpp"
#include "hbi/geometry.hpp"

namespace hbi::oracle {

enum class Quantity { L, M, Lgrad, Mgrad };

enum class SingularScheme { None, PolarAboutProjection };

struct OracleConfig {
  double abs_tol = 1e-15;
  double rel_tol = 1e-13;
  int max_subdivisions = 200000;
  SingularScheme singular_scheme = SingularScheme::None;
  int order = 8;  // Gauss-Legendre points per direction on each cell
};

template <typename Scalar>
using CVec = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Value>
struct QuadResult {
  Value value;
  double error_estimate = 0;
  int subdivisions = 0;
};

inline int components(Quantity q) { return (q == Quantity::L || q == Quantity::M) ? 1 : 3; }

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
template <typename Scalar>
struct GaussLegendre {
  std::vector<Scalar> nodes;
  std::vector<Scalar> weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    using std::abs;
    using std::cos;
    const Scalar pi = std::numbers::pi_v<Scalar>;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      Scalar x = cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
      Scalar dp = 0;
      for (int it = 0; it < 100; ++it) {
        Scalar p0 = 1, p1 = x;
        for (int j = 2; j <= n; ++j) {
          const Scalar p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const Scalar dx = p1 / dp;
        x -= dx;
        if (abs(dx) < Scalar(1e-17)) break;
      }
      Scalar p0 = 1, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const Scalar p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const Scalar w = 2 / ((1 - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = weights[n - 1 - i] = w;
    }
  }
};

namespace detail {

template <typename Scalar>
std::complex<Scalar> cexp_i(Scalar phase) {
  return std::polar(Scalar(1), phase);
}

// Kernel values at source point rs for target r, packed per quantity.
template <typename Scalar>
CVec<Scalar> kernel(Quantity q, const Vec3<Scalar>& r, const Vec3<Scalar>& rs,
                    const Vec3<Scalar>& n, Scalar k) {
  using C = std::complex<Scalar>;
  const Scalar c = Scalar(0.25) * std::numbers::inv_pi_v<Scalar>;
  const Vec3<Scalar> d = r - rs;
  const Scalar R = d.norm();
  const C e = cexp_i(k * R);
  const C ikR(0, k * R);
  CVec<Scalar> out(components(q));
  switch (q) {
    case Quantity::L:
      out(0) = c * e / R;
      break;
    case Quantity::M: {
      // n . grad_{r'} G = -h G'(R) / R, h = n . (r - r')
      const Scalar h = n.dot(d);
      out(0) = -h * c * e * (ikR - Scalar(1)) / (R * R * R);
      break;
    }
    case Quantity::Lgrad: {
      const C g = c * e * (ikR - Scalar(1)) / (R * R * R);
      for (int i = 0; i < 3; ++i) out(i) = g * d(i);
      break;
    }
    case Quantity::Mgrad: {
      const Scalar h = n.dot(d);
      const Scalar R2 = R * R;
      const C g = c * e * (ikR - Scalar(1)) / (R2 * R);
      const C dg = c * e * (Scalar(3) - Scalar(3) * ikR + ikR * ikR) / (R2 * R2);
      for (int i = 0; i < 3; ++i) out(i) = -n(i) * g - h * dg * d(i) / R;
      break;
    }
  }
  return out;
}

// Adaptive integration over cells that split into four children. `rule`
// integrates a cell, `split` produces children, `measure` gives the cell's
// share of the total domain.
template <typename Cell, typename Value, typename Rule, typename Split>
QuadResult<Value> adaptive(const std::vector<Cell>& roots, const Rule& rule, const Split& split,
                           const std::vector<double>& shares, const OracleConfig& cfg) {
  struct Item {
    Cell cell;
    Value coarse;
    double share;
  };
  std::vector<Item> stack;
  Value total_coarse;
  bool first = true;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Value v = rule(roots[i]);
    total_coarse = first ? v : Value(total_coarse + v);
    first = false;
    stack.push_back({roots[i], v, shares[i]});
  }
  const double tol = std::max(cfg.abs_tol, cfg.rel_tol * static_cast<double>(total_coarse.norm()));

  QuadResult<Value> res;
  res.value = total_coarse;
  res.value.setZero();
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    auto kids = split(item.cell);
    Value fine = item.coarse;
    fine.setZero();
    std::vector<Value> kid_vals;
    kid_vals.reserve(kids.size());
    for (const auto& kc : kids) {
      kid_vals.push_back(rule(kc));
      fine += kid_vals.back();
    }
    const double err = static_cast<double>((fine - item.coarse).norm());
    if (err <= tol * item.share || item.share < 1e-15) {
      res.value += fine;
      res.error_estimate += err;
      continue;
    }
    if (++res.subdivisions > cfg.max_subdivisions) {
      throw NoConvergence("oracle quadrature budget exhausted", res.error_estimate + err);
    }
    const double kid_share = item.share / static_cast<double>(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i) {
      stack.push_back({kids[i], kid_vals[i], kid_share});
    }
  }
  return res;
}

// Ear-clipping triangulation of a simple polygon given in-plane coordinates
// with positive orientation.
template <typename Scalar>
std::vector<std::array<std::size_t, 3>> triangulate(const std::vector<Vec2<Scalar>>& pts) {
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto cross = [&](std::size_t a, std::size_t b, std::size_t c) {
    return (pts[b] - pts[a]).x() * (pts[c] - pts[a]).y() -
           (pts[b] - pts[a]).y() * (pts[c] - pts[a]).x();
  };
  std::vector<std::array<std::size_t, 3>> tris;
  while (idx.size() > 3) {
    bool clipped = false;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const std::size_t a = idx[(i + idx.size() - 1) % idx.size()];
      const std::size_t b = idx[i];
      const std::size_t c = idx[(i + 1) % idx.size()];
      if (cross(a, b, c) <= 0) continue;
      bool inside = false;
      for (std::size_t j : idx) {
        if (j == a || j == b || j == c) continue;
        if (cross(a, b, j) >= 0 && cross(b, c, j) >= 0 && cross(c, a, j) >= 0) {
          inside = true;
          break;
        }
      }
      if (inside) continue;
      tris.push_back({a, b, c});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw std::runtime_error("ear clipping failed");
  }
  tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

// Collapsed map of the unit square onto the triangle (apex, b, c):
// point = apex + u (b - apex + v (c - b)), jacobian = u * |(b - apex) x (c - b)|.
template <typename Scalar>
struct Square {
  Scalar u0, u1, v0, v1;
};

}  // namespace detail

/// 1-D reference for the edge primitive difference
///   -z int_{x_lo}^{x_hi} (e^{ikr} - e^{iky}) / (4 pi i k (x^2 + z^2)) dx.
template <typename Scalar>
QuadResult<std::complex<Scalar>> quad_edge_H(Scalar x_lo, Scalar x_hi, Scalar y, Scalar z,
                                             Scalar k, const OracleConfig& cfg = {}) {
  using C = std::complex<Scalar>;
  using V = Eigen::Matrix<C, 1, 1>;
  QuadResult<C> out{C(0), 0, 0};
  if (z == Scalar(0)) return out;
  const Scalar c = Scalar(0.25) * std::numbers::inv_pi_v<Scalar>;
  auto f = [&](Scalar x) -> C {
    const Scalar D = x * x + z * z;
    const Scalar R = std::sqrt(D + y * y);
    if (k == Scalar(0)) return c / (R + y);
    const Scalar delta = D / (R + y);
    const Scalar t = k * delta;
    if (t > Scalar(1e-3)) {
      return c * (detail::cexp_i(k * R) - detail::cexp_i(k * y)) / (C(0, k) * D);
    }
    // (e^{it} - 1)/(it) by its Taylor series
    C sum(0), term(1);
    for (int m = 0; m < 10; ++m) {
      sum += term;
      term *= C(0, t) / Scalar(m + 2);
    }
    return c * detail::cexp_i(k * y) * sum / (R + y);
  };
  const GaussLegendre<Scalar> gl(cfg.order);
  auto rule = [&](const std::pair<Scalar, Scalar>& iv) -> V {
    const Scalar mid = (iv.first + iv.second) / 2, half = (iv.second - iv.first) / 2;
    C s(0);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * f(mid + half * gl.nodes[i]);
    V v;
    v(0) = -z * half * s;
    return v;
  };
  auto split = [](const std::pair<Scalar, Scalar>& iv) {
    const Scalar m = (iv.first + iv.second) / 2;
    return std::vector<std::pair<Scalar, Scalar>>{{iv.first, m}, {m, iv.second}};
  };
  auto res = detail::adaptive<std::pair<Scalar, Scalar>, V>({{x_lo, x_hi}}, rule, split, {1.0}, cfg);
  out.value = res.value(0);
  out.error_estimate = res.error_estimate;
  out.subdivisions = res.subdivisions;
  return out;
}

/// Reference value of one panel integral at target r.
template <typename Scalar>
QuadResult<CVec<Scalar>> quad_panel(const Panel<Scalar>& panel, const Vec3<Scalar>& r, Scalar k,
                                    Quantity q, const OracleConfig& cfg = {}) {
  using detail::Square;
  using Tri = std::array<Vec3<Scalar>, 3>;
  const Vec3<Scalar>& n = panel.normal;
  const Scalar h = n.dot(r - panel.vertices.front());
  const std::size_t nv = panel.size();
  const GaussLegendre<Scalar> gl(cfg.order);
  const int nc = components(q);

  // In-plane coordinates relative to the projection of r.
  const Vec3<Scalar> proj = r - h * n;
  Vec3<Scalar> eu = panel.vertices[1] - panel.vertices[0];
  eu = (eu - n.dot(eu) * n).normalized();
  const Vec3<Scalar> ev = n.cross(eu);
  std::vector<Vec2<Scalar>> flat(nv);
  for (std::size_t j = 0; j < nv; ++j) {
    const Vec3<Scalar> d = panel.vertices[j] - proj;
    flat[j] = Vec2<Scalar>(d.dot(eu), d.dot(ev));
  }

  // Triangles with an apex; the collapsed map removes a 1/R singularity at the apex.
  struct Root {
    Tri tri;
    Scalar sign;
    Square<Scalar> sq;
  };
  std::vector<Root> roots;
  const Scalar near = Scalar(1e-8) * panel.diameter;
  bool projection_on_panel = true;
  for (std::size_t j = 0; j < nv; ++j) {
    const Vec2<Scalar>& a = flat[j];
    const Vec2<Scalar>& b = flat[(j + 1) % nv];
    if (a.x() * b.y() - a.y() * b.x() < Scalar(0)) projection_on_panel = false;
  }

  if (cfg.singular_scheme == SingularScheme::PolarAboutProjection) {
    if (std::abs(h) <= near && (q == Quantity::Lgrad || q == Quantity::Mgrad)) {
      // in-plane gradient kernels are not absolutely integrable
      bool inside = true;
      for (std::size_t j = 0; j < nv; ++j) {
        const Vec2<Scalar>& a = flat[j];
        const Vec2<Scalar>& b = flat[(j + 1) % nv];
        if (a.x() * b.y() - a.y() * b.x() <= Scalar(0)) inside = false;
      }
      if (inside) throw std::invalid_argument("oracle: in-plane gradient self-terms unsupported");
    }
    for (std::size_t j = 0; j < nv; ++j) {
      const Vec2<Scalar>& a = flat[j];
      const Vec2<Scalar>& b = flat[(j + 1) % nv];
      const Scalar cr = a.x() * b.y() - a.y() * b.x();
      const Scalar len = (b - a).norm();
      if (std::abs(cr) <= Scalar(1e-14) * len * panel.diameter) {
        // projection on this edge's line: the triangle is degenerate, but the
        // point must not sit on the segment itself in the plane
        if (std::abs(h) <= near && a.dot(b) <= Scalar(0)) {
          throw StrongSingular("oracle: target on panel edge", j);
        }
        continue;
      }
      roots.push_back({Tri{proj, panel.vertex(j), panel.vertex(j + 1)}, cr > 0 ? Scalar(1) : Scalar(-1),
                       {0, 1, 0, 1}});
    }
  } else {
    if (std::abs(h) <= near && projection_on_panel) {
      throw std::invalid_argument("oracle: in-plane target needs the polar scheme");
    }
    for (const auto& t : detail::triangulate(flat)) {
      roots.push_back({Tri{panel.vertex(t[0]), panel.vertex(t[1]), panel.vertex(t[2])}, Scalar(1),
                       {0, 1, 0, 1}});
    }
  }

  using V = CVec<Scalar>;
  auto rule = [&](const Root& root) -> V {
    const Tri& t = root.tri;
    const Vec3<Scalar> e1 = t[1] - t[0];
    const Vec3<Scalar> e2 = t[2] - t[1];
    const Scalar jac0 = e1.cross(e2).norm();
    const Square<Scalar>& s = root.sq;
    const Scalar hu = (s.u1 - s.u0) / 2, mu = (s.u1 + s.u0) / 2;
    const Scalar hv = (s.v1 - s.v0) / 2, mv = (s.v1 + s.v0) / 2;
    V acc = V::Zero(nc);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const Scalar u = mu + hu * gl.nodes[i];
      for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
        const Scalar v = mv + hv * gl.nodes[j];
        const Vec3<Scalar> rs = t[0] + u * (e1 + v * e2);
        acc += (gl.weights[i] * gl.weights[j] * u * jac0) * detail::kernel(q, r, rs, n, k);
      }
    }
    return acc * (root.sign * hu * hv);
  };
  auto split = [](const Root& root) {
    const Square<Scalar>& s = root.sq;
    const Scalar um = (s.u0 + s.u1) / 2, vm = (s.v0 + s.v1) / 2;
    std::vector<Root> kids(4, root);
    kids[0].sq = {s.u0, um, s.v0, vm};
    kids[1].sq = {um, s.u1, s.v0, vm};
    kids[2].sq = {s.u0, um, vm, s.v1};
    kids[3].sq = {um, s.u1, vm, s.v1};
    return kids;
  };
  std::vector<double> shares;
  Scalar total = 0;
  for (const auto& rt : roots) total += (rt.tri[1] - rt.tri[0]).cross(rt.tri[2] - rt.tri[1]).norm();
  for (const auto& rt : roots) {
    shares.push_back(static_cast<double>((rt.tri[1] - rt.tri[0]).cross(rt.tri[2] - rt.tri[1]).norm() / total));
  }
  return detail::adaptive<Root, V>(roots, rule, split, shares, cfg);
}

}  // namespace hbi::oracle

#endif  // HBI_ORACLE_HPP
