#ifndef HBI_TESTS_FIXTURES_HPP
#define HBI_TESTS_FIXTURES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "hbi/geometry.hpp"
#include "hbi/oracle.hpp"

namespace hbi::test {

using V3 = Vec3<double>;
using Cplx = std::complex<double>;

inline Panel<double> unit_triangle() { return build_panel<double>({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}); }

inline Panel<double> unit_square() {
  return build_panel<double>({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
}

// Six outward-oriented faces of the unit cube [0,1]^3.
inline std::vector<Panel<double>> unit_cube() {
  return {
      build_panel<double>({{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 0, 0}}),  // z = 0, normal -z
      build_panel<double>({{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}),  // z = 1, normal +z
      build_panel<double>({{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}}),  // y = 0, normal -y
      build_panel<double>({{0, 1, 0}, {0, 1, 1}, {1, 1, 1}, {1, 1, 0}}),  // y = 1, normal +y
      build_panel<double>({{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {0, 1, 0}}),  // x = 0, normal -x
      build_panel<double>({{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 0, 1}}),  // x = 1, normal +x
  };
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  return q.normalized().toRotationMatrix();
}

// Random convex polygon with 3..5 vertices, diameter O(scale), placed with a
// random rigid motion.
inline Panel<double> random_convex_panel(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_int_distribution<int> nv(3, 5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const int n = nv(rng);
  std::vector<double> angles(n);
  for (;;) {
    for (auto& a : angles) a = 2 * std::numbers::pi * uni(rng);
    std::sort(angles.begin(), angles.end());
    double max_gap = 2 * std::numbers::pi - angles.back() + angles.front();
    double min_gap = max_gap;
    for (int i = 1; i < n; ++i) {
      max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
      min_gap = std::min(min_gap, angles[i] - angles[i - 1]);
    }
    if (max_gap < 0.9 * std::numbers::pi && min_gap > 0.3) break;
  }
  const double ax = 0.5 * scale * (0.7 + 0.6 * uni(rng));
  const double ay = 0.5 * scale * (0.7 + 0.6 * uni(rng));
  const Eigen::Matrix3d rot = random_rotation(rng);
  const V3 shift(uni(rng) - 0.5, uni(rng) - 0.5, uni(rng) - 0.5);
  std::vector<V3> verts;
  for (double a : angles) verts.push_back(rot * V3(ax * std::cos(a), ay * std::sin(a), 0) + shift);
  return build_panel(std::move(verts));
}

// Distance from r to the (convex) panel.
inline double distance_to_panel(const Panel<double>& p, const V3& r) {
  const double h = height(p, r);
  bool inside = true;
  double best = 1e300;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const EdgeFrame<double> f = edge_frame(p, j);
    const LocalPoint<double> lp = localize(f, r);
    if (lp.z > 0) inside = false;
    const double xc = std::clamp(lp.x, 0.0, f.length);
    best = std::min(best, std::sqrt((lp.x - xc) * (lp.x - xc) + lp.h * lp.h + lp.z * lp.z));
  }
  return inside ? std::abs(h) : best;
}

// Random target with dist_min*diam <= distance to panel, and |r - centroid| <= dist_max*diam.
inline V3 random_target(std::mt19937_64& rng, const Panel<double>& p, double dist_min, double dist_max) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (;;) {
    V3 dir(g(rng), g(rng), g(rng));
    dir.normalize();
    const V3 r = p.centroid + (dist_min + (dist_max - dist_min) * uni(rng)) * p.diameter * dir;
    if (distance_to_panel(p, r) >= dist_min * p.diameter) return r;
  }
}

// Composite Gauss-Legendre on [a, b] with `pieces` equal subintervals.
template <typename F>
auto integrate(const F& f, double a, double b, int pieces = 64, int order = 20) {
  static const oracle::GaussLegendre<double> gl20(20);
  const oracle::GaussLegendre<double> gl = order == 20 ? gl20 : oracle::GaussLegendre<double>(order);
  using R = decltype(f(a));
  R sum = R(0);
  const double w = (b - a) / pieces;
  for (int s = 0; s < pieces; ++s) {
    const double mid = a + (s + 0.5) * w;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) sum += gl.weights[i] * (w / 2) * f(mid + (w / 2) * gl.nodes[i]);
  }
  return sum;
}

inline double rel_err(Cplx a, Cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace hbi::test

#endif  // HBI_TESTS_FIXTURES_HPP
