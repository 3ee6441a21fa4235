#include <doctest.h>

#include <random>

#include "hbi/geometry.hpp"
#include "support/fixtures.hpp"

using namespace hbi;
using hbi::test::V3;

TEST_CASE("build_panel: unit right triangle") {
  const auto p = test::unit_triangle();
  CHECK((p.normal - V3(0, 0, 1)).norm() < 1e-15);
  CHECK(p.area == doctest::Approx(0.5).epsilon(1e-15));
  REQUIRE(p.edge_lengths.size() == 3);
  CHECK(p.edge_lengths[0] == doctest::Approx(1.0));
  CHECK(p.edge_lengths[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.edge_lengths[2] == doctest::Approx(1.0));
  CHECK((p.centroid - V3(1.0 / 3, 1.0 / 3, 0)).norm() < 1e-15);
}

TEST_CASE("build_panel: reversed order flips the normal") {
  const auto p = build_panel<double>({{0, 0, 0}, {0, 1, 0}, {1, 0, 0}});
  CHECK((p.normal - V3(0, 0, -1)).norm() < 1e-15);
  CHECK(p.area == doctest::Approx(0.5));
}

TEST_CASE("build_panel: error paths") {
  CHECK_THROWS_AS(build_panel<double>({{0, 0, 0}, {1, 0, 0}, {1, 0, 0.5}, {0, 0.2, 0}}), NonPlanar);
  CHECK_THROWS_AS(build_panel<double>({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}), Degenerate);
  CHECK_THROWS_AS(build_panel<double>({{0, 0, 0}, {1, 0, 0}}), Degenerate);
  CHECK_THROWS_AS(build_panel<double>({{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {0, 1, 0}}), Degenerate);
  // bow tie
  CHECK_THROWS_AS(build_panel<double>({{0, 0, 0}, {2, 2, 0}, {2, 0, 0}, {0, 1, 0}}), SelfIntersecting);
}

TEST_CASE("build_panel: non-convex simple polygon is accepted") {
  const auto p = build_panel<double>({{0, 0, 0}, {2, 0, 0}, {2, 2, 0}, {1, 0.5, 0}, {0, 2, 0}});
  CHECK(p.area == doctest::Approx(2.5));
  CHECK((p.normal - V3(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("edge_frame: axis-aligned frames") {
  const auto sq = test::unit_square();
  const auto f = edge_frame(sq, 0);
  CHECK((f.ix - V3(1, 0, 0)).norm() < 1e-15);
  CHECK((f.iy - V3(0, 0, 1)).norm() < 1e-15);
  CHECK((f.iz - V3(0, -1, 0)).norm() < 1e-15);

  const auto f2 = edge_frame(test::unit_triangle(), 2);
  CHECK((f2.ix - V3(0, -1, 0)).norm() < 1e-15);
  CHECK((f2.iz - V3(-1, 0, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(edge_frame(sq, 4), std::out_of_range);
}

TEST_CASE("localize: axis-aligned projections") {
  const auto f = edge_frame(test::unit_square(), 0);
  auto lp = localize(f, V3(0, 0, 0));
  CHECK(lp.x == 0);
  CHECK(lp.y == 0);
  CHECK(lp.z == 0);
  CHECK(lp.h == 0);
  lp = localize(f, V3(0.5, 0.5, 1));
  CHECK(lp.x == doctest::Approx(0.5));
  CHECK(lp.h == doctest::Approx(1));
  CHECK(lp.y == doctest::Approx(1));
  CHECK(lp.z == doctest::Approx(-0.5));
  lp = localize(f, V3(0.5, 0.5, -1));
  CHECK(lp.h == doctest::Approx(-1));
  CHECK(lp.y == doctest::Approx(1));
  CHECK(lp.x == doctest::Approx(0.5));
  CHECK(lp.z == doctest::Approx(-0.5));
}

TEST_CASE("geometry properties on random convex panels") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = test::random_convex_panel(rng);
    V3 closure = V3::Zero();
    for (std::size_t j = 0; j < p.size(); ++j) {
      const auto f = edge_frame(p, j);
      const Eigen::Matrix3d b = f.basis();
      const Eigen::Matrix3d gram = b.transpose() * b;
      CHECK((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
      CHECK(std::abs(b.determinant() - 1) < 1e-14);
      CHECK(localize(f, p.centroid).z < 0);
      closure += f.length * f.iz;

      const V3 r(g(rng), g(rng), g(rng));
      const auto lp = localize(f, r);
      CHECK(lp.y == std::abs(lp.h));
      CHECK((to_global(f, lp) - r).norm() <= 1e-13 * std::max(1.0, r.norm()));

      // rigid motion leaves local coordinates unchanged
      const Eigen::Matrix3d rot = test::random_rotation(rng);
      const V3 t(g(rng), g(rng), g(rng));
      std::vector<V3> moved;
      for (const auto& v : p.vertices) moved.push_back(rot * v + t);
      const auto pm = build_panel(moved);
      const auto lm = localize(edge_frame(pm, j), V3(rot * r + t));
      CHECK(std::abs(lm.x - lp.x) < 1e-12);
      CHECK(std::abs(lm.h - lp.h) < 1e-12);
      CHECK(std::abs(lm.z - lp.z) < 1e-12);
    }
    CHECK(closure.norm() < 1e-13);
  }
}
