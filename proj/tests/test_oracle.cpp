#include <doctest.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hbi/oracle.hpp"
#include "hbi/panel.hpp"
#include "support/fixtures.hpp"

using namespace hbi;
using oracle::Quantity;
using test::Cplx;
using test::rel_err;
using test::V3;

TEST_CASE("GaussLegendre integrates polynomials exactly") {
  const oracle::GaussLegendre<double> gl(8);
  for (int d = 0; d <= 15; ++d) {
    double s = 0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(gl.nodes[i], d);
    CHECK(std::abs(s - (d % 2 ? 0.0 : 2.0 / (d + 1))) < 1e-14);
  }
}

TEST_CASE("quad_panel: far target against a point source") {
  const auto tri = test::unit_triangle();
  const V3 r(20, -15, 30);
  const double R = (r - tri.centroid).norm();
  const auto q = oracle::quad_panel(tri, r, 0.0, Quantity::L);
  // the centroid rule is exact for linear integrands, so the gap is O((diam/R)^2)
  CHECK(rel_err(q.value(0), Cplx(tri.area / (4 * std::numbers::pi * R))) < 1e-3);
  CHECK(q.error_estimate < 1e-12);
}

TEST_CASE("quad_panel: self term against the Laplace closed form") {
  const auto tri = test::unit_triangle();
  oracle::OracleConfig cfg;
  cfg.singular_scheme = oracle::SingularScheme::PolarAboutProjection;
  const auto q = oracle::quad_panel(tri, tri.centroid, 0.0, Quantity::L, cfg);
  CHECK(rel_err(q.value(0), panel_integrals(tri, tri.centroid, 0.0).L) < 1e-8);
  CHECK(std::abs(oracle::quad_panel(tri, tri.centroid, 0.0, Quantity::M, cfg).value(0)) == 0.0);
  CHECK_THROWS_AS(oracle::quad_panel(tri, tri.centroid, 0.0, Quantity::Lgrad, cfg), std::invalid_argument);
  CHECK_THROWS_AS(oracle::quad_panel(tri, tri.centroid, 0.0, Quantity::L), std::invalid_argument);
  CHECK_THROWS_AS(oracle::quad_panel(tri, V3(0.5, 0, 0), 0.0, Quantity::L, cfg), StrongSingular);
}

TEST_CASE("quad_panel: real part against a tensor rule of cos(kR)/R") {
  const auto sq = test::unit_square();
  const V3 r(0.5, 0.5, 0.7);
  const double k = 2.0;
  const auto q = oracle::quad_panel(sq, r, k, Quantity::L);
  auto f = [&](double x) {
    return test::integrate(
        [&](double y) {
          const double R = (r - V3(x, y, 0)).norm();
          return std::cos(k * R) / (4 * std::numbers::pi * R);
        },
        0.0, 1.0, 16);
  };
  CHECK(std::abs(q.value(0).real() - test::integrate(f, 0.0, 1.0, 16)) < 1e-13);
}

TEST_CASE("quad_panel: tightening the tolerance stays within the estimate") {
  const auto tri = test::unit_triangle();
  const V3 r(0.2, 0.3, 0.05);
  oracle::OracleConfig loose;
  loose.abs_tol = 1e-8;
  loose.rel_tol = 1e-8;
  oracle::OracleConfig tight;
  for (Quantity qq : {Quantity::L, Quantity::M, Quantity::Lgrad, Quantity::Mgrad}) {
    const auto a = oracle::quad_panel(tri, r, 1.0, qq, loose);
    const auto b = oracle::quad_panel(tri, r, 1.0, qq, tight);
    CHECK((a.value - b.value).norm() <= std::max(a.error_estimate, 1e-15));
    CHECK(b.subdivisions >= a.subdivisions);
  }
}

TEST_CASE("quad_panel: subdivision budget") {
  const auto tri = test::unit_triangle();
  oracle::OracleConfig cfg;
  cfg.max_subdivisions = 1;
  CHECK_THROWS_AS(oracle::quad_panel(tri, V3(0.2, 0.3, 1e-3), 1.0, Quantity::Mgrad, cfg), NoConvergence);
}

TEST_CASE("quad_edge_H") {
  const auto z0 = oracle::quad_edge_H(0.0, 1.0, 0.5, 0.0, 1.0);
  CHECK(z0.value == Cplx(0));
  CHECK(z0.subdivisions == 0);

  const auto lap = oracle::quad_edge_H(-0.3, 0.8, 0.2, 0.5, 0.0);
  const auto small = oracle::quad_edge_H(-0.3, 0.8, 0.2, 0.5, 1e-9);
  CHECK(rel_err(small.value, lap.value) < 1e-8);

  const auto g = oracle::quad_edge_H(-0.3, 0.8, 0.2, 0.5, 1.7);
  const auto e = edge_integral(-0.3, 0.8, 0.2, 0.5, 1.7, TruncationPolicy{});
  CHECK(rel_err(e.diff.H, g.value) < 1e-12);
}

TEST_CASE("oracle header is independent of the series code") {
  std::ifstream f(std::string(HBI_INCLUDE_DIR) + "/hbi/oracle.hpp");
  REQUIRE(f);
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  CHECK(text.find("series.hpp") == std::string::npos);
  CHECK(text.find("primitives.hpp") == std::string::npos);
  CHECK(text.find("panel.hpp") == std::string::npos);
}
