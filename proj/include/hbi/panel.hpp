#ifndef HBI_PANEL_HPP
#define HBI_PANEL_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <vector>

#include "hbi/errors.hpp"
#include "hbi/geometry.hpp"
#include "hbi/series.hpp"

namespace hbi {

template <typename Scalar>
using CVec3 = Eigen::Matrix<std::complex<Scalar>, 3, 1>;

/// Which side of the panel plane the target sits on.
enum class Side { Above, Below, InPlane };

template <typename Scalar>
struct PanelIntegrals {
  using C = std::complex<Scalar>;

  C L{};
  C M{};
  CVec3<Scalar> L_grad = CVec3<Scalar>::Zero();
  CVec3<Scalar> M_grad = CVec3<Scalar>::Zero();
  Scalar k{};

  // diagnostics
  std::vector<Branch> edge_branches;
  int truncation_order = 0;  // largest order used over the edges, 0 for k = 0
  Side side = Side::Above;
  Scalar h_over_diameter{};
};

/// L, M and their gradients for one panel and one target.
///
/// For targets in the panel plane (|h| below 1e-14 of the diameter) the
/// principal value is returned: the mean of the one-sided limits. This gives
/// M = 0 and a zero normal component of L_grad.
template <typename Scalar>
PanelIntegrals<Scalar> panel_integrals(const Panel<Scalar>& panel, const Vec3<Scalar>& r, Scalar k,
                                       const TruncationPolicy& policy = {}) {
  using C = std::complex<Scalar>;
  using std::abs;
  PanelIntegrals<Scalar> out;
  out.k = k;
  out.edge_branches.reserve(panel.size());

  Scalar h = height(panel, r);
  out.h_over_diameter = h / panel.diameter;
  h = snap(h, panel.diameter);
  out.side = h > 0 ? Side::Above : (h < 0 ? Side::Below : Side::InPlane);

  auto cast = [](const Vec3<Scalar>& v) -> CVec3<Scalar> { return v.template cast<C>(); };

  for (std::size_t j = 0; j < panel.size(); ++j) {
    const EdgeFrame<Scalar> f = edge_frame(panel, j);
    const LocalPoint<Scalar> lp = localize(f, r);
    const Scalar y = out.side == Side::InPlane ? Scalar(0) : abs(h);

    EdgeIntegral<Scalar> e;
    try {
      e = edge_integral(-lp.x, f.length - lp.x, y, lp.z, k, policy);
    } catch (const StrongSingular&) {
      std::ostringstream msg;
      msg << "target lies on edge " << j << " of the panel";
      throw StrongSingular(msg.str(), j);
    }
    const HValues<Scalar>& d = e.diff;
    out.edge_branches.push_back(d.branch);
    out.truncation_order = std::max(out.truncation_order, e.p);

    const CVec3<Scalar> ix = cast(f.ix), iy = cast(f.iy), iz = cast(f.iz);
    out.L += d.H;
    switch (out.side) {
      case Side::Above:
        out.L_grad += -ix * d.dH_dx + iy * d.dH_dy + iz * d.dH_dz;
        out.M += -d.dH_dy;
        out.M_grad += ix * d.d2H_dxdy - iy * d.d2H_dy2 - iz * d.d2H_dzdy;
        break;
      case Side::Below:
        out.L_grad += -ix * d.dH_dx - iy * d.dH_dy + iz * d.dH_dz;
        out.M += d.dH_dy;
        out.M_grad += -ix * d.d2H_dxdy - iy * d.d2H_dy2 + iz * d.d2H_dzdy;
        break;
      case Side::InPlane:
        out.L_grad += -ix * d.dH_dx + iz * d.dH_dz;
        out.M_grad += -iy * d.d2H_dy2;
        break;
    }
  }
  return out;
}

/// One collocation row: every panel against target r.
template <typename Scalar>
std::vector<PanelIntegrals<Scalar>> panel_matrix_row(const std::vector<Panel<Scalar>>& panels,
                                                     const Vec3<Scalar>& r, Scalar k,
                                                     const TruncationPolicy& policy = {}) {
  std::vector<PanelIntegrals<Scalar>> row;
  row.reserve(panels.size());
  for (std::size_t i = 0; i < panels.size(); ++i) {
    try {
      row.push_back(panel_integrals(panels[i], r, k, policy));
    } catch (const StrongSingular& e) {
      std::ostringstream msg;
      msg << "panel " << i << ": " << e.what();
      throw StrongSingular(msg.str(), e.edge());
    }
  }
  return row;
}

}  // namespace hbi

#endif  // HBI_PANEL_HPP
