#ifndef HBI_SERIES_HPP
#define HBI_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "hbi/errors.hpp"
#include "hbi/primitives.hpp"

// Edge primitive
//
//   H(x, y, z) = -z/(4 pi i k) int (e^{ikr} - e^{iky}) / (x^2 + z^2) dx
//
// and the seven partial derivatives needed for the single layer, double
// layer and their gradients. e^{ikr} is expanded about a fixed anchor r0 and
// truncated after p terms; the polynomial in r is then integrated exactly
// through the k_m and i_m primitives.

namespace hbi {

enum class Branch { Generic, ZPrimeZero, Laplace, LaplaceZPrimeZero };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::Generic: return "generic";
    case Branch::ZPrimeZero: return "zprime_zero";
    case Branch::Laplace: return "laplace";
    case Branch::LaplaceZPrimeZero: return "laplace_zprime_zero";
  }
  return "unknown";
}

struct TruncationPolicy {
  enum class Mode { FixedOrder, Tolerance };

  Mode mode = Mode::Tolerance;
  int order = 0;          // used by FixedOrder
  double epsilon = 1e-16;  // used by Tolerance
  int p_max = 30;

  static TruncationPolicy fixed(int p, int p_max = 30) {
    return {Mode::FixedOrder, p, 0.0, std::max(p_max, p)};
  }
  static TruncationPolicy tolerance(double eps, int p_max = 30) {
    return {Mode::Tolerance, 0, eps, p_max};
  }
};

/// Smallest p >= 1 with (k d)^p / p! <= eps, the first omitted term of the
/// exponential series over a segment where |r - r0| <= d.
inline int truncation_order(double k, double d_max, double eps, int p_max = 30) {
  const double t = k * d_max;
  if (t == 0.0) return 1;
  int p = 1;
  double term = t;
  while (term > eps) {
    ++p;
    term *= t / p;
    if (p > p_max) {
      std::ostringstream msg;
      msg << "truncation order exceeds p_max = " << p_max << " for k*d = " << t;
      throw TruncationOverflow(msg.str(), -1);
    }
  }
  return p;
}

inline int resolve_order(const TruncationPolicy& policy, double k, double d_max) {
  if (policy.mode == TruncationPolicy::Mode::FixedOrder) {
    if (policy.order < 1) throw std::invalid_argument("fixed truncation order must be >= 1");
    return policy.order;
  }
  return truncation_order(k, d_max, policy.epsilon, policy.p_max);
}

/// (k d)^p / p!
inline double truncation_bound(double k, double d_max, int p) {
  double term = 1.0;
  for (int m = 1; m <= p; ++m) term *= k * d_max / m;
  return term;
}

template <typename Scalar>
struct SeriesCoefficients {
  int p = 0;
  Scalar k{};
  Scalar r0{};
  std::vector<std::complex<Scalar>> A;  // A_0 .. A_{p-1}
};

/// A_l = (ik)^l / l! * a_{p-l}(-i k r0),  a_n(xi) = sum_{m<n} xi^m / m!
/// so that sum_l A_l r^l is the p-term Taylor polynomial of e^{ik(r - r0)}.
template <typename Scalar>
SeriesCoefficients<Scalar> series_coefficients(Scalar k, Scalar r0, int p) {
  using C = std::complex<Scalar>;
  SeriesCoefficients<Scalar> out{p, k, r0, std::vector<C>(p)};
  // partial[n] = a_n(-ikr0), n = 0..p
  std::vector<C> partial(p + 1);
  const C xi(0, -k * r0);
  C term(1, 0);
  partial[0] = C(0, 0);
  for (int n = 1; n <= p; ++n) {
    partial[n] = partial[n - 1] + term;
    term *= xi / Scalar(n);
  }
  const C ik(0, k);
  C pref(1, 0);  // (ik)^l / l!
  for (int l = 0; l < p; ++l) {
    out.A[l] = pref * partial[p - l];
    pref *= ik / Scalar(l + 1);
  }
  return out;
}

template <typename Scalar>
struct HValues {
  using C = std::complex<Scalar>;
  C H{}, dH_dx{}, dH_dy{}, dH_dz{}, d2H_dxdy{}, d2H_dy2{}, d2H_dzdy{};
  Branch branch = Branch::Generic;

  HValues operator-(const HValues& o) const {
    HValues d;
    d.H = H - o.H;
    d.dH_dx = dH_dx - o.dH_dx;
    d.dH_dy = dH_dy - o.dH_dy;
    d.dH_dz = dH_dz - o.dH_dz;
    d.d2H_dxdy = d2H_dxdy - o.d2H_dxdy;
    d.d2H_dy2 = d2H_dy2 - o.d2H_dy2;
    d.d2H_dzdy = d2H_dzdy - o.d2H_dzdy;
    d.branch = branch;
    return d;
  }
};

namespace detail {

inline constexpr double kInvFourPi = 0.25 * std::numbers::inv_pi;

// (e^{it} - 1) / (it), without cancellation near t = 0.
template <typename Scalar>
std::complex<Scalar> phase_ratio(Scalar t) {
  using std::sin;
  if (t == Scalar(0)) return {1, 0};
  const Scalar half = t / 2;
  const Scalar s_half = sin(half);
  return {sin(t) / t, s_half * (s_half / half)};
}

// Shared pieces of T and P. With D = x^2 + z^2 and delta = r - y = D/(r + y):
//   T = (e^{ikr} - e^{iky}) / (4 pi i k D) = e^{iky} phase_ratio(k delta) / (4 pi (r + y))
//   P = (y e^{ikr}/r - e^{iky}) / (4 pi D)   = e^{iky} (i k y phase_ratio - 1) / (4 pi r (r + y))
// Both forms are regular as D -> 0 whenever y > 0.
template <typename Scalar>
void tp_terms(Scalar x, Scalar y, Scalar z, Scalar k, Scalar r, std::complex<Scalar>& T,
              std::complex<Scalar>& P) {
  using C = std::complex<Scalar>;
  const Scalar ry = r + y;
  const Scalar delta = (x * x + z * z) / ry;
  const C ey = std::polar(Scalar(1), k * y);
  const C phi = phase_ratio(k * delta);
  const Scalar c = Scalar(kInvFourPi);
  T = ey * phi * (c / ry);
  P = ey * (C(0, k * y) * phi - Scalar(1)) * (c / (r * ry));
}

template <typename Scalar>
void check_strong_singular(Scalar x, Scalar y, Scalar z) {
  if (x == Scalar(0) && y == Scalar(0) && z == Scalar(0)) {
    throw StrongSingular("edge primitive evaluated at an endpoint on the integration line");
  }
}

}  // namespace detail

/// H and its derivatives for k > 0 with an explicit expansion anchor r0 and
/// truncation order p. `z` must already be snapped: z == 0 selects the
/// zero branch.
template <typename Scalar>
HValues<Scalar> h_values_fixed(Scalar x, Scalar y, Scalar z, Scalar r0, Scalar k, int p) {
  using C = std::complex<Scalar>;
  using std::sqrt;
  detail::check_strong_singular(x, y, z);
  const Scalar c = Scalar(detail::kInvFourPi);
  const Scalar a = sqrt(y * y + z * z);
  const Scalar r = sqrt(x * x + a * a);
  const C ik(0, k);

  HValues<Scalar> out;
  C T, P;
  detail::tp_terms(x, y, z, k, r, T, P);

  const auto coeffs = series_coefficients(k, r0, p);
  const auto& A = coeffs.A;
  const C e0 = std::polar(c, k * r0);

  // U and Q need i_{l-1}, i_{l-2}, i_{l-3} for l < p.
  const auto ib = primitive_i(std::max(p - 2, 1), x, a);
  C sum_u(0), sum_q(0);
  for (int l = 0; l < p; ++l) {
    sum_u += A[l] * ib(l - 1);
    sum_q += A[l] * (ik * ib(l - 2) - ib(l - 3));
  }
  const C U = e0 * sum_u;
  const C Q = e0 * sum_q;

  if (z == Scalar(0)) {
    out.branch = Branch::ZPrimeZero;
    out.dH_dz = x * T - U;
    out.d2H_dzdy = x * P - y * Q;
    return out;
  }

  const auto kb = primitive_k(std::max(p - 1, 1), x, y, z, ib);
  C sum_v(0);
  for (int l = 0; l < p; ++l) sum_v += A[l] * kb(l - 1);
  const C R = std::polar(c, k * y) * kb(0);
  const C V = y * e0 * sum_v;

  // H = (R - S)/(ik) rearranged so nothing is divided by k. With
  // e^{ik r0} A_0 = 1 - e^{ik r0} tau, tau = sum_{m>=p} (-ik r0)^m / m!:
  //   4 pi H = k_0 [(e^{iky} - 1)/(ik) + e^{ik r0} tau/(ik)] - e^{ik r0} sum_{l>=1} A_l/(ik) k_l
  C tau_ik;
  if (k * r0 < Scalar(1)) {
    // tau/(ik) = -r0 sum_{m>=p} (-ik r0)^{m-1} / m!
    const C xi(0, -k * r0);
    C term(1);  // (-ik r0)^{m-1} / m! at m = 1
    for (int m = 2; m <= p; ++m) term *= xi / Scalar(m);
    for (int m = p; m < p + 60; ++m) {
      tau_ik += term;
      term *= xi / Scalar(m + 1);
      if (std::abs(term) <= std::numeric_limits<Scalar>::epsilon() * Scalar(1e-3) * std::abs(tau_ik)) break;
    }
    tau_ik *= -r0;
  } else {
    C partial(0), term(1);
    const C xi(0, -k * r0);
    for (int m = 0; m < p; ++m) {
      partial += term;
      term *= xi / Scalar(m + 1);
    }
    tau_ik = (std::polar(Scalar(1), -k * r0) - partial) / ik;
  }
  C sum_h(0);
  for (int l = 1; l < p; ++l) sum_h += A[l] / ik * kb(l);
  const C head = y * detail::phase_ratio(k * y) + std::polar(Scalar(1), k * r0) * tau_ik;

  out.branch = Branch::Generic;
  out.H = c * (kb(0) * head - std::polar(Scalar(1), k * r0) * sum_h);
  out.dH_dx = -z * T;
  out.dH_dy = R - V;
  out.dH_dz = x * T - U;
  out.d2H_dxdy = -z * P;
  out.d2H_dy2 = -k * k * out.H + z * Q;
  out.d2H_dzdy = x * P - y * Q;
  return out;
}

/// Laplace (k = 0) closed forms.
template <typename Scalar>
HValues<Scalar> h_values_laplace(Scalar x, Scalar y, Scalar z) {
  using std::sqrt;
  detail::check_strong_singular(x, y, z);
  const Scalar c = Scalar(detail::kInvFourPi);
  const Scalar a = sqrt(y * y + z * z);
  const Scalar r = sqrt(x * x + a * a);
  const Scalar ry = r + y;
  const Scalar T = c / ry;              // (r - y) / (4 pi D)
  const Scalar P = -c / (r * ry);       // (y/r - 1) / (4 pi D)
  const auto ib = primitive_i(1, x, a);

  HValues<Scalar> out;
  out.dH_dz = x * T - c * ib(-1);
  out.d2H_dzdy = x * P + c * y * ib(-3);
  if (z == Scalar(0)) {
    out.branch = Branch::LaplaceZPrimeZero;
    return out;
  }
  const auto kb = primitive_k(1, x, y, z, ib);
  out.branch = Branch::Laplace;
  out.H = c * (y * kb(0) - kb(1));
  out.dH_dx = -z * T;
  out.dH_dy = c * (kb(0) - y * kb(-1));
  out.d2H_dxdy = -z * P;
  out.d2H_dy2 = -c * z * ib(-3);
  return out;
}

/// Snap threshold for z relative to a length scale.
inline constexpr double kSnapRelative = 1e-14;

template <typename Scalar>
Scalar snap(Scalar v, Scalar scale) {
  using std::abs;
  return abs(v) < Scalar(kSnapRelative) * scale ? Scalar(0) : v;
}

/// Single-point evaluation. The anchor r0 must be shared by every point whose
/// values are later differenced; k = 0 takes the Laplace forms.
template <typename Scalar>
HValues<Scalar> h_values(Scalar x, Scalar y, Scalar z, Scalar r0, Scalar k, int p) {
  using std::abs;
  const Scalar scale = std::max({abs(x), y, abs(z)});
  z = snap(z, scale);
  if (k == Scalar(0)) return h_values_laplace(x, y, z);
  return h_values_fixed(x, y, z, r0, k, p);
}

template <typename Scalar>
struct EdgeIntegral {
  HValues<Scalar> diff;  // H(x_hi) - H(x_lo) and likewise for each derivative
  int p = 0;
};

/// Definite edge integral between x_lo and x_hi, anchored at
/// r0 = sqrt(x_lo^2 + y^2 + z^2). The truncation order is chosen from the
/// segment length, which bounds |r - r0| along it.
template <typename Scalar>
EdgeIntegral<Scalar> edge_integral(Scalar x_lo, Scalar x_hi, Scalar y, Scalar z, Scalar k,
                                   const TruncationPolicy& policy) {
  using std::abs;
  using std::sqrt;
  const Scalar len = abs(x_hi - x_lo);
  const Scalar scale = std::max({len, abs(x_lo), abs(x_hi), y, abs(z)});
  z = snap(z, scale);
  if (z == Scalar(0) && y == Scalar(0) && ((x_lo <= 0 && x_hi >= 0) || (x_hi <= 0 && x_lo >= 0))) {
    throw StrongSingular("evaluation point lies on the integration segment");
  }
  EdgeIntegral<Scalar> out;
  if (k == Scalar(0)) {
    out.p = 0;
    out.diff = h_values_laplace(x_hi, y, z) - h_values_laplace(x_lo, y, z);
    return out;
  }
  out.p = resolve_order(policy, static_cast<double>(k), static_cast<double>(len));
  const Scalar r0 = sqrt(x_lo * x_lo + y * y + z * z);
  out.diff = h_values_fixed(x_hi, y, z, r0, k, out.p) - h_values_fixed(x_lo, y, z, r0, k, out.p);
  return out;
}

}  // namespace hbi

#endif  // HBI_SERIES_HPP
