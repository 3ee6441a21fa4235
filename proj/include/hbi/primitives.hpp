#ifndef HBI_PRIMITIVES_HPP
#define HBI_PRIMITIVES_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include "hbi/errors.hpp"

// Elementary antiderivatives
//
//   i_m(x; a)     = int r^m dx,                 r = sqrt(x^2 + a^2)
//   k_m(x; y, z)  = z int r^m / (x^2 + z^2) dx, r = sqrt(x^2 + y^2 + z^2)
//
// Every function here returns one fixed antiderivative per (a) or (y, z), so
// differences between two x values are definite integrals. Mixing values with
// different (a) or (y, z) is meaningless.

namespace hbi {

/// Orders m_min..m_max of one primitive family at a fixed argument.
template <typename Scalar>
class PrimitiveBatch {
 public:
  PrimitiveBatch() = default;
  PrimitiveBatch(int m_min, int m_max) : m_min_(m_min), values_(m_max - m_min + 1, Scalar(0)) {}

  int m_min() const { return m_min_; }
  int m_max() const { return m_min_ + static_cast<int>(values_.size()) - 1; }

  Scalar operator()(int m) const {
    assert(m >= m_min() && m <= m_max());
    return values_[m - m_min_];
  }
  Scalar& operator()(int m) {
    assert(m >= m_min() && m <= m_max());
    return values_[m - m_min_];
  }

 private:
  int m_min_ = 0;
  std::vector<Scalar> values_;
};

template <typename Scalar>
struct PrimitiveBatchI {
  Scalar x{};
  Scalar a{};
  PrimitiveBatch<Scalar> values;  // m in [-3, m_max]

  Scalar operator()(int m) const { return values(m); }
};

template <typename Scalar>
struct PrimitiveBatchK {
  Scalar x{};
  Scalar y{};
  Scalar z{};
  PrimitiveBatch<Scalar> values;  // m in [-1, m_max]

  Scalar operator()(int m) const { return values(m); }
};

/// ln(r + x) with r = sqrt(x^2 + a^2), a > 0. For x < 0 the product identity
/// (r + x)(r - x) = a^2 avoids the cancellation in r + x.
template <typename Scalar>
Scalar log_r_plus_x(Scalar x, Scalar a, Scalar r) {
  using std::log;
  if (x >= 0) return log(r + x);
  return 2 * log(a) - log(r - x);
}

/// i_{-1}(x; a), including the a = 0 form sgn(x) ln|x|.
template <typename Scalar>
Scalar primitive_i_minus1(Scalar x, Scalar a) {
  using std::abs;
  using std::log;
  using std::sqrt;
  if (a == Scalar(0)) {
    if (x == Scalar(0)) throw SingularPrimitive("i_{-1}(0; 0) is singular");
    return (x > 0 ? Scalar(1) : Scalar(-1)) * log(abs(x));
  }
  return log_r_plus_x(x, a, sqrt(x * x + a * a));
}

/// i_m(x; a) for m in [-3, max(m_max, 0)]: closed-form seeds for m <= 0 and the
/// upward two-step recurrence for m > 0 (even from i_0, odd from i_{-1}).
template <typename Scalar>
PrimitiveBatchI<Scalar> primitive_i(int m_max, Scalar x, Scalar a) {
  using std::abs;
  using std::atan;
  using std::sqrt;
  if (m_max < 0) m_max = 0;
  a = abs(a);
  PrimitiveBatchI<Scalar> out{x, a, PrimitiveBatch<Scalar>(-3, m_max)};
  auto& v = out.values;

  if (a == Scalar(0)) {
    if (x == Scalar(0)) {
      throw SingularPrimitive("negative-order i_m are singular at x = a = 0");
    }
    const Scalar ax = abs(x);
    v(-1) = primitive_i_minus1(x, a);
    // x |x|^m / (m + 1), accumulated through powers of |x|.
    Scalar p = Scalar(1) / (ax * ax * ax);
    for (int m = -3; m <= m_max; ++m, p *= ax) {
      if (m != -1) v(m) = x * p / Scalar(m + 1);
    }
    return out;
  }

  const Scalar a2 = a * a;
  const Scalar r = sqrt(x * x + a2);
  v(-3) = x / (a2 * r);
  v(-2) = atan(x / a) / a;
  v(-1) = log_r_plus_x(x, a, r);
  v(0) = x;
  // i_{m+2} = x r^{m+2} / (m+3) + (m+2)/(m+3) a^2 i_m, starting at m = -1.
  Scalar rpow = r;  // r^{m+2} for m = -1
  for (int m = -1; m + 2 <= m_max; ++m, rpow *= r) {
    v(m + 2) = (x * rpow + Scalar(m + 2) * a2 * v(m)) / Scalar(m + 3);
  }
  return out;
}

/// i_{2n}(x; a) from the binomial expansion of (x^2 + a^2)^n.
template <typename Scalar>
Scalar primitive_i_even_series(int n, Scalar x, Scalar a) {
  assert(n >= 0);
  const Scalar a2 = a * a;
  const Scalar x2 = x * x;
  // Term l carries C(n, l) a^{2(n-l)} x^{2l+1} / (2l + 1).
  Scalar binom = 1;
  Scalar sum = 0;
  Scalar xpow = x;
  for (int l = 0; l <= n; ++l) {
    Scalar apow = 1;
    for (int j = 0; j < n - l; ++j) apow *= a2;
    sum += binom * apow * xpow / Scalar(2 * l + 1);
    binom = binom * Scalar(n - l) / Scalar(l + 1);
    xpow *= x2;
  }
  return sum;
}

/// i_{2n+1}(x; a) as the fully expanded odd recurrence: a finite sum of odd
/// powers of r plus the logarithmic tail.
template <typename Scalar>
Scalar primitive_i_odd_series(int n, Scalar x, Scalar a) {
  using std::abs;
  using std::sqrt;
  assert(n >= 0);
  a = abs(a);
  if (x == Scalar(0) && a == Scalar(0)) {
    throw SingularPrimitive("i_{2n+1}(0; 0) has an undefined logarithmic tail");
  }
  const Scalar a2 = a * a;
  const Scalar r = sqrt(x * x + a2);

  // tail = (2n+2)! / (2^{2n+2} ((n+1)!)^2) = C(2n+2, n+1) / 4^{n+1}
  Scalar tail = 1;
  for (int j = 1; j <= n + 1; ++j) tail *= Scalar(2 * j - 1) / Scalar(2 * j);

  // c_l = tail * 4^l (l!)^2 / (2l+1)!, with c_0 = tail.
  Scalar sum = 0;
  Scalar c = tail;
  Scalar rpow = r;  // r^{2l+1}
  for (int l = 0; l <= n; ++l) {
    Scalar apow = 1;
    for (int j = 0; j < n - l; ++j) apow *= a2;
    sum += c * rpow * apow;
    c *= Scalar(2 * l + 2) / Scalar(2 * l + 3);
    rpow *= r * r;
  }
  sum *= x;
  if (a != Scalar(0)) {
    Scalar a_pow = 1;
    for (int j = 0; j <= n; ++j) a_pow *= a2;
    sum += tail * a_pow * log_r_plus_x(x, a, r);
  }
  return sum;
}

/// k_m(x; y, z) for m in [-1, m_max] given the matching i-batch
/// (argument a = sqrt(y^2 + z^2), orders up to at least m_max - 2).
/// For z = 0 every order vanishes through the z prefactor.
template <typename Scalar>
PrimitiveBatchK<Scalar> primitive_k(int m_max, Scalar x, Scalar y, Scalar z,
                                    const PrimitiveBatchI<Scalar>& ib) {
  using std::abs;
  using std::atan;
  using std::sqrt;
  if (m_max < 1) m_max = 1;
  PrimitiveBatchK<Scalar> out{x, y, z, PrimitiveBatch<Scalar>(-1, m_max)};
  auto& k = out.values;
  if (z == Scalar(0)) {
    if (y == Scalar(0) && x == Scalar(0)) {
      throw StrongSingular("k_m evaluated on the integration line at x = 0");
    }
    return out;
  }
  assert(ib.values.m_max() >= m_max - 2);

  const Scalar sz = z > 0 ? Scalar(1) : Scalar(-1);
  const Scalar az = abs(z);
  const Scalar a = ib.a;
  const Scalar r = sqrt(x * x + a * a);
  const Scalar t = atan(y * x / (az * r));

  k(0) = sz * atan(x / az);
  k(1) = y * sz * t + z * log_r_plus_x(x, a, r);
  k(-1) = y > 0 ? sz * t / y : x / (z * r);

  const Scalar y2 = y * y;
  for (int m = 0; m + 2 <= m_max; ++m) {
    k(m + 2) = z * ib(m) + y2 * k(m);
  }
  return out;
}

template <typename Scalar>
PrimitiveBatchK<Scalar> primitive_k(int m_max, Scalar x, Scalar y, Scalar z) {
  using std::sqrt;
  if (z == Scalar(0)) return primitive_k(m_max, x, y, z, PrimitiveBatchI<Scalar>{});
  return primitive_k(m_max, x, y, z, primitive_i(std::max(m_max - 2, -3), x, sqrt(y * y + z * z)));
}

}  // namespace hbi

#endif  // HBI_PRIMITIVES_HPP
