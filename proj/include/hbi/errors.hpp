#ifndef HBI_ERRORS_HPP
#define HBI_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hbi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid panel geometry.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class NonPlanar : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class Degenerate : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class SelfIntersecting : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// A primitive requested at a point where it has no finite value.
class SingularPrimitive : public Error {
 public:
  using Error::Error;
};

// Evaluation point lies on the integration contour. `edge` is the offending
// edge index when known, otherwise npos.
class StrongSingular : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit StrongSingular(const std::string& what, std::size_t edge = npos)
      : Error(what), edge_(edge) {}

  std::size_t edge() const noexcept { return edge_; }

 private:
  std::size_t edge_;
};

class TruncationOverflow : public Error {
 public:
  TruncationOverflow(const std::string& what, int required)
      : Error(what), required_(required) {}

  // Order that would have been needed, or -1 if the cap was hit before the
  // bound dropped below tolerance.
  int required() const noexcept { return required_; }

 private:
  int required_;
};

// Quadrature budget exhausted; carries the best estimate's error bound.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double error_estimate)
      : Error(what), error_estimate_(error_estimate) {}

  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

}  // namespace hbi

#endif  // HBI_ERRORS_HPP
