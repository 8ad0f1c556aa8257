#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "pwcert/errors.hpp"
#include "pwcert/geometry.hpp"

namespace pwcert {

using cplx = std::complex<double>;

/// Constant interior material (a, q) against the (1, 1) background, with
/// refractive index n = sqrt(q / a).
class Material {
 public:
  Material(double a, double q) : a_(a), q_(q) {
    if (!(a > 0.0) || !(q > 0.0) || !std::isfinite(a) || !std::isfinite(q)) {
      throw InvalidInput("material: a and q must be positive and finite");
    }
    if (a == 1.0 && q == 1.0) throw InvalidInput("material: (a, q) = (1, 1) has no contrast");
    n_ = std::sqrt(q / a);
  }

  /// Material with given a and refractive index n.
  static Material from_index(double a, double n) { return Material(a, a * n * n); }

  double a() const { return a_; }
  double q() const { return q_; }
  double n() const { return n_; }

  bool index_below_one() const { return n_ < 1.0; }
  bool index_is_one() const { return n_ == 1.0; }
  bool index_above_one() const { return n_ > 1.0; }
  /// n a > 1; when false with n > 1 there are exceptional directions.
  bool na_above_one() const { return n_ * a_ > 1.0; }

  std::string regime() const {
    std::string s = index_below_one() ? "n<1" : (index_is_one() ? "n=1" : "n>1");
    s += na_above_one() ? ",na>1" : ",na<=1";
    return s;
  }

 private:
  double a_;
  double q_;
  double n_ = 1.0;
};

/// Complex vector xi = (xi1, xi2); admissible test directions satisfy the
/// bilinear (not Hermitian) constraint xi1^2 + xi2^2 = 1.
struct ComplexDirection {
  cplx xi1 = 1.0;
  cplx xi2 = 0.0;

  static ComplexDirection real(Vec2 v) { return {v.x, v.y}; }
  static ComplexDirection real(const Direction& d) { return {d.x(), d.y()}; }

  /// (cos z, sin z) for complex z, which always lies on the complexified circle.
  static ComplexDirection from_complex_angle(cplx z) { return {std::cos(z), std::sin(z)}; }

  cplx self_dot() const { return xi1 * xi1 + xi2 * xi2; }
  cplx dot(Vec2 v) const { return xi1 * v.x + xi2 * v.y; }
  cplx dot(const Direction& d) const { return dot(d.vec()); }
  bool on_complex_circle(double tol = 1e-12) const { return std::abs(self_dot() - 1.0) <= tol; }
};

}  // namespace pwcert
