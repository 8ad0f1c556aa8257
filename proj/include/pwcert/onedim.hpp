#pragma once

// Exactly solvable one-dimensional models: normal incidence on an infinite
// slab, and the radial Herglotz wave J0(k|x|) on a disk.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "pwcert/errors.hpp"
#include "pwcert/specfun.hpp"
#include "pwcert/types.hpp"

namespace pwcert {

// ---------------------------------------------------------------------------
// Slab

/// Slab 0 < x < w with a = 1 and n = sqrt(q), lit by e^{-ikx}.
class SlabModel {
 public:
  SlabModel(double thickness, const Material& material, double k)
      : thickness_(thickness), material_(material), k_(k) {
    if (!(thickness > 0.0) || !std::isfinite(thickness)) throw InvalidInput("slab: thickness must be positive");
    if (!(k > 0.0) || !std::isfinite(k)) throw InvalidInput("slab: k must be positive");
    if (material.a() != 1.0) throw InvalidInput("slab: requires a = 1");
    if (material.n() == 1.0) throw InvalidInput("slab: n = 1 has no contrast");
  }

  double thickness() const { return thickness_; }
  const Material& material() const { return material_; }
  double n() const { return material_.n(); }
  double k() const { return k_; }

 private:
  double thickness_;
  Material material_;
  double k_;
};

/// Interior correction u = u_tr - u_in = -e^{-ikx} + c1 sin(knx) + c2 cos(knx)
/// fixed by u(0) = u'(0) = 0.
struct SlabSolution {
  double k = 0.0;
  double n = 1.0;
  cplx c1 = 0.0;
  cplx c2 = 0.0;
  /// |sin(knw)| and |e^{-ikw} - cos(knw)|: both vanish iff u(w) = u'(w) = 0.
  double residual_sin = 0.0;
  double residual_cos = 0.0;

  cplx value(double x) const {
    return -std::exp(cplx(0.0, -k * x)) + c1 * std::sin(k * n * x) + c2 * std::cos(k * n * x);
  }
  cplx derivative(double x) const {
    const double kn = k * n;
    return cplx(0.0, k) * std::exp(cplx(0.0, -k * x)) + c1 * kn * std::cos(kn * x) - c2 * kn * std::sin(kn * x);
  }
  cplx second_derivative(double x) const {
    const double kn2 = k * k * n * n;
    return k * k * std::exp(cplx(0.0, -k * x)) - kn2 * (c1 * std::sin(k * n * x) + c2 * std::cos(k * n * x));
  }
};

inline SlabSolution slab_solution(const SlabModel& model) {
  SlabSolution s;
  s.k = model.k();
  s.n = model.n();
  s.c1 = cplx(0.0, -1.0 / s.n);
  s.c2 = 1.0;
  const double knw = s.k * s.n * model.thickness();
  const double kw = s.k * model.thickness();
  s.residual_sin = std::fabs(std::sin(knw));
  s.residual_cos = std::abs(std::exp(cplx(0.0, -kw)) - std::cos(knw));
  return s;
}

enum class SlabCase { even, odd, none };

inline std::string_view to_string(SlabCase c) {
  switch (c) {
    case SlabCase::even: return "even";
    case SlabCase::odd: return "odd";
    case SlabCase::none: return "none";
  }
  return "none";
}

struct SlabVerdict {
  bool nonscattering = false;
  /// even: kw = 2 pi m, n = l/m. odd: kw = pi + 2 pi m, n = (1 + 2l)/(1 + 2m).
  SlabCase matched_case = SlabCase::none;
  long long m = -1;
  long long l = -1;
  double residual_sin = 0.0;
  double residual_cos = 0.0;
};

struct Fraction {
  long long num = 0;
  long long den = 1;
};

/// Best rational approximation with denominator <= max_den by continued
/// fractions; nullopt when none is within tol.
inline std::optional<Fraction> rational_approximation(double x, long long max_den = 1000000, double tol = 1e-9) {
  if (!std::isfinite(x) || x < 0.0) return std::nullopt;
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(r);
    if (fl > 9.0e15) break;
    const auto a = static_cast<long long>(fl);
    const long long p2 = a * p1 + p0;
    const long long q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::fabs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= tol) return Fraction{p1, q1};
    const double frac = r - fl;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  if (q1 > 0 && std::fabs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= tol) return Fraction{p1, q1};
  return std::nullopt;
}

inline constexpr double kSlabTolerance = 1e-9;

/// Non-scattering decision from the boundary residuals, with the integer
/// lattice (m, l) reported as a diagnosis.
inline SlabVerdict slab_nonscattering(const SlabModel& model) {
  const SlabSolution sol = slab_solution(model);
  SlabVerdict v;
  v.residual_sin = sol.residual_sin;
  v.residual_cos = sol.residual_cos;
  v.nonscattering = sol.residual_sin <= kSlabTolerance && sol.residual_cos <= kSlabTolerance;

  const double n = model.n();
  const double j_real = model.k() * model.thickness() / std::numbers::pi;
  const double j = std::round(j_real);
  if (j < 1.0 || std::fabs(j_real - j) * std::numbers::pi > kSlabTolerance) return v;
  const auto half_turns = static_cast<long long>(j);
  const auto frac = rational_approximation(n);
  if (!frac) return v;
  if (half_turns % 2 == 0) {
    const long long m = half_turns / 2;
    // n = l/m needs den | m.
    if (m % frac->den == 0) {
      const long long l = frac->num * (m / frac->den);
      if (l >= 1 && l != m) {
        v.matched_case = SlabCase::even;
        v.m = m;
        v.l = l;
      }
    }
  } else {
    const long long m = (half_turns - 1) / 2;
    const long long odd = 2 * m + 1;
    if (odd % frac->den == 0) {
      const long long top = frac->num * (odd / frac->den);
      if (top % 2 == 1) {
        const long long l = (top - 1) / 2;
        if (l >= 0 && l != m) {
          v.matched_case = SlabCase::odd;
          v.m = m;
          v.l = l;
        }
      }
    }
  }
  return v;
}

/// Scattered field of the slab from interface matching: reflected amplitude
/// r (x > w, r e^{ikx}) and forward excess t - 1 (x < 0, (t - 1) e^{-ikx}).
struct SlabScattering {
  cplx reflected = 0.0;
  cplx transmitted = 1.0;

  cplx forward_excess() const { return transmitted - 1.0; }
  /// Largest scattered amplitude; zero iff the incident wave does not scatter.
  double magnitude() const { return std::max(std::abs(reflected), std::abs(forward_excess())); }
};

/// Interface matching for thickness w, wave number k and index n; n = 1 is
/// accepted here as the no-contrast limit.
inline SlabScattering slab_transfer(double thickness, double n, double k) {
  // Interior A e^{-iknx} + B e^{iknx}; continuity of u and u' at x = 0
  // gives A = t (1 + 1/n)/2 and B = t (1 - 1/n)/2.
  const cplx i(0.0, 1.0);
  const double alpha = 0.5 * (1.0 + 1.0 / n);
  const double beta = 0.5 * (1.0 - 1.0 / n);
  const cplx em = std::exp(-i * k * n * thickness);
  const cplx ep = std::exp(i * k * n * thickness);
  const cplx ew = std::exp(-i * k * thickness);
  // At x = w: (1 + n) A e^{-iknw} + (1 - n) B e^{iknw} = 2 e^{-ikw},
  //           (1 - n) A e^{-iknw} + (1 + n) B e^{iknw} = 2 r e^{ikw}.
  SlabScattering s;
  s.transmitted = 2.0 * ew / ((1.0 + n) * alpha * em + (1.0 - n) * beta * ep);
  s.reflected = s.transmitted * ((1.0 - n) * alpha * em + (1.0 + n) * beta * ep) * ew / 2.0;
  return s;
}

inline SlabScattering slab_reflection(const SlabModel& model) {
  return slab_transfer(model.thickness(), model.n(), model.k());
}

// ---------------------------------------------------------------------------
// Disk with radial Herglotz incidence

/// J0'(kw) J0(knw) - n J0(kw) J0'(knw) for the disk of radius w, a = 1.
inline double disk_herglotz_residual(double radius, const Material& material, double k) {
  if (!(radius > 0.0)) throw InvalidInput("disk: radius must be positive");
  if (!(k > 0.0)) throw InvalidInput("disk: k must be positive");
  if (material.a() != 1.0) throw InvalidInput("disk: requires a = 1");
  const double n = material.n();
  if (n == 1.0) throw InvalidInput("disk: n = 1 has no contrast");
  const double x = k * radius;
  const double y = k * n * radius;
  return specfun::bessel_j0_prime(x) * specfun::bessel_j0(y) - n * specfun::bessel_j0(x) * specfun::bessel_j0_prime(y);
}

/// Roots in (0, k_max] by sign-change bracketing on a grid of step
/// min(pi/(10 n w), pi/(10 w)) and bisection to 1e-12.
inline std::vector<double> disk_herglotz_roots(double radius, const Material& material, double k_max) {
  if (!(k_max > 0.0)) throw InvalidInput("disk: k_max must be positive");
  auto f = [&](double k) { return disk_herglotz_residual(radius, material, k); };
  const double n = material.n();
  const double step = std::min(std::numbers::pi / (10.0 * n * radius), std::numbers::pi / (10.0 * radius));
  std::vector<double> roots;
  double lo = step;
  double f_lo = f(lo);
  while (lo < k_max) {
    const double hi = std::min(lo + step, k_max);
    const double f_hi = f(hi);
    if (f_lo == 0.0) {
      roots.push_back(lo);
    } else if (f_lo * f_hi < 0.0) {
      double a = lo;
      double b = hi;
      double fa = f_lo;
      while (b - a > 1e-12) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    lo = hi;
    f_lo = f_hi;
  }
  if (f_lo == 0.0 && (roots.empty() || roots.back() != lo)) roots.push_back(lo);
  return roots;
}

}  // namespace pwcert
