#pragma once

// Numerical evaluation of I(xi) = int_D exp(i k (eta + n xi).x) dx, the
// coefficient C(xi), and checks of the identities and sign properties behind
// the scattering certificates.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "pwcert/certlib.hpp"
#include "pwcert/errors.hpp"
#include "pwcert/geometry.hpp"
#include "pwcert/quadrature.hpp"
#include "pwcert/specfun.hpp"
#include "pwcert/types.hpp"

namespace pwcert {

enum class IntegralMethod { slice, area, closed_form };

inline std::string_view to_string(IntegralMethod m) {
  switch (m) {
    case IntegralMethod::slice: return "slice";
    case IntegralMethod::area: return "area";
    case IntegralMethod::closed_form: return "closed_form";
  }
  return "unknown";
}

/// Complex wave vector kappa = (kx, ky) of exp(i kappa.x).
struct WaveVector {
  cplx x = 0.0;
  cplx y = 0.0;

  cplx dot(Vec2 p) const { return x * p.x + y * p.y; }
  double magnitude() const { return std::sqrt(std::norm(x) + std::norm(y)); }
  bool is_real(double tol = 1e-10) const {
    const double scale = std::max(1.0, std::hypot(x.real(), y.real()));
    return std::fabs(x.imag()) <= tol * scale && std::fabs(y.imag()) <= tol * scale;
  }
  Vec2 real_part() const { return {x.real(), y.real()}; }
};

/// kappa = k (eta + n xi).
inline WaveVector wave_vector(const Direction& eta, double n, double k, const ComplexDirection& xi) {
  return {k * (eta.x() + n * xi.xi1), k * (eta.y() + n * xi.xi2)};
}

struct IntegralValue {
  cplx value = 0.0;
  double est_error = 0.0;
  IntegralMethod method = IntegralMethod::area;
};

// ---------------------------------------------------------------------------
// Slice quadrature

/// int_0^w L(t) e^{iRt} dt over the profile, piecewise between breakpoints,
/// each piece cosine-mapped and cut into panels of at most a quarter period.
inline IntegralValue slice_integral(const SliceProfile& profile, double rate, quad::Tolerance tol = {}) {
  IntegralValue out;
  out.method = IntegralMethod::slice;
  const auto& br = profile.breakpoints;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double a = br[i];
    const double b = br[i + 1];
    if (!(b > a)) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil(std::fabs(rate) * (b - a))));
    auto f = [&](double t) { return profile(t) * std::exp(cplx(0.0, rate * t)); };
    const quad::Result r = quad::integrate_cosine_mapped(f, a, b, tol, panels);
    out.value += r.value;
    out.est_error += r.est_error;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Area quadrature

namespace detail {

inline std::vector<BoundaryPiece> boundary_pieces(const Domain& d) {
  return d.visit([](const auto& s) -> std::vector<BoundaryPiece> {
    using T = std::decay_t<decltype(s)>;
    if constexpr (std::is_same_v<T, Polygon>) {
      std::vector<BoundaryPiece> pieces;
      const auto& v = s.vertices();
      for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 p = v[i];
        const Vec2 q = v[(i + 1) % v.size()];
        BoundaryPiece piece;
        piece.tau_begin = 0.0;
        piece.tau_end = 1.0;
        piece.point = [p, q](double t) { return p + t * (q - p); };
        piece.tangent = [p, q](double) { return q - p; };
        pieces.push_back(std::move(piece));
      }
      return pieces;
    } else {
      return s.boundary();
    }
  });
}

}  // namespace detail

/// int_D f(x) dx for an entire integrand f, by mapping
/// x = c + s (gamma(tau) - c), s in [0, 1], over every boundary piece
/// (a fan of triangles for polygons) with signed Jacobian
/// s * cross(gamma - c, gamma'). Tensor composite Gauss-Legendre; the panel
/// count doubles until two levels agree. `rate` bounds |grad phase| and
/// sets the starting resolution.
template <class F>
IntegralValue area_integrate(const Domain& d, const F& f, double rate, quad::Tolerance tol = {}) {
  const Vec2 c = interior_point(d);
  const std::vector<BoundaryPiece> pieces = detail::boundary_pieces(d);
  const quad::Rule& rule = quad::gauss_legendre(16);
  const int q = static_cast<int>(rule.nodes.size());

  // Per-piece starting panel counts from the phase variation along it.
  std::vector<int> base_tau(pieces.size());
  double reach = 0.0;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const BoundaryPiece& bp = pieces[p];
    double length = 0.0;
    Vec2 prev = bp.point(bp.tau_begin);
    reach = std::max(reach, norm(prev - c));
    for (int i = 1; i <= 8; ++i) {
      const Vec2 cur = bp.point(bp.tau_begin + (bp.tau_end - bp.tau_begin) * i / 8.0);
      length += norm(cur - prev);
      reach = std::max(reach, norm(cur - c));
      prev = cur;
    }
    base_tau[p] = 1 + static_cast<int>(std::ceil(rate * length / std::numbers::pi));
  }
  const int base_s = 1 + static_cast<int>(std::ceil(rate * reach / std::numbers::pi));

  auto evaluate = [&](int level) {
    cplx total = 0.0;
    const int scale = 1 << level;
    const int ns = base_s * scale;
    std::vector<double> s_nodes;
    std::vector<double> s_weights;
    for (int ps = 0; ps < ns; ++ps) {
      const double a = static_cast<double>(ps) / ns;
      const double h = 1.0 / ns;
      for (int i = 0; i < q; ++i) {
        s_nodes.push_back(a + 0.5 * h * (1.0 + rule.nodes[i]));
        s_weights.push_back(0.5 * h * rule.weights[i]);
      }
    }
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      const BoundaryPiece& bp = pieces[p];
      const int nt = base_tau[p] * scale;
      const double span = (bp.tau_end - bp.tau_begin) / nt;
      for (int pt = 0; pt < nt; ++pt) {
        const double a = bp.tau_begin + pt * span;
        for (int i = 0; i < q; ++i) {
          const double tau = a + 0.5 * span * (1.0 + rule.nodes[i]);
          const double wt = 0.5 * span * rule.weights[i];
          const Vec2 g = bp.point(tau) - c;
          const double jac = cross(g, bp.tangent(tau));
          cplx inner = 0.0;
          for (std::size_t j = 0; j < s_nodes.size(); ++j) {
            const double s = s_nodes[j];
            inner += s_weights[j] * s * cplx(f(c + s * g));
          }
          total += wt * jac * inner;
        }
      }
    }
    return total;
  };

  IntegralValue out;
  out.method = IntegralMethod::area;
  cplx previous = evaluate(0);
  for (int level = 1; level <= 7; ++level) {
    const cplx current = evaluate(level);
    const double diff = std::abs(current - previous);
    out.value = current;
    out.est_error = diff;
    if (diff <= std::max(tol.abs, tol.rel * std::abs(current))) break;
    previous = current;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Closed forms

namespace detail {

/// (e^{iz} - 1)/(iz), the mean of e^{izu} over u in [0, 1].
inline cplx exp_mean(cplx z) {
  if (std::abs(z) < 1e-4) {
    const cplx iz = cplx(0.0, 1.0) * z;
    return 1.0 + iz / 2.0 + iz * iz / 6.0 + iz * iz * iz / 24.0 + iz * iz * iz * iz / 120.0;
  }
  return (std::exp(cplx(0.0, 1.0) * z) - 1.0) / (cplx(0.0, 1.0) * z);
}

}  // namespace detail

inline IntegralValue closed_form_integral(const Domain& d, const WaveVector& kappa) {
  IntegralValue out;
  out.method = IntegralMethod::closed_form;
  if (const auto* poly = d.get_if<Polygon>()) {
    const auto rect = poly->as_rectangle();
    if (!rect) throw MethodError("closed form: polygon is not a rectangle");
    const auto& [corner, edges] = *rect;
    const auto& [e1, e2] = edges;
    const double measure = std::fabs(cross(e1, e2));
    out.value = measure * std::exp(cplx(0.0, 1.0) * kappa.dot(corner)) * detail::exp_mean(kappa.dot(e1)) *
                detail::exp_mean(kappa.dot(e2));
    return out;
  }
  if (const auto* ell = d.get_if<Ellipse>()) {
    if (!kappa.is_real()) throw MethodError("closed form: ellipse requires a real wave vector");
    // x = c + A y1 e1 + B y2 e2 maps the unit disk onto the ellipse.
    const Vec2 kr = kappa.real_part();
    const Vec2 e1{std::cos(ell->rotation()), std::sin(ell->rotation())};
    const Vec2 e2{-e1.y, e1.x};
    const double rho = std::hypot(ell->semi_a() * dot(kr, e1), ell->semi_b() * dot(kr, e2));
    const double unit_disk = (rho == 0.0) ? std::numbers::pi
                                          : kTwoPi * specfun::bessel_j1(rho) / rho;
    out.value = ell->semi_a() * ell->semi_b() * unit_disk * std::exp(cplx(0.0, dot(kr, ell->center())));
    return out;
  }
  throw MethodError("closed form: only rectangles and ellipses are supported");
}

/// int_D e^{i kappa.x} dx by the requested method.
inline IntegralValue exp_integral(const Domain& d, const WaveVector& kappa, IntegralMethod method,
                                  quad::Tolerance tol = {}) {
  switch (method) {
    case IntegralMethod::slice: {
      if (!kappa.is_real()) throw MethodError("slice method requires a real wave vector k(eta + n xi)");
      const Vec2 kr = kappa.real_part();
      const double rate = norm(kr);
      if (rate == 0.0) return {area(d), 0.0, IntegralMethod::slice};
      const Direction lambda = Direction::from_vector(kr);
      const SliceProfile profile = slice_profile(d, lambda, 16);
      IntegralValue v = slice_integral(profile, rate, tol);
      v.value *= std::exp(cplx(0.0, rate * profile.offset));
      return v;
    }
    case IntegralMethod::area: {
      auto f = [&](Vec2 x) { return std::exp(cplx(0.0, 1.0) * kappa.dot(x)); };
      return area_integrate(d, f, kappa.magnitude(), tol);
    }
    case IntegralMethod::closed_form:
      return closed_form_integral(d, kappa);
  }
  throw MethodError("unknown integration method");
}

// ---------------------------------------------------------------------------
// Coefficient, test vectors and reports

/// C(xi) = 1/a - n^2 + (1/a - 1) n xi.eta.
inline cplx c_coefficient(const ComplexDirection& xi, const Direction& eta, const Material& material) {
  const double a = material.a();
  const double n = material.n();
  return (1.0 / a - n * n) + (1.0 / a - 1.0) * n * xi.dot(eta);
}

/// For n < 1: xi = -(1/n) eta + i y eta_perp with y = sqrt(1/n^2 - 1), so
/// eta + n xi is purely imaginary and the integrand exp(-k n y eta_perp.x) is
/// real and positive.
inline ComplexDirection complex_xi_sub1(const Material& material, const Direction& eta) {
  const double n = material.n();
  if (!(n < 1.0)) throw RegimeError("complex_xi_sub1: requires n < 1");
  const double y = std::sqrt(1.0 / (n * n) - 1.0);
  const Vec2 e = eta.vec();
  const Vec2 p = eta.perp().vec();
  return {cplx(-e.x / n, y * p.x), cplx(-e.y / n, y * p.y)};
}

struct OscillatoryIntegralReport {
  cplx I_value = 0.0;
  cplx C_value = 0.0;
  cplx product = 0.0;
  IntegralMethod method = IntegralMethod::area;
  double est_error = 0.0;
};

inline OscillatoryIntegralReport integral_I(const Domain& d, const Direction& eta, const Material& material,
                                            double k, const ComplexDirection& xi, IntegralMethod method,
                                            quad::Tolerance tol = {}) {
  if (!(k > 0.0)) throw InvalidInput("integral_I: requires k > 0");
  const WaveVector kappa = wave_vector(eta, material.n(), k, xi);
  const IntegralValue iv = exp_integral(d, kappa, method, tol);
  OscillatoryIntegralReport r;
  r.I_value = iv.value;
  r.C_value = c_coefficient(xi, eta, material);
  r.product = r.C_value * r.I_value;
  r.method = iv.method;
  r.est_error = iv.est_error;
  return r;
}

// ---------------------------------------------------------------------------
// Sign properties

struct SignReport {
  double im_value = 0.0;  // int_0^w L(t) sin(Rt) dt
  double re_value = 0.0;  // int_0^w L(t) cos(Rt) dt
  double rw = 0.0;
  double guard = 0.0;
  /// Set when R w <= pi: whether im_value > guard.
  std::optional<bool> im_positive;
  /// Set when the body is strictly convex and R w = 2 pi m: whether re_value < -guard.
  std::optional<bool> re_negative_at_2pim;
  int m = 0;
};

inline SignReport verify_sign_properties(const SliceProfile& profile, double domain_area, double rate) {
  if (!(rate > 0.0)) throw InvalidInput("verify_sign_properties: requires R > 0");
  quad::Tolerance tol{1e-13 * std::max(1.0, domain_area), 1e-12};
  const IntegralValue v = slice_integral(profile, rate, tol);
  SignReport s;
  s.re_value = v.value.real();
  s.im_value = v.value.imag();
  s.rw = rate * profile.width;
  s.guard = 1e-9 * domain_area * profile.width;
  if (s.rw <= std::numbers::pi * (1.0 + 1e-12)) s.im_positive = s.im_value > s.guard;
  const double cycles = s.rw / kTwoPi;
  const double m = std::round(cycles);
  if (m >= 1.0 && std::fabs(cycles - m) <= 1e-9 * m) {
    s.m = static_cast<int>(m);
    if (profile.convexity == Convexity::strictly_convex) s.re_negative_at_2pim = s.re_value < -s.guard;
  }
  return s;
}

inline SignReport verify_sign_properties(const Domain& d, const Direction& lambda, double rate) {
  return verify_sign_properties(slice_profile(d, lambda, 16), area(d), rate);
}

// ---------------------------------------------------------------------------
// Integral identity for plane-wave incidence and test function

struct LemmaResidual {
  cplx lhs = 0.0;
  cplx rhs = 0.0;
  double residual = 0.0;
  /// |int grad u . grad phi + k^2 n (xi.eta) I| relative to the same scale.
  double gradient_residual = 0.0;
};

/// Both sides of
///   k^2 (1/a - n^2) int u phi - (1/a - 1) int grad u . grad phi  =  k^2 C(xi) I(xi)
/// for u = e^{ik eta.x}, phi = e^{ikn xi.x}. The left side is integrated
/// pointwise by area quadrature; I on the right uses the slice method when
/// k(eta + n xi) is real and area quadrature otherwise.
inline LemmaResidual lemma_phi_residual(const Domain& d, const Direction& eta, const Material& material, double k,
                                        const ComplexDirection& xi) {
  if (!xi.on_complex_circle(1e-10)) throw InvalidInput("lemma_phi_residual: xi must satisfy xi.xi = 1");
  const double a = material.a();
  const double n = material.n();
  const cplx i(0.0, 1.0);
  const WaveVector kappa = wave_vector(eta, n, k, xi);
  const Vec2 e = eta.vec();
  const quad::Tolerance tol{1e-13 * std::max(1.0, area(d)), 1e-12};
  const double rate = kappa.magnitude();

  auto lhs_integrand = [&](Vec2 x) {
    const cplx u = std::exp(i * k * dot(e, x));
    const cplx phi = std::exp(i * k * n * xi.dot(x));
    const cplx du_x = i * k * e.x * u;
    const cplx du_y = i * k * e.y * u;
    const cplx dphi_x = i * k * n * xi.xi1 * phi;
    const cplx dphi_y = i * k * n * xi.xi2 * phi;
    const cplx grad_dot = du_x * dphi_x + du_y * dphi_y;
    return k * k * (1.0 / a - n * n) * u * phi - (1.0 / a - 1.0) * grad_dot;
  };
  auto grad_integrand = [&](Vec2 x) {
    const cplx u = std::exp(i * k * dot(e, x));
    const cplx phi = std::exp(i * k * n * xi.dot(x));
    return (i * k * e.x * u) * (i * k * n * xi.xi1 * phi) + (i * k * e.y * u) * (i * k * n * xi.xi2 * phi);
  };

  LemmaResidual out;
  out.lhs = area_integrate(d, lhs_integrand, rate, tol).value;
  const IntegralMethod method = kappa.is_real() ? IntegralMethod::slice : IntegralMethod::area;
  const cplx I = exp_integral(d, kappa, method, tol).value;
  out.rhs = k * k * c_coefficient(xi, eta, material) * I;
  const double scale = std::max({std::abs(out.lhs), std::abs(out.rhs), area(d)});
  out.residual = std::abs(out.lhs - out.rhs) / scale;

  const cplx grad = area_integrate(d, grad_integrand, rate, tol).value;
  const cplx symbolic = -k * k * n * xi.dot(eta) * I;
  out.gradient_residual = std::abs(grad - symbolic) / std::max({std::abs(grad), std::abs(symbolic), area(d)});
  return out;
}

}  // namespace pwcert
