#pragma once

// Gauss-Legendre rules and an adaptive composite integrator for smooth,
// possibly oscillatory, complex-valued integrands.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

namespace pwcert::quad {

using cplx = std::complex<double>;

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Nodes and weights of the npts-point Gauss-Legendre rule, by Newton on
/// P_n with the three-term recurrence. Rules are cached per size.
inline const Rule& gauss_legendre(int npts) {
  static std::mutex mtx;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  if (auto it = cache.find(npts); it != cache.end()) return it->second;

  Rule rule;
  rule.nodes.resize(npts);
  rule.weights.resize(npts);
  const int half = (npts + 1) / 2;
  for (int i = 0; i < half; ++i) {
    long double x = std::cos(std::numbers::pi * (i + 0.75) / (npts + 0.5));
    long double dp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1.0L;
      long double p1 = x;
      for (int k = 2; k <= npts; ++k) {
        const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = npts * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    const double w = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
    rule.nodes[i] = -static_cast<double>(x);
    rule.nodes[npts - 1 - i] = static_cast<double>(x);
    rule.weights[i] = w;
    rule.weights[npts - 1 - i] = w;
  }
  return cache.emplace(npts, std::move(rule)).first->second;
}

/// Panel order used by the adaptive integrators.
inline constexpr int kPanelOrder = 20;

template <class F>
cplx gauss_panel(const F& f, double a, double b, const Rule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * cplx(f(mid + half * rule.nodes[i]));
  }
  return sum * half;
}

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-9;
};

struct Result {
  cplx value = 0.0;
  double est_error = 0.0;
  int evaluations = 0;
};

namespace detail {

template <class F>
void adapt(const F& f, double a, double b, cplx coarse, double abs_tol, double rel_tol,
           int depth, const Rule& rule, Result& out) {
  const double mid = 0.5 * (a + b);
  const cplx left = gauss_panel(f, a, mid, rule);
  const cplx right = gauss_panel(f, mid, b, rule);
  out.evaluations += 2 * static_cast<int>(rule.nodes.size());
  const cplx fine = left + right;
  const double diff = std::abs(fine - coarse);
  if (diff <= std::max(abs_tol, rel_tol * std::abs(fine)) || depth >= 48) {
    out.value += fine;
    out.est_error += diff;
    return;
  }
  adapt(f, a, mid, left, 0.5 * abs_tol, rel_tol, depth + 1, rule, out);
  adapt(f, mid, b, right, 0.5 * abs_tol, rel_tol, depth + 1, rule, out);
}

}  // namespace detail

/// Adaptive composite Gauss-Legendre on [a, b]. The interval is first cut into
/// at least min_panels equal panels; each panel is bisected until the panel
/// rule and the sum over its halves agree to tol. est_error sums those
/// level differences.
template <class F>
Result integrate(const F& f, double a, double b, Tolerance tol = {}, int min_panels = 1) {
  Result out;
  if (b == a) return out;
  const Rule& rule = gauss_legendre(kPanelOrder);
  min_panels = std::max(1, min_panels);
  const double step = (b - a) / min_panels;
  const double panel_abs = tol.abs / min_panels;
  for (int p = 0; p < min_panels; ++p) {
    const double lo = a + p * step;
    const double hi = (p + 1 == min_panels) ? b : lo + step;
    const cplx coarse = gauss_panel(f, lo, hi, rule);
    out.evaluations += static_cast<int>(rule.nodes.size());
    detail::adapt(f, lo, hi, coarse, panel_abs, tol.rel, 0, rule, out);
  }
  return out;
}

/// Integral over [a, b] after the substitution t = a + (b - a)(1 - cos phi)/2,
/// which absorbs square-root endpoint behaviour such as chord lengths of a
/// smooth convex body near a support line.
template <class F>
Result integrate_cosine_mapped(const F& f, double a, double b, Tolerance tol = {},
                               int min_panels = 1) {
  const double half = 0.5 * (b - a);
  auto mapped = [&](double phi) {
    return cplx(f(a + half * (1.0 - std::cos(phi)))) * (half * std::sin(phi));
  };
  return integrate(mapped, 0.0, std::numbers::pi, tol, min_panels);
}

}  // namespace pwcert::quad
