#pragma once

#include <cmath>
#include <utility>

namespace pwcert::opt {

/// Golden-section search for a local extremum of f inside [lo, hi]. Returns
/// (argument, value). Kinks are fine as long as f is unimodal on the bracket.
template <class F>
std::pair<double, double> golden_section(const F& f, double lo, double hi, bool maximize,
                                         double tol = 1e-10) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double sign = maximize ? -1.0 : 1.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = sign * f(c);
  double fd = sign * f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = sign * f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = sign * f(d);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

struct Extremum {
  double argument = 0.0;
  double value = 0.0;
};

/// Global extremum of a function of an angle over [start, start + span):
/// dense sampling on `samples` equispaced nodes beginning at `start`, then
/// golden-section refinement in the bracket around the best node. The
/// refined point replaces the node only when it is strictly better.
template <class F>
Extremum sampled_extremum(const F& f, double start, double span, int samples, bool maximize,
                          double tol = 1e-10) {
  const double step = span / samples;
  Extremum best{start, f(start)};
  int best_index = 0;
  for (int j = 1; j < samples; ++j) {
    const double x = start + j * step;
    const double v = f(x);
    if (maximize ? v > best.value : v < best.value) {
      best = {x, v};
      best_index = j;
    }
  }
  const double center = start + best_index * step;
  auto [x, v] = golden_section(f, center - step, center + step, maximize, tol);
  if (maximize ? v > best.value : v < best.value) best = {x, v};
  return best;
}

}  // namespace pwcert::opt
