#pragma once

// Bessel functions of the first kind of orders 0 and 1 for real arguments,
// and their positive zeros.

#include <cmath>
#include <numbers>

#include "pwcert/errors.hpp"

namespace pwcert::specfun {

enum class BesselMethod { power_series, asymptotic };

struct BesselEval {
  int order = 0;
  double argument = 0.0;
  double value = 0.0;
  BesselMethod method = BesselMethod::power_series;
};

/// Arguments below this use the ascending series, at or above it the
/// Hankel expansion.
inline constexpr double kSeriesSeam = 12.0;

namespace detail {

// Ascending series sum_m (-1)^m (x/2)^{2m+nu} / (m! (m+nu)!). Accumulated in
// long double: at x = 12 the largest term is ~4e3, so double accumulation
// would lose about four digits to cancellation.
inline double ascending_series(int order, double x) {
  const long double half = 0.5L * static_cast<long double>(x);
  const long double q = -half * half;
  long double term = (order == 0) ? 1.0L : half;
  long double sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<long double>(m) * static_cast<long double>(m + order));
    sum += term;
    if (std::fabs(term) < 1e-17L * std::fabs(sum) && std::fabs(term) < 1e-20L) break;
  }
  return static_cast<double>(sum);
}

// Hankel expansion J_nu(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi),
// chi = x - (nu/2 + 1/4) pi. P and Q are each cut at their smallest term,
// which enters with weight 1/2.
inline double hankel_asymptotic(int order, double x) {
  const long double mu = 4.0L * order * order;
  const long double lx = x;
  // coeff[k] = (-1)^{floor(k/2)} a_k(nu) / x^k
  long double coeff[160];
  long double a = 1.0L;
  coeff[0] = 1.0L;
  for (int k = 1; k < 160; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    a *= (mu - odd * odd) / (8.0L * k * lx);
    coeff[k] = (((k / 2) % 2 == 0) ? 1.0L : -1.0L) * a;
  }
  auto optimal_sum = [&](int first) {
    long double sum = 0.0L;
    long double last = 0.0L;
    for (int k = first; k < 160; k += 2) {
      if (k > first + 2 && std::fabs(coeff[k]) > std::fabs(last)) break;
      sum += coeff[k];
      last = coeff[k];
      if (coeff[k] == 0.0L) return sum;
    }
    return sum - 0.5L * last;
  };
  const long double p = optimal_sum(0);
  const long double q = optimal_sum(1);
  const long double chi = lx - (0.5L * order + 0.25L) * std::numbers::pi_v<long double>;
  const long double amp = std::sqrt(2.0L / (std::numbers::pi_v<long double> * lx));
  return static_cast<double>(amp * (p * std::cos(chi) - q * std::sin(chi)));
}

}  // namespace detail

/// J_order(x) for order in {0, 1} and x >= 0, with the branch used.
inline BesselEval bessel_eval(int order, double x) {
  if (order != 0 && order != 1) throw InvalidInput("bessel_j: only orders 0 and 1 are supported");
  if (!(x >= 0.0)) throw InvalidInput("bessel_j: argument must be >= 0 (pass |x|)");
  BesselEval out;
  out.order = order;
  out.argument = x;
  if (x < kSeriesSeam) {
    out.method = BesselMethod::power_series;
    out.value = detail::ascending_series(order, x);
  } else {
    out.method = BesselMethod::asymptotic;
    out.value = detail::hankel_asymptotic(order, x);
  }
  return out;
}

inline double bessel_j(int order, double x) { return bessel_eval(order, x).value; }

inline double bessel_j0(double x) { return bessel_j(0, x); }
inline double bessel_j1(double x) { return bessel_j(1, x); }

/// J0'(x) = -J1(x).
inline double bessel_j0_prime(double x) { return -bessel_j1(x); }

/// The index-th positive zero of J_order: McMahon's expansion as the starting
/// guess, then Newton on bessel_j.
inline double bessel_zero(int order, int index) {
  if (order != 0 && order != 1) throw InvalidInput("bessel_zero: only orders 0 and 1 are supported");
  if (index < 1) throw InvalidInput("bessel_zero: index must be >= 1");
  const double mu = 4.0 * order * order;
  const double beta = (index + 0.5 * order - 0.25) * std::numbers::pi;
  const double b8 = 8.0 * beta;
  double x = beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);

  for (int it = 0; it < 50; ++it) {
    const double f = bessel_j(order, x);
    // J0' = -J1, J1' = J0 - J1/x.
    const double df = (order == 0) ? -bessel_j1(x) : bessel_j0(x) - bessel_j1(x) / x;
    const double step = f / df;
    x -= step;
    if (std::fabs(step) < 1e-15 * x) break;
  }
  return x;
}

}  // namespace pwcert::specfun
