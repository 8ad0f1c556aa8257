#pragma once

// Guaranteed-scattering wave-number bands for an incident plane wave e^{ik eta.x}.
//
// For n > 1 a real test direction lambda gives the oscillation rate
// R = k M(lambda.eta), M(r) = r + sqrt(n^2 - 1 + r^2), and the slice integral
// int_0^w L(t) e^{iRt} dt is provably nonzero when R w(lambda) <= pi, and for
// strictly convex bodies when R w(lambda) = 2 pi m. Optimising w(lambda) M(lambda.eta)
// over lambda yields h0 (min) and h1 (max) and the bands
//   (0, pi/h0]  and  [2 pi m / h1, 2 pi m / h0], m = 1, 2, ...
// When n a <= 1 the coefficient multiplying the integral vanishes for the two
// exceptional directions lambda.eta = r0, and wave numbers that can only be
// reached through those directions are removed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pwcert/errors.hpp"
#include "pwcert/geometry.hpp"
#include "pwcert/optimize.hpp"
#include "pwcert/types.hpp"

namespace pwcert {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// M(r) = r + sqrt(n^2 - 1 + r^2), positive and increasing on [-1, 1] for n > 1.
/// For r < 0 the algebraically equal form (n^2 - 1)/(sqrt(n^2 - 1 + r^2) - r)
/// avoids cancellation as n -> 1.
inline double big_m(double r, double n) {
  if (!(std::fabs(r) <= 1.0)) throw InvalidInput("big_m: |r| must be <= 1");
  if (!(n >= 1.0)) throw RegimeError("big_m: requires n >= 1");
  const double d = n * n - 1.0;
  const double s = std::sqrt(d + r * r);
  if (r >= 0.0) return r + s;
  return d / (s - r);
}

/// Positive root R of R^2/k^2 - 2 (R/k) lambda.eta + 1 - n^2 = 0, i.e. k M(lambda.eta).
inline double r_of_lambda(const Direction& lambda, const Direction& eta, double n, double k) {
  if (!(n > 1.0)) throw RegimeError("r_of_lambda: requires n > 1");
  if (!(k > 0.0)) throw InvalidInput("r_of_lambda: requires k > 0");
  return k * big_m(dot(lambda, eta), n);
}

/// The real xi on the unit circle with k (eta + n xi) = R lambda:
/// xi = ((R/k) lambda - eta) / n.
inline ComplexDirection xi_from_lambda(const Direction& lambda, const Direction& eta,
                                       const Material& material, double k) {
  const double n = material.n();
  const double ratio = r_of_lambda(lambda, eta, n, k) / k;
  const Vec2 v = (1.0 / n) * (ratio * lambda.vec() - eta.vec());
  return ComplexDirection::real(v);
}

/// Directions lambda with lambda.eta = r0, where the coefficient
/// 1/a - n^2 + (1/a - 1) n xi.eta vanishes.
struct ExceptionalDirections {
  double r0 = 0.0;
  Direction lambda_plus;
  Direction lambda_minus;
  /// |r0 M(r0) - c0| / |c0| with c0 = a (n^2 - 1)/(1 - a).
  double c0_residual = 0.0;
};

inline std::optional<ExceptionalDirections> exceptional_r0(const Material& material, const Direction& eta) {
  const double n = material.n();
  const double a = material.a();
  if (!(n > 1.0)) throw RegimeError("exceptional_r0: requires n > 1");
  if (material.na_above_one()) return std::nullopt;
  // n > 1 and n a <= 1 force a < 1.
  double r0 = a * std::sqrt(n * n - 1.0) / std::sqrt(1.0 - a * a);
  if (r0 > 1.0 && r0 < 1.0 + 1e-12) r0 = 1.0;
  if (!(r0 > 0.0 && r0 <= 1.0)) throw RegimeError("exceptional_r0: r0 outside (0, 1]");
  ExceptionalDirections out;
  out.r0 = r0;
  const double angle = std::acos(r0);
  out.lambda_plus = Direction(eta.angle() + angle);
  out.lambda_minus = Direction(eta.angle() - angle);
  const double c0 = a * (n * n - 1.0) / (1.0 - a);
  out.c0_residual = std::fabs(r0 * big_m(r0, n) - c0) / std::fabs(c0);
  if (out.c0_residual > 1e-10) throw std::logic_error("exceptional_r0: r0 fails r M(r) = c0");
  return out;
}

struct ExtremalH {
  double h0 = 0.0;
  double h1 = 0.0;
  Direction argmin;
  Direction argmax;
};

inline constexpr int kHSamples = 8192;

/// The objective w(lambda) M(lambda.eta) at polar angle `angle`.
inline double width_times_m(const Domain& domain, const Direction& eta, double n, double angle) {
  const Direction lambda(angle);
  return width(domain, lambda) * big_m(dot(lambda, eta), n);
}

/// h0 = min and h1 = max over the circle of w(lambda) M(lambda.eta). The sample
/// grid starts at eta so that lambda = +-eta and +-eta_perp are nodes.
inline ExtremalH extremal_h(const Domain& domain, const Direction& eta, const Material& material,
                            int samples = kHSamples) {
  const double n = material.n();
  if (!(n > 1.0)) throw RegimeError("extremal_h: requires n > 1");
  auto f = [&](double angle) { return width_times_m(domain, eta, n, angle); };
  const opt::Extremum lo = opt::sampled_extremum(f, eta.angle(), kTwoPi, samples, false);
  const opt::Extremum hi = opt::sampled_extremum(f, eta.angle(), kTwoPi, samples, true);
  return {lo.value, hi.value, Direction(lo.argument), Direction(hi.argument)};
}

// ---------------------------------------------------------------------------
// Certificate

struct Band {
  double lo = 0.0;
  double hi = kInfinity;
  bool lo_closed = false;
  bool hi_closed = false;
  std::string source;
  /// Wave numbers inside [lo, hi] that are not certified.
  std::vector<double> punctures;

  bool contains(double k) const {
    const bool above = lo_closed ? k >= lo : k > lo;
    const bool below = std::isinf(hi) || (hi_closed ? k <= hi : k < hi);
    if (!(above && below)) return false;
    return std::find(punctures.begin(), punctures.end(), k) == punctures.end();
  }
};

struct Gap {
  double lo = 0.0;
  double hi = kInfinity;
};

struct Certificate {
  Direction eta;
  Material material{1.0, 2.0};
  Convexity convexity = Convexity::nonconvex;
  double k_max = 0.0;
  /// Disjoint, sorted by lo.
  std::vector<Band> bands;
  /// The unmerged intervals, one per source (low band, convex band
  /// m, convex tail).
  std::vector<Band> components;
  std::optional<double> h0;
  std::optional<double> h1;
  std::optional<Direction> argmin;
  std::optional<Direction> argmax;
  std::optional<ExceptionalDirections> exceptional;
  /// Index from which consecutive convex bands overlap.
  std::optional<long long> tail_index;
  bool full_spectrum = false;
  /// Uncovered intervals inside (0, k_max].
  std::vector<Gap> coverage_gaps;

  bool covers(double k) const {
    if (!(k > 0.0)) return false;
    for (const Band& b : bands) {
      if (b.contains(k)) return true;
    }
    return false;
  }

  /// Smallest uncertified k within (0, k_max]: a gap start or a puncture.
  std::optional<double> first_uncovered() const {
    std::optional<double> out;
    if (!coverage_gaps.empty()) out = coverage_gaps.front().lo;
    for (const Band& b : bands) {
      for (double k : b.punctures) {
        if (!out || k < *out) out = k;
      }
    }
    return out;
  }
};

namespace detail {

/// Samples of the width objective, used to decide whether a level value is
/// attained away from the exceptional directions.
struct ObjectiveSamples {
  double start = 0.0;
  double step = 0.0;
  std::vector<double> values;
};

inline ObjectiveSamples sample_objective(const Domain& domain, const Direction& eta, double n, int samples) {
  ObjectiveSamples s;
  s.start = eta.angle();
  s.step = kTwoPi / samples;
  s.values.resize(samples);
  for (int j = 0; j < samples; ++j) s.values[j] = width_times_m(domain, eta, n, s.start + j * s.step);
  return s;
}

/// True when some sample interval away from the exceptional directions
/// brackets `level`, so by continuity a non-exceptional lambda attains it.
inline bool attained_elsewhere(const ObjectiveSamples& s, double level, const ExceptionalDirections& ex,
                               double angular_tol) {
  const int count = static_cast<int>(s.values.size());
  for (int j = 0; j < count; ++j) {
    const double f0 = s.values[j] - level;
    const double f1 = s.values[(j + 1) % count] - level;
    if (f0 * f1 > 0.0) continue;
    const double a0 = s.start + j * s.step;
    const double a1 = a0 + s.step;
    auto near = [&](const Direction& d) {
      const double mid = 0.5 * (a0 + a1);
      return angular_distance(mid, d.angle()) <= 0.5 * s.step + angular_tol;
    };
    if (near(ex.lambda_plus) || near(ex.lambda_minus)) continue;
    return true;
  }
  return false;
}

inline std::string join_source(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (a == b || a.find(b) != std::string::npos) return a;
  return a + "+" + b;
}

/// Merge components sorted by lo into disjoint bands. Touching intervals
/// merge when at least one side is closed at the contact point.
inline std::vector<Band> merge_bands(std::vector<Band> parts) {
  std::sort(parts.begin(), parts.end(), [](const Band& x, const Band& y) {
    if (x.lo != y.lo) return x.lo < y.lo;
    return x.lo_closed && !y.lo_closed;
  });
  std::vector<Band> out;
  for (Band& b : parts) {
    b.punctures.clear();
    if (!out.empty()) {
      Band& cur = out.back();
      const bool overlap = std::isinf(cur.hi) || b.lo < cur.hi ||
                           (b.lo == cur.hi && (cur.hi_closed || b.lo_closed));
      if (overlap) {
        if (b.lo == cur.lo) cur.lo_closed = cur.lo_closed || b.lo_closed;
        if (std::isinf(b.hi) || b.hi > cur.hi) {
          cur.hi = b.hi;
          cur.hi_closed = b.hi_closed;
        } else if (b.hi == cur.hi) {
          cur.hi_closed = cur.hi_closed || b.hi_closed;
        }
        cur.source = join_source(cur.source, b.source);
        continue;
      }
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace detail

inline constexpr double kExceptionalAngleTol = 1e-9;

/// Certified scattering bands for direction eta, reported up to k_max (the
/// unbounded tail band is always reported when it exists).
inline Certificate certify(const Domain& domain, const Direction& eta, const Material& material,
                           double k_max, int samples = kHSamples) {
  if (!(k_max > 0.0)) throw InvalidInput("certify: k_max must be > 0");
  Certificate cert;
  cert.eta = eta;
  cert.material = material;
  cert.convexity = classify_convexity(domain);
  cert.k_max = k_max;
  const double n = material.n();
  const double pi = std::numbers::pi;

  if (!(n > 1.0)) {
    Band all{0.0, kInfinity, false, false, n < 1.0 ? "index_below_one" : "index_one", {}};
    cert.components = {all};
    cert.bands = {all};
    cert.full_spectrum = true;
    return cert;
  }

  const ExtremalH eh = extremal_h(domain, eta, material, samples);
  cert.h0 = eh.h0;
  cert.h1 = eh.h1;
  cert.argmin = eh.argmin;
  cert.argmax = eh.argmax;
  cert.exceptional = exceptional_r0(material, eta);
  const double h0 = eh.h0;
  const double h1 = eh.h1;
  if (!(h0 < h1)) throw std::logic_error("certify: h0 < h1 violated");

  std::vector<Band> parts;
  parts.push_back({0.0, pi / h0, false, true, "low_band", {}});

  const bool strict = cert.convexity == Convexity::strictly_convex;
  if (strict) {
    const double ratio = h0 / (h1 - h0);
    const double tail = std::max(1.0, std::ceil(ratio));
    cert.tail_index = static_cast<long long>(tail);
    for (long long m = 1; m < *cert.tail_index; ++m) {
      const double lo = kTwoPi * m / h1;
      if (lo > k_max) break;
      parts.push_back({lo, kTwoPi * m / h0, true, true, "convex_band", {}});
    }
    parts.push_back({kTwoPi * tail / h1, kInfinity, true, false, "convex_tail", {}});
  }
  cert.components = parts;
  cert.bands = detail::merge_bands(parts);

  // Wave numbers reachable only through the exceptional directions.
  std::vector<double> punctures;
  if (cert.exceptional) {
    const ExceptionalDirections& ex = *cert.exceptional;
    const bool low_end_exceptional = angular_distance(eh.argmin.angle(), ex.lambda_plus.angle()) <= kExceptionalAngleTol ||
                                     angular_distance(eh.argmin.angle(), ex.lambda_minus.angle()) <= kExceptionalAngleTol;
    if (low_end_exceptional) punctures.push_back(pi / h0);

    if (strict) {
      const detail::ObjectiveSamples obj = detail::sample_objective(domain, eta, n, samples);
      auto certifiable = [&](double k) {
        if (k < pi / h0 || (k == pi / h0 && !low_end_exceptional)) return true;
        const long long m_lo = static_cast<long long>(std::ceil(k * h0 / kTwoPi));
        const long long m_hi = static_cast<long long>(std::floor(k * h1 / kTwoPi));
        for (long long m = std::max(1LL, m_lo); m <= m_hi; ++m) {
          const double level = kTwoPi * m / k;
          if (level < h0 || level > h1) continue;
          if (detail::attained_elsewhere(obj, level, ex, kExceptionalAngleTol)) return true;
        }
        return false;
      };
      const double values[2] = {width(domain, ex.lambda_plus) * big_m(ex.r0, n),
                                width(domain, ex.lambda_minus) * big_m(ex.r0, n)};
      for (double value : values) {
        for (long long m = 1;; ++m) {
          const double k = kTwoPi * m / value;
          if (k > k_max) break;
          if (!certifiable(k)) punctures.push_back(k);
        }
      }
    }
    std::sort(punctures.begin(), punctures.end());
    punctures.erase(std::unique(punctures.begin(), punctures.end()), punctures.end());
    for (double k : punctures) {
      for (Band& b : cert.bands) {
        const bool above = b.lo_closed ? k >= b.lo : k > b.lo;
        const bool below = std::isinf(b.hi) || (b.hi_closed ? k <= b.hi : k < b.hi);
        if (above && below) {
          b.punctures.push_back(k);
          break;
        }
      }
    }
  }

  // Complement of the merged bands within (0, k_max].
  double cursor = 0.0;
  for (const Band& b : cert.bands) {
    if (cursor >= k_max) break;
    if (b.lo > cursor) cert.coverage_gaps.push_back({cursor, std::min(b.lo, k_max)});
    cursor = b.hi;
  }
  if (cursor < k_max) cert.coverage_gaps.push_back({cursor, k_max});

  // A puncture inside the single band (0, inf) still leaves a k uncertified.
  cert.full_spectrum = cert.bands.size() == 1 && cert.bands.front().lo == 0.0 &&
                       std::isinf(cert.bands.front().hi) && cert.bands.front().punctures.empty();
  return cert;
}

/// Wave number above which every direction eta is certified, from the
/// extremal widths: 2 pi / (w*(n - 1) - w_(n + 1)) when positive.
inline std::optional<double> high_k_threshold(const Domain& domain, const Material& material) {
  const double n = material.n();
  if (!(n > 1.0)) throw RegimeError("high_k_threshold: requires n > 1");
  if (!material.na_above_one()) throw RegimeError("high_k_threshold: requires n a > 1");
  if (classify_convexity(domain) != Convexity::strictly_convex) {
    throw RegimeError("high_k_threshold: requires a strictly convex domain");
  }
  const ExtremalWidths ew = extremal_widths(domain);
  const double denom = ew.w_star * (n - 1.0) - ew.w_sub * (n + 1.0);
  if (!(denom > 0.0)) return std::nullopt;
  return kTwoPi / denom;
}

}  // namespace pwcert
