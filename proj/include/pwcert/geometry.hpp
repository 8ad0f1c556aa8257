#pragma once

// Planar domains (polygon, ellipse, Reuleaux polygon, support-function body)
// with directional widths, perpendicular slice lengths and convexity class.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pwcert/errors.hpp"
#include "pwcert/optimize.hpp"

namespace pwcert {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

/// Smallest absolute difference between two angles, in [0, pi].
inline double angular_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

/// A unit vector in the plane, stored with its polar angle in [0, 2*pi).
class Direction {
 public:
  Direction() : Direction(0.0) {}
  explicit Direction(double angle)
      : angle_(wrap_angle(angle)), vec_{std::cos(angle_), std::sin(angle_)} {}

  static Direction from_vector(Vec2 v) {
    if (!(norm(v) > 0.0)) throw InvalidInput("Direction: zero vector");
    return Direction(std::atan2(v.y, v.x));
  }

  double angle() const { return angle_; }
  Vec2 vec() const { return vec_; }
  double x() const { return vec_.x; }
  double y() const { return vec_.y; }

  /// Counter-clockwise rotation by pi/2; the vector is rotated exactly.
  Direction perp() const { return Direction(wrap_angle(angle_ + 0.5 * std::numbers::pi), {-vec_.y, vec_.x}); }
  Direction operator-() const { return Direction(wrap_angle(angle_ + std::numbers::pi), -vec_); }

 private:
  Direction(double angle, Vec2 v) : angle_(angle), vec_(v) {}

  double angle_;
  Vec2 vec_;
};

inline double dot(const Direction& a, const Direction& b) {
  return std::clamp(dot(a.vec(), b.vec()), -1.0, 1.0);
}

enum class Convexity { strictly_convex, convex, nonconvex };

inline std::string_view to_string(Convexity c) {
  switch (c) {
    case Convexity::strictly_convex: return "strictly_convex";
    case Convexity::convex: return "convex";
    case Convexity::nonconvex: return "nonconvex";
  }
  return "unknown";
}

/// One smooth piece of a closed boundary curve, oriented counter-clockwise,
/// gamma(tau) for tau in [tau_begin, tau_end].
struct BoundaryPiece {
  double tau_begin = 0.0;
  double tau_end = 0.0;
  std::function<Vec2(double)> point;
  std::function<Vec2(double)> tangent;
};

// ---------------------------------------------------------------------------
// Polygon

class Polygon {
 public:
  /// Vertices in counter-clockwise order. Throws InvalidInput unless the
  /// polygon is simple with positive area.
  explicit Polygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) { validate(); }

  const std::vector<Vec2>& vertices() const { return vertices_; }

  double signed_area() const {
    double s = 0.0;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) s += cross(vertices_[i], vertices_[(i + 1) % n]);
    return 0.5 * s;
  }
  double area() const { return signed_area(); }

  Vec2 centroid() const {
    const std::size_t n = vertices_.size();
    double cx = 0.0;
    double cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 p = vertices_[i];
      const Vec2 q = vertices_[(i + 1) % n];
      const double c = cross(p, q);
      cx += (p.x + q.x) * c;
      cy += (p.y + q.y) * c;
    }
    const double a6 = 6.0 * signed_area();
    return {cx / a6, cy / a6};
  }

  double support(Vec2 dir) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec2& v : vertices_) best = std::max(best, dot(dir, v));
    return best;
  }

  double width(Vec2 dir) const { return support(dir) + support(-dir); }

  /// Length of {x in closure(P) : dir.x = level}. Interior levels count edge
  /// crossings with a half-open rule; a support line returns the touched edge.
  double chord(Vec2 dir, double level) const {
    const Vec2 side{-dir.y, dir.x};
    const double lo = -support(-dir);
    const double hi = support(dir);
    const std::size_t n = vertices_.size();
    if (level <= lo || level >= hi) {
      // Supporting line: the slice is the vertex (or edge) it touches.
      if (level < lo || level > hi) return 0.0;
      const double tol = 1e-14 * std::max(1.0, hi - lo);
      double smin = 1e300, smax = -1e300;
      for (const Vec2& v : vertices_) {
        if (std::fabs(dot(dir, v) - level) > tol) continue;
        smin = std::min(smin, dot(side, v));
        smax = std::max(smax, dot(side, v));
      }
      return smax > smin ? smax - smin : 0.0;
    }
    const bool upper = level > 0.5 * (lo + hi);
    std::vector<double> crossings;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 p = vertices_[i];
      const Vec2 q = vertices_[(i + 1) % n];
      const double tp = dot(dir, p);
      const double tq = dot(dir, q);
      const bool hit = upper ? ((tp < level && level <= tq) || (tq < level && level <= tp))
                             : ((tp <= level && level < tq) || (tq <= level && level < tp));
      if (!hit) continue;
      const double f = (level - tp) / (tq - tp);
      const Vec2 x = p + f * (q - p);
      crossings.push_back(dot(side, x));
    }
    std::sort(crossings.begin(), crossings.end());
    double length = 0.0;
    for (std::size_t i = 0; i + 1 < crossings.size(); i += 2) length += crossings[i + 1] - crossings[i];
    return length;
  }

  Convexity convexity() const {
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = vertices_[i];
      const Vec2 b = vertices_[(i + 1) % n];
      const Vec2 c = vertices_[(i + 2) % n];
      if (cross(b - a, c - b) < 0.0) return Convexity::nonconvex;
    }
    return Convexity::convex;
  }

  /// The rectangle's corner, edge vectors, when the polygon is one.
  std::optional<std::pair<Vec2, std::pair<Vec2, Vec2>>> as_rectangle() const {
    if (vertices_.size() != 4) return std::nullopt;
    const Vec2 e1 = vertices_[1] - vertices_[0];
    const Vec2 e2 = vertices_[3] - vertices_[0];
    const Vec2 diag = vertices_[2] - vertices_[0];
    const double scale = norm(e1) * norm(e2);
    if (std::fabs(dot(e1, e2)) > 1e-13 * scale) return std::nullopt;
    if (norm(diag - (e1 + e2)) > 1e-13 * (norm(e1) + norm(e2))) return std::nullopt;
    return std::make_pair(vertices_[0], std::make_pair(e1, e2));
  }

 private:
  static bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
    auto orient = [](Vec2 a, Vec2 b, Vec2 c) {
      const double v = cross(b - a, c - a);
      return (v > 0.0) - (v < 0.0);
    };
    auto on_segment = [](Vec2 a, Vec2 b, Vec2 c) {
      return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
             c.y <= std::max(a.y, b.y);
    };
    const int o1 = orient(p1, p2, q1);
    const int o2 = orient(p1, p2, q2);
    const int o3 = orient(q1, q2, p1);
    const int o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
  }

  void validate() const {
    const std::size_t n = vertices_.size();
    if (n < 3) throw InvalidInput("polygon: needs at least 3 vertices");
    for (const Vec2& v : vertices_) {
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw InvalidInput("polygon: non-finite vertex");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (vertices_[i] == vertices_[(i + 1) % n]) throw InvalidInput("polygon: repeated vertex");
    }
    if (!(signed_area() > 0.0)) {
      throw InvalidInput("polygon: vertices must be counter-clockwise with positive area");
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
        const Vec2 a1 = vertices_[i];
        const Vec2 a2 = vertices_[(i + 1) % n];
        const Vec2 b1 = vertices_[j];
        const Vec2 b2 = vertices_[(j + 1) % n];
        if (adjacent) {
          // Adjacent edges share one endpoint; they must not fold back onto each other.
          const Vec2 shared = (j == i + 1) ? a2 : a1;
          const Vec2 other_a = (j == i + 1) ? a1 : a2;
          const Vec2 other_b = (j == i + 1) ? b2 : b1;
          const Vec2 da = other_a - shared;
          const Vec2 db = other_b - shared;
          if (cross(da, db) == 0.0 && dot(da, db) > 0.0) throw InvalidInput("polygon: self-overlapping edges");
          continue;
        }
        if (segments_intersect(a1, a2, b1, b2)) throw InvalidInput("polygon: edges intersect (not simple)");
      }
    }
  }

  std::vector<Vec2> vertices_;
};

// ---------------------------------------------------------------------------
// Ellipse

class Ellipse {
 public:
  Ellipse(Vec2 center, double semi_a, double semi_b, double rotation = 0.0)
      : center_(center), a_(semi_a), b_(semi_b), rotation_(rotation) {
    if (!(a_ > 0.0) || !(b_ > 0.0) || !std::isfinite(a_) || !std::isfinite(b_)) {
      throw InvalidInput("ellipse: semi-axes must be positive and finite");
    }
    if (!std::isfinite(center.x) || !std::isfinite(center.y) || !std::isfinite(rotation)) {
      throw InvalidInput("ellipse: non-finite center or rotation");
    }
    e1_ = {std::cos(rotation_), std::sin(rotation_)};
    e2_ = {-e1_.y, e1_.x};
  }

  Vec2 center() const { return center_; }
  double semi_a() const { return a_; }
  double semi_b() const { return b_; }
  double rotation() const { return rotation_; }
  bool is_disk() const { return a_ == b_; }

  double half_width(Vec2 dir) const {
    if (is_disk()) return a_;
    const double p = a_ * dot(dir, e1_);
    const double q = b_ * dot(dir, e2_);
    return std::hypot(p, q);
  }
  double support(Vec2 dir) const { return dot(dir, center_) + half_width(dir); }
  double width(Vec2 dir) const { return 2.0 * half_width(dir); }
  double area() const { return std::numbers::pi * a_ * b_; }

  /// Parallel chords of an ellipse are an affine image of those of a disk:
  /// L = (2AB/h^2) sqrt(h^2 - u^2) with h the half-width and u the offset
  /// from the center.
  double chord(Vec2 dir, double level) const {
    const double h = half_width(dir);
    const double u = level - dot(dir, center_);
    const double r = h * h - u * u;
    if (r <= 0.0) return 0.0;
    return 2.0 * a_ * b_ / (h * h) * std::sqrt(r);
  }

  std::vector<BoundaryPiece> boundary() const {
    std::vector<BoundaryPiece> pieces;
    const Ellipse self = *this;
    for (int q = 0; q < 4; ++q) {
      BoundaryPiece piece;
      piece.tau_begin = 0.5 * std::numbers::pi * q;
      piece.tau_end = 0.5 * std::numbers::pi * (q + 1);
      piece.point = [self](double t) {
        return self.center_ + (self.a_ * std::cos(t)) * self.e1_ + (self.b_ * std::sin(t)) * self.e2_;
      };
      piece.tangent = [self](double t) {
        return (-self.a_ * std::sin(t)) * self.e1_ + (self.b_ * std::cos(t)) * self.e2_;
      };
      pieces.push_back(std::move(piece));
    }
    return pieces;
  }

 private:
  Vec2 center_;
  double a_;
  double b_;
  double rotation_;
  Vec2 e1_;
  Vec2 e2_;
};

// ---------------------------------------------------------------------------
// Reuleaux polygon

/// Regular Reuleaux polygon: the intersection of the disks of radius `width`
/// centred at the vertices of a regular polygon with an odd vertex count.
class Reuleaux {
 public:
  Reuleaux(int vertex_count, double width, Vec2 center = {}, double rotation = 0.0)
      : count_(vertex_count), width_(width), center_(center), rotation_(rotation) {
    if (count_ < 3 || count_ % 2 == 0) throw InvalidInput("reuleaux: vertex count must be odd and >= 3");
    if (!(width_ > 0.0) || !std::isfinite(width_)) throw InvalidInput("reuleaux: width must be positive");
    if (!std::isfinite(center.x) || !std::isfinite(center.y) || !std::isfinite(rotation)) {
      throw InvalidInput("reuleaux: non-finite center or rotation");
    }
    circumradius_ = width_ / (2.0 * std::cos(std::numbers::pi / (2.0 * count_)));
    for (int i = 0; i < count_; ++i) {
      const double t = rotation_ + kTwoPi * i / count_;
      vertices_.push_back(center_ + circumradius_ * Vec2{std::cos(t), std::sin(t)});
    }
  }

  int vertex_count() const { return count_; }
  double constant_width() const { return width_; }
  Vec2 center() const { return center_; }
  double rotation() const { return rotation_; }
  const std::vector<Vec2>& vertices() const { return vertices_; }

  double width(Vec2) const { return width_; }

  double area() const {
    const double alpha = std::numbers::pi / count_;
    const double polygon = 0.5 * count_ * circumradius_ * circumradius_ * std::sin(kTwoPi / count_);
    const double segments = 0.5 * count_ * width_ * width_ * (alpha - std::sin(alpha));
    return polygon + segments;
  }

  /// Arc j is centred at vertex j and spans polar angles
  /// [theta_j + pi - pi/(2N), theta_j + pi + pi/(2N)] around it.
  double arc_start(int j) const {
    return rotation_ + kTwoPi * j / count_ + std::numbers::pi - std::numbers::pi / (2.0 * count_);
  }
  double arc_span() const { return std::numbers::pi / count_; }

  double support(Vec2 dir) const {
    const double theta = std::atan2(dir.y, dir.x);
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < count_; ++j) {
      const double start = arc_start(j);
      const double offset = wrap_angle(theta - start);
      double c;
      if (offset <= arc_span()) {
        c = 1.0;
      } else {
        c = std::max(std::cos(theta - start), std::cos(theta - start - arc_span()));
      }
      best = std::max(best, dot(dir, vertices_[j]) + width_ * c);
    }
    return best;
  }

  double chord(Vec2 dir, double level) const {
    const Vec2 side{-dir.y, dir.x};
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const Vec2& v : vertices_) {
      const double d = level - dot(dir, v);
      const double r2 = width_ * width_ - d * d;
      if (r2 < 0.0) return 0.0;
      const double r = std::sqrt(r2);
      const double c = dot(side, v);
      lo = std::max(lo, c - r);
      hi = std::min(hi, c + r);
    }
    return std::max(0.0, hi - lo);
  }

  std::vector<BoundaryPiece> boundary() const {
    std::vector<BoundaryPiece> pieces;
    for (int j = 0; j < count_; ++j) {
      BoundaryPiece piece;
      piece.tau_begin = arc_start(j);
      piece.tau_end = arc_start(j) + arc_span();
      const Vec2 v = vertices_[j];
      const double r = width_;
      piece.point = [v, r](double t) { return v + r * Vec2{std::cos(t), std::sin(t)}; };
      piece.tangent = [r](double t) { return r * Vec2{-std::sin(t), std::cos(t)}; };
      pieces.push_back(std::move(piece));
    }
    return pieces;
  }

 private:
  int count_;
  double width_;
  Vec2 center_;
  double rotation_;
  double circumradius_ = 0.0;
  std::vector<Vec2> vertices_;
};

// ---------------------------------------------------------------------------
// Support-function body

/// Convex body given by its support function
/// h(theta) = a_0 + sum_j (a_j cos(j theta) + b_j sin(j theta)).
class SupportBody {
 public:
  struct Eval {
    double h = 0.0;
    double dh = 0.0;
    double d2h = 0.0;
  };

  /// From samples of h on the uniform grid theta_i = 2 pi i / N, N >= 64,
  /// using the trigonometric interpolant.
  static SupportBody from_samples(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    if (n < 64) throw InvalidInput("support body: need at least 64 samples");
    for (double v : samples) {
      if (!std::isfinite(v)) throw InvalidInput("support body: non-finite sample");
    }
    const std::size_t top = n / 2;
    std::vector<double> a(top + 1, 0.0);
    std::vector<double> b(top + 1, 0.0);
    for (std::size_t j = 0; j <= top; ++j) {
      double sa = 0.0;
      double sb = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        // Reduce j*i mod n first so the angle stays in [0, 2 pi).
        const double t = kTwoPi * static_cast<double>((j * i) % n) / static_cast<double>(n);
        sa += samples[i] * std::cos(t);
        sb += samples[i] * std::sin(t);
      }
      const bool edge = (j == 0) || (n % 2 == 0 && j == top);
      a[j] = (edge ? 1.0 : 2.0) * sa / static_cast<double>(n);
      b[j] = (edge ? 0.0 : 2.0 * sb / static_cast<double>(n));
    }
    SupportBody body(std::move(a), std::move(b), n);
    body.samples_ = samples;
    body.validate_grid(n);
    return body;
  }

  /// From Fourier coefficients: cos_coeffs = {a_0, a_1, ...},
  /// sin_coeffs = {b_1, b_2, ...}.
  static SupportBody from_coefficients(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
    if (cos_coeffs.empty()) throw InvalidInput("support body: need at least a_0");
    for (double v : cos_coeffs) {
      if (!std::isfinite(v)) throw InvalidInput("support body: non-finite coefficient");
    }
    for (double v : sin_coeffs) {
      if (!std::isfinite(v)) throw InvalidInput("support body: non-finite coefficient");
    }
    const std::size_t top = std::max(cos_coeffs.size(), sin_coeffs.size() + 1);
    std::vector<double> a(top, 0.0);
    std::vector<double> b(top, 0.0);
    std::copy(cos_coeffs.begin(), cos_coeffs.end(), a.begin());
    std::copy(sin_coeffs.begin(), sin_coeffs.end(), b.begin() + 1);
    SupportBody body(std::move(a), std::move(b), 0);
    body.validate_grid(std::max<std::size_t>(1024, 8 * top));
    return body;
  }

  const std::vector<double>& cos_coeffs() const { return a_; }
  const std::vector<double>& sin_coeffs() const { return b_; }
  /// Original samples, empty when built from coefficients.
  const std::vector<double>& samples() const { return samples_; }

  Eval eval(double theta) const {
    Eval e;
    e.h = a_[0];
    const double c1 = std::cos(theta);
    const double s1 = std::sin(theta);
    double cj = 1.0;
    double sj = 0.0;
    for (std::size_t j = 1; j < a_.size(); ++j) {
      const double cn = cj * c1 - sj * s1;
      const double sn = sj * c1 + cj * s1;
      cj = cn;
      sj = sn;
      const double jd = static_cast<double>(j);
      const double term = a_[j] * cj + b_[j] * sj;
      e.h += term;
      e.dh += jd * (b_[j] * cj - a_[j] * sj);
      e.d2h -= jd * jd * term;
    }
    return e;
  }

  double h(double theta) const { return eval(theta).h; }

  double support(Vec2 dir) const { return h(std::atan2(dir.y, dir.x)); }
  double width(Vec2 dir) const {
    const double t = std::atan2(dir.y, dir.x);
    return h(t) + h(t + std::numbers::pi);
  }

  /// pi a_0^2 + (pi/2) sum_j (1 - j^2)(a_j^2 + b_j^2).
  double area() const {
    double s = std::numbers::pi * a_[0] * a_[0];
    for (std::size_t j = 1; j < a_.size(); ++j) {
      const double jd = static_cast<double>(j);
      s += 0.5 * std::numbers::pi * (1.0 - jd * jd) * (a_[j] * a_[j] + b_[j] * b_[j]);
    }
    return s;
  }

  /// Steiner point (a_1, b_1); interior for any convex body.
  Vec2 steiner_point() const {
    return {a_.size() > 1 ? a_[1] : 0.0, b_.size() > 1 ? b_[1] : 0.0};
  }

  /// Boundary point with outer normal at angle theta.
  Vec2 point(double theta) const {
    const Eval e = eval(theta);
    const Vec2 u{std::cos(theta), std::sin(theta)};
    const Vec2 up{-u.y, u.x};
    return e.h * u + e.dh * up;
  }

  /// Chord length at dir.x = level: the two boundary points on that line are
  /// bracketed on the normal-angle arcs [t, t + pi] and [t + pi, t + 2 pi],
  /// t = angle(dir), on which dir.x(theta) is monotone.
  double chord(Vec2 dir, double level) const {
    const double t0 = std::atan2(dir.y, dir.x);
    const double top = h(t0);
    const double bottom = -h(t0 + std::numbers::pi);
    if (level >= top || level <= bottom) return 0.0;
    const Vec2 side{-dir.y, dir.x};
    const double th1 = solve_level(dir, level, t0, t0 + std::numbers::pi, true);
    const double th2 = solve_level(dir, level, t0 + std::numbers::pi, t0 + kTwoPi, false);
    return std::fabs(dot(side, point(th1) - point(th2)));
  }

  std::vector<BoundaryPiece> boundary() const {
    const SupportBody self = *this;
    std::vector<BoundaryPiece> pieces;
    for (int q = 0; q < 4; ++q) {
      BoundaryPiece piece;
      piece.tau_begin = 0.5 * std::numbers::pi * q;
      piece.tau_end = 0.5 * std::numbers::pi * (q + 1);
      piece.point = [self](double t) { return self.point(t); };
      piece.tangent = [self](double t) {
        const Eval e = self.eval(t);
        return (e.h + e.d2h) * Vec2{-std::sin(t), std::cos(t)};
      };
      pieces.push_back(std::move(piece));
    }
    return pieces;
  }

  /// min over the validation grid of h + h''.
  double min_radius_of_curvature() const { return min_curvature_radius_; }

 private:
  SupportBody(std::vector<double> a, std::vector<double> b, std::size_t) : a_(std::move(a)), b_(std::move(b)) {}

  void validate_grid(std::size_t nodes) {
    double least = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes; ++i) {
      const Eval e = eval(kTwoPi * static_cast<double>(i) / static_cast<double>(nodes));
      least = std::min(least, e.h + e.d2h);
    }
    min_curvature_radius_ = least;
    if (!(least > 0.0)) {
      throw InvalidInput("support body: h + h'' must be positive (strict convexity) at every grid node");
    }
  }

  // Safeguarded Newton on g(theta) = dir.x(theta) - level over a bracket where
  // g is monotone (decreasing when `decreasing`).
  double solve_level(Vec2 dir, double level, double lo, double hi, bool decreasing) const {
    const double theta_dir = std::atan2(dir.y, dir.x);
    auto g = [&](double th, double& slope) {
      const Eval e = eval(th);
      const double c = std::cos(th - theta_dir);
      const double s = std::sin(theta_dir - th);
      slope = (e.h + e.d2h) * s;
      return e.h * c + e.dh * s - level;
    };
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      double slope = 0.0;
      const double gx = g(x, slope);
      if (gx == 0.0) return x;
      // Shrink the bracket using monotonicity.
      if ((gx > 0.0) == decreasing) {
        lo = x;
      } else {
        hi = x;
      }
      if (hi - lo < 1e-15) break;
      double next = (slope != 0.0) ? x - gx / slope : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::fabs(next - x) < 1e-16) {
        x = next;
        break;
      }
      x = next;
    }
    return x;
  }

  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> samples_;
  double min_curvature_radius_ = 0.0;
};

// ---------------------------------------------------------------------------
// Domain

class Domain {
 public:
  using Shape = std::variant<Polygon, Ellipse, Reuleaux, SupportBody>;

  Domain(Polygon p) : shape_(std::move(p)) {}
  Domain(Ellipse e) : shape_(std::move(e)) {}
  Domain(Reuleaux r) : shape_(std::move(r)) {}
  Domain(SupportBody s) : shape_(std::move(s)) {}

  const Shape& shape() const { return shape_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&shape_);
  }

  std::string_view kind() const {
    return std::visit(
        [](const auto& s) -> std::string_view {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Polygon>) return "polygon";
          if constexpr (std::is_same_v<T, Ellipse>) return "ellipse";
          if constexpr (std::is_same_v<T, Reuleaux>) return "reuleaux";
          if constexpr (std::is_same_v<T, SupportBody>) return "support";
        },
        shape_);
  }

  template <class F>
  decltype(auto) visit(F&& f) const {
    return std::visit(std::forward<F>(f), shape_);
  }

 private:
  Shape shape_;
};

// ---------------------------------------------------------------------------
// Operations

/// sup over the domain of lambda.x.
inline double support(const Domain& d, const Direction& lambda) {
  return d.visit([&](const auto& s) { return s.support(lambda.vec()); });
}

/// sup lambda.x - inf lambda.x.
inline double width(const Domain& d, const Direction& lambda) {
  return d.visit([&](const auto& s) { return s.width(lambda.vec()); });
}

inline double area(const Domain& d) {
  return d.visit([](const auto& s) { return s.area(); });
}

/// Length of the slice {x in D : lambda.x = level}.
inline double chord_length(const Domain& d, const Direction& lambda, double level) {
  return d.visit([&](const auto& s) { return s.chord(lambda.vec(), level); });
}

inline Convexity classify_convexity(const Domain& d) {
  return d.visit([](const auto& s) -> Convexity {
    using T = std::decay_t<decltype(s)>;
    if constexpr (std::is_same_v<T, Polygon>) {
      return s.convexity();
    } else {
      return Convexity::strictly_convex;
    }
  });
}

/// A point inside the domain (centroid, center or Steiner point).
inline Vec2 interior_point(const Domain& d) {
  return d.visit([](const auto& s) -> Vec2 {
    using T = std::decay_t<decltype(s)>;
    if constexpr (std::is_same_v<T, Polygon>) return s.centroid();
    if constexpr (std::is_same_v<T, Ellipse>) return s.center();
    if constexpr (std::is_same_v<T, Reuleaux>) return s.center();
    if constexpr (std::is_same_v<T, SupportBody>) return s.steiner_point();
  });
}

/// Slice lengths L(t) = |{x in D : lambda.x = offset + t}| for t in [0, w].
struct SliceProfile {
  Direction direction;
  double width = 0.0;
  /// inf over D of lambda.x; the profile is anchored so this maps to t = 0.
  double offset = 0.0;
  /// Sorted points in [0, w], including both ends, across which L may fail
  /// to be smooth (vertex projections).
  std::vector<double> breakpoints;
  std::vector<double> grid_t;
  std::vector<double> grid_length;
  std::function<double(double)> length_fn;
  Convexity convexity = Convexity::nonconvex;

  double operator()(double t) const { return length_fn(t); }
};

inline SliceProfile slice_profile(const Domain& d, const Direction& lambda, int grid_size = 256) {
  if (grid_size < 16) throw InvalidInput("slice_profile: grid_size must be >= 16");
  SliceProfile prof;
  prof.direction = lambda;
  prof.offset = -support(d, -lambda);
  prof.width = width(d, lambda);
  prof.convexity = classify_convexity(d);

  const double offset = prof.offset;
  const double w = prof.width;
  std::vector<double> breaks{0.0, w};
  auto add_vertex_breaks = [&](const std::vector<Vec2>& verts) {
    for (const Vec2& v : verts) {
      const double t = dot(lambda.vec(), v) - offset;
      if (t > 0.0 && t < w) breaks.push_back(t);
    }
  };
  if (const auto* p = d.get_if<Polygon>()) add_vertex_breaks(p->vertices());
  if (const auto* r = d.get_if<Reuleaux>()) add_vertex_breaks(r->vertices());
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> unique;
  for (double t : breaks) {
    if (unique.empty() || t - unique.back() > 1e-13 * std::max(1.0, w)) unique.push_back(t);
  }
  if (unique.back() != w) unique.back() = w;
  prof.breakpoints = std::move(unique);

  const Domain copy = d;
  prof.length_fn = [copy, lambda, offset](double t) { return chord_length(copy, lambda, offset + t); };
  prof.grid_t.resize(grid_size);
  prof.grid_length.resize(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    const double t = w * i / (grid_size - 1);
    prof.grid_t[i] = t;
    prof.grid_length[i] = prof.length_fn(t);
  }
  return prof;
}

struct ExtremalWidths {
  double w_star = 0.0;
  double w_sub = 0.0;
  Direction argmax;
  Direction argmin;
};

/// Maximal and minimal width over all directions. Width is even in lambda, so
/// only [0, pi) is sampled.
inline ExtremalWidths extremal_widths(const Domain& d, int samples = 4096) {
  auto w = [&](double angle) { return width(d, Direction(angle)); };
  const opt::Extremum hi = opt::sampled_extremum(w, 0.0, std::numbers::pi, samples, true);
  const opt::Extremum lo = opt::sampled_extremum(w, 0.0, std::numbers::pi, samples, false);
  return {hi.value, lo.value, Direction(hi.argument), Direction(lo.argument)};
}

/// Maximal width, which equals the diameter.
inline double diameter(const Domain& d) { return extremal_widths(d, 1024).w_star; }

}  // namespace pwcert
