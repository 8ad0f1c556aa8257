#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "pwcert/geometry.hpp"
#include "pwcert/oscint.hpp"

using namespace pwcert;
using Catch::Approx;

namespace {

const double kPi = std::numbers::pi;

Polygon unit_square() { return Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

Polygon l_shape() { return Polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}); }

SupportBody smooth_body() { return SupportBody::from_coefficients({1.0, 0.1, 0.15, 0.03}, {0.05, -0.04, 0.02}); }

std::vector<Domain> sample_domains() {
  return {unit_square(),
          l_shape(),
          Ellipse({0.3, -0.2}, 1.0, 0.4, 0.7),
          Ellipse({0, 0}, 1.0, 1.0, 0.0),
          Reuleaux(3, 1.0, {0.1, 0.2}, 0.3),
          Reuleaux(5, 2.0, {0, 0}, 0.0),
          smooth_body()};
}

// Even-odd point-in-polygon test, independent of the chord code.
bool inside(const std::vector<Vec2>& v, Vec2 p) {
  bool in = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x) in = !in;
    }
  }
  return in;
}

double integral_of_profile(const SliceProfile& prof) { return slice_integral(prof, 0.0).value.real(); }

}  // namespace

TEST_CASE("square and Reuleaux widths") {
  const Domain sq = unit_square();
  CHECK(width(sq, Direction(0.0)) == Approx(1.0).margin(1e-15));
  CHECK(width(sq, Direction(kPi / 4)) == Approx(std::sqrt(2.0)).margin(1e-15));
  const Domain r = Reuleaux(3, 1.0, {0, 0}, 0.0);
  for (int i = 0; i < 50; ++i) CHECK(width(r, Direction(0.37 * i)) == 1.0);
}

TEST_CASE("Reuleaux support function reproduces the constant width") {
  const Reuleaux r(3, 1.0, {0.2, -0.1}, 0.4);
  for (int i = 0; i < 360; ++i) {
    const Vec2 u = Direction(kTwoPi * i / 360.0).vec();
    CHECK(r.support(u) + r.support(-u) == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("ellipse width formula") {
  const Domain e = Ellipse({0, 0}, 2.0, 1.0, 0.0);
  CHECK(width(e, Direction(0.0)) == Approx(4.0));
  CHECK(width(e, Direction(kPi / 2)) == Approx(2.0));
  const double lam = 0.6;
  CHECK(width(e, Direction(lam)) ==
        Approx(2.0 * std::sqrt(4.0 * std::cos(lam) * std::cos(lam) + std::sin(lam) * std::sin(lam))));
}

TEST_CASE("support body width and area from samples") {
  // Disk of radius 1.5 centered at (0.2, 0.1): h(theta) = 1.5 + 0.2 cos + 0.1 sin.
  std::vector<double> h(128);
  for (int i = 0; i < 128; ++i) {
    const double t = kTwoPi * i / 128;
    h[i] = 1.5 + 0.2 * std::cos(t) + 0.1 * std::sin(t);
  }
  const Domain d = SupportBody::from_samples(h);
  CHECK(width(d, Direction(0.9)) == Approx(3.0).margin(1e-12));
  CHECK(area(d) == Approx(kPi * 2.25).epsilon(1e-12));
  CHECK(classify_convexity(d) == Convexity::strictly_convex);
}

TEST_CASE("unit square profile along an axis is constant") {
  const SliceProfile p = slice_profile(unit_square(), Direction(0.0), 64);
  CHECK(p.width == Approx(1.0));
  for (double t : {0.0, 0.1, 0.5, 0.77, 1.0}) CHECK(p(t) == Approx(1.0).margin(1e-15));
}

TEST_CASE("unit disk profile is the circle chord") {
  const Domain disk = Ellipse({0.5, -3.0}, 1.0, 1.0, 0.0);
  for (double lam : {0.0, 1.0, 2.5}) {
    const SliceProfile p = slice_profile(disk, Direction(lam), 32);
    CHECK(p.width == Approx(2.0));
    for (int i = 0; i <= 40; ++i) {
      const double t = 2.0 * i / 40.0;
      const double expect = 2.0 * std::sqrt(std::max(0.0, 1.0 - (t - 1.0) * (t - 1.0)));
      // sqrt amplifies level rounding at the two tangent points.
      CHECK(p(t) == Approx(expect).margin(i == 0 || i == 40 ? 1e-7 : 1e-12));
    }
  }
}

TEST_CASE("square diagonal profile against a Monte-Carlo chord estimate") {
  const Polygon sq = unit_square();
  const Direction lam(kPi / 4);
  const SliceProfile p = slice_profile(sq, lam, 64);
  CHECK(p.width == Approx(std::sqrt(2.0)));
  CHECK(p(std::sqrt(2.0) / 2) == Approx(std::sqrt(2.0)).margin(1e-12));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> s_dist(-1.0, 1.0);
  const Vec2 u = lam.vec();
  const Vec2 v = lam.perp().vec();
  for (double t : {0.2, 0.5, std::sqrt(2.0) / 2, 1.0, 1.3}) {
    const int samples = 200000;
    int hits = 0;
    for (int i = 0; i < samples; ++i) {
      const Vec2 x = (p.offset + t) * u + s_dist(rng) * v;
      if (inside(sq.vertices(), x)) ++hits;
    }
    const double estimate = 2.0 * hits / samples;
    CHECK(p(t) == Approx(estimate).margin(0.01));
    // Triangular hat.
    CHECK(p(t) == Approx(2.0 * std::min(t, std::sqrt(2.0) - t)).margin(1e-12));
  }
}

TEST_CASE("convexity classification") {
  CHECK(classify_convexity(Ellipse({0, 0}, 2.0, 1.0, 0.0)) == Convexity::strictly_convex);
  CHECK(classify_convexity(unit_square()) == Convexity::convex);
  CHECK(classify_convexity(l_shape()) == Convexity::nonconvex);
  CHECK(classify_convexity(Reuleaux(3, 1.0, {0, 0}, 0.0)) == Convexity::strictly_convex);
  CHECK(classify_convexity(smooth_body()) == Convexity::strictly_convex);
}

TEST_CASE("extremal widths") {
  const ExtremalWidths e = extremal_widths(Ellipse({0, 0}, 1.0, 0.4, 0.0));
  CHECK(e.w_star == Approx(2.0).margin(1e-12));
  CHECK(e.w_sub == Approx(0.8).margin(1e-12));
  const ExtremalWidths s = extremal_widths(unit_square());
  CHECK(s.w_star == Approx(std::sqrt(2.0)).margin(1e-12));
  CHECK(s.w_sub == Approx(1.0).margin(1e-12));
  const ExtremalWidths r = extremal_widths(Reuleaux(3, 1.0, {0, 0}, 0.0));
  CHECK(r.w_star == 1.0);
  CHECK(r.w_sub == 1.0);
}

TEST_CASE("width is even in direction") {
  for (const Domain& d : sample_domains()) {
    for (int i = 0; i < 64; ++i) {
      const Direction lam(kTwoPi * i / 64.0 + 0.01);
      CHECK(width(d, lam) == Approx(width(d, -lam)).epsilon(1e-14));
    }
  }
}

TEST_CASE("profile integrates to the area in every direction") {
  for (const Domain& d : sample_domains()) {
    const double a = area(d);
    for (int i = 0; i < 64; ++i) {
      const SliceProfile p = slice_profile(d, Direction(kTwoPi * i / 64.0 + 0.013), 16);
      CHECK(std::fabs(integral_of_profile(p) - a) <= 1e-9 * a);
    }
  }
}

TEST_CASE("profiles of strictly convex bodies are concave and vanish at the ends") {
  for (const Domain& d : sample_domains()) {
    if (classify_convexity(d) != Convexity::strictly_convex) continue;
    for (int i = 0; i < 8; ++i) {
      const SliceProfile p = slice_profile(d, Direction(0.4 * i + 0.05), 48);
      CHECK(p(0.0) <= 1e-6 * p.width);
      CHECK(p(p.width) <= 1e-6 * p.width);
      int violations = 0;
      for (std::size_t a = 0; a < p.grid_t.size(); ++a) {
        for (std::size_t b = a + 1; b < p.grid_t.size(); ++b) {
          const double mid = p(0.5 * (p.grid_t[a] + p.grid_t[b]));
          if (mid < 0.5 * (p.grid_length[a] + p.grid_length[b]) - 1e-9 * p.width) ++violations;
        }
      }
      CHECK(violations == 0);
    }
  }
}

TEST_CASE("translation leaves width and profile unchanged") {
  const Domain a = Ellipse({0, 0}, 1.0, 0.5, 0.3);
  const Domain b = Ellipse({4.0, -7.0}, 1.0, 0.5, 0.3);
  const Domain pa = Polygon({{0, 0}, {2, 0}, {1, 1.5}});
  const Domain pb = Polygon({{5, 3}, {7, 3}, {6, 4.5}});
  for (double lam : {0.0, 0.8, 2.0}) {
    CHECK(width(a, Direction(lam)) == Approx(width(b, Direction(lam))));
    CHECK(width(pa, Direction(lam)) == Approx(width(pb, Direction(lam))));
    const SliceProfile sa = slice_profile(a, Direction(lam), 16);
    const SliceProfile sb = slice_profile(b, Direction(lam), 16);
    const SliceProfile qa = slice_profile(pa, Direction(lam), 16);
    const SliceProfile qb = slice_profile(pb, Direction(lam), 16);
    for (double f : {0.1, 0.35, 0.6, 0.9}) {
      CHECK(sa(f * sa.width) == Approx(sb(f * sb.width)).margin(1e-12));
      CHECK(qa(f * qa.width) == Approx(qb(f * qb.width)).margin(1e-12));
    }
  }
}

TEST_CASE("direction vectors are unit length") {
  for (int i = 0; i < 100; ++i) {
    const Direction d(0.731 * i - 20.0);
    CHECK(std::fabs(norm(d.vec()) - 1.0) <= 1e-12);
    CHECK(d.angle() >= 0.0);
    CHECK(d.angle() < kTwoPi);
  }
}

TEST_CASE("invalid domains are rejected") {
  CHECK_THROWS_AS(Polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), InvalidInput);          // clockwise
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), InvalidInput);          // bow tie
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}}), InvalidInput);
  CHECK_THROWS_AS(Ellipse({0, 0}, 0.0, 1.0, 0.0), InvalidInput);
  CHECK_THROWS_AS(Reuleaux(4, 1.0, {0, 0}, 0.0), InvalidInput);
  CHECK_THROWS_AS(Reuleaux(3, -1.0, {0, 0}, 0.0), InvalidInput);
  CHECK_THROWS_AS(SupportBody::from_samples(std::vector<double>(32, 1.0)), InvalidInput);
  // h + h'' = 1 - 3 * 0.5 cos(2 theta) changes sign.
  CHECK_THROWS_AS(SupportBody::from_coefficients({1.0, 0.0, 0.5}, {}), InvalidInput);
  CHECK_THROWS_AS(slice_profile(unit_square(), Direction(0.0), 8), InvalidInput);
}
