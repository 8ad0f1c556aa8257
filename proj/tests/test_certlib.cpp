#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "pwcert/certlib.hpp"
#include "pwcert/oscint.hpp"

using namespace pwcert;
using Catch::Approx;

namespace {

const double kPi = std::numbers::pi;

Domain disk(double diameter) { return Ellipse({0, 0}, 0.5 * diameter, 0.5 * diameter, 0.0); }

// Positive root of x^2 - 2 x c + 1 - n^2 by bisection on [0, n + 1].
double quadratic_root(double c, double n) {
  auto g = [&](double x) { return x * x - 2.0 * x * c + 1.0 - n * n; };
  double lo = 0.0, hi = n + 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> log_sweep(int count, double lo, double hi) {
  std::vector<double> ks(count);
  for (int i = 0; i < count; ++i) ks[i] = lo * std::pow(hi / lo, (i + 0.5) / count);
  return ks;
}

}  // namespace

TEST_CASE("big_m examples") {
  CHECK(big_m(1.0, 2.0) == Approx(3.0).margin(1e-15));
  CHECK(big_m(-1.0, 2.0) == Approx(1.0).margin(1e-15));
  CHECK(big_m(0.0, 2.0) == Approx(std::sqrt(3.0)).margin(1e-15));
  CHECK_THROWS_AS(big_m(1.5, 2.0), InvalidInput);
  CHECK(big_m(-1.0, 1.0 + 1e-8) > 0.0);
}

TEST_CASE("big_m is positive and strictly increasing") {
  for (double n : {1.0 + 1e-6, 1.1, 2.0, 7.0}) {
    double prev = -1.0;
    for (int i = 0; i <= 10000; ++i) {
      const double v = big_m(-1.0 + 2.0 * i / 10000.0, n);
      CHECK(v > 0.0);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("r_of_lambda examples") {
  const Direction eta(0.4);
  CHECK(r_of_lambda(eta, eta, 2.0, 1.0) == Approx(3.0));
  CHECK(r_of_lambda(-eta, eta, 2.0, 1.0) == Approx(1.0));
  const double perp = r_of_lambda(eta.perp(), eta, 2.0, 2.0);
  CHECK(perp == Approx(2.0 * std::sqrt(3.0)));
  CHECK(perp == Approx(2.0 * quadratic_root(0.0, 2.0)).epsilon(1e-12));
}

TEST_CASE("r_of_lambda solves the quadratic for random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), nd(1.0001, 6.0), kd(0.01, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const Direction lam(ang(rng)), eta(ang(rng));
    const double n = nd(rng), k = kd(rng);
    const double R = r_of_lambda(lam, eta, n, k);
    const double x = R / k;
    const double c = dot(lam, eta);
    const double residual = x * x - 2.0 * x * c + 1.0 - n * n;
    CHECK(std::fabs(residual) <= 1e-10 * std::max({x * x, 2.0 * x * std::fabs(c), n * n}));
    CHECK(R > 0.0);
  }
}

TEST_CASE("xi_from_lambda examples and identities") {
  const Direction eta(1.1);
  const Material m = Material::from_index(1.0, 2.0);
  const ComplexDirection a = xi_from_lambda(eta, eta, m, 1.0);
  CHECK(a.xi1.real() == Approx(eta.x()).margin(1e-15));
  CHECK(a.xi2.real() == Approx(eta.y()).margin(1e-15));
  const ComplexDirection b = xi_from_lambda(-eta, eta, m, 1.0);
  CHECK(b.xi1.real() == Approx(-eta.x()).margin(1e-15));
  const ComplexDirection c = xi_from_lambda(eta.perp(), eta, m, 1.0);
  const Vec2 expect = 0.5 * (std::sqrt(3.0) * eta.perp().vec() - eta.vec());
  CHECK(c.xi1.real() == Approx(expect.x).margin(1e-15));
  CHECK(c.xi2.real() == Approx(expect.y).margin(1e-15));
  CHECK(std::abs(c.self_dot() - 1.0) <= 1e-10);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), nd(1.01, 5.0), kd(0.1, 50.0);
  for (int i = 0; i < 200; ++i) {
    const Direction lam(ang(rng)), e(ang(rng));
    const Material mat = Material::from_index(0.7, nd(rng));
    const double k = kd(rng);
    const ComplexDirection xi = xi_from_lambda(lam, e, mat, k);
    CHECK(std::abs(xi.self_dot() - 1.0) <= 1e-10);
    const double R = r_of_lambda(lam, e, mat.n(), k);
    const WaveVector kappa = wave_vector(e, mat.n(), k, xi);
    CHECK(std::abs(kappa.x - R * lam.x()) <= 1e-10 * R);
    CHECK(std::abs(kappa.y - R * lam.y()) <= 1e-10 * R);
  }
}

TEST_CASE("exceptional r0") {
  const Direction eta(0.3);
  const auto e1 = exceptional_r0(Material::from_index(0.5, std::sqrt(2.0)), eta);
  REQUIRE(e1);
  CHECK(e1->r0 == Approx(1.0 / std::sqrt(3.0)).margin(1e-14));
  CHECK(std::fabs(dot(e1->lambda_plus, eta) - e1->r0) <= 1e-12);
  CHECK(std::fabs(dot(e1->lambda_minus, eta) - e1->r0) <= 1e-12);
  CHECK(e1->c0_residual <= 1e-10);
  const auto e2 = exceptional_r0(Material::from_index(0.5, 2.0), eta);
  REQUIRE(e2);
  CHECK(e2->r0 == Approx(1.0).margin(1e-14));
  CHECK_FALSE(exceptional_r0(Material::from_index(1.0, 2.0), eta));
  CHECK_THROWS_AS(exceptional_r0(Material::from_index(0.5, 0.9), eta), RegimeError);
}

TEST_CASE("material validation") {
  CHECK_THROWS_AS(Material(1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(Material(0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(Material(1.0, -2.0), InvalidInput);
  const Material m(2.0, 0.5);
  CHECK(m.n() == 0.5);
  CHECK(Material(0.5, 0.5).n() == 1.0);
}

TEST_CASE("extremal h for a disk") {
  for (double w : {1.0, 2.5}) {
    for (double eta : {0.0, 0.9, 3.3}) {
      const ExtremalH h2 = extremal_h(disk(w), Direction(eta), Material::from_index(1.0, 2.0));
      CHECK(h2.h0 == Approx(w).epsilon(1e-12));
      CHECK(h2.h1 == Approx(3.0 * w).epsilon(1e-12));
      const ExtremalH h3 = extremal_h(disk(w), Direction(eta), Material::from_index(1.0, 3.0));
      CHECK(h3.h1 == Approx(4.0 * w).epsilon(1e-12));
      CHECK(std::fabs(h3.h1 - 2.0 * h3.h0) <= 1e-9);
    }
  }
  CHECK_THROWS_AS(extremal_h(disk(1.0), Direction(0.0), Material::from_index(1.0, 0.5)), RegimeError);
}

TEST_CASE("extremal h for an ellipse against brute force") {
  const Domain e = Ellipse({0, 0}, 1.0, 0.4, 0.0);
  for (double eta_angle : {0.0, 0.7}) {
    const Direction eta(eta_angle);
    const ExtremalH h = extremal_h(e, eta, Material::from_index(1.0, 2.0));
    double lo = 1e300, hi = -1e300;
    const int count = 1000000;
    for (int i = 0; i < count; ++i) {
      const double t = kTwoPi * (i + 0.37) / count;
      const Vec2 u{std::cos(t), std::sin(t)};
      const double w = 2.0 * std::hypot(1.0 * u.x, 0.4 * u.y);
      const double r = u.x * eta.x() + u.y * eta.y();
      const double v = w * (r + std::sqrt(3.0 + r * r));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(h.h0 <= lo + 1e-12);
    CHECK(h.h0 == Approx(lo).epsilon(1e-9));
    CHECK(h.h1 >= hi - 1e-12);
    CHECK(h.h1 == Approx(hi).epsilon(1e-9));
  }
}

TEST_CASE("h1 > h0 and the h0 argmin faces away from eta") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), nd(1.01, 6.0), ax(0.2, 1.0);
  for (int i = 0; i < 100; ++i) {
    Domain d = disk(1.0);
    switch (i % 4) {
      case 0: d = Ellipse({0, 0}, 1.0, ax(rng), ang(rng)); break;
      case 1: d = Reuleaux(3 + 2 * (i % 3), ax(rng), {0, 0}, ang(rng)); break;
      case 2: d = Polygon({{0, 0}, {1, 0}, {1.2, ax(rng)}, {0.1, 0.9}}); break;
      default: d = SupportBody::from_coefficients({1.0, 0.0, 0.1 * ax(rng)}, {0.0, 0.0, 0.05}); break;
    }
    const Direction eta(ang(rng));
    const ExtremalH h = extremal_h(d, eta, Material::from_index(1.0, nd(rng)), 2048);
    CHECK(h.h1 > h.h0);
    CHECK(dot(h.argmin, eta) <= 1e-12);
  }
}

TEST_CASE("certify: constant width, n = 2 covers everything") {
  const Certificate c = certify(disk(1.0), Direction(0.4), Material::from_index(1.0, 2.0), 1000.0);
  CHECK(c.full_spectrum);
  REQUIRE(c.bands.size() == 1);
  CHECK(c.bands[0].lo == 0.0);
  CHECK(std::isinf(c.bands[0].hi));
  CHECK(c.coverage_gaps.empty());
  CHECK_FALSE(c.first_uncovered());
  // Components: (0, pi] and [2 pi/3, inf).
  REQUIRE(c.components.size() == 2);
  CHECK(c.components[0].hi == Approx(kPi));
  CHECK(c.components[1].lo == Approx(2.0 * kPi / 3.0));
}

TEST_CASE("certify: disk with n = 4 has the gap (pi/3, 2 pi/5)") {
  const Certificate c = certify(disk(1.0), Direction(0.0), Material::from_index(1.0, 4.0), 1000.0);
  CHECK_FALSE(c.full_spectrum);
  CHECK(*c.h0 == Approx(3.0).epsilon(1e-14));
  CHECK(*c.h1 == Approx(5.0).epsilon(1e-14));
  REQUIRE_FALSE(c.coverage_gaps.empty());
  CHECK(std::fabs(c.coverage_gaps[0].lo - kPi / 3.0) <= 1e-12);
  CHECK(std::fabs(c.coverage_gaps[0].hi - 2.0 * kPi / 5.0) <= 1e-12);
  CHECK(c.first_uncovered() == Approx(kPi / 3.0));
  // m* = ceil(3 / 2) = 2: one convex band, then the tail from 4 pi / 5.
  REQUIRE(c.tail_index);
  CHECK(*c.tail_index == 2);
  REQUIRE(c.bands.size() == 3);
  CHECK(c.bands[1].lo == Approx(2.0 * kPi / 5.0));
  CHECK(c.bands[1].hi == Approx(2.0 * kPi / 3.0));
  CHECK(c.bands[2].lo == Approx(4.0 * kPi / 5.0));
  CHECK(c.coverage_gaps[1].lo == Approx(2.0 * kPi / 3.0));
  CHECK(c.coverage_gaps[1].hi == Approx(4.0 * kPi / 5.0));
  CHECK(c.covers(kPi / 3.0));
  CHECK_FALSE(c.covers(kPi / 3.0 + 1e-9));
  CHECK(c.covers(2.0 * kPi / 5.0));
}

TEST_CASE("certify: ellipse (1, 0.4) with n = 2 covers everything") {
  for (double eta : {0.0, 0.5, 1.5707963267948966, 2.2}) {
    const Certificate c = certify(Ellipse({0, 0}, 1.0, 0.4, 0.0), Direction(eta), Material::from_index(1.0, 2.0), 1000.0);
    CHECK(c.full_spectrum);
    CHECK(*c.h1 >= 2.0 * *c.h0);
  }
}

TEST_CASE("certify: n <= 1 gives a single unbounded band") {
  for (double q : {0.25, 0.81}) {
    const Certificate c = certify(Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), Direction(0.2), Material(1.0, q), 10.0);
    CHECK(c.full_spectrum);
    REQUIRE(c.bands.size() == 1);
    CHECK(c.bands[0].source == "index_below_one");
    CHECK_FALSE(c.h0);
  }
  const Certificate one = certify(disk(1.0), Direction(0.0), Material(0.5, 0.5), 10.0);
  CHECK(one.full_spectrum);
  CHECK(one.bands[0].source == "index_one");
}

TEST_CASE("certify: the low band grows without bound as n -> 1+") {
  const Domain d = Ellipse({0, 0}, 1.0, 0.6, 0.2);
  const Certificate c = certify(d, Direction(0.3), Material::from_index(1.0, 1.0 + 1e-6), 1.0);
  CHECK(kPi / *c.h0 > 1e3 / diameter(d));
  CHECK(c.components[0].hi == Approx(kPi / *c.h0));
}

TEST_CASE("certify: non-strictly-convex domains get only the low band") {
  const Certificate c = certify(Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), Direction(0.0), Material::from_index(1.0, 2.0), 100.0);
  REQUIRE(c.bands.size() == 1);
  CHECK(c.bands[0].source == "low_band");
  CHECK(c.bands[0].hi_closed);
  CHECK_FALSE(c.full_spectrum);
  CHECK_FALSE(c.tail_index);
  REQUIRE(c.coverage_gaps.size() == 1);
  CHECK(c.coverage_gaps[0].hi == 100.0);
}

TEST_CASE("certify: full spectrum sweeps find no uncovered k") {
  const std::vector<Domain> domains{disk(1.0), Reuleaux(3, 1.0, {0, 0}, 0.0), Ellipse({0, 0}, 1.0, 0.4, 0.3)};
  for (const Domain& d : domains) {
    const Certificate c = certify(d, Direction(0.8), Material::from_index(1.0, 2.0), 1000.0);
    REQUIRE(c.full_spectrum);
    int misses = 0;
    for (double k : log_sweep(10000, 1e-3, 1e3)) misses += c.covers(k) ? 0 : 1;
    CHECK(misses == 0);
  }
}

TEST_CASE("certify: bands are sorted and disjoint") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), nd(1.05, 8.0);
  for (int i = 0; i < 20; ++i) {
    const Certificate c = certify(Ellipse({0, 0}, 1.0, 0.8, 0.0), Direction(ang(rng)), Material::from_index(1.0, nd(rng)), 200.0, 2048);
    for (std::size_t j = 1; j < c.bands.size(); ++j) CHECK(c.bands[j].lo > c.bands[j - 1].hi);
    // Gaps and bands tile (0, k_max].
    for (const Gap& g : c.coverage_gaps) {
      CHECK_FALSE(c.covers(0.5 * (g.lo + g.hi)));
    }
  }
}

TEST_CASE("certify: punctures at exceptional-only wave numbers") {
  // Disk, a = 1/4, n = 4: n a = 1, so r0 = 1 and lambda+- = eta, the unique
  // argmax. k = 2 pi m / 5 is reached only through eta unless 2 pi m' / k lies
  // in [3, 5] for another m'.
  const Certificate c = certify(disk(1.0), Direction(0.0), Material::from_index(0.25, 4.0), 60.0);
  REQUIRE(c.exceptional);
  CHECK(c.exceptional->r0 == Approx(1.0));
  std::vector<double> punctures;
  for (const Band& b : c.bands) punctures.insert(punctures.end(), b.punctures.begin(), b.punctures.end());
  REQUIRE(punctures.size() == 2);
  CHECK(punctures[0] == Approx(2.0 * kPi / 5.0).epsilon(1e-12));
  CHECK(punctures[1] == Approx(4.0 * kPi / 5.0).epsilon(1e-12));
  CHECK_FALSE(c.covers(punctures[0]));
  CHECK(c.covers(punctures[0] * (1.0 + 1e-9)));
  CHECK(c.first_uncovered() == Approx(kPi / 3.0));

  // Every puncture has no non-exceptional lambda with k w M = 2 pi m.
  const double n = 4.0;
  for (double k : punctures) {
    for (int m = 1; m <= 3; ++m) {
      const double level = kTwoPi * m / k;
      for (int i = 1; i < 100000; ++i) {
        const double t = kTwoPi * i / 100000.0;
        const double v = big_m(std::cos(t), n);
        const double vnext = big_m(std::cos(t + kTwoPi / 100000.0), n);
        const bool brackets = (v - level) * (vnext - level) <= 0.0;
        if (brackets) CHECK(std::min(t, kTwoPi - t) < 1e-4);  // only near lambda = eta
      }
    }
  }

  // With n a > 1 nothing is punctured.
  const Certificate plain = certify(disk(1.0), Direction(0.0), Material::from_index(1.0, 4.0), 60.0);
  for (const Band& b : plain.bands) CHECK(b.punctures.empty());
}

TEST_CASE("certify: punctured full band is not full spectrum") {
  // a = 1/2, n = sqrt 2 on a disk: the exceptional k lie in the low band, so
  // they stay certified and the spectrum is full.
  const Certificate c = certify(disk(1.0), Direction(0.0), Material::from_index(0.5, std::sqrt(2.0)), 100.0);
  CHECK(c.full_spectrum);
  for (const Band& b : c.bands) CHECK(b.punctures.empty());
}

TEST_CASE("certify rejects non-positive k_max") {
  CHECK_THROWS_AS(certify(disk(1.0), Direction(0.0), Material::from_index(1.0, 2.0), 0.0), InvalidInput);
}

TEST_CASE("high-k threshold") {
  const Material m = Material::from_index(1.0, 2.0);
  CHECK_FALSE(high_k_threshold(Ellipse({0, 0}, 1.0, 0.4, 0.0), m));
  const auto t = high_k_threshold(Ellipse({0, 0}, 1.0, 0.1, 0.0), m);
  REQUIRE(t);
  CHECK(*t == Approx(kTwoPi / 1.4).epsilon(1e-9));
  CHECK(*t == Approx(4.488).margin(1e-3));
  CHECK_FALSE(high_k_threshold(Reuleaux(3, 1.0, {0, 0}, 0.0), m));
  CHECK_THROWS_AS(high_k_threshold(Polygon({{0, 0}, {1, 0}, {0, 1}}), m), RegimeError);
  CHECK_THROWS_AS(high_k_threshold(disk(1.0), Material::from_index(0.4, 2.0)), RegimeError);
}
