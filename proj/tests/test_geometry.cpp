#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "test_support.hpp"
#include "twoslit/error.hpp"
#include "twoslit/geometry.hpp"
#include "twoslit/wavemodel.hpp"

using namespace twoslit;
using twoslit::test::paper;

namespace {

// Unsigned angle between two vectors, computed from acos rather than atan2.
double angle_between(Vec2 a, Vec2 b) {
  return std::acos(std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0));
}

}  // namespace

TEST_CASE("path lengths") {
  const Apparatus app = paper();

  SUBCASE("symmetric at the center") {
    const auto [d1, d2] = path_lengths(app, 0.0);
    CHECK(d1 == d2);
    CHECK(d1 == doctest::Approx(std::sqrt(app.d * app.d / 4 + app.L * app.L)).epsilon(1e-15));
  }

  SUBCASE("difference matches the small-angle formula one fringe out") {
    const double x = 0.7e-3;
    const auto [d1, d2] = path_lengths(app, x);
    const double far_field = x * app.d / app.L;
    CHECK(far_field == doctest::Approx(7.0e-7).epsilon(1e-12));
    CHECK(std::abs((d2 - d1) - far_field) / far_field < 1e-3);
  }

  SUBCASE("x -> -x swaps the two paths") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(-5e-3, 5e-3);
    for (int i = 0; i < 200; ++i) {
      const double x = pos(rng);
      const auto a = path_lengths(app, x);
      const auto b = path_lengths(app, -x);
      CHECK(a.d1 == b.d2);
      CHECK(a.d2 == b.d1);
    }
  }
}

TEST_CASE("arrival times") {
  Apparatus app = paper();
  app.L1 = app.L2 = 2.0;
  const auto t = arrival_times(app, 0.0);
  CHECK(t.t1 == doctest::Approx((std::hypot(app.d / 2, app.L) + 2.0) / 299'792'458.0));
  CHECK(t.t1 == doctest::Approx(7.0e-9).epsilon(0.01));
  CHECK(t.t1 == t.t2);

  Apparatus longer = app;
  longer.L1 = 2 * app.L1;
  CHECK(arrival_times(longer, 0.0).t1 - t.t1 == doctest::Approx(app.L1 / kSpeedOfLight).epsilon(1e-12));
}

TEST_CASE("mirror placement") {
  const Apparatus app = paper();

  SUBCASE("endpoints match a rotation of the half-width vector") {
    const auto m = mirror_placement(app, 0.0);
    // Rotate (w/2, 0) clockwise by theta.
    const double c = std::cos(-app.theta);
    const double s = std::sin(-app.theta);
    const Point2 expected{c * app.w / 2, app.L + s * app.w / 2};
    CHECK(m.end1.x == doctest::Approx(expected.x).epsilon(1e-14));
    CHECK(m.end1.y == doctest::Approx(expected.y).epsilon(1e-14));
    CHECK(m.end1.x == doctest::Approx(3.536e-5).epsilon(1e-3));
    CHECK(app.L - m.end1.y == doctest::Approx(3.536e-5).epsilon(1e-3));
    CHECK(m.end1.x > m.end2.x);
  }

  SUBCASE("invariants") {
    for (double x : {-2e-3, 0.0, 1.3e-3}) {
      const auto m = mirror_placement(app, x);
      CHECK(distance(m.end1, m.end2) == doctest::Approx(app.w).epsilon(1e-12));
      CHECK(distance(m.end1, m.center) == doctest::Approx(app.w / 2).epsilon(1e-12));
      CHECK(distance(m.end2, m.center) == doctest::Approx(app.w / 2).epsilon(1e-12));
      CHECK(midpoint(m.end1, m.end2).x == doctest::Approx(x));
      CHECK(std::abs(dot(m.normal, m.end1 - m.end2)) < 1e-12 * app.w);
      CHECK(m.normal.y < 0.0);
      CHECK(norm(m.normal) == doctest::Approx(1.0));
    }
  }

  SUBCASE("small angle lies along the screen") {
    Apparatus flat = app;
    flat.theta = 1e-9;
    const auto m = mirror_placement(flat, 0.0);
    CHECK(std::abs(m.end1.y - m.end2.y) < 1e-8 * flat.w);
  }

  SUBCASE("contains") {
    const auto m = mirror_placement(app, 0.0);
    CHECK(m.contains(m.end1));
    CHECK(m.contains(m.point_at(0.01e-3)));
    CHECK_FALSE(m.contains(m.point_at(app.w)));
    CHECK_FALSE(m.contains(m.center + 1e-6 * m.normal));
  }
}

TEST_CASE("reflect") {
  SUBCASE("normal incidence reverses") {
    const Ray2 r = reflect(Ray2({0, 0}, {0, 1}), {0, 1}, {0, -1});
    CHECK(r.direction().x == doctest::Approx(0.0));
    CHECK(r.direction().y == doctest::Approx(-1.0));
    CHECK(r.origin() == Point2{0, 1});
  }

  SUBCASE("45 degree fold") {
    const Ray2 r = reflect(Ray2({0, 0}, {0, 1}), {0, 1}, normalized({-1, -1}));
    CHECK(r.direction().x == doctest::Approx(-1.0));
    CHECK(std::abs(r.direction().y) < 1e-15);
  }

  SUBCASE("grazing incidence is an error") {
    CHECK_THROWS_AS(reflect(Ray2({0, 0}, {1, 0}), {1, 0}, {0, 1}), Error);
    try {
      reflect(Ray2({0, 0}, {1, 1e-12}), {1, 0}, {0, 1});
      FAIL("expected grazing incidence");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::grazing_incidence);
    }
  }

  SUBCASE("zero direction is rejected") { CHECK_THROWS_AS(Ray2({0, 0}, {0, 0}), Error); }

  SUBCASE("random cases: unit length, equal angles, involution, separation preserved") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    int checked = 0;
    while (checked < 100) {
      const Vec2 v{std::cos(ang(rng)), std::sin(ang(rng))};
      const double phi = ang(rng);
      const Vec2 n{std::cos(phi), std::sin(phi)};
      if (std::abs(dot(normalized(v), n)) < 1e-3) {
        continue;
      }
      const Vec2 vu = normalized(v);
      const Ray2 r = reflect(Ray2({0, 0}, v), {0, 0}, n);
      CHECK(norm(r.direction()) == doctest::Approx(1.0).epsilon(1e-14));
      // Angle to the normal line is preserved.
      const double in = angle_between(vu, n);
      const double out = angle_between(r.direction(), n);
      CHECK(std::abs(std::min(in, std::numbers::pi - in) - std::min(out, std::numbers::pi - out)) < 1e-7);

      const Ray2 back = reflect(r, {0, 0}, n);
      CHECK(back.direction().x == doctest::Approx(vu.x).epsilon(1e-12));
      CHECK(back.direction().y == doctest::Approx(vu.y).epsilon(1e-12));

      const Vec2 v2{std::cos(phi + 0.3), std::sin(phi + 0.3)};
      if (std::abs(dot(v2, n)) > 1e-3) {
        const Ray2 r2 = reflect(Ray2({0, 0}, v2), {0, 0}, n);
        const double sep_in = std::abs(signed_angle(vu, v2));
        const double sep_out = std::abs(signed_angle(r.direction(), r2.direction()));
        CHECK(std::abs(sep_in - sep_out) < 1e-12);
      }
      ++checked;
    }
  }
}

TEST_CASE("incidence angles") {
  const Apparatus app = paper();

  SUBCASE("difference equals the angle subtended by the slits") {
    const auto [g1, g2] = incidence_angles(app, 0.0);
    const Point2 m0{0.0, app.L};
    const double subtended = angle_between(slit_position(app, Slit::one) - m0, slit_position(app, Slit::two) - m0);
    CHECK(g1 - g2 == doctest::Approx(subtended).epsilon(1e-9));
    CHECK(g1 - g2 == doctest::Approx(2 * std::atan(app.d / (2 * app.L))).epsilon(1e-9));
    CHECK(g1 - g2 == doctest::Approx(1.0e-3).epsilon(1e-6));
    CHECK(g1 > g2);
  }

  SUBCASE("difference does not depend on theta") {
    Apparatus steep = app;
    steep.theta = 1.1;
    for (double x : {0.0, 1e-3, 2.1e-3}) {
      const auto a = incidence_angles(app, x);
      const auto b = incidence_angles(steep, x);
      CHECK(a.gamma1 - a.gamma2 == doctest::Approx(b.gamma1 - b.gamma2).epsilon(1e-9));
    }
  }

  SUBCASE("difference shrinks far from the axis") {
    const auto far = incidence_angles(app, 1e3);
    CHECK(far.gamma1 - far.gamma2 < 1e-10);
  }

  SUBCASE("difference strictly decreasing in |x|") {
    double prev = INFINITY;
    for (int i = 0; i <= 300; ++i) {
      const double x = i * 1e-5;
      const auto [g1, g2] = incidence_angles(app, x);
      CHECK(g1 - g2 < prev);
      prev = g1 - g2;
      CHECK(g1 > g2);
    }
  }
}

TEST_CASE("detector layout") {
  const Apparatus app = paper();
  const auto layout = detector_layout(app, 0.0);
  const Point2 m0{0.0, app.L};

  CHECK(distance(layout.D1, m0) == doctest::Approx(app.L1).epsilon(1e-14));
  CHECK(distance(layout.D2, m0) == doctest::Approx(app.L2).epsilon(1e-14));
  CHECK(distance(layout.D1, layout.D2) == doctest::Approx(5e-3).epsilon(0.05));
  CHECK(distance(layout.D1L, layout.D1R) == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(distance(layout.D2L, layout.D2R) == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(std::abs(dot(layout.D1L - layout.D1R, layout.axis1)) < 1e-15);
  CHECK(std::abs(dot(layout.D2L - layout.D2R, layout.axis2)) < 1e-15);
  CHECK(midpoint(layout.D1L, layout.D1R).x == doctest::Approx(layout.D1.x));

  SUBCASE("inner edges face the other detector") {
    CHECK(distance(layout.D1L, layout.D2) < distance(layout.D1R, layout.D2));
    CHECK(distance(layout.D2R, layout.D1) < distance(layout.D2L, layout.D1));
  }

  SUBCASE("central ray reaching D1 comes from slit 1") {
    const Point2 s1 = slit_position(app, Slit::one);
    const auto m = mirror_placement(app, 0.0);
    const Ray2 r = reflect(Ray2(s1, m0 - s1), m0, m.normal);
    CHECK(distance(r.at(app.L1), layout.D1) < 1e-12);
  }

  SUBCASE("rays folded back onto the slits are rejected") {
    Apparatus flat = app;
    flat.theta = 1e-3;
    CHECK_FALSE(reflected_rays_clear_diaphragm(flat, 0.0));
    try {
      detector_layout(flat, 0.0);
      FAIL("expected a clearance error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::diaphragm_clearance);
    }
    CHECK(reflected_rays_clear_diaphragm(app, 0.0));
  }
}

TEST_CASE("detector separation") {
  Apparatus app = paper();
  const auto at0 = detector_separation(app, 0.0);
  CHECK(at0.approx == doctest::Approx(5e-3).epsilon(0.05));

  const double fs = fringe_spacing(app);
  for (int i = 0; i < 100; ++i) {
    const double x = 3 * fs * i / 99.0;
    const auto sep = detector_separation(app, x);
    CHECK(std::abs(sep.exact - sep.approx) / sep.exact < 0.01);
  }

  Apparatus doubled = app;
  doubled.L1 = doubled.L2 = 2 * app.L1;
  CHECK(detector_separation(doubled, 0.0).approx == doctest::Approx(2 * at0.approx).epsilon(1e-14));
}

TEST_CASE("clearance angles") {
  const Apparatus app = paper();

  SUBCASE("worked design is safe at both mirror ends") {
    for (double x : {0.0, 1.05e-3, 2.1e-3}) {
      const auto m = mirror_placement(app, x);
      for (Point2 p : {m.end1, m.center, m.end2}) {
        const auto c = clearance_angles(app, x, p);
        CHECK(c.delta1 > 0.0);
        CHECK(c.delta2 < 0.0);
      }
    }
  }

  SUBCASE("zero exactly where the reflected ray meets the inner aperture edge") {
    // Independent oracle: intersect the reflected ray from slit 2 with the line through D1's
    // aperture, and find where it crosses D1L by bisection on the signed offset.
    const auto layout = detector_layout(app, 0.0);
    const auto m = mirror_placement(app, 0.0);
    const Point2 s2 = slit_position(app, Slit::two);
    auto offset = [&](double h) {
      const Point2 p = m.point_at(-h);
      const Ray2 r = reflect(Ray2(s2, p - s2), p, m.normal);
      const Vec2 across = perp(layout.axis1);
      const double t = dot(layout.D1 - p, layout.axis1) / dot(r.direction(), layout.axis1);
      return dot(r.at(t) - layout.D1L, across);
    };
    double lo = 1e-6;
    double hi = 2e-3;
    const bool lo_sign = offset(lo) > 0;
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      ((offset(mid) > 0) == lo_sign ? lo : hi) = mid;
    }
    Apparatus wide = app;
    wide.w = 2 * lo;
    const auto mw = mirror_placement(wide, 0.0);
    const auto c = clearance_angles(wide, 0.0, mw.end2);
    CHECK(std::abs(c.delta2) < 1e-9);
  }

  SUBCASE("off-mirror point is an error") {
    const auto m = mirror_placement(app, 0.0);
    try {
      clearance_angles(app, 0.0, m.point_at(2 * app.w));
      FAIL("expected off-mirror error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::off_mirror);
    }
  }

  SUBCASE("continuous along the mirror with at most one sign change") {
    Apparatus wide = app;
    wide.w = 0.6e-3;
    for (double x : {0.0, 2.1e-3}) {
      const auto m = mirror_placement(wide, x);
      const auto layout = detector_layout(wide, x);
      int flips1 = 0;
      int flips2 = 0;
      double prev1 = 0;
      double prev2 = 0;
      for (int i = 0; i <= 600; ++i) {
        const auto c = clearance_angles(wide, m, layout, m.point_at(-0.3e-3 + i * 1e-6));
        if (i > 0) {
          flips1 += (c.delta1 > 0) != (prev1 > 0);
          flips2 += (c.delta2 > 0) != (prev2 > 0);
          CHECK(std::abs(c.delta1 - prev1) < 1e-5);
          CHECK(std::abs(c.delta2 - prev2) < 1e-5);
        }
        prev1 = c.delta1;
        prev2 = c.delta2;
      }
      CHECK(flips1 <= 1);
      CHECK(flips2 <= 1);
      CHECK(flips1 + flips2 >= 1);
    }
  }
}

TEST_CASE("apparatus checks") {
  Apparatus app = paper();
  CHECK_NOTHROW(check(app));
  CHECK(regime_warnings(app).empty());

  Apparatus bad = app;
  bad.theta = std::numbers::pi / 2;
  CHECK_THROWS_AS(check(bad), Error);
  bad = app;
  bad.L = -1;
  CHECK_THROWS_AS(check(bad), Error);
  bad = app;
  bad.a = NAN;
  CHECK_THROWS_AS(check(bad), Error);

  Apparatus wide_slit = app;
  wide_slit.s = 20e-6;
  CHECK(regime_warnings(wide_slit).size() == 1);
  Apparatus close_screen = app;
  close_screen.L = 5e-3;
  CHECK(regime_warnings(close_screen).size() == 1);
}

TEST_CASE("ray segment intersection") {
  const Ray2 r({0, 0}, {1, 0});
  CHECK(ray_segment_hit(r, {2, -1}, {2, 1}) == doctest::Approx(2.0));
  CHECK(ray_segment_hit(r, {2, 0.5}, {2, 1}) < 0.0);
  CHECK(ray_segment_hit(r, {-2, -1}, {-2, 1}) < 0.0);
  CHECK(ray_segment_hit(r, {1, 0}, {3, 0}) < 0.0);
}
