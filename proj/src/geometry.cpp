#include "twoslit/geometry.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "twoslit/error.hpp"

namespace twoslit {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::grazing_incidence: return "grazing incidence";
    case Errc::off_mirror: return "point off mirror";
    case Errc::diaphragm_clearance: return "diaphragm clearance";
    case Errc::empty_pattern: return "empty pattern";
    case Errc::insufficient_samples: return "insufficient samples";
    case Errc::degenerate_fit: return "degenerate fit";
    case Errc::no_bracket: return "no bracket";
    case Errc::x0_too_small: return "scan extent too small";
    case Errc::grid_mismatch: return "grid mismatch";
    case Errc::sampling: return "sampling";
  }
  return "unknown";
}

Ray2::Ray2(Point2 origin, Vec2 direction) : origin_(origin) {
  const double n = norm(direction);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(Errc::invalid_argument, "ray direction must be finite and non-zero");
  }
  direction_ = {direction.x / n, direction.y / n};
}

void check(const Apparatus& app) {
  auto positive = [](const char* name, double v) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw Error(Errc::invalid_argument, fmt::format("{} must be finite and > 0 (got {})", name, v));
    }
  };
  positive("lambda", app.lambda);
  positive("d", app.d);
  positive("s", app.s);
  positive("L", app.L);
  positive("w", app.w);
  positive("L1", app.L1);
  positive("L2", app.L2);
  positive("a", app.a);
  if (!std::isfinite(app.theta) || app.theta <= 0.0 || app.theta >= std::numbers::pi / 2) {
    throw Error(Errc::invalid_argument, fmt::format("theta must lie in (0, pi/2) (got {})", app.theta));
  }
}

std::vector<std::string> regime_warnings(const Apparatus& app) {
  std::vector<std::string> out;
  if (app.s >= app.d / 10) {
    out.push_back(fmt::format("slit width s = {} m is not << d = {} m (s >= d/10)", app.s, app.d));
  }
  if (app.d >= app.L / 100) {
    out.push_back(fmt::format("screen distance L = {} m is not >> d = {} m (d >= L/100)", app.L, app.d));
  }
  return out;
}

Point2 slit_position(const Apparatus& app, Slit slit) {
  return {slit == Slit::one ? app.d / 2 : -app.d / 2, 0.0};
}

PathLengths path_lengths(const Apparatus& app, double x) {
  return {std::hypot(x - app.d / 2, app.L), std::hypot(x + app.d / 2, app.L)};
}

ArrivalTimes arrival_times(const Apparatus& app, double x) {
  const auto [d1, d2] = path_lengths(app, x);
  return {(d1 + app.L1) / kSpeedOfLight, (d2 + app.L2) / kSpeedOfLight};
}

bool MirrorPlacement::contains(Point2 p) const {
  const Vec2 rel = p - center;
  const double tol = 1e-9 * width;
  return std::abs(cross(along, rel)) <= tol && std::abs(dot(along, rel)) <= width / 2 + tol;
}

MirrorPlacement mirror_placement(const Apparatus& app, double x) {
  return mirror_placement(app, x, app.w);
}

MirrorPlacement mirror_placement(const Apparatus& app, double x, double width) {
  const Vec2 along{std::cos(app.theta), -std::sin(app.theta)};
  // perp(along) = (sin, cos) points away from the diaphragm; flip it.
  const Vec2 normal = -perp(along);
  const Point2 center{x, app.L};
  return {x, center, center + (width / 2) * along, center - (width / 2) * along, along, normal, width};
}

Ray2 reflect(const Ray2& incident, Point2 at, Vec2 normal) {
  const Vec2 n = normalized(normal);
  const Vec2 v = incident.direction();
  const double vn = dot(v, n);
  if (std::abs(vn) < 1e-9) {
    throw Error(Errc::grazing_incidence, "incident ray is parallel to the mirror surface");
  }
  return Ray2(at, v - (2.0 * vn) * n);
}

IncidenceAngles incidence_angles(const Apparatus& app, double x) {
  const MirrorPlacement m = mirror_placement(app, x);
  return {signed_angle(m.normal, slit_position(app, Slit::one) - m.center),
          signed_angle(m.normal, slit_position(app, Slit::two) - m.center)};
}

namespace {

Vec2 central_reflection(const Apparatus& app, const MirrorPlacement& m, Slit slit) {
  const Point2 s = slit_position(app, slit);
  return reflect(Ray2(s, m.center - s), m.center, m.normal).direction();
}

bool ray_clears_diaphragm(const Apparatus& app, Point2 origin, Vec2 dir) {
  if (dir.y >= 0.0) {
    return true;
  }
  const double t = -origin.y / dir.y;
  return std::abs(origin.x + t * dir.x) >= 10.0 * app.d;
}

}  // namespace

bool reflected_rays_clear_diaphragm(const Apparatus& app, double x) {
  const MirrorPlacement m = mirror_placement(app, x);
  return ray_clears_diaphragm(app, m.center, central_reflection(app, m, Slit::one)) &&
         ray_clears_diaphragm(app, m.center, central_reflection(app, m, Slit::two));
}

DetectorLayout detector_layout(const Apparatus& app, double x_ref) {
  const MirrorPlacement m = mirror_placement(app, x_ref);
  const Vec2 r1 = central_reflection(app, m, Slit::one);
  const Vec2 r2 = central_reflection(app, m, Slit::two);
  if (!ray_clears_diaphragm(app, m.center, r1) || !ray_clears_diaphragm(app, m.center, r2)) {
    throw Error(Errc::diaphragm_clearance,
                fmt::format("reflected central ray at x = {} m returns to the diaphragm", x_ref));
  }

  DetectorLayout out{};
  out.x_ref = x_ref;
  out.axis1 = r1;
  out.axis2 = r2;
  out.L1 = app.L1;
  out.L2 = app.L2;
  out.D1 = m.center + app.L1 * r1;
  out.D2 = m.center + app.L2 * r2;
  // Left of the propagation direction is its counter-clockwise perpendicular.
  out.D1L = out.D1 + (app.a / 2) * perp(r1);
  out.D1R = out.D1 - (app.a / 2) * perp(r1);
  out.D2L = out.D2 + (app.a / 2) * perp(r2);
  out.D2R = out.D2 - (app.a / 2) * perp(r2);
  return out;
}

DetectorSeparation detector_separation(const Apparatus& app, double x) {
  const DetectorLayout layout = detector_layout(app, x);
  const auto [g1, g2] = incidence_angles(app, x);
  const double L0 = 0.5 * (app.L1 + app.L2);
  return {distance(layout.D1, layout.D2), L0 * (g1 - g2)};
}

ClearanceAngles clearance_angles(const Apparatus& app, double x, Point2 p) {
  return clearance_angles(app, mirror_placement(app, x), detector_layout(app, x), p);
}

ClearanceAngles clearance_angles(const Apparatus& app, const MirrorPlacement& mirror,
                                 const DetectorLayout& layout, Point2 p) {
  if (!mirror.contains(p)) {
    throw Error(Errc::off_mirror, fmt::format("({}, {}) is not on the mirror", p.x, p.y));
  }
  const Vec2 n = mirror.normal;
  // A ray leaving p at signed angle phi from N arrived at signed angle -phi.
  const double delta1 =
      signed_angle(n, slit_position(app, Slit::one) - p) + signed_angle(n, layout.D2R - p);
  const double delta2 =
      signed_angle(n, slit_position(app, Slit::two) - p) + signed_angle(n, layout.D1L - p);
  return {delta1, delta2};
}

double ray_segment_hit(const Ray2& ray, Point2 a, Point2 b) {
  const Vec2 v = ray.direction();
  const Vec2 e = b - a;
  const double denom = cross(v, e);
  if (denom == 0.0) {
    return -1.0;
  }
  const Vec2 q = a - ray.origin();
  const double t = cross(q, e) / denom;
  const double u = cross(q, v) / denom;
  if (t < 0.0 || u < 0.0 || u > 1.0) {
    return -1.0;
  }
  return t;
}

}  // namespace twoslit
