#pragma once

#include <string>
#include <vector>

#include "twoslit/vec2.hpp"

namespace twoslit {

/// Speed of light in vacuum (m/s).
inline constexpr double kSpeedOfLight = 299'792'458.0;

enum class Slit { one = 1, two = 2 };
enum class DetectorId { one = 1, two = 2 };

constexpr DetectorId own_detector(Slit slit) {
  return slit == Slit::one ? DetectorId::one : DetectorId::two;
}

/// Half-line with a unit direction.
class Ray2 {
 public:
  /// Normalizes `direction`; throws Errc::invalid_argument for a zero or non-finite direction.
  Ray2(Point2 origin, Vec2 direction);

  Point2 origin() const { return origin_; }
  Vec2 direction() const { return direction_; }
  Point2 at(double t) const { return origin_ + t * direction_; }

 private:
  Point2 origin_;
  Vec2 direction_;
};

/// Physical parameters of the mirror two-slit setup. Lengths in meters, angles in radians.
///
/// Frame: diaphragm on y = 0 with slit 1 at (+d/2, 0) and slit 2 at (-d/2, 0);
/// the screen line is y = L and the mirror is centered on it at (x, L).
struct Apparatus {
  double lambda{700e-9};  ///< wavelength
  double d{100e-6};       ///< inter-slit distance
  double s{1e-6};         ///< slit width
  double L{0.1};          ///< diaphragm to screen
  double w{0.1e-3};       ///< mirror width
  double theta{0.7853981633974483};  ///< mirror angle to the screen line
  double L1{5.0};         ///< mirror center to detector 1
  double L2{5.0};         ///< mirror center to detector 2
  double a{1e-3};         ///< detector aperture width

  /// The worked design: 700 nm, 100 um slits 1 um wide, 10 cm, 0.1 mm mirror at 45 deg,
  /// 5 m arms, 1 mm apertures.
  static Apparatus paper_defaults() { return {}; }

  friend bool operator==(const Apparatus&, const Apparatus&) = default;
};

/// Throws Errc::invalid_argument unless every length is finite and positive and 0 < theta < pi/2.
void check(const Apparatus& app);

/// Soft regime checks: s << d and L >> d. Returns human-readable warnings (possibly empty).
std::vector<std::string> regime_warnings(const Apparatus& app);

Point2 slit_position(const Apparatus& app, Slit slit);

struct PathLengths {
  double d1;  ///< |S1 - M0|
  double d2;  ///< |S2 - M0|
};

PathLengths path_lengths(const Apparatus& app, double x);

struct ArrivalTimes {
  double t1;
  double t2;
};

/// Flight times from each slit to its detector, (d_i + L_i) / c.
ArrivalTimes arrival_times(const Apparatus& app, double x);

/// Mirror geometry for one scan position.
struct MirrorPlacement {
  double x;        ///< scan position on the screen line
  Point2 center;   ///< M0 = (x, L)
  Point2 end1;     ///< M1, the endpoint with larger x
  Point2 end2;     ///< M2
  Vec2 along;      ///< unit vector from M2 toward M1
  Vec2 normal;     ///< unit normal facing the diaphragm (negative y component)
  double width;

  /// Point at signed distance `offset` from M0 along the mirror (positive toward M1).
  Point2 point_at(double offset) const { return center + offset * along; }
  /// True if `p` lies on the segment [M2, M1] (relative tolerance 1e-9 of the width).
  bool contains(Point2 p) const;
};

/// Mirror of width app.w centered at (x, L), tilted by theta so that its +x end sits closer
/// to the diaphragm.
MirrorPlacement mirror_placement(const Apparatus& app, double x);
/// Same, with an explicit mirror width.
MirrorPlacement mirror_placement(const Apparatus& app, double x, double width);

/// Specular reflection of `incident` at `at`. Throws Errc::grazing_incidence when the
/// incident direction is within 1e-9 of parallel to the surface.
Ray2 reflect(const Ray2& incident, Point2 at, Vec2 normal);

struct IncidenceAngles {
  double gamma1;  ///< signed angle from N to M0->S1, counter-clockwise positive
  double gamma2;
};

IncidenceAngles incidence_angles(const Apparatus& app, double x);

/// Detector apertures for a mirror centered at a reference position.
///
/// Each aperture is a segment of width a, centered on the reflected central ray at arm length
/// L_i and perpendicular to it. Left/right are taken looking along the arriving ray, so D1L and
/// D2R are the edges facing the other detector.
struct DetectorLayout {
  double x_ref;
  Point2 D1, D2;
  Point2 D1L, D1R, D2L, D2R;
  Vec2 axis1, axis2;  ///< propagation direction of the central ray arriving at each detector
  double L1, L2;
};

/// Throws Errc::diaphragm_clearance if a reflected central ray comes back to y = 0 within
/// |x| < 10 d.
DetectorLayout detector_layout(const Apparatus& app, double x_ref);

/// True when neither reflected central ray at `x` returns to the diaphragm within |x| < 10 d.
bool reflected_rays_clear_diaphragm(const Apparatus& app, double x);

struct DetectorSeparation {
  double exact;   ///< |D1 - D2|
  double approx;  ///< L0 (gamma1 - gamma2) with L0 = (L1 + L2) / 2
};

DetectorSeparation detector_separation(const Apparatus& app, double x);

/// Angular margins by which reflections at a mirror point miss the wrong detector.
///
/// delta1 = incidence(S1) - incidence that would reflect onto D2R; positive means a photon from
/// slit 1 reflecting at p clears detector 2. delta2 is the same with S2 and D1L; negative means a
/// photon from slit 2 clears detector 1.
struct ClearanceAngles {
  double delta1;
  double delta2;
};

/// Uses the mirror placement and detector layout at `x`. Throws Errc::off_mirror if p is not
/// on the mirror segment.
ClearanceAngles clearance_angles(const Apparatus& app, double x, Point2 p);

/// Lower-level form with caller-supplied placement and layout.
ClearanceAngles clearance_angles(const Apparatus& app, const MirrorPlacement& mirror,
                                 const DetectorLayout& layout, Point2 p);

/// Intersection of a ray with a segment, as the ray parameter t >= 0; negative if none.
double ray_segment_hit(const Ray2& ray, Point2 a, Point2 b);

}  // namespace twoslit
