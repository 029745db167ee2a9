#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twoslit/geometry.hpp"

namespace twoslit {

/// Outcome of checking an apparatus against the feasibility constraints.
///
/// A limiting half-width is +infinity when its clearance condition never binds in the searched
/// range; the width is then limited by w' alone.
struct DesignReport {
  double F_s{};
  double w_prime{};
  double w1_limit{};
  double w2_limit{};
  double required_w{};
  double L12{};
  double x_max{};
  double max_projection{};
  bool sampling_ok{};
  bool misdetection_free{};
  bool diaphragm_clear{};
  std::vector<std::string> warnings;

  bool passed() const { return sampling_ok && misdetection_free && diaphragm_clear; }
};

struct MirrorDefaults {
  double w_prime;  ///< F_s / 7
  double theta;    ///< pi / 4
};

MirrorDefaults default_mirror_params(const Apparatus& app);

struct SamplingResult {
  bool ok;
  double max_projection;  ///< largest mirror footprint on the screen line over the scan
};

/// Mirror footprint check over 0 <= x <= x0: endpoints M1 and M2 are projected onto y = L along
/// the rays S1->M1 and S2->M2; ok iff every footprint is below F_s / 2.
/// Throws Errc::x0_too_small unless x0 > 2 F_s.
SamplingResult sampling_constraint(const Apparatus& app, double x0);

/// Mirror half-width at which a clearance angle reaches zero: delta1 at p = M1 for slit 1,
/// delta2 at p = M2 for slit 2, with the mirror centered at x. Bisection over [1 um, 2 mm]
/// to 1e-7 m. Throws Errc::no_bracket when the sign does not change over that range.
double limiting_half_width(const Apparatus& app, double x, Slit slit);

/// 2 min(w'/2, w1, w2), with w1 probed at x = 3 F_s and w2 at x = 0. A limit whose clearance
/// never binds is skipped.
double required_mirror_width(const Apparatus& app);
/// Same with an explicit w'.
double required_mirror_width(const Apparatus& app, double w_prime);

/// Assembles the full report for the apparatus as given (its own w is the one swept).
/// Failures are report fields, never exceptions, except for an invalid apparatus.
DesignReport validate(const Apparatus& app, double x_max);
/// x_max defaults to 3 F_s.
DesignReport validate(const Apparatus& app);

struct Interval {
  double lo;
  double hi;
};

/// Bounds for the random design search. w and w' are always derived, never searched.
struct SearchSpace {
  Interval lambda;
  Interval d;
  Interval L;
  Interval theta;
  Interval L0;
  Interval a;
  std::optional<double> x_max;  ///< scan extent; 3 F_s of each candidate when unset
  double s{1e-6};               ///< slit width carried into every candidate

  /// Degenerate space holding only the worked design.
  static SearchSpace paper_point();
};

/// Throws Errc::invalid_argument for reversed or non-positive bounds.
void check(const SearchSpace& space);

struct SearchResult {
  std::optional<Apparatus> best;  ///< empty when no sample was feasible
  DesignReport report;            ///< report of `best`
  std::size_t feasible{0};
  std::size_t evaluated{0};
};

/// Seeded random search maximizing the detector separation L12 among candidates that pass
/// validate. Ties go to the lowest sample index; the result does not depend on thread count.
SearchResult design_search(const SearchSpace& space, std::size_t samples, std::uint64_t seed);

}  // namespace twoslit
