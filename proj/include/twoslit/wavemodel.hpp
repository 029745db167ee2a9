#pragma once

#include <span>
#include <vector>

#include "twoslit/geometry.hpp"
#include "twoslit/hypothesis.hpp"

namespace twoslit {

/// Scalar-wave parameters. The amplitude is fixed to 1, so intensities range over [0, 4].
struct WaveParams {
  double k;  ///< wave number 2 pi / lambda

  static WaveParams from(const Apparatus& app);
};

/// Far-field fringe period lambda L / d.
double fringe_spacing(const Apparatus& app);

/// Interference phase k (d1 - d2) for a mirror centered at x.
double path_phase(const Apparatus& app, double x);

/// Extra reflection phase 2 (gamma1 - gamma2) at x.
double reflection_phase(const Apparatus& app, double x);

/// Two-beam intensity on the screen line, 2 (1 + cos k(d1 - d2)).
double screen_intensity(const Apparatus& app, double x);

/// Intensity at detector 1, 2 (1 + cos(k(d1 - d2) + 2(gamma1 - gamma2))), or at detector 2 with
/// the indices swapped.
double detector_intensity(const Apparatus& app, double x, DetectorId which);

struct FringeSample {
  double x;
  double intensity;
};

/// Sampled intensity (or count) profile; x strictly increasing, intensities finite and >= 0.
class FringePattern {
 public:
  FringePattern() = default;
  /// Throws Errc::invalid_argument if the invariants do not hold.
  explicit FringePattern(std::vector<FringeSample> samples);

  std::span<const FringeSample> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const FringeSample& operator[](std::size_t i) const { return samples_[i]; }

 private:
  std::vector<FringeSample> samples_;
};

/// (I_max - I_min) / (I_max + I_min) over the samples; 0 for an all-zero pattern.
/// Throws Errc::empty_pattern.
double visibility(const FringePattern& pattern);

struct VisibilityFit {
  double V;             ///< clamped to [0, 1]
  double phase;         ///< phi in A (1 + V cos(2 pi x / period + phi))
  double baseline;      ///< A
  double rms_residual;  ///< root-mean-square residual divided by A
};

/// Linear least-squares fit of A (1 + V cos(2 pi x / period + phi)) with the period held fixed.
///
/// Requires the samples to span at least two periods with no gap wider than period / 2.
/// Throws Errc::insufficient_samples or Errc::degenerate_fit (A <= 0).
VisibilityFit fit_visibility(const FringePattern& pattern, double period);

struct DualityPoint {
  double D;
  double V;
};

struct DualityCheck {
  bool satisfied;  ///< D^2 + V^2 <= 1 + 1e-9
  double slack;    ///< 1 - D^2 - V^2
};

/// Throws Errc::invalid_argument if D or V lies outside [0, 1].
DualityCheck duality_check(const DualityPoint& p);

/// 1 for FullDuality, 0 for Exclusive, sqrt(1 - D^2) for Partial.
double hypothesis_visibility(const OutcomeHypothesis& hyp);

}  // namespace twoslit
