#include "twoslit/wavemodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "twoslit/error.hpp"

namespace twoslit {

WaveParams WaveParams::from(const Apparatus& app) { return {2.0 * std::numbers::pi / app.lambda}; }

double fringe_spacing(const Apparatus& app) { return app.lambda * app.L / app.d; }

double path_phase(const Apparatus& app, double x) {
  const auto [d1, d2] = path_lengths(app, x);
  return WaveParams::from(app).k * (d1 - d2);
}

double reflection_phase(const Apparatus& app, double x) {
  const auto [g1, g2] = incidence_angles(app, x);
  return 2.0 * (g1 - g2);
}

double screen_intensity(const Apparatus& app, double x) {
  return 2.0 * (1.0 + std::cos(path_phase(app, x)));
}

double detector_intensity(const Apparatus& app, double x, DetectorId which) {
  const double phase = path_phase(app, x) + reflection_phase(app, x);
  return 2.0 * (1.0 + std::cos(which == DetectorId::one ? phase : -phase));
}

FringePattern::FringePattern(std::vector<FringeSample> samples) : samples_(std::move(samples)) {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.x) || !std::isfinite(s.intensity) || s.intensity < 0.0) {
      throw Error(Errc::invalid_argument, fmt::format("sample {} is not finite and non-negative", i));
    }
    if (i > 0 && !(s.x > samples_[i - 1].x)) {
      throw Error(Errc::invalid_argument, fmt::format("sample positions not increasing at {}", i));
    }
  }
}

double visibility(const FringePattern& pattern) {
  if (pattern.empty()) {
    throw Error(Errc::empty_pattern, "visibility of an empty pattern");
  }
  const auto [lo, hi] = std::ranges::minmax(pattern.samples(), {}, &FringeSample::intensity);
  const double sum = hi.intensity + lo.intensity;
  return sum > 0.0 ? (hi.intensity - lo.intensity) / sum : 0.0;
}

VisibilityFit fit_visibility(const FringePattern& pattern, double period) {
  if (!(period > 0.0)) {
    throw Error(Errc::invalid_argument, "fit period must be positive");
  }
  const auto samples = pattern.samples();
  const std::size_t n = samples.size();
  if (n < 4) {
    throw Error(Errc::insufficient_samples, fmt::format("{} samples cannot constrain a fringe fit", n));
  }
  const double tol = 1e-9 * period;
  if (samples.back().x - samples.front().x < 2.0 * period - tol) {
    throw Error(Errc::insufficient_samples, "pattern spans fewer than two fringe periods");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (samples[i].x - samples[i - 1].x > period / 2 + tol) {
      throw Error(Errc::insufficient_samples,
                  fmt::format("sample gap at x = {} exceeds half a fringe period", samples[i - 1].x));
    }
  }

  const double omega = 2.0 * std::numbers::pi / period;
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    design(row, 0) = 1.0;
    design(row, 1) = std::cos(omega * samples[i].x);
    design(row, 2) = std::sin(omega * samples[i].x);
    y(row) = samples[i].intensity;
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(y);
  const double A = c(0);
  if (!(A > 0.0)) {
    throw Error(Errc::degenerate_fit, fmt::format("fitted baseline {} is not positive", A));
  }
  // A V cos(wx + phi) = A V cos(phi) cos(wx) - A V sin(phi) sin(wx)
  const double amplitude = std::hypot(c(1), c(2));
  const double residual = (design * c - y).norm() / std::sqrt(static_cast<double>(n));
  return {std::clamp(amplitude / A, 0.0, 1.0), std::atan2(-c(2), c(1)), A, residual / A};
}

DualityCheck duality_check(const DualityPoint& p) {
  if (!(p.D >= 0.0 && p.D <= 1.0) || !(p.V >= 0.0 && p.V <= 1.0)) {
    throw Error(Errc::invalid_argument, fmt::format("(D, V) = ({}, {}) outside [0, 1]^2", p.D, p.V));
  }
  const double slack = 1.0 - p.D * p.D - p.V * p.V;
  return {slack >= -1e-9, slack};
}

double hypothesis_visibility(const OutcomeHypothesis& hyp) {
  switch (hyp.kind) {
    case OutcomeKind::FullDuality: return 1.0;
    case OutcomeKind::Exclusive: return 0.0;
    case OutcomeKind::Partial:
      if (!(hyp.D >= 0.0 && hyp.D <= 1.0)) {
        throw Error(Errc::invalid_argument, fmt::format("distinguishability D = {} is outside [0, 1]", hyp.D));
      }
      return std::sqrt(1.0 - hyp.D * hyp.D);
  }
  return 0.0;
}

}  // namespace twoslit
