#include "twoslit/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "twoslit/error.hpp"
#include "twoslit/parallel.hpp"

namespace twoslit {

namespace {

constexpr std::uint64_t kScanSalt = 0x5ca9;
constexpr std::uint64_t kConventionalSalt = 0xc0a7;

FringePattern pattern_from(const std::vector<ScanRecord>& records, std::uint64_t ScanRecord::*field) {
  std::vector<FringeSample> samples;
  samples.reserve(records.size());
  for (const auto& r : records) {
    samples.push_back({r.x, static_cast<double>(r.*field)});
  }
  return FringePattern(std::move(samples));
}

}  // namespace

ScanConfig ScanConfig::uniform(double x_min, double x_max, std::size_t n) {
  ScanConfig config;
  config.x_positions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    config.x_positions[i] =
        n == 1 ? x_min : x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return config;
}

void check(const ScanConfig& config, const Apparatus& app) {
  if (config.x_positions.empty()) {
    throw Error(Errc::invalid_argument, "scan has no positions");
  }
  if (config.photons_per_position == 0) {
    throw Error(Errc::invalid_argument, "photons_per_position must be at least 1");
  }
  const double half_period = fringe_spacing(app) / 2;
  for (std::size_t i = 0; i < config.x_positions.size(); ++i) {
    if (!std::isfinite(config.x_positions[i])) {
      throw Error(Errc::invalid_argument, fmt::format("scan position {} is not finite", i));
    }
    if (i == 0) {
      continue;
    }
    const double step = config.x_positions[i] - config.x_positions[i - 1];
    if (!(step > 0.0)) {
      throw Error(Errc::invalid_argument, fmt::format("scan positions not strictly increasing at {}", i));
    }
    if (step > half_period * (1.0 + 1e-9)) {
      throw Error(Errc::sampling,
                  fmt::format("scan step {} m at index {} exceeds F_s / 2 = {} m", step, i, half_period));
    }
  }
}

PositionContext PositionContext::make(const Apparatus& app, double x, const OutcomeHypothesis& hyp,
                                      std::optional<double> layout_x) {
  const double V = hypothesis_visibility(hyp);
  const double rate = 0.5 * (1.0 + V * std::cos(path_phase(app, x) + reflection_phase(app, x)));
  return {mirror_placement(app, x), detector_layout(app, layout_x.value_or(x)), rate};
}

PhotonEvent photon_event(const Apparatus& app, const PositionContext& ctx, Rng& rng) {
  const Slit slit = uniform01(rng) < 0.5 ? Slit::one : Slit::two;
  if (!(uniform01(rng) < ctx.acceptance)) {
    return {std::nullopt, slit, false};
  }
  const Point2 p = ctx.mirror.point_at((uniform01(rng) - 0.5) * ctx.mirror.width);
  const Point2 source = slit_position(app, slit);
  const Ray2 out = reflect(Ray2(source, p - source), p, ctx.mirror.normal);

  const double t1 = ray_segment_hit(out, ctx.layout.D1L, ctx.layout.D1R);
  const double t2 = ray_segment_hit(out, ctx.layout.D2L, ctx.layout.D2R);
  std::optional<DetectorId> hit;
  if (t1 >= 0.0 && (t2 < 0.0 || t1 <= t2)) {
    hit = DetectorId::one;
  } else if (t2 >= 0.0) {
    hit = DetectorId::two;
  }
  return {hit, slit, hit.has_value() && *hit != own_detector(slit)};
}

PhotonEvent photon_event(const Apparatus& app, double x, const OutcomeHypothesis& hyp, Rng& rng) {
  return photon_event(app, PositionContext::make(app, x, hyp), rng);
}

ScanSummary simulate_scan(const Apparatus& app, const ScanConfig& config, const OutcomeHypothesis& hyp) {
  check(app);
  check(config, app);
  const std::size_t n = config.x_positions.size();
  ScanSummary summary;
  summary.hypothesis = hyp;
  summary.records.resize(n);

  parallel_for(n, [&](std::size_t i) {
    const double x = config.x_positions[i];
    const auto ctx = PositionContext::make(
        app, x, hyp, config.freeze_detectors ? std::optional<double>(0.0) : std::nullopt);
    Rng rng = make_substream(config.seed, i, kScanSalt);
    ScanRecord rec{x, 0, 0, 0, 0, detector_intensity(app, x, DetectorId::one),
                   detector_intensity(app, x, DetectorId::two)};
    for (std::uint64_t k = 0; k < config.photons_per_position; ++k) {
      const PhotonEvent ev = photon_event(app, ctx, rng);
      if (!ev.detector) {
        continue;
      }
      ++(*ev.detector == DetectorId::one ? rec.N1 : rec.N2);
      rec.misdetected += ev.misdetected ? 1 : 0;
    }
    rec.N = rec.N1 + rec.N2;
    summary.records[i] = rec;
  });

  const double period = fringe_spacing(app);
  summary.V_total = fit_visibility(pattern_from(summary.records, &ScanRecord::N), period).V;
  summary.V_1 = fit_visibility(pattern_from(summary.records, &ScanRecord::N1), period).V;
  summary.V_2 = fit_visibility(pattern_from(summary.records, &ScanRecord::N2), period).V;

  std::uint64_t total = 0;
  std::uint64_t wrong = 0;
  for (const auto& r : summary.records) {
    total += r.N;
    wrong += r.misdetected;
  }
  summary.misdetection_rate = total == 0 ? 0.0 : static_cast<double>(wrong) / static_cast<double>(total);
  return summary;
}

FringePattern conventional_scan(const Apparatus& app, const ScanConfig& config) {
  check(app);
  check(config, app);
  const std::size_t n = config.x_positions.size();
  std::vector<FringeSample> samples(n);
  parallel_for(n, [&](std::size_t i) {
    const double x = config.x_positions[i];
    const double rate = screen_intensity(app, x) / 4.0;
    Rng rng = make_substream(config.seed, i, kConventionalSalt);
    std::uint64_t count = 0;
    for (std::uint64_t k = 0; k < config.photons_per_position; ++k) {
      count += uniform01(rng) < rate ? 1 : 0;
    }
    samples[i] = {x, static_cast<double>(count)};
  });
  return FringePattern(std::move(samples));
}

FringePattern total_counts(const ScanSummary& scan) { return pattern_from(scan.records, &ScanRecord::N); }

DistributionComparison compare_distributions(const FringePattern& reference, const FringePattern& other) {
  if (reference.size() != other.size()) {
    throw Error(Errc::grid_mismatch,
                fmt::format("reference has {} positions, scan has {}", reference.size(), other.size()));
  }
  double A = 0.0;
  double B = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double scale = std::max({1.0, std::abs(reference[i].x), std::abs(other[i].x)});
    if (std::abs(reference[i].x - other[i].x) > 1e-12 * scale) {
      throw Error(Errc::grid_mismatch, fmt::format("positions differ at index {}", i));
    }
    A += reference[i].intensity;
    B += other[i].intensity;
  }
  if (!(A > 0.0) || !(B > 0.0)) {
    throw Error(Errc::invalid_argument, "cannot compare distributions with zero total counts");
  }
  double chi2 = 0.0;
  std::size_t bins = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double a = reference[i].intensity;
    const double b = other[i].intensity;
    if (a + b <= 0.0) {
      continue;
    }
    const double diff = B * a - A * b;
    chi2 += diff * diff / (a + b);
    ++bins;
  }
  chi2 /= A * B;
  if (bins < 2) {
    throw Error(Errc::insufficient_samples, "need at least two populated positions to compare");
  }
  const double per_dof = chi2 / static_cast<double>(bins - 1);
  return {per_dof, per_dof < 2.0};
}

DistributionComparison compare_distributions(const FringePattern& reference, const ScanSummary& scan) {
  return compare_distributions(reference, total_counts(scan));
}

}  // namespace twoslit
