#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "twoslit/geometry.hpp"
#include "twoslit/hypothesis.hpp"
#include "twoslit/random.hpp"
#include "twoslit/wavemodel.hpp"

namespace twoslit {

/// Mirror positions and photon budget of one scan.
struct ScanConfig {
  std::vector<double> x_positions;
  std::uint64_t photons_per_position{10'000};
  std::uint64_t seed{42};
  bool freeze_detectors{false};  ///< keep the detector layout of x = 0 for every position

  /// n evenly spaced positions over [x_min, x_max].
  static ScanConfig uniform(double x_min, double x_max, std::size_t n);
};

/// Throws Errc::invalid_argument for an empty or non-increasing grid or a zero photon budget,
/// and Errc::sampling when two neighbouring positions are more than F_s / 2 apart.
void check(const ScanConfig& config, const Apparatus& app);

/// Counts at one mirror position.
struct ScanRecord {
  double x;
  std::uint64_t N;   ///< N1 + N2
  std::uint64_t N1;
  std::uint64_t N2;
  std::uint64_t misdetected;
  double I1_theory;
  double I2_theory;
};

struct ScanSummary {
  std::vector<ScanRecord> records;
  double V_total{};
  double V_1{};
  double V_2{};
  double misdetection_rate{};
  OutcomeHypothesis hypothesis;
};

/// Geometry and acceptance rate prepared once per mirror position.
struct PositionContext {
  MirrorPlacement mirror;
  DetectorLayout layout;
  double acceptance;  ///< [1 + V cos(k(d1 - d2) + 2(gamma1 - gamma2))] / 2

  static PositionContext make(const Apparatus& app, double x, const OutcomeHypothesis& hyp,
                              std::optional<double> layout_x = std::nullopt);
};

struct PhotonEvent {
  std::optional<DetectorId> detector;  ///< empty when not accepted or when no aperture is hit
  Slit slit;
  bool misdetected;
};

/// One emitted photon: slit drawn uniformly, accepted with the hypothesis rate, reflected at a
/// uniform point of the mirror and attributed to whichever aperture the reflected ray crosses.
PhotonEvent photon_event(const Apparatus& app, const PositionContext& ctx, Rng& rng);
PhotonEvent photon_event(const Apparatus& app, double x, const OutcomeHypothesis& hyp, Rng& rng);

/// Full scan. Each position draws from its own substream keyed by (seed, index), so the result
/// is bit-identical regardless of how positions are scheduled across threads.
ScanSummary simulate_scan(const Apparatus& app, const ScanConfig& config, const OutcomeHypothesis& hyp);

/// Mirror-free reference: a single detector on the screen line accepting each photon with
/// probability I(x) / 4 from the screen intensity.
FringePattern conventional_scan(const Apparatus& app, const ScanConfig& config);

/// N1 + N2 of a scan as a pattern.
FringePattern total_counts(const ScanSummary& scan);

struct DistributionComparison {
  double chi2_per_dof;
  bool compatible;  ///< chi2_per_dof < 2
};

/// Two-sample Pearson chi-squared between count profiles on the same grid, after normalizing to
/// equal totals. Throws Errc::grid_mismatch.
DistributionComparison compare_distributions(const FringePattern& reference, const FringePattern& other);
DistributionComparison compare_distributions(const FringePattern& reference, const ScanSummary& scan);

}  // namespace twoslit
