#pragma once

#include <string>

namespace twoslit {

/// The three anticipated outcomes of the mirror experiment.
enum class OutcomeKind {
  FullDuality,  ///< full path knowledge together with fringes (V = 1)
  Exclusive,    ///< path knowledge and fringes mutually exclusive (V = 0)
  Partial,      ///< saturated duality bound, V = sqrt(1 - D^2)
};

struct OutcomeHypothesis {
  OutcomeKind kind{OutcomeKind::FullDuality};
  double D{0.0};  ///< distinguishability; 0 for FullDuality, 1 for Exclusive by convention

  static OutcomeHypothesis full_duality() { return {OutcomeKind::FullDuality, 0.0}; }
  static OutcomeHypothesis exclusive() { return {OutcomeKind::Exclusive, 1.0}; }
  /// Throws Errc::invalid_argument unless 0 <= D <= 1.
  static OutcomeHypothesis partial(double D);

  friend bool operator==(const OutcomeHypothesis&, const OutcomeHypothesis&) = default;
};

/// "full", "exclusive" or "partial:<D>".
std::string to_string(const OutcomeHypothesis& hyp);
/// Inverse of to_string; throws Errc::invalid_argument on anything else.
OutcomeHypothesis parse_hypothesis(const std::string& text);

}  // namespace twoslit
