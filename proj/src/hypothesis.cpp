#include "twoslit/hypothesis.hpp"

#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "twoslit/error.hpp"

namespace twoslit {

OutcomeHypothesis OutcomeHypothesis::partial(double D) {
  if (!(D >= 0.0 && D <= 1.0)) {
    throw Error(Errc::invalid_argument, fmt::format("distinguishability D = {} is outside [0, 1]", D));
  }
  return {OutcomeKind::Partial, D};
}

std::string to_string(const OutcomeHypothesis& hyp) {
  switch (hyp.kind) {
    case OutcomeKind::FullDuality: return "full";
    case OutcomeKind::Exclusive: return "exclusive";
    case OutcomeKind::Partial: return fmt::format("partial:{}", hyp.D);
  }
  return "unknown";
}

OutcomeHypothesis parse_hypothesis(const std::string& text) {
  if (text == "full") {
    return OutcomeHypothesis::full_duality();
  }
  if (text == "exclusive") {
    return OutcomeHypothesis::exclusive();
  }
  constexpr std::string_view prefix = "partial:";
  if (text.starts_with(prefix)) {
    const std::string number = text.substr(prefix.size());
    char* end = nullptr;
    const double D = std::strtod(number.c_str(), &end);
    if (number.empty() || end != number.c_str() + number.size()) {
      throw Error(Errc::invalid_argument, fmt::format("cannot parse D in '{}'", text));
    }
    return OutcomeHypothesis::partial(D);
  }
  throw Error(Errc::invalid_argument,
              fmt::format("unknown hypothesis '{}' (expected full, exclusive or partial:<D>)", text));
}

}  // namespace twoslit
