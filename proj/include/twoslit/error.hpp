#pragma once

#include <stdexcept>
#include <string>

namespace twoslit {

enum class Errc {
  invalid_argument,
  grazing_incidence,
  off_mirror,
  diaphragm_clearance,
  empty_pattern,
  insufficient_samples,
  degenerate_fit,
  no_bracket,
  x0_too_small,
  grid_mismatch,
  sampling,
};

const char* to_string(Errc code) noexcept;

/// Exception carrying a machine-readable error category.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace twoslit
