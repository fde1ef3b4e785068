#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ddsm {

/// A computation would exceed a configured size limit (e.g. the DFT cap).
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::int64_t multiplier_num,
                std::int64_t multiplier_den)
      : std::runtime_error(what),
        multiplier_num_(multiplier_num),
        multiplier_den_(multiplier_den) {}

  std::int64_t multiplier_num() const { return multiplier_num_; }
  std::int64_t multiplier_den() const { return multiplier_den_; }

 private:
  std::int64_t multiplier_num_;
  std::int64_t multiplier_den_;
};

/// Operation called on a waveform model it does not support.
class UnsupportedModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Spectrum has no energy at the fundamental, so THD is undefined.
class DegenerateSignalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ddsm
