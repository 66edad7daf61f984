#pragma once

#include <stdexcept>
#include <string>

namespace nlb {

/// Config-file problems: unknown keys, bad labels, malformed values.
/// Carries a human-readable position ("file:line") when available.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A grid too coarse for the requested construction (e.g. collar thinner
/// than the resolution rule allows). Never silently coarsened.
class ResolutionError : public std::runtime_error {
 public:
  explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nlb
