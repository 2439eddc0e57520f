#pragma once

#include <stdexcept>
#include <string>

namespace wvsim {

/// Pre- and post-selected states are (numerically) orthogonal: post-selection
/// never succeeds and the weak value is undefined.
class OrthogonalPrePost : public std::runtime_error {
 public:
  explicit OrthogonalPrePost(double overlap_magnitude)
      : std::runtime_error("pre- and post-selected states are orthogonal "
                           "(|<post|pre>| = " +
                           std::to_string(overlap_magnitude) + ")"),
        overlap_magnitude_(overlap_magnitude) {}

  double overlap_magnitude() const { return overlap_magnitude_; }

 private:
  double overlap_magnitude_;
};

/// The closed-form phi(alpha) expression is singular at the requested alpha.
class SingularAlpha : public std::domain_error {
 public:
  explicit SingularAlpha(double alpha_rad)
      : std::domain_error("closed-form phi(alpha) is singular at alpha = " +
                          std::to_string(alpha_rad) + " rad") {}
};

/// Post-selection has (numerically) zero probability for this joint state.
class PostselectionImpossible : public std::runtime_error {
 public:
  explicit PostselectionImpossible(double probability)
      : std::runtime_error("post-selection probability is numerically zero (" +
                           std::to_string(probability) + ")") {}
};

/// Invalid scenario configuration (bad angles, probe placement, meter grid).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation applied to a branch state in the wrong pipeline stage.
class StateError : public std::logic_error {
 public:
  explicit StateError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace wvsim
