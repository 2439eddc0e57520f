#pragma once

#include <cmath>
#include <stdexcept>

namespace wvsim {

/// Plane angle. All quantization axes live in a single plane and are measured
/// from the +z axis; angles are stored in radians with no range restriction.
class Angle {
 public:
  Angle() = default;

  static Angle radians(double value) { return Angle(value); }
  static Angle degrees(double value) { return Angle(value * kDegToRad); }

  double rad() const { return rad_; }
  double deg() const { return rad_ / kDegToRad; }

  friend Angle operator+(Angle a, Angle b) { return Angle(a.rad_ + b.rad_); }
  friend Angle operator-(Angle a, Angle b) { return Angle(a.rad_ - b.rad_); }
  Angle operator-() const { return Angle(-rad_); }

 private:
  static constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

  explicit Angle(double value) : rad_(value) {
    if (!std::isfinite(value)) {
      throw std::domain_error("Angle must be finite");
    }
  }

  double rad_ = 0.0;
};

}  // namespace wvsim
