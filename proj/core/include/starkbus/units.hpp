#pragma once

#include <compare>
#include <numbers>

namespace starkbus {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// A frequency stored as angular frequency in rad/ns (hbar = 1, time in ns).
// Construct and read back in ordinary GHz/MHz units (omega / 2pi).
class Frequency {
public:
  constexpr Frequency() = default;

  static constexpr Frequency ghz(double f) { return Frequency(kTwoPi * f); }
  static constexpr Frequency mhz(double f) { return Frequency(kTwoPi * f * 1e-3); }
  static constexpr Frequency khz(double f) { return Frequency(kTwoPi * f * 1e-6); }
  static constexpr Frequency angular(double w) { return Frequency(w); }

  constexpr double rad_per_ns() const { return w_; }
  constexpr double in_ghz() const { return w_ / kTwoPi; }
  constexpr double in_mhz() const { return w_ / kTwoPi * 1e3; }
  constexpr double in_khz() const { return w_ / kTwoPi * 1e6; }

  constexpr Frequency operator-() const { return Frequency(-w_); }
  constexpr Frequency &operator+=(Frequency o) { w_ += o.w_; return *this; }
  constexpr Frequency &operator-=(Frequency o) { w_ -= o.w_; return *this; }
  friend constexpr Frequency operator+(Frequency a, Frequency b) { return Frequency(a.w_ + b.w_); }
  friend constexpr Frequency operator-(Frequency a, Frequency b) { return Frequency(a.w_ - b.w_); }
  friend constexpr Frequency operator*(Frequency a, double s) { return Frequency(a.w_ * s); }
  friend constexpr Frequency operator*(double s, Frequency a) { return Frequency(a.w_ * s); }
  friend constexpr Frequency operator/(Frequency a, double s) { return Frequency(a.w_ / s); }
  friend constexpr double operator/(Frequency a, Frequency b) { return a.w_ / b.w_; }
  friend constexpr auto operator<=>(Frequency, Frequency) = default;

private:
  explicit constexpr Frequency(double w) : w_(w) {}
  double w_ = 0.0;
};

Frequency abs(Frequency f);

} // namespace starkbus
