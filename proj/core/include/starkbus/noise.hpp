#pragma once

#include <variant>
#include <vector>

#include "starkbus/units.hpp"

namespace starkbus {

/// Lorentzian peak S0 * gamma^2 / ((w - center)^2 + gamma^2); gamma is the
/// half width at half maximum. Peak values are rates (rad/ns).
struct LorentzianTLS {
  Frequency center;
  Frequency half_width = Frequency::mhz(0.1);
  double peak = 0.0;
};

struct WhiteFloor {
  double level = 0.0;
};

/// One-sided (emission only) noise spectral density: evaluating at negative
/// frequency returns 0. A spectrum is the sum of its components.
class NoiseSpectrum {
public:
  using Component = std::variant<LorentzianTLS, WhiteFloor>;

  NoiseSpectrum() = default;
  NoiseSpectrum(std::initializer_list<Component> components);
  explicit NoiseSpectrum(std::vector<Component> components);

  double operator()(Frequency w) const;
  const std::vector<Component> &components() const { return components_; }
  bool empty() const { return components_.empty(); }

private:
  std::vector<Component> components_;
};

/// Transverse and longitudinal channels seen by a qubit.
struct NoiseChannels {
  NoiseSpectrum transverse;
  NoiseSpectrum longitudinal;
};

} // namespace starkbus
