#pragma once

#include <optional>
#include <vector>

#include "starkbus/interpolation.hpp"
#include "starkbus/spectrum.hpp"

namespace starkbus {

/// Tabulated relation between the bus frequency and the control angle
/// theta = atan2(2 J_101, Delta_101), where Delta_101 is the detuning of the
/// labeled |101>/|020> pair from resonance (positive above the resonance).
/// theta decreases from pi towards 0 as the bus moves up through and away
/// from the anti-crossing. Delta_101 is read from the labeled gap,
/// sign(omega_t - omega_t*) sqrt(gap^2 - 4 J^2), near the resonance and
/// continued along the bare detuning slope where third levels interfere.
class ControlAngleMap {
public:
  static constexpr int kDefaultSamples = 201;

  static ControlAngleMap build(const Device &device, const std::optional<StarkDrive> &stark,
                               const ResonanceWindow &window = {}, int samples = kDefaultSamples,
                               const SpectrumOptions &options = {});

  const CzResonance &resonance() const { return resonance_; }
  /// Bus frequencies covered by the table.
  Frequency lowest_bus() const;
  Frequency highest_bus() const;
  /// Achievable angle range, theta(highest_bus) .. theta(lowest_bus).
  double min_theta() const;
  double max_theta() const;

  double theta_at(Frequency bus_frequency) const;
  Frequency bus_frequency_at(double theta) const;

  const std::vector<double> &sampled_bus_ghz() const { return bus_ghz_; }
  const std::vector<double> &sampled_delta_mhz() const { return delta_mhz_; }
  /// Index range of samples taken from the spectrum rather than continued.
  std::size_t numeric_lo() const { return numeric_lo_; }
  std::size_t numeric_hi() const { return numeric_hi_; }

private:
  CzResonance resonance_;
  std::vector<double> bus_ghz_;
  std::vector<double> delta_mhz_;
  std::size_t numeric_lo_ = 0;
  std::size_t numeric_hi_ = 0;
  MonotoneCubic forward_; // bus GHz -> Delta_101 MHz
  MonotoneCubic inverse_; // Delta_101 MHz -> bus GHz
};

Frequency theta_to_bus_frequency(double theta, const ControlAngleMap &map);
double bus_to_theta(Frequency bus_frequency, const ControlAngleMap &map);

} // namespace starkbus
