#include "starkbus/control_angle.hpp"

#include <cmath>
#include <numbers>

#include "starkbus/errors.hpp"

namespace starkbus {

namespace {

double delta_from_theta(double theta, double two_j) { return two_j * std::cos(theta) / std::sin(theta); }

} // namespace

ControlAngleMap ControlAngleMap::build(const Device &device, const std::optional<StarkDrive> &stark,
                                       const ResonanceWindow &window, int samples,
                                       const SpectrumOptions &options) {
  if (samples < 4) throw InvalidArgument("control angle table needs at least 4 samples");
  ControlAngleMap map;
  map.resonance_ = find_cz_resonance(device, stark, window, options);
  const double two_j = 2.0 * map.resonance_.coupling.in_mhz();
  const double star = map.resonance_.bus_frequency.in_ghz();

  std::vector<double> bus(static_cast<std::size_t>(samples));
  std::vector<double> delta(bus.size());
  for (int i = 0; i < samples; ++i) {
    const double w = window.lower.in_ghz() + (window.upper - window.lower).in_ghz() * i / (samples - 1);
    const double gap = cz_pair_gap(device, Frequency::ghz(w), stark, options).in_mhz();
    const double mag = std::sqrt(std::max(0.0, gap * gap - two_j * two_j));
    bus[static_cast<std::size_t>(i)] = w;
    delta[static_cast<std::size_t>(i)] = w < star ? -mag : mag;
  }
  // The two-level reading of the gap holds on the strictly increasing
  // stretch around the resonance, up to |Delta| = kBand * 2J; other
  // multi-photon crossings of the |020> branch spoil it further out. Beyond
  // that stretch the table continues along the bare detuning slope
  // d(2 omega_t)/d omega_t, anchored at the stretch edges.
  constexpr double kBand = 2.0;
  std::size_t centre = 0;
  while (centre + 1 < bus.size() && bus[centre + 1] < star) ++centre;
  auto inside = [&](std::size_t i) { return std::abs(delta[i]) <= kBand * two_j; };
  std::size_t lo = centre;
  while (lo > 0 && delta[lo - 1] < delta[lo] && inside(lo - 1)) --lo;
  std::size_t hi = centre;
  while (hi + 1 < bus.size() && delta[hi + 1] > delta[hi] && inside(hi + 1)) ++hi;
  if (!inside(centre) && !inside(std::min(centre + 1, bus.size() - 1)))
    throw NoAntiCrossing("no sample of the control angle table resolves the anti-crossing");
  constexpr double kBareSlope = 2000.0; // MHz of Delta_101 per GHz of bus frequency
  for (std::size_t i = 0; i < lo; ++i) delta[i] = delta[lo] + kBareSlope * (bus[i] - bus[lo]);
  for (std::size_t i = hi + 1; i < bus.size(); ++i) delta[i] = delta[hi] + kBareSlope * (bus[i] - bus[hi]);
  map.numeric_lo_ = lo;
  map.numeric_hi_ = hi;
  map.bus_ghz_ = std::move(bus);
  map.delta_mhz_ = std::move(delta);
  map.forward_ = MonotoneCubic(map.bus_ghz_, map.delta_mhz_);
  map.inverse_ = MonotoneCubic(map.delta_mhz_, map.bus_ghz_);
  return map;
}

Frequency ControlAngleMap::lowest_bus() const { return Frequency::ghz(bus_ghz_.front()); }
Frequency ControlAngleMap::highest_bus() const { return Frequency::ghz(bus_ghz_.back()); }

double ControlAngleMap::min_theta() const { return std::atan2(2.0 * resonance_.coupling.in_mhz(), delta_mhz_.back()); }
double ControlAngleMap::max_theta() const { return std::atan2(2.0 * resonance_.coupling.in_mhz(), delta_mhz_.front()); }

double ControlAngleMap::theta_at(Frequency bus_frequency) const {
  const double w = bus_frequency.in_ghz();
  if (w < bus_ghz_.front() || w > bus_ghz_.back())
    throw InvalidArgument("bus frequency outside the control angle table");
  return std::atan2(2.0 * resonance_.coupling.in_mhz(), forward_(w));
}

Frequency ControlAngleMap::bus_frequency_at(double theta) const {
  if (!(theta > 0.0 && theta < std::numbers::pi))
    throw InvalidArgument("control angle must lie in (0, pi)");
  double d = delta_from_theta(theta, 2.0 * resonance_.coupling.in_mhz());
  const double slack = 1e-9 * (delta_mhz_.back() - delta_mhz_.front());
  if (d < delta_mhz_.front() && d > delta_mhz_.front() - slack) d = delta_mhz_.front();
  if (d > delta_mhz_.back() && d < delta_mhz_.back() + slack) d = delta_mhz_.back();
  if (d < delta_mhz_.front() || d > delta_mhz_.back())
    throw InvalidArgument("control angle outside the achievable range of the table");
  return Frequency::ghz(inverse_(d));
}

Frequency theta_to_bus_frequency(double theta, const ControlAngleMap &map) { return map.bus_frequency_at(theta); }
double bus_to_theta(Frequency bus_frequency, const ControlAngleMap &map) { return map.theta_at(bus_frequency); }

} // namespace starkbus
