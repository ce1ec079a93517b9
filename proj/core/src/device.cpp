#include "starkbus/device.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "starkbus/errors.hpp"

namespace starkbus {

std::string_view to_string(ModeLabel m) {
  switch (m) {
  case ModeLabel::Q1: return "Q1";
  case ModeLabel::Qt: return "Qt";
  case ModeLabel::Q2: return "Q2";
  }
  return "?";
}

ModeLabel parse_mode_label(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "q1") return ModeLabel::Q1;
  if (lower == "q2") return ModeLabel::Q2;
  if (lower == "qt" || lower == "bus") return ModeLabel::Qt;
  throw InvalidArgument("unknown mode label '" + std::string(s) + "'");
}

std::size_t Device::dimension() const {
  const auto l = static_cast<std::size_t>(levels_per_mode);
  return l * l * l;
}

void Device::validate() const {
  if (levels_per_mode < 3)
    throw InvalidArgument("levels_per_mode must be >= 3 (the |f> level is required)");
  int buses = 0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const Mode &m = modes[i];
    if (m.label != kModeOrder[i])
      throw InvalidArgument("modes must be ordered (Q1, Qt, Q2)");
    if (m.frequency.rad_per_ns() <= 0.0)
      throw InvalidArgument("mode " + std::string(to_string(m.label)) + " frequency must be positive");
    if (m.anharmonicity.rad_per_ns() >= 0.0)
      throw InvalidArgument("mode " + std::string(to_string(m.label)) + " anharmonicity must be negative");
    if (m.is_bus) ++buses;
  }
  if (buses != 1 || !mode(ModeLabel::Qt).is_bus)
    throw InvalidArgument("exactly one mode (Qt) must be flagged as the tunable bus");
  if (omega_ref.rad_per_ns() <= 0.0)
    throw InvalidArgument("reference frequency must be positive");
}

Device default_device() {
  Device d;
  const auto eta = Frequency::mhz(-300.0);
  d.modes = {Mode{ModeLabel::Q1, Frequency::ghz(5.0), eta, false},
             Mode{ModeLabel::Qt, Frequency::ghz(5.7), eta, true},
             Mode{ModeLabel::Q2, Frequency::ghz(5.2), eta, false}};
  d.coupling_ref = Frequency::mhz(25.0);
  d.omega_ref = Frequency::ghz(5.5);
  d.levels_per_mode = 4;
  return d;
}

Frequency StarkDrive::frame_frequency(const Device &device) const {
  return device.mode(target).frequency - detuning;
}

void StarkDrive::validate(const Device &device) const {
  if (device.mode(target).is_bus)
    throw InvalidArgument("the stark drive must target a qubit, not the bus");
  if (amplitude.rad_per_ns() < 0.0)
    throw InvalidArgument("stark amplitude must be non-negative");
  if (amplitude.rad_per_ns() > 0.0 && detuning.rad_per_ns() == 0.0)
    throw InvalidArgument("a stark drive with nonzero amplitude must be off-resonant");
}

Frequency frame_frequency(const Device &device, const std::optional<StarkDrive> &stark) {
  return stark ? stark->frame_frequency(device) : Frequency{};
}

ModeLabel partner_qubit(ModeLabel q) {
  switch (q) {
  case ModeLabel::Q1: return ModeLabel::Q2;
  case ModeLabel::Q2: return ModeLabel::Q1;
  case ModeLabel::Qt: break;
  }
  throw InvalidArgument("the bus has no partner qubit");
}

} // namespace starkbus
