#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "starkbus/units.hpp"

namespace starkbus {

/// Mode identity in the fixed tensor order (Q1, Qt, Q2).
enum class ModeLabel { Q1 = 0, Qt = 1, Q2 = 2 };

inline constexpr std::array<ModeLabel, 3> kModeOrder{ModeLabel::Q1, ModeLabel::Qt, ModeLabel::Q2};

constexpr std::size_t mode_index(ModeLabel m) { return static_cast<std::size_t>(m); }
std::string_view to_string(ModeLabel m);
ModeLabel parse_mode_label(std::string_view s);

struct Mode {
  ModeLabel label = ModeLabel::Q1;
  Frequency frequency;
  Frequency anharmonicity;
  bool is_bus = false;
};

/// Two fixed-frequency transmons coupled through a tunable bus, each mode a
/// truncated anharmonic ladder. The bus frequency is not part of the device:
/// it is an operating parameter passed to every calculation.
struct Device {
  std::array<Mode, 3> modes;
  Frequency coupling_ref;
  Frequency omega_ref;
  int levels_per_mode = 4;

  const Mode &mode(ModeLabel m) const { return modes[mode_index(m)]; }
  Mode &mode(ModeLabel m) { return modes[mode_index(m)]; }
  std::size_t dimension() const;

  /// Throws InvalidArgument when an invariant is broken.
  void validate() const;
};

/// Q1 = 5.0 GHz, Q2 = 5.2 GHz, eta = -300 MHz on all modes, g = 25 MHz
/// referenced to 5.5 GHz, four levels per mode.
Device default_device();

/// Bus idle point used for single-qubit operations.
inline constexpr Frequency kIdleBusFrequency = Frequency::ghz(5.7);

/// Off-resonant drive on one qubit. Positive detuning places the drive below
/// the qubit: omega_s = omega_q - detuning.
struct StarkDrive {
  ModeLabel target = ModeLabel::Q1;
  Frequency detuning;
  Frequency amplitude;

  Frequency frame_frequency(const Device &device) const;
  void validate(const Device &device) const;
};

/// Frame frequency of the optional stark drive; zero (lab frame) when absent.
Frequency frame_frequency(const Device &device, const std::optional<StarkDrive> &stark);

/// The other fixed-frequency qubit.
ModeLabel partner_qubit(ModeLabel q);

} // namespace starkbus
