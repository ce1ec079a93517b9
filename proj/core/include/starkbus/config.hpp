#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "starkbus/device.hpp"
#include "starkbus/noise.hpp"

namespace starkbus {

/// Flat key=value configuration. Blank lines and lines starting with '#'
/// are ignored; whitespace around keys and values is trimmed. Every key
/// must be consumed by some reader, otherwise check_consumed() throws.
class KeyValueConfig {
public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig from_file(const std::filesystem::path &path);

  bool has(const std::string &key) const;
  std::optional<std::string> text(const std::string &key) const;
  std::optional<double> number(const std::string &key) const;
  void set(const std::string &key, std::string value);

  /// Keys starting with `prefix`.
  std::set<std::string> keys_with_prefix(const std::string &prefix) const;
  /// Throws InvalidArgument naming the first key no reader asked for.
  void check_consumed() const;

private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

/// Starts from default_device() and applies any of: q1.frequency_ghz,
/// q2.frequency_ghz, {q1,bus,q2}.anharmonicity_mhz, coupling_mhz,
/// omega_ref_ghz, levels.
Device device_from_config(const KeyValueConfig &config);

/// stark.target, stark.detuning_mhz, stark.amplitude_mhz; absent when no
/// stark.* key is present.
std::optional<StarkDrive> stark_from_config(const KeyValueConfig &config);

/// noise.<channel>.<index>.type = lorentzian | white, with center_ghz,
/// width_mhz (half width), peak_mhz for a Lorentzian and level_mhz for a
/// white floor. Channels: transverse, longitudinal.
NoiseChannels noise_from_config(const KeyValueConfig &config);

} // namespace starkbus
