#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "starkbus/config.hpp"
#include "starkbus/device.hpp"
#include "starkbus/noise.hpp"

namespace starkbus {

/// Gate errors measured at one stark setting.
struct CachedCalibration {
  ModeLabel target = ModeLabel::Q1;
  Frequency detuning;
  Frequency amplitude;
  std::optional<double> x_error;
  std::optional<double> cz_error;
};

/// Gate errors keyed by (target, detuning, amplitude), matched to 1 kHz.
/// Persisted as key=value lines: cal.<i>.target, cal.<i>.detuning_mhz,
/// cal.<i>.amplitude_mhz, cal.<i>.x_error, cal.<i>.cz_error.
class CalibrationCache {
public:
  /// Adds or merges: fields present in `entry` overwrite stored ones.
  void add(const CachedCalibration &entry);
  const CachedCalibration *find(ModeLabel target, Frequency detuning, Frequency amplitude) const;
  const std::vector<CachedCalibration> &entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  std::string to_key_values() const;
  static CalibrationCache from_config(const KeyValueConfig &config);
  static CalibrationCache load(const std::filesystem::path &path);
  void save(const std::filesystem::path &path) const;

private:
  std::vector<CachedCalibration> entries_;
};

struct MitigationConstraints {
  ModeLabel target = ModeLabel::Q1;
  /// Minimum |numeric stark shift| a candidate must reach.
  Frequency required_shift;
  double max_gate_error = 1e-3;
  std::vector<Frequency> detunings{Frequency::mhz(30), Frequency::mhz(50), Frequency::mhz(70),
                                   Frequency::mhz(100)};
  Frequency max_amplitude = Frequency::mhz(50);
  Frequency amplitude_pitch = Frequency::mhz(5);
  Frequency bus_frequency = kIdleBusFrequency;
};

struct MitigationCandidate {
  Frequency detuning;
  Frequency amplitude;
  Frequency shift;   // numeric, at the idle bus point
  double factor = 1.0;
  double x_error = 0.0;
  std::optional<double> cz_error;
};

struct MitigationPlan {
  NoiseSpectrum tls;
  ModeLabel target = ModeLabel::Q1;
  std::vector<MitigationCandidate> candidates; // best (smallest factor) first
};

/// Scans detunings x amplitudes (amplitude up to min(max_amplitude,
/// |detuning|)) and keeps settings whose numeric shift reaches the request,
/// whose computational labels are unambiguous at the idle bus point, and
/// whose cached X (and, when cached, CZ) errors are within bounds. A zero
/// request returns the undriven setting alone. Throws EmptyPlan otherwise.
MitigationPlan plan_mitigation(const Device &device, const NoiseSpectrum &tls, const CalibrationCache &cache,
                               const MitigationConstraints &constraints);

std::string to_key_values(const MitigationPlan &plan);

} // namespace starkbus
