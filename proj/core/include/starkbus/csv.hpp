#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "starkbus/dynamics.hpp"
#include "starkbus/spectrum.hpp"

namespace starkbus {

/// Locale-independent shortest round-trip formatting, limited to
/// `digits` significant digits.
std::string format_number(double value, int digits = 10);

/// Comma-separated table with a fixed header. Fields are written as given;
/// commas, quotes and newlines are quoted.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> fields);
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string> &header() const { return header_; }

  std::string str() const;
  void write(const std::filesystem::path &path) const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// omega_t_GHz, delta_s_MHz, omega_s_MHz, zeta_kHz, flagged
CsvTable landscape_csv(const std::vector<ZZPoint> &points);

/// t_ns, channel, re, im, freq_GHz sampled every `interval_ns`. Drive
/// channels report the complex envelope in MHz; the bus channel reports its
/// frequency.
CsvTable schedule_csv(const PulseSchedule &schedule, double interval_ns);

/// t_ns, label, population
CsvTable population_csv(const PopulationTable &table);

} // namespace starkbus
