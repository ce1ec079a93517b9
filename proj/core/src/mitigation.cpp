#include "starkbus/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "starkbus/csv.hpp"
#include "starkbus/dressed.hpp"
#include "starkbus/errors.hpp"
#include "starkbus/spectrum.hpp"

namespace starkbus {

namespace {

bool same_setting(const CachedCalibration &c, ModeLabel target, Frequency detuning, Frequency amplitude) {
  return c.target == target && std::abs(c.detuning.in_khz() - detuning.in_khz()) < 1.0 &&
         std::abs(c.amplitude.in_khz() - amplitude.in_khz()) < 1.0;
}

constexpr BareLabel kComputational[]{{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {1, 0, 1}};

bool labels_clean(const Device &device, const StarkDrive &stark, Frequency bus) {
  SpectrumOptions lenient;
  lenient.strict = false;
  const auto spectrum = labeled_eigensystem(device, bus, stark, lenient);
  return std::none_of(std::begin(kComputational), std::end(kComputational),
                      [&](const BareLabel &l) { return spectrum.state(l).flagged(); });
}

} // namespace

void CalibrationCache::add(const CachedCalibration &entry) {
  for (auto &e : entries_) {
    if (!same_setting(e, entry.target, entry.detuning, entry.amplitude)) continue;
    if (entry.x_error) e.x_error = entry.x_error;
    if (entry.cz_error) e.cz_error = entry.cz_error;
    return;
  }
  entries_.push_back(entry);
}

const CachedCalibration *CalibrationCache::find(ModeLabel target, Frequency detuning, Frequency amplitude) const {
  for (const auto &e : entries_)
    if (same_setting(e, target, detuning, amplitude)) return &e;
  return nullptr;
}

std::string CalibrationCache::to_key_values() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto &e = entries_[i];
    const std::string p = "cal." + std::to_string(i) + ".";
    os << p << "target=" << to_string(e.target) << '\n';
    os << p << "detuning_mhz=" << format_number(e.detuning.in_mhz()) << '\n';
    os << p << "amplitude_mhz=" << format_number(e.amplitude.in_mhz()) << '\n';
    if (e.x_error) os << p << "x_error=" << format_number(*e.x_error) << '\n';
    if (e.cz_error) os << p << "cz_error=" << format_number(*e.cz_error) << '\n';
  }
  return os.str();
}

CalibrationCache CalibrationCache::from_config(const KeyValueConfig &config) {
  CalibrationCache cache;
  std::set<int> indices;
  for (const auto &key : config.keys_with_prefix("cal.")) {
    const auto dot = key.find('.', 4);
    if (dot == std::string::npos) throw InvalidArgument("malformed cache key " + key);
    indices.insert(std::stoi(key.substr(4, dot - 4)));
  }
  for (int i : indices) {
    const std::string p = "cal." + std::to_string(i) + ".";
    const auto target = config.text(p + "target");
    const auto det = config.number(p + "detuning_mhz");
    const auto amp = config.number(p + "amplitude_mhz");
    if (!target || !det || !amp) throw InvalidArgument("cache entry " + std::to_string(i) + " is incomplete");
    CachedCalibration e;
    e.target = parse_mode_label(*target);
    e.detuning = Frequency::mhz(*det);
    e.amplitude = Frequency::mhz(*amp);
    e.x_error = config.number(p + "x_error");
    e.cz_error = config.number(p + "cz_error");
    cache.add(e);
  }
  config.check_consumed();
  return cache;
}

CalibrationCache CalibrationCache::load(const std::filesystem::path &path) {
  return from_config(KeyValueConfig::from_file(path));
}

void CalibrationCache::save(const std::filesystem::path &path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot write " + path.string());
  os << to_key_values();
}

MitigationPlan plan_mitigation(const Device &device, const NoiseSpectrum &tls, const CalibrationCache &cache,
                               const MitigationConstraints &constraints) {
  if (constraints.target == ModeLabel::Qt) throw InvalidArgument("stark target must be a qubit");
  if (constraints.required_shift < Frequency{}) throw InvalidArgument("required shift must be non-negative");
  if (!(constraints.amplitude_pitch > Frequency{})) throw InvalidArgument("amplitude pitch must be positive");

  MitigationPlan plan;
  plan.tls = tls;
  plan.target = constraints.target;

  if (constraints.required_shift == Frequency{}) {
    MitigationCandidate trivial;
    trivial.factor = 1.0;
    plan.candidates.push_back(trivial);
    return plan;
  }
  if (cache.empty()) throw EmptyPlan("no cached calibrations to bound gate errors");

  for (const Frequency det : constraints.detunings) {
    const Frequency top = std::min(constraints.max_amplitude, abs(det));
    const int steps = static_cast<int>(std::floor(top / constraints.amplitude_pitch + 1e-9));
    for (int k = 1; k <= steps; ++k) {
      const Frequency amp = constraints.amplitude_pitch * k;
      const CachedCalibration *cal = cache.find(constraints.target, det, amp);
      if (!cal || !cal->x_error || *cal->x_error > constraints.max_gate_error) continue;
      if (cal->cz_error && *cal->cz_error > constraints.max_gate_error) continue;
      const StarkDrive stark{constraints.target, det, amp};
      const Frequency shift = stark_shift_numeric(device, stark, constraints.bus_frequency);
      if (abs(shift) < constraints.required_shift) continue;
      if (!labels_clean(device, stark, constraints.bus_frequency)) continue;
      MitigationCandidate c;
      c.detuning = det;
      c.amplitude = amp;
      c.shift = shift;
      c.factor = mitigation_factor(tls, device, stark).ratio;
      c.x_error = *cal->x_error;
      c.cz_error = cal->cz_error;
      plan.candidates.push_back(c);
    }
  }
  if (plan.candidates.empty()) {
    std::ostringstream os;
    os << "no stark setting reaches a " << format_number(constraints.required_shift.in_mhz())
       << " MHz shift within the gate-error bound " << format_number(constraints.max_gate_error);
    throw EmptyPlan(os.str());
  }
  std::stable_sort(plan.candidates.begin(), plan.candidates.end(),
                   [](const MitigationCandidate &a, const MitigationCandidate &b) { return a.factor < b.factor; });
  return plan;
}

std::string to_key_values(const MitigationPlan &plan) {
  std::ostringstream os;
  os << "target=" << to_string(plan.target) << '\n';
  os << "candidates=" << plan.candidates.size() << '\n';
  for (std::size_t i = 0; i < plan.candidates.size(); ++i) {
    const auto &c = plan.candidates[i];
    const std::string p = "candidate." + std::to_string(i) + ".";
    os << p << "detuning_mhz=" << format_number(c.detuning.in_mhz()) << '\n';
    os << p << "amplitude_mhz=" << format_number(c.amplitude.in_mhz()) << '\n';
    os << p << "shift_mhz=" << format_number(c.shift.in_mhz()) << '\n';
    os << p << "mitigation_factor=" << format_number(c.factor) << '\n';
    os << p << "x_error=" << format_number(c.x_error) << '\n';
    if (c.cz_error) os << p << "cz_error=" << format_number(*c.cz_error) << '\n';
  }
  return os.str();
}

} // namespace starkbus
