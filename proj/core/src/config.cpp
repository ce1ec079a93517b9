#include "starkbus/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "starkbus/errors.hpp"

namespace starkbus {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

} // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty())
      throw InvalidArgument("config line " + std::to_string(line_no) + ": empty key");
    if (cfg.values_.count(key))
      throw InvalidArgument("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::from_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

bool KeyValueConfig::has(const std::string &key) const { return values_.count(key) != 0; }

std::optional<std::string> KeyValueConfig::text(const std::string &key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  consumed_.insert(key);
  return it->second;
}

std::optional<double> KeyValueConfig::number(const std::string &key) const {
  const auto s = text(key);
  if (!s) return std::nullopt;
  double v = 0.0;
  const char *end = s->data() + s->size();
  const auto [ptr, ec] = std::from_chars(s->data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw InvalidArgument("config key '" + key + "': '" + *s + "' is not a number");
  return v;
}

void KeyValueConfig::set(const std::string &key, std::string value) { values_[key] = std::move(value); }

std::set<std::string> KeyValueConfig::keys_with_prefix(const std::string &prefix) const {
  std::set<std::string> out;
  for (const auto &[k, v] : values_)
    if (k.rfind(prefix, 0) == 0) out.insert(k);
  return out;
}

void KeyValueConfig::check_consumed() const {
  for (const auto &[k, v] : values_)
    if (!consumed_.count(k)) throw InvalidArgument("unknown config key '" + k + "'");
}

Device device_from_config(const KeyValueConfig &config) {
  Device d = default_device();
  if (auto v = config.number("q1.frequency_ghz")) d.mode(ModeLabel::Q1).frequency = Frequency::ghz(*v);
  if (auto v = config.number("q2.frequency_ghz")) d.mode(ModeLabel::Q2).frequency = Frequency::ghz(*v);
  if (auto v = config.number("bus.frequency_ghz")) d.mode(ModeLabel::Qt).frequency = Frequency::ghz(*v);
  if (auto v = config.number("q1.anharmonicity_mhz")) d.mode(ModeLabel::Q1).anharmonicity = Frequency::mhz(*v);
  if (auto v = config.number("bus.anharmonicity_mhz")) d.mode(ModeLabel::Qt).anharmonicity = Frequency::mhz(*v);
  if (auto v = config.number("q2.anharmonicity_mhz")) d.mode(ModeLabel::Q2).anharmonicity = Frequency::mhz(*v);
  if (auto v = config.number("coupling_mhz")) d.coupling_ref = Frequency::mhz(*v);
  if (auto v = config.number("omega_ref_ghz")) d.omega_ref = Frequency::ghz(*v);
  if (auto v = config.number("levels")) {
    if (*v != static_cast<int>(*v)) throw InvalidArgument("levels must be an integer");
    d.levels_per_mode = static_cast<int>(*v);
  }
  d.validate();
  return d;
}

std::optional<StarkDrive> stark_from_config(const KeyValueConfig &config) {
  if (config.keys_with_prefix("stark.").empty()) return std::nullopt;
  StarkDrive s;
  if (auto t = config.text("stark.target")) s.target = parse_mode_label(*t);
  const auto det = config.number("stark.detuning_mhz");
  if (!det) throw InvalidArgument("stark.detuning_mhz is required when a stark drive is configured");
  s.detuning = Frequency::mhz(*det);
  s.amplitude = Frequency::mhz(config.number("stark.amplitude_mhz").value_or(0.0));
  return s;
}

namespace {

NoiseSpectrum read_channel(const KeyValueConfig &config, const std::string &channel) {
  const std::string prefix = "noise." + channel + ".";
  std::set<int> indices;
  for (const auto &k : config.keys_with_prefix(prefix)) {
    const std::string rest = k.substr(prefix.size());
    const auto dot = rest.find('.');
    int idx = -1;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + (dot == std::string::npos ? rest.size() : dot), idx);
    if (ec != std::errc() || idx < 0 || dot == std::string::npos)
      throw InvalidArgument("malformed noise key '" + k + "'");
    (void)ptr;
    indices.insert(idx);
  }
  std::vector<NoiseSpectrum::Component> parts;
  for (int i : indices) {
    const std::string base = prefix + std::to_string(i) + ".";
    const auto type = config.text(base + "type");
    if (!type) throw InvalidArgument("missing " + base + "type");
    auto need = [&](const std::string &field) {
      const auto v = config.number(base + field);
      if (!v) throw InvalidArgument("missing " + base + field);
      return *v;
    };
    if (*type == "lorentzian") {
      LorentzianTLS tls;
      tls.center = Frequency::ghz(need("center_ghz"));
      if (auto w = config.number(base + "width_mhz")) tls.half_width = Frequency::mhz(*w);
      tls.peak = Frequency::mhz(need("peak_mhz")).rad_per_ns();
      parts.emplace_back(tls);
    } else if (*type == "white") {
      parts.emplace_back(WhiteFloor{Frequency::mhz(need("level_mhz")).rad_per_ns()});
    } else {
      throw InvalidArgument("unknown noise type '" + *type + "'");
    }
  }
  return NoiseSpectrum(std::move(parts));
}

} // namespace

NoiseChannels noise_from_config(const KeyValueConfig &config) {
  return NoiseChannels{read_channel(config, "transverse"), read_channel(config, "longitudinal")};
}

} // namespace starkbus
