#include "starkbus/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "starkbus/errors.hpp"

namespace starkbus {

namespace {

std::string quote(const std::string &field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string label_text(const BareLabel &l) {
  std::ostringstream os;
  os << '|' << l[0] << l[1] << l[2] << '>';
  return os.str();
}

} // namespace

std::string format_number(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, digits);
  if (ec != std::errc()) throw InvalidArgument("number formatting failed");
  return std::string(buf.data(), end);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw InvalidArgument("CSV header is empty");
}

void CsvTable::add_row(std::vector<std::string> fields) {
  if (fields.size() != header_.size())
    throw InvalidArgument("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                          std::to_string(header_.size()));
  rows_.push_back(std::move(fields));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string> &fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += quote(fields[i]);
    }
    out += '\n';
  };
  line(header_);
  for (const auto &r : rows_) line(r);
  return out;
}

void CsvTable::write(const std::filesystem::path &path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot write " + path.string());
  os << str();
  if (!os) throw InvalidArgument("write failed: " + path.string());
}

CsvTable landscape_csv(const std::vector<ZZPoint> &points) {
  CsvTable t({"omega_t_GHz", "delta_s_MHz", "omega_s_MHz", "zeta_kHz", "flagged"});
  for (const auto &p : points)
    t.add_row({format_number(p.bus_frequency.in_ghz()), format_number(p.detuning.in_mhz()),
               format_number(p.amplitude.in_mhz()), format_number(p.zeta.in_khz()), p.flagged ? "1" : "0"});
  return t;
}

CsvTable schedule_csv(const PulseSchedule &schedule, double interval_ns) {
  if (!(interval_ns > 0.0)) throw InvalidArgument("sample interval must be positive");
  CsvTable t({"t_ns", "channel", "re", "im", "freq_GHz"});
  const auto n = static_cast<long>(std::floor(schedule.duration_ns / interval_ns + 1e-9));
  for (long k = 0; k <= n; ++k) {
    const double time = static_cast<double>(k) * interval_ns;
    const std::string ts = format_number(time);
    if (schedule.frame) {
      const double a = Frequency::angular(schedule.stark_amplitude(time)).in_mhz();
      t.add_row({ts, "stark:" + std::string(to_string(schedule.frame->target)), format_number(a), "0", ""});
    }
    for (const auto &g : schedule.gates) {
      const std::complex<double> e = g.envelope(time - g.start_ns);
      t.add_row({ts, "drive:" + std::string(to_string(g.target)),
                 format_number(Frequency::angular(e.real()).in_mhz()),
                 format_number(Frequency::angular(e.imag()).in_mhz()), ""});
    }
    t.add_row({ts, "bus", "", "", format_number(schedule.bus(time).in_ghz())});
  }
  return t;
}

CsvTable population_csv(const PopulationTable &table) {
  CsvTable t({"t_ns", "label", "population"});
  for (std::size_t i = 0; i < table.times_ns.size(); ++i)
    for (std::size_t j = 0; j < table.labels.size(); ++j)
      t.add_row({format_number(table.times_ns[i]), label_text(table.labels[j]),
                 format_number(table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))});
  return t;
}

} // namespace starkbus
