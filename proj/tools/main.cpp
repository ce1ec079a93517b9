#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "starkbus/config.hpp"
#include "starkbus/csv.hpp"
#include "starkbus/dressed.hpp"
#include "starkbus/errors.hpp"
#include "starkbus/gates.hpp"
#include "starkbus/mitigation.hpp"
#include "starkbus/scenarios.hpp"
#include "starkbus/spectrum.hpp"

namespace fs = std::filesystem;
using namespace starkbus;

namespace {

constexpr const char *kSchemaHint =
    "Config files are key=value lines; see docs/config.md for the accepted keys.\n";

struct Common {
  std::string device = "default";
  std::string config;
  std::string out = ".";
  int jobs = 0;
  bool full = false;
};

struct StarkArgs {
  std::string target = "Q1";
  std::optional<double> delta_s;
  double omega_s = 0.0;
};

void add_stark_options(CLI::App *cmd, StarkArgs &s) {
  cmd->add_option("--stark-target", s.target, "Qubit carrying the stark drive (Q1|Q2)")->capture_default_str();
  cmd->add_option("--delta-s", s.delta_s, "Stark detuning omega_q - omega_s in MHz");
  cmd->add_option("--omega-s", s.omega_s, "Stark amplitude in MHz")->capture_default_str();
}

struct Loaded {
  Device device;
  std::optional<StarkDrive> stark;
  NoiseChannels noise;
};

Loaded load(const Common &c, const StarkArgs *s) {
  KeyValueConfig cfg;
  auto merge = [&cfg](const std::string &path) {
    const auto extra = KeyValueConfig::from_file(path);
    for (const auto &key : extra.keys_with_prefix("")) {
      if (cfg.has(key)) throw InvalidArgument("duplicate key '" + key + "' across config files");
      cfg.set(key, *extra.text(key));
    }
  };
  if (c.device != "default") merge(c.device);
  if (!c.config.empty()) merge(c.config);
  Loaded l{device_from_config(cfg), stark_from_config(cfg), noise_from_config(cfg)};
  cfg.check_consumed();
  if (s && s->delta_s)
    l.stark = StarkDrive{parse_mode_label(s->target), Frequency::mhz(*s->delta_s), Frequency::mhz(s->omega_s)};
  if (l.stark) l.stark->validate(l.device);
  return l;
}

fs::path output_dir(const Common &c) {
  fs::path p(c.out);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw InvalidArgument("cannot create output directory " + p.string() + ": " + ec.message());
  return p;
}

void emit(const std::string &key_values, const Common &c, const std::string &file) {
  std::cout << key_values;
  if (!file.empty()) {
    const fs::path path = output_dir(c) / file;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidArgument("cannot write " + path.string());
    os << key_values;
  }
}

std::string label_text(const BareLabel &l) {
  return "|" + std::to_string(l[0]) + std::to_string(l[1]) + std::to_string(l[2]) + ">";
}

std::vector<Frequency> grid_mhz(double lo, double hi, double pitch) {
  if (!(pitch > 0.0) || hi < lo) throw InvalidArgument("grid needs lo <= hi and a positive pitch");
  std::vector<Frequency> out;
  const int n = static_cast<int>(std::floor((hi - lo) / pitch + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(Frequency::mhz(lo + pitch * i));
  return out;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Stark-dressed transmon pair with a tunable bus: spectra, tune-ups and scenarios"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(kSchemaHint);
  Common common;
  app.add_option("--device", common.device, "'default' or a key=value device file")->capture_default_str();
  app.add_option("--config", common.config, "key=value file with stark.* and noise.* keys");
  app.add_option("--out", common.out, "Output directory for CSV and result files")->capture_default_str();
  app.add_option("--jobs", common.jobs, "Worker threads for sweeps (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--full", common.full, "Full-resolution grids for scenarios");

  StarkArgs stark;
  double omega_t = 5.7;

  auto *spectrum = app.add_subcommand("spectrum", "Labeled dressed spectrum at one bus frequency");
  spectrum->add_option("--omega-t", omega_t, "Bus frequency in GHz")->capture_default_str();
  add_stark_options(spectrum, stark);

  auto *zz = app.add_subcommand("zz-map", "ZZ strength at one bus frequency, or a landscape CSV");
  zz->add_option("--omega-t", omega_t, "Bus frequency in GHz")->capture_default_str();
  add_stark_options(zz, stark);
  std::vector<double> zz_bus, zz_det;
  std::string zz_rule = "full";
  zz->add_option("--bus-range", zz_bus, "lo hi pitch in GHz for a landscape")->expected(3);
  zz->add_option("--delta-range", zz_det, "lo hi pitch in MHz for a landscape")->expected(3);
  zz->add_option("--rule", zz_rule, "Amplitude rule full|half|quarter")->capture_default_str();

  auto *shift = app.add_subcommand("stark-shift", "Numeric and perturbative stark shift");
  shift->add_option("--omega-t", omega_t, "Bus frequency in GHz")->capture_default_str();
  add_stark_options(shift, stark);

  auto *rates = app.add_subcommand("rates", "Dressed T1/Tphi from the configured noise spectra");
  add_stark_options(rates, stark);

  auto *rabi = app.add_subcommand("rabi", "Power-Rabi map of the dressed stark target");
  add_stark_options(rabi, stark);
  std::vector<double> rabi_amp{5, 60, 1}, rabi_det;
  rabi->add_option("--amp-range", rabi_amp, "lo hi pitch in MHz")->expected(3);
  rabi->add_option("--det-range", rabi_det, "lo hi pitch in MHz (default: splitting +/- 30)")->expected(3);

  auto *tunex = app.add_subcommand("tune-x", "Power-Rabi plus simplex X (or X/2) calibration");
  add_stark_options(tunex, stark);
  std::string x_target = "Q1";
  bool half = false;
  double pitch = 1.0;
  std::string cache_path;
  tunex->add_option("--target", x_target, "Gate target (Q1|Q2)")->capture_default_str();
  tunex->add_flag("--half", half, "Calibrate X/2 instead of X");
  tunex->add_option("--pitch", pitch, "Coarse grid pitch in MHz")->capture_default_str();
  tunex->add_option("--cache", cache_path, "Calibration cache file to update");

  auto *tunecz = app.add_subcommand("tune-cz", "Fast-adiabatic CZ optimisation at one gate time");
  add_stark_options(tunecz, stark);
  double gate_ns = 60.0, idle = 5.7;
  tunecz->add_option("--gate-ns", gate_ns, "Gate time in ns")->capture_default_str();
  tunecz->add_option("--idle-ghz", idle, "Idle bus frequency in GHz")->capture_default_str();
  tunecz->add_option("--cache", cache_path, "Calibration cache file to update");

  auto *maperr = app.add_subcommand("map-error", "Adiabatic ramp map error of a dressed state");
  add_stark_options(maperr, stark);
  double ramp_ns = 30.0;
  int state = 1;
  std::string direction = "down";
  maperr->add_option("--ramp-ns", ramp_ns, "Ramp time in ns")->capture_default_str();
  maperr->add_option("--state", state, "0 or 1")->capture_default_str()->check(CLI::Range(0, 1));
  maperr->add_option("--direction", direction, "down|up")->capture_default_str();

  auto *scenario = app.add_subcommand("scenario", "Run a registered scenario");
  std::string scenario_name;
  bool list = false;
  scenario->add_option("name", scenario_name, "Scenario name");
  scenario->add_flag("--list", list, "List registered scenarios");

  auto *plan = app.add_subcommand("plan", "Rank stark settings that push the qubit off a TLS");
  std::string plan_target = "Q1";
  std::optional<double> tls_ghz;
  double tls_width = 0.1, tls_peak = 1.0, need = 10.0, max_error = 1e-3;
  plan->add_option("--target", plan_target, "Qubit to protect (Q1|Q2)")->capture_default_str();
  plan->add_option("--tls-ghz", tls_ghz, "TLS frequency in GHz (default: the qubit frequency)");
  plan->add_option("--tls-width-mhz", tls_width, "TLS half width in MHz")->capture_default_str();
  plan->add_option("--tls-peak-mhz", tls_peak, "TLS peak rate in MHz")->capture_default_str();
  plan->add_option("--shift-mhz", need, "Required |stark shift| in MHz")->capture_default_str();
  plan->add_option("--max-error", max_error, "Gate error bound")->capture_default_str();
  plan->add_option("--cache", cache_path, "Calibration cache file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*spectrum) {
      const auto l = load(common, &stark);
      SpectrumOptions opts;
      opts.strict = false;
      const auto spec = labeled_eigensystem(l.device, Frequency::ghz(omega_t), l.stark, opts);
      CsvTable t({"label", "energy_GHz", "overlap", "flagged"});
      for (const auto &e : spec.entries())
        t.add_row({label_text(e.label), format_number(Frequency::angular(e.energy).in_ghz()),
                   format_number(e.overlap), e.flagged() ? "1" : "0"});
      std::cout << t.str();
    } else if (*zz) {
      const auto l = load(common, &stark);
      if (zz_bus.empty() && zz_det.empty()) {
        const Frequency z = zz_strength(l.device, Frequency::ghz(omega_t), l.stark);
        std::cout << "zeta_khz=" << format_number(z.in_khz()) << '\n';
      } else {
        if (zz_bus.size() != 3 || zz_det.size() != 3)
          throw InvalidArgument("a landscape needs both --bus-range and --delta-range");
        LandscapeGrid g;
        g.target = parse_mode_label(stark.target);
        for (const auto f : grid_mhz(zz_bus[0] * 1e3, zz_bus[1] * 1e3, zz_bus[2] * 1e3)) g.bus_frequencies.push_back(f);
        g.detunings = grid_mhz(zz_det[0], zz_det[1], zz_det[2]);
        if (zz_rule == "full") g.rule = AmplitudeRule::Full;
        else if (zz_rule == "half") g.rule = AmplitudeRule::Half;
        else if (zz_rule == "quarter") g.rule = AmplitudeRule::Quarter;
        else throw InvalidArgument("unknown amplitude rule '" + zz_rule + "'");
        const fs::path path = output_dir(common) / "zz_map.csv";
        landscape_csv(zz_landscape(l.device, g, common.jobs)).write(path);
        std::cout << "csv=" << path.string() << '\n';
      }
    } else if (*shift) {
      const auto l = load(common, &stark);
      if (!l.stark) throw InvalidArgument("stark-shift needs --delta-s or a stark.* config");
      const Frequency numeric = stark_shift_numeric(l.device, *l.stark, Frequency::ghz(omega_t));
      const Frequency pert = stark_shift_perturbative(l.stark->detuning, l.stark->amplitude,
                                                     l.device.mode(l.stark->target).anharmonicity);
      std::cout << "shift_numeric_mhz=" << format_number(numeric.in_mhz(), 6) << '\n'
                << "shift_perturbative_mhz=" << format_number(pert.in_mhz(), 6) << '\n';
    } else if (*rates) {
      const auto l = load(common, &stark);
      if (!l.stark) throw InvalidArgument("rates needs --delta-s or a stark.* config");
      const DressedQubit q(l.stark->detuning, l.stark->amplitude);
      const auto r = dressed_rates(l.noise, q, l.stark->frame_frequency(l.device));
      std::cout << "theta=" << format_number(q.theta()) << '\n'
                << "splitting_mhz=" << format_number(q.splitting().in_mhz()) << '\n'
                << "t1_us=" << format_number(r.t1_us()) << '\n'
                << "tphi_us=" << format_number(r.tphi_us()) << '\n';
      if (!l.noise.transverse.empty()) {
        const auto m = mitigation_factor(l.noise.transverse, l.device, *l.stark);
        std::cout << "mitigation_factor=" << format_number(m.ratio) << '\n'
                  << "upper_sideband_ghz=" << format_number(m.upper_sideband.in_ghz()) << '\n'
                  << "lower_sideband_ghz=" << format_number(m.lower_sideband.in_ghz()) << '\n';
      }
    } else if (*rabi) {
      const auto l = load(common, &stark);
      if (!l.stark) throw InvalidArgument("rabi needs a stark drive");
      const auto amps = grid_mhz(rabi_amp[0], rabi_amp[1], rabi_amp[2]);
      std::vector<Frequency> dets;
      if (rabi_det.empty()) {
        const double split = DressedQubit(l.stark->detuning, l.stark->amplitude).splitting().in_mhz();
        dets = grid_mhz(split - 30.0, split + 30.0, rabi_amp[2]);
      } else {
        dets = grid_mhz(rabi_det[0], rabi_det[1], rabi_det[2]);
      }
      RabiOptions ro;
      ro.workers = common.jobs;
      const auto map = power_rabi_map(l.device, *l.stark, amps, dets, ro);
      CsvTable t({"omega_d_MHz", "delta_d_MHz", "p0", "p1"});
      for (std::size_t i = 0; i < amps.size(); ++i)
        for (std::size_t j = 0; j < dets.size(); ++j)
          t.add_row({format_number(amps[i].in_mhz()), format_number(dets[j].in_mhz()),
                     format_number(map.p0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))),
                     format_number(map.p1(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))});
      const fs::path path = output_dir(common) / "rabi.csv";
      t.write(path);
      std::cout << "csv=" << path.string() << '\n';
    } else if (*tunex) {
      const auto l = load(common, &stark);
      XGateOptions xo;
      xo.workers = common.jobs;
      xo.pitch = Frequency::mhz(pitch);
      if (half) xo.rotation = std::numbers::pi / 2;
      const auto target = parse_mode_label(x_target);
      const auto cal = tune_x(l.device, l.stark, target, xo);
      emit(to_key_values(cal), common, half ? "tune_x2.txt" : "tune_x.txt");
      if (!cache_path.empty() && !half) {
        CalibrationCache cache = fs::exists(cache_path) ? CalibrationCache::load(cache_path) : CalibrationCache{};
        const StarkDrive s = l.stark.value_or(StarkDrive{target, Frequency{}, Frequency{}});
        cache.add(CachedCalibration{s.target, s.detuning, s.amplitude, cal.error(), std::nullopt});
        cache.save(cache_path);
      }
    } else if (*tunecz) {
      const auto l = load(common, &stark);
      CZOptions co;
      co.idle_bus = Frequency::ghz(idle);
      co.strict = true;
      const auto cal = tune_cz(l.device, l.stark, gate_ns, co);
      emit(to_key_values(cal), common, "tune_cz.txt");
      if (!cache_path.empty() && l.stark) {
        CalibrationCache cache = fs::exists(cache_path) ? CalibrationCache::load(cache_path) : CalibrationCache{};
        cache.add(CachedCalibration{l.stark->target, l.stark->detuning, l.stark->amplitude, std::nullopt,
                                    cal.error()});
        cache.save(cache_path);
      }
    } else if (*maperr) {
      const auto l = load(common, &stark);
      if (!l.stark) throw InvalidArgument("map-error needs a stark drive");
      RampDirection dir;
      if (direction == "down") dir = RampDirection::Down;
      else if (direction == "up") dir = RampDirection::Up;
      else throw InvalidArgument("direction must be 'down' or 'up'");
      const double e = map_error(l.device, *l.stark, ramp_ns, state, dir);
      std::cout << "map_error=" << format_number(e, 6) << '\n';
    } else if (*scenario) {
      if (list) {
        for (const auto &s : scenario_registry()) std::cout << s.name << "  " << s.description << '\n';
        return 0;
      }
      if (scenario_name.empty()) throw CLI::RequiredError("name");
      ScenarioOptions so;
      so.output_dir = common.out;
      so.workers = common.jobs;
      so.full_resolution = common.full;
      if (common.device != "default" || !common.config.empty()) so.device = load(common, nullptr).device;
      const auto report = run_scenario(scenario_name, so);
      std::cout << report.summary();
    } else if (*plan) {
      const auto l = load(common, nullptr);
      MitigationConstraints mc;
      mc.target = parse_mode_label(plan_target);
      mc.required_shift = Frequency::mhz(need);
      mc.max_gate_error = max_error;
      const Frequency centre = tls_ghz ? Frequency::ghz(*tls_ghz) : l.device.mode(mc.target).frequency;
      const NoiseSpectrum tls{LorentzianTLS{centre, Frequency::mhz(tls_width), Frequency::mhz(tls_peak).rad_per_ns()}};
      const auto cache = CalibrationCache::load(cache_path);
      emit(to_key_values(plan_mitigation(l.device, tls, cache, mc)), common, "plan.txt");
    }
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception &e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
