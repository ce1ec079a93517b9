#include "starkbus/scenarios.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "starkbus/csv.hpp"
#include "starkbus/dressed.hpp"
#include "starkbus/errors.hpp"
#include "starkbus/gates.hpp"
#include "starkbus/parallel.hpp"
#include "starkbus/spectrum.hpp"

namespace starkbus {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

std::vector<Frequency> mhz_list(const std::vector<double> &v) {
  std::vector<Frequency> out;
  for (double x : v) out.push_back(Frequency::mhz(x));
  return out;
}

std::string rule_name(AmplitudeRule r) {
  switch (r) {
  case AmplitudeRule::Full: return "full";
  case AmplitudeRule::Half: return "half";
  case AmplitudeRule::Quarter: return "quarter";
  }
  return "";
}

constexpr AmplitudeRule kRules[]{AmplitudeRule::Full, AmplitudeRule::Half, AmplitudeRule::Quarter};

ScenarioCheck check(std::string name, double value, std::optional<double> lo, std::optional<double> hi) {
  return ScenarioCheck{std::move(name), value, lo, hi};
}

double flag(bool b) { return b ? 1.0 : 0.0; }

std::string mode_lower(ModeLabel m) {
  std::string s(to_string(m));
  for (auto &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void write_table(const CsvTable &t, const ScenarioOptions &o, const std::string &file, ScenarioReport &r) {
  t.write(o.output_dir / file);
  r.files.push_back(file);
}

XGateOptions scenario_x_options(const ScenarioOptions &o) {
  XGateOptions x;
  x.strict = false;
  x.workers = 1;
  if (!o.full_resolution) x.pitch = Frequency::mhz(2.5);
  return x;
}

// Features of zeta versus detuning at the bus grid index `row`.
FeatureCount cut_features(const std::vector<ZZPoint> &pts, std::size_t row, std::size_t ncols, double threshold) {
  std::vector<double> z;
  for (std::size_t j = 0; j < ncols; ++j) z.push_back(pts[row * ncols + j].zeta.in_khz());
  return count_features(z, threshold);
}

constexpr double kFeatureThresholdKhz = 2.0;

ScenarioReport run_fig2(const Device &device, const ScenarioOptions &o) {
  ScenarioReport r;
  const int nb = o.full_resolution ? 200 : 60;
  const int nd = o.full_resolution ? 240 : 60;
  std::vector<Frequency> bus, det;
  for (int i = 0; i < nb; ++i) bus.push_back(Frequency::ghz(5.2 + static_cast<double>(i) / nb));
  const double pitch = 600.0 / nd;
  for (int j = 0; j < nd; ++j) det.push_back(Frequency::mhz(-300.0 + pitch / 2 + pitch * j));
  std::size_t cut = 0;
  for (std::size_t i = 0; i < bus.size(); ++i)
    if (std::abs(bus[i].in_ghz() - 5.7) < std::abs(bus[cut].in_ghz() - 5.7)) cut = i;

  std::vector<ModeLabel> targets{ModeLabel::Q1};
  if (o.full_resolution) targets.push_back(ModeLabel::Q2);
  CsvTable cuts({"target", "rule", "omega_t_GHz", "features", "depth_kHz"});
  for (ModeLabel target : targets) {
    std::vector<ZZPoint> all;
    std::vector<FeatureCount> feats;
    for (AmplitudeRule rule : kRules) {
      LandscapeGrid g{target, bus, det, rule};
      auto pts = zz_landscape(device, g, o.workers);
      feats.push_back(cut_features(pts, cut, det.size(), kFeatureThresholdKhz));
      cuts.add_row({std::string(to_string(target)), rule_name(rule), format_number(bus[cut].in_ghz()),
                    std::to_string(feats.back().count), format_number(feats.back().depth)});
      all.insert(all.end(), pts.begin(), pts.end());
    }
    write_table(landscape_csv(all), o, "fig2_zz_map_" + mode_lower(target) + ".csv", r);
    if (target == ModeLabel::Q1) {
      const bool counts = feats[0].count >= feats[1].count && feats[1].count >= feats[2].count &&
                          feats[0].count > feats[2].count;
      const bool depths = feats[0].depth >= feats[1].depth && feats[1].depth >= feats[2].depth &&
                          feats[0].depth > feats[2].depth;
      r.checks.push_back(check("q1_cut_features_full", feats[0].count, 2.0, std::nullopt));
      r.checks.push_back(check("q1_cut_features_half", feats[1].count, std::nullopt, std::nullopt));
      r.checks.push_back(check("q1_cut_features_quarter", feats[2].count, std::nullopt, std::nullopt));
      r.checks.push_back(check("q1_features_shrink", flag(counts || depths), 1.0, std::nullopt));
    }
  }
  write_table(cuts, o, "fig2_zz_cut.csv", r);
  return r;
}

ScenarioReport run_fig3(const Device &device, const ScenarioOptions &o) {
  ScenarioReport r;
  const int n = o.full_resolution ? 101 : 21;
  const auto amps = linspace(0.0, 50.0, n);
  struct Panel {
    ModeLabel target;
    double detuning;
  };
  const Panel panels[]{{ModeLabel::Q1, 50.0}, {ModeLabel::Q2, 70.0}};
  CsvTable t({"target", "delta_s_MHz", "omega_s_MHz", "shift_numeric_MHz", "shift_perturbative_MHz"});
  for (const auto &p : panels) {
    std::vector<double> numeric(amps.size()), analytic(amps.size());
    const Frequency eta = device.mode(p.target).anharmonicity;
    parallel_for(amps.size(), o.workers, [&](std::size_t i) {
      const StarkDrive s{p.target, Frequency::mhz(p.detuning), Frequency::mhz(amps[i])};
      numeric[i] = stark_shift_numeric(device, s).in_mhz();
      analytic[i] = stark_shift_perturbative(s.detuning, s.amplitude, eta).in_mhz();
    });
    for (std::size_t i = 0; i < amps.size(); ++i)
      t.add_row({std::string(to_string(p.target)), format_number(p.detuning), format_number(amps[i]),
                 format_number(numeric[i]), format_number(analytic[i])});
    if (p.target != ModeLabel::Q1) continue;
    bool monotone = true;
    double small_dev = 0.0, dev30 = kNaN, eq30 = kNaN;
    for (std::size_t i = 0; i < amps.size(); ++i) {
      if (i > 0 && numeric[i] < numeric[i - 1]) monotone = false;
      const double rel = amps[i] > 0 ? std::abs(numeric[i] - analytic[i]) / std::abs(analytic[i]) : 0.0;
      if (amps[i] <= 0.2 * p.detuning + 1e-9) small_dev = std::max(small_dev, rel);
      if (std::abs(amps[i] - 30.0) < 1e-9) {
        dev30 = rel;
        eq30 = analytic[i];
      }
    }
    r.checks.push_back(check("q1_max_shift_mhz", *std::max_element(numeric.begin(), numeric.end()), 18.0,
                             std::nullopt));
    r.checks.push_back(check("q1_shift_monotone", flag(monotone), 1.0, std::nullopt));
    r.checks.push_back(check("q1_perturbative_at_30mhz", eq30, 10.75, 10.85));
    r.checks.push_back(check("q1_relative_deviation_at_30mhz", dev30, std::nullopt, 0.15));
    r.checks.push_back(check("q1_relative_deviation_weak_drive", small_dev, std::nullopt, 0.05));
  }
  write_table(t, o, "fig3_stark_shift.csv", r);
  return r;
}

ScenarioReport run_fig4(const Device &device, const ScenarioOptions &o) {
  ScenarioReport r;
  const std::vector<double> ramps = o.full_resolution ? linspace(10.0, 200.0, 20)
                                                      : std::vector<double>{10, 20, 30, 50, 100, 200};
  const std::vector<double> amps = o.full_resolution ? linspace(5.0, 50.0, 10)
                                                     : std::vector<double>{10, 20, 30, 40, 50};
  struct Point {
    double ramp, amp;
    int state;
  };
  std::vector<Point> pts;
  for (double tr : ramps)
    for (double a : amps)
      for (int s : {0, 1}) pts.push_back({tr, a, s});
  std::vector<double> err(pts.size());
  parallel_for(pts.size(), o.workers, [&](std::size_t i) {
    const StarkDrive s{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(pts[i].amp)};
    err[i] = map_error(device, s, pts[i].ramp, pts[i].state);
  });
  CsvTable t({"ramp_ns", "omega_s_MHz", "state", "error"});
  double worst30 = 0.0, worst200 = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    t.add_row({format_number(pts[i].ramp), format_number(pts[i].amp), std::to_string(pts[i].state),
               format_number(err[i])});
    if (pts[i].state != 1) continue;
    if (std::abs(pts[i].ramp - 30.0) < 1e-9) worst30 = std::max(worst30, err[i]);
    if (std::abs(pts[i].ramp - 200.0) < 1e-9) worst200 = std::max(worst200, err[i]);
  }
  write_table(t, o, "fig4_map_error.csv", r);
  r.checks.push_back(check("state1_worst_error_30ns", worst30, std::nullopt, 1e-3));
  r.checks.push_back(check("state1_worst_error_200ns", worst200, std::nullopt, 1e-6));
  return r;
}

ScenarioReport run_fig5(const Device &device, const ScenarioOptions &o) {
  ScenarioReport r;
  const StarkDrive stark{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(30)};
  const double pitch = o.full_resolution ? 1.0 : 2.5;
  const int na = static_cast<int>(std::lround(55.0 / pitch)) + 1;
  const int nd = static_cast<int>(std::lround(60.0 / pitch)) + 1;
  const auto amps = mhz_list(linspace(5.0, 60.0, na));
  const auto dets = mhz_list(linspace(30.0, 90.0, nd));
  RabiOptions ro;
  ro.workers = o.workers;
  const RabiMap map = power_rabi_map(device, stark, amps, dets, ro);
  CsvTable t({"omega_d_MHz", "delta_d_MHz", "p0", "p1"});
  for (std::size_t i = 0; i < amps.size(); ++i)
    for (std::size_t j = 0; j < dets.size(); ++j)
      t.add_row({format_number(amps[i].in_mhz()), format_number(dets[j].in_mhz()),
                 format_number(map.p0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))),
                 format_number(map.p1(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))});
  write_table(t, o, "fig5_power_rabi.csv", r);

  XGateOptions xo = scenario_x_options(o);
  xo.workers = o.workers;
  const auto cal = tune_x(device, stark, ModeLabel::Q1, xo);
  std::ofstream(o.output_dir / "fig5_calibration.txt", std::ios::binary) << to_key_values(cal);
  r.files.push_back("fig5_calibration.txt");
  const double naive = DressedQubit(stark.detuning, stark.amplitude).splitting().in_mhz();
  r.checks.push_back(check("tuned_detuning_mhz", cal.detuning.in_mhz(), 35.0, 45.0));
  r.checks.push_back(check("naive_minus_tuned_detuning_mhz", naive - cal.detuning.in_mhz(), 10.0, std::nullopt));
  r.checks.push_back(check("tuned_leakage", cal.leakage, std::nullopt, 1e-4));
  r.checks.push_back(check("tuned_error", cal.error(), std::nullopt, 1e-4));
  return r;
}

struct XSweepPoint {
  double dressed = kNaN, bare = kNaN, simultaneous = kNaN;
  double dressed_leakage = kNaN, bare_leakage = kNaN;
};

XSweepPoint x_sweep_point(const Device &device, const StarkDrive &stark, const XGateOptions &xo, bool joint) {
  XSweepPoint p;
  const auto a = tune_x(device, stark, stark.target, xo);
  const auto b = tune_x(device, stark, partner_qubit(stark.target), xo);
  p.dressed = a.error();
  p.dressed_leakage = a.leakage;
  p.bare = b.error();
  p.bare_leakage = b.leakage;
  if (joint) {
    const auto &q1 = stark.target == ModeLabel::Q1 ? a : b;
    const auto &q2 = stark.target == ModeLabel::Q1 ? b : a;
    p.simultaneous = simultaneous_x_error(device, stark, q1, q2).error();
  }
  return p;
}

ScenarioReport run_fig6(const Device &device, const ScenarioOptions &o) {
  ScenarioReport r;
  struct Panel {
    ModeLabel target;
    double detuning;
  };
  std::vector<Panel> panels{{ModeLabel::Q1, 50.0}};
  if (o.full_resolution) panels.push_back({ModeLabel::Q2, 70.0});
  const std::vector<double> amps = o.full_resolution ? linspace(0.0, 50.0, 11)
                                                     : std::vector<double>{0, 10, 20, 30, 40, 45};
  const XGateOptions xo = scenario_x_options(o);
  CsvTable t({"stark_target", "delta_s_MHz", "omega_s_MHz", "dressed_error", "bare_error", "simultaneous_error",
              "dressed_leakage", "bare_leakage"});
  for (const auto &panel : panels) {
    std::vector<XSweepPoint> res(amps.size());
    parallel_for(amps.size(), o.workers, [&](std::size_t i) {
      const StarkDrive s{panel.target, Frequency::mhz(panel.detuning), Frequency::mhz(amps[i])};
      res[i] = x_sweep_point(device, s, xo, true);
    });
    double dressed_worst = 0.0, bare_worst = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
      t.add_row({std::string(to_string(panel.target)), format_number(panel.detuning), format_number(amps[i]),
                 format_number(res[i].dressed), format_number(res[i].bare), format_number(res[i].simultaneous),
                 format_number(res[i].dressed_leakage), format_number(res[i].bare_leakage)});
      if (amps[i] <= 40.0 + 1e-9) dressed_worst = std::max(dressed_worst, res[i].dressed);
      if (amps[i] > 0.0) bare_worst = std::max(bare_worst, res[i].bare);
    }
    if (panel.target == ModeLabel::Q1) {
      r.checks.push_back(check("dressed_worst_error_to_40mhz", dressed_worst, 1e-6, 1e-4));
      r.checks.push_back(check("bare_worst_error", bare_worst, 1e-5, 1e-3));
    }
  }
  write_table(t, o, "fig6_x_error_vs_amp.csv", r);
  return r;
}

ScenarioReport run_fig7(const Device &device, const ScenarioOptions &o) {
  ScenarioReport r;
  const int n = o.full_resolution ? 61 : 21;
  const auto freqs = linspace(4.90, 5.05, n);
  struct Panel {
    ModeLabel target;
    double detuning, amplitude;
  };
  std::vector<Panel> panels{{ModeLabel::Q1, 50.0, 20.0}};
  if (o.full_resolution) panels.push_back({ModeLabel::Q2, 70.0, 50.0});
  const XGateOptions xo = scenario_x_options(o);
  CsvTable t({"stark_target", "omega_1_GHz", "dressed_error", "bare_error", "dressed_leakage", "bare_leakage"});
  for (const auto &panel : panels) {
    std::vector<XSweepPoint> res(freqs.size());
    parallel_for(freqs.size(), o.workers, [&](std::size_t i) {
      Device d = device;
      d.mode(ModeLabel::Q1).frequency = Frequency::ghz(freqs[i]);
      const StarkDrive s{panel.target, Frequency::mhz(panel.detuning), Frequency::mhz(panel.amplitude)};
      res[i] = x_sweep_point(d, s, xo, false);
    });
    std::vector<double> bare;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
      t.add_row({std::string(to_string(panel.target)), format_number(freqs[i]), format_number(res[i].dressed),
                 format_number(res[i].bare), format_number(res[i].dressed_leakage),
                 format_number(res[i].bare_leakage)});
      bare.push_back(res[i].bare);
    }
    if (panel.target != ModeLabel::Q1) continue;
    std::vector<double> sorted = bare;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    double peak_ratio = 0.0, peak_at = kNaN;
    for (std::size_t i = 1; i + 1 < bare.size(); ++i) {
      if (std::abs(freqs[i] - 4.95) > 0.010 + 1e-9) continue;
      if (!(bare[i] >= bare[i - 1] && bare[i] >= bare[i + 1])) continue;
      if (bare[i] / median > peak_ratio) {
        peak_ratio = bare[i] / median;
        peak_at = freqs[i];
      }
    }
    r.checks.push_back(check("bare_peak_over_median_near_4p95", peak_ratio, 2.0, std::nullopt));
    r.checks.push_back(check("bare_peak_frequency_ghz", peak_at, 4.94, 4.96));
  }
  write_table(t, o, "fig7_x_error_vs_freq.csv", r);
  return r;
}

ScenarioReport run_fig8(const Device &device, const ScenarioOptions &o) {
  ScenarioReport r;
  const std::vector<double> amps = o.full_resolution ? std::vector<double>{20, 30, 40, 45}
                                                     : std::vector<double>{20};
  const std::vector<double> times = o.full_resolution ? linspace(30.0, 150.0, 13)
                                                      : std::vector<double>{40, 50, 60, 80, 100, 120};
  CsvTable t({"omega_s_MHz", "gate_ns", "error", "leakage", "conditional_phase", "lambda1", "lambda2", "theta_f",
              "stagnated"});
  for (double amp : amps) {
    const StarkDrive stark{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(amp)};
    CZOptions co;
    co.map = std::make_shared<const ControlAngleMap>(ControlAngleMap::build(device, stark));
    std::vector<CZCalibration> cals(times.size());
    parallel_for(times.size(), o.workers, [&](std::size_t i) { cals[i] = tune_cz(device, stark, times[i], co); });
    std::size_t best = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto &c = cals[i];
      t.add_row({format_number(amp), format_number(times[i]), format_number(c.error()), format_number(c.leakage),
                 format_number(c.conditional_phase), format_number(c.lambda1), format_number(c.lambda2),
                 format_number(c.theta_f), c.stagnated ? "1" : "0"});
      if (times[i] < 100.0 && c.error() < cals[best].error()) best = i;
    }
    if (amp != amps.front()) continue;
    double rise = 0.0;
    for (std::size_t i = best + 1; i < times.size(); ++i) rise = std::max(rise, cals[i].error() / cals[best].error());
    r.checks.push_back(check("best_error_below_100ns", cals[best].error(), std::nullopt, 5e-4));
    r.checks.push_back(check("best_gate_ns", times[best], std::nullopt, std::nullopt));
    r.checks.push_back(check("phase_error_at_best_rad",
                             std::abs(std::abs(cals[best].conditional_phase) - std::numbers::pi), std::nullopt,
                             1e-3));
    r.checks.push_back(check("error_rise_after_best", rise, 2.0, std::nullopt));
  }
  write_table(t, o, "fig8_cz_error_vs_time.csv", r);
  return r;
}

ScenarioReport run_fig9(const Device &device, const ScenarioOptions &o) {
  ScenarioReport r;
  const int nb = o.full_resolution ? 600 : 120;
  std::vector<Frequency> bus;
  for (int i = 0; i < nb; ++i) bus.push_back(Frequency::ghz(5.3 + 0.9 * i / nb));
  const double qq[]{125.0, 150.0, 175.0, 200.0};
  struct Panel {
    ModeLabel target;
    double detuning;
  };
  const Panel panels[]{{ModeLabel::Q1, 50.0}, {ModeLabel::Q2, 70.0}};
  CsvTable t({"qq_detuning_MHz", "stark_target", "omega_t_GHz", "delta_s_MHz", "omega_s_MHz", "zeta_kHz", "flagged"});
  CsvTable f({"qq_detuning_MHz", "stark_target", "rule", "features", "depth_kHz"});
  int q2_full_125 = 0, q2_full_200 = 0;
  for (const auto &panel : panels)
    for (double det : qq)
      for (AmplitudeRule rule : kRules) {
        Device d = device;
        d.mode(ModeLabel::Q1).frequency = d.mode(ModeLabel::Q2).frequency - Frequency::mhz(det);
        LandscapeGrid g{panel.target, bus, {Frequency::mhz(panel.detuning)}, rule};
        const auto pts = zz_landscape(d, g, o.workers);
        std::vector<double> z;
        for (const auto &p : pts) {
          z.push_back(p.zeta.in_khz());
          t.add_row({format_number(det), std::string(to_string(panel.target)), format_number(p.bus_frequency.in_ghz()),
                     format_number(p.detuning.in_mhz()), format_number(p.amplitude.in_mhz()),
                     format_number(p.zeta.in_khz()), p.flagged ? "1" : "0"});
        }
        const auto fc = count_features(z, kFeatureThresholdKhz);
        f.add_row({format_number(det), std::string(to_string(panel.target)), rule_name(rule),
                   std::to_string(fc.count), format_number(fc.depth)});
        if (panel.target == ModeLabel::Q2 && rule == AmplitudeRule::Full) {
          if (det == 125.0) q2_full_125 = fc.count;
          if (det == 200.0) q2_full_200 = fc.count;
        }
      }
  write_table(t, o, "fig9_zz_vs_detuning.csv", r);
  write_table(f, o, "fig9_features.csv", r);
  r.checks.push_back(check("q2_features_125_minus_200", q2_full_125 - q2_full_200, 1.0, std::nullopt));
  return r;
}

ScenarioReport run_eq3(const Device &device, const ScenarioOptions &o) {
  ScenarioReport r;
  const Frequency det = Frequency::mhz(50);
  const Mode &q = device.mode(ModeLabel::Q1);
  const double s0 = Frequency::mhz(0.01).rad_per_ns();
  NoiseChannels flat{NoiseSpectrum{WhiteFloor{s0}}, NoiseSpectrum{}};
  const NoiseSpectrum tls{LorentzianTLS{q.frequency, Frequency::mhz(0.1), s0}};
  const auto amps = linspace(0.0, 100.0, o.full_resolution ? 101 : 21);
  CsvTable t({"omega_s_MHz", "theta", "rate1_per_us", "rate_phi_per_us", "closed_form_rate1_per_us",
              "closed_form_rate_phi_per_us", "tls_mitigation_factor"});
  double worst1 = 0.0, worstphi = 0.0;
  for (double a : amps) {
    const DressedQubit dq(det, Frequency::mhz(a));
    const Frequency ws = q.frequency - det;
    const auto rates = dressed_rates(flat, dq, ws);
    const double c = std::cos(dq.theta()), s = std::sin(dq.theta());
    const double cf1 = std::numbers::pi * s0 * (1.0 + c * c) / 4.0;
    const double cfphi = std::numbers::pi * s0 * s * s / 4.0;
    worst1 = std::max(worst1, std::abs(rates.relaxation - cf1) / cf1);
    worstphi = std::max(worstphi, cfphi > 0 ? std::abs(rates.dephasing - cfphi) / cfphi : std::abs(rates.dephasing));
    const double factor = mitigation_factor(tls, device, StarkDrive{ModeLabel::Q1, det, Frequency::mhz(a)}).ratio;
    t.add_row({format_number(a), format_number(dq.theta()), format_number(rates.relaxation * 1e3),
               format_number(rates.dephasing * 1e3), format_number(cf1 * 1e3), format_number(cfphi * 1e3),
               format_number(factor)});
  }
  write_table(t, o, "eq3_rates.csv", r);
  r.checks.push_back(check("flat_rate1_relative_deviation", worst1, std::nullopt, 1e-12));
  r.checks.push_back(check("flat_rate_phi_relative_deviation", worstphi, std::nullopt, 1e-12));
  return r;
}

std::vector<Scenario> build_registry() {
  std::vector<Scenario> v;
  v.push_back({"fig2_zz_map", "ZZ landscape over bus frequency and stark detuning, stark on Q1, three amplitude rules",
               "omega_t 5.2..6.2 GHz x delta_s -300..300 MHz (60x60; 200x240 full, adds stark on Q2)",
               {"fig2_zz_map_q1.csv: omega_t_GHz,delta_s_MHz,omega_s_MHz,zeta_kHz,flagged",
                "fig2_zz_cut.csv: target,rule,omega_t_GHz,features,depth_kHz"},
               {"q1_cut_features_full >= 2", "q1_features_shrink >= 1"},
               run_fig2});
  v.push_back({"fig3_stark_shift", "numeric and perturbative stark shift versus amplitude",
               "Q1 at delta_s 50 MHz and Q2 at 70 MHz, omega_s 0..50 MHz",
               {"fig3_stark_shift.csv: target,delta_s_MHz,omega_s_MHz,shift_numeric_MHz,shift_perturbative_MHz"},
               {"q1_max_shift_mhz >= 18", "q1_shift_monotone >= 1", "q1_perturbative_at_30mhz in [10.75, 10.85]",
                "q1_relative_deviation_at_30mhz <= 0.15", "q1_relative_deviation_weak_drive <= 0.05"},
               run_fig3});
  v.push_back({"fig4_map_error", "adiabatic down-ramp map error of the dressed states of Q1",
               "delta_s 50 MHz, ramp 10..200 ns x omega_s 10..50 MHz, states 0 and 1",
               {"fig4_map_error.csv: ramp_ns,omega_s_MHz,state,error"},
               {"state1_worst_error_30ns <= 1e-3", "state1_worst_error_200ns <= 1e-6"},
               run_fig4});
  v.push_back({"fig5_power_rabi", "power-Rabi map and X tune-up of the dressed Q1 at (50, 30) MHz",
               "omega_d 5..60 MHz x delta_d 30..90 MHz",
               {"fig5_power_rabi.csv: omega_d_MHz,delta_d_MHz,p0,p1", "fig5_calibration.txt: key=value"},
               {"tuned_detuning_mhz in [35, 45]", "naive_minus_tuned_detuning_mhz >= 10", "tuned_leakage <= 1e-4",
                "tuned_error <= 1e-4"},
               run_fig5});
  v.push_back({"fig6_x_error_vs_amp", "X-gate errors of the dressed and bare qubits versus stark amplitude",
               "stark on Q1 at 50 MHz, omega_s 0..45 MHz (full adds stark on Q2 at 70 MHz)",
               {"fig6_x_error_vs_amp.csv: stark_target,delta_s_MHz,omega_s_MHz,dressed_error,bare_error,"
                "simultaneous_error,dressed_leakage,bare_leakage"},
               {"dressed_worst_error_to_40mhz in [1e-6, 1e-4]", "bare_worst_error in [1e-5, 1e-3]"},
               run_fig6});
  v.push_back({"fig7_x_error_vs_freq", "X-gate errors versus the frequency of Q1, Q2 fixed",
               "stark on Q1 (50, 20) MHz, omega_1 4.90..5.05 GHz, 21 points (61 full, adds stark on Q2)",
               {"fig7_x_error_vs_freq.csv: stark_target,omega_1_GHz,dressed_error,bare_error,dressed_leakage,"
                "bare_leakage"},
               {"bare_peak_over_median_near_4p95 >= 2", "bare_peak_frequency_ghz in [4.94, 4.96]"},
               run_fig7});
  v.push_back({"fig8_cz_error_vs_time", "fast-adiabatic CZ error versus gate time, stark on Q1",
               "delta_s 50 MHz, omega_s 20 MHz (full: 20, 30, 40, 45), T 40..120 ns",
               {"fig8_cz_error_vs_time.csv: omega_s_MHz,gate_ns,error,leakage,conditional_phase,lambda1,lambda2,"
                "theta_f,stagnated"},
               {"best_error_below_100ns <= 5e-4", "phase_error_at_best_rad <= 1e-3", "error_rise_after_best >= 2"},
               run_fig8});
  v.push_back({"fig9_zz_vs_detuning", "ZZ versus bus frequency for several qubit-qubit detunings",
               "Q2 at 5.2 GHz, detuning 125..200 MHz, stark on Q1 (50 MHz) or Q2 (70 MHz), three amplitude rules",
               {"fig9_zz_vs_detuning.csv: qq_detuning_MHz,stark_target,omega_t_GHz,delta_s_MHz,omega_s_MHz,zeta_kHz,"
                "flagged",
                "fig9_features.csv: qq_detuning_MHz,stark_target,rule,features,depth_kHz"},
               {"q2_features_125_minus_200 >= 1"},
               run_fig9});
  v.push_back({"eq3_rates", "dressed decoherence rates with a flat spectrum and TLS mitigation factor",
               "delta_s 50 MHz, omega_s 0..100 MHz",
               {"eq3_rates.csv: omega_s_MHz,theta,rate1_per_us,rate_phi_per_us,closed_form_rate1_per_us,"
                "closed_form_rate_phi_per_us,tls_mitigation_factor"},
               {"flat_rate1_relative_deviation <= 1e-12", "flat_rate_phi_relative_deviation <= 1e-12"},
               run_eq3});
  return v;
}

} // namespace

bool ScenarioCheck::passed() const {
  if (std::isnan(value)) return false;
  if (lower && value < *lower) return false;
  if (upper && value > *upper) return false;
  return true;
}

bool ScenarioReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ScenarioCheck &c) { return c.passed(); });
}

std::string ScenarioReport::summary() const {
  std::ostringstream os;
  os << "scenario=" << name << '\n';
  for (std::size_t i = 0; i < files.size(); ++i) os << "file." << i << '=' << files[i] << '\n';
  for (const auto &c : checks) {
    os << "check." << c.name << ".value=" << format_number(c.value) << '\n';
    if (c.lower) os << "check." << c.name << ".lower=" << format_number(*c.lower) << '\n';
    if (c.upper) os << "check." << c.name << ".upper=" << format_number(*c.upper) << '\n';
    os << "check." << c.name << ".passed=" << (c.passed() ? 1 : 0) << '\n';
  }
  os << "passed=" << (passed() ? 1 : 0) << '\n';
  return os.str();
}

const std::vector<Scenario> &scenario_registry() {
  static const std::vector<Scenario> registry = build_registry();
  return registry;
}

const Scenario &find_scenario(const std::string &name) {
  for (const auto &s : scenario_registry())
    if (s.name == name) return s;
  throw UnknownScenario("unknown scenario '" + name + "'");
}

ScenarioReport run_scenario(const std::string &name, const ScenarioOptions &options) {
  const Scenario &s = find_scenario(name);
  std::error_code ec;
  std::filesystem::create_directories(options.output_dir, ec);
  if (ec) throw InvalidArgument("cannot create " + options.output_dir.string() + ": " + ec.message());
  const Device device = options.device.value_or(default_device());
  device.validate();
  ScenarioReport report = s.run(device, options);
  report.name = s.name;
  const std::string summary = s.name + ".summary";
  std::ofstream os(options.output_dir / summary, std::ios::binary);
  if (!os) throw InvalidArgument("cannot write " + (options.output_dir / summary).string());
  os << report.summary();
  return report;
}

FeatureCount count_features(const std::vector<double> &values, double threshold) {
  FeatureCount out;
  std::ptrdiff_t last = -10;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double a = values[i - 1], b = values[i], c = values[i + 1];
    const bool extremum = (b > a && b > c) || (b < a && b < c);
    if (!extremum) continue;
    const double dev = std::abs(b - 0.5 * (a + c));
    if (!(dev > threshold)) continue;
    out.depth += dev;
    if (static_cast<std::ptrdiff_t>(i) - last >= 3) ++out.count;
    last = static_cast<std::ptrdiff_t>(i);
  }
  return out;
}

} // namespace starkbus
