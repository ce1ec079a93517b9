// Acceptance harness: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "starkbus/csv.hpp"
#include "starkbus/dressed.hpp"
#include "starkbus/dynamics.hpp"
#include "starkbus/fidelity.hpp"
#include "starkbus/gates.hpp"
#include "starkbus/parallel.hpp"
#include "starkbus/scenarios.hpp"
#include "starkbus/spectrum.hpp"

#include "oracles.hpp"

using namespace starkbus;
namespace fs = std::filesystem;

namespace {

struct Context {
  fs::path out;
  int workers = 0;
};

struct Outcome {
  bool passed = false;
  std::string detail;
};

class Report {
public:
  void value(const std::string &name, double v) { detail_ += " " + name + "=" + format_number(v, 6); }
  void require(const std::string &name, bool ok) {
    if (!ok) {
      ok_ = false;
      detail_ += " [" + name + " violated]";
    }
  }
  Outcome done() const { return {ok_, detail_}; }

private:
  bool ok_ = true;
  std::string detail_;
};

Outcome from_scenario(const std::string &name, const Context &ctx,
                      const std::function<void(const ScenarioReport &, Report &)> &judge) {
  ScenarioOptions o;
  o.output_dir = ctx.out / name;
  o.workers = ctx.workers;
  const auto report = run_scenario(name, o);
  Report r;
  judge(report, r);
  return r.done();
}

const ScenarioCheck &find_check(const ScenarioReport &rep, const std::string &name) {
  for (const auto &c : rep.checks)
    if (c.name == name) return c;
  throw std::runtime_error("scenario " + rep.name + " has no check " + name);
}

void adopt(const ScenarioReport &rep, Report &r, std::initializer_list<const char *> names) {
  for (const char *n : names) {
    const auto &c = find_check(rep, n);
    r.value(n, c.value);
    r.require(n, c.passed());
  }
}

// 1: stark shift against the perturbative formula.
Outcome criterion1(const Context &) {
  Report r;
  const Device d = default_device();
  const Frequency eta = d.mode(ModeLabel::Q1).anharmonicity;
  const double pert = stark_shift_perturbative(Frequency::mhz(50), Frequency::mhz(30), eta).in_mhz();
  r.value("perturbative_30mhz", pert);
  r.require("perturbative = 10.8 MHz", std::abs(pert - 10.8) < 1e-9);
  double weak = 0.0;
  for (double o : {2.5, 5.0, 7.5, 10.0}) {
    const StarkDrive s{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(o)};
    const double num = stark_shift_numeric(d, s).in_mhz();
    const double ref = stark_shift_perturbative(s.detuning, s.amplitude, eta).in_mhz();
    weak = std::max(weak, std::abs(num - ref) / std::abs(ref));
  }
  r.value("weak_rel_dev", weak);
  r.require("weak drive within 5%", weak <= 0.05);
  const double num30 = stark_shift_numeric(d, {ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(30)}).in_mhz();
  r.value("numeric_30mhz", num30);
  r.value("rel_dev_30mhz", std::abs(num30 - pert) / pert);
  r.require("30 MHz within 15%", std::abs(num30 - pert) / pert <= 0.15);
  return r.done();
}

// 2: tuning range of the numeric shift.
Outcome criterion2(const Context &) {
  Report r;
  const Device d = default_device();
  double prev = -1.0, top = 0.0;
  bool monotone = true;
  for (int i = 0; i <= 20; ++i) {
    const double o = 2.5 * i;
    const double s = stark_shift_numeric(d, {ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(o)}).in_mhz();
    if (s <= prev && i > 0) monotone = false;
    prev = s;
    top = std::max(top, s);
  }
  r.value("max_shift_mhz", top);
  r.require("max shift >= 18 MHz", top >= 18.0);
  r.require("monotone", monotone);
  return r.done();
}

// 3: residual ZZ at idle and near the CZ resonance.
Outcome criterion3(const Context &) {
  Report r;
  const Device d = default_device();
  const double idle = std::abs(zz_strength(d, kIdleBusFrequency, std::nullopt).in_khz());
  r.value("idle_zeta_khz", idle);
  r.require("|zeta| < 15 kHz at 5.7 GHz", idle < 15.0);
  // Closest bus point to the anti-crossing where the computational labels
  // are unambiguous.
  const auto res = find_cz_resonance(d, std::nullopt);
  const BareLabel comp[]{{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {1, 0, 1}};
  double near = std::nan(""), at = std::nan("");
  for (int k = 0; k <= 100 && std::isnan(near); ++k)
    for (int sign : {1, -1}) {
      const Frequency bus = res.bus_frequency + Frequency::mhz(0.5 * k * sign);
      const auto spec = labeled_eigensystem(d, bus, std::nullopt, {10, false});
      bool clean = true;
      for (const auto &l : comp) clean = clean && !spec.state(l).flagged();
      if (!clean) continue;
      near = std::abs(zz_strength(spec).in_mhz());
      at = bus.in_ghz();
      break;
    }
  r.value("resonance_ghz", res.bus_frequency.in_ghz());
  r.value("evaluated_at_ghz", at);
  r.value("near_resonance_zeta_mhz", near);
  r.require("|zeta| in [5, 20] MHz near resonance", near >= 5.0 && near <= 20.0);
  return r.done();
}

// 4: landscape features.
Outcome criterion4(const Context &ctx) {
  return from_scenario("fig2_zz_map", ctx, [](const ScenarioReport &rep, Report &r) {
    adopt(rep, r, {"q1_cut_features_full", "q1_features_shrink"});
    r.value("features_half", find_check(rep, "q1_cut_features_half").value);
    r.value("features_quarter", find_check(rep, "q1_cut_features_quarter").value);
  });
}

// 5: adiabatic map of the dressed |1>.
Outcome criterion5(const Context &ctx) {
  Report r;
  const Device d = default_device();
  const std::vector<double> amps{10, 20, 30, 40, 50};
  std::vector<double> e30(amps.size()), e200(amps.size());
  parallel_for(amps.size(), ctx.workers, [&](std::size_t i) {
    const StarkDrive s{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(amps[i])};
    e30[i] = map_error(d, s, 30.0, 1, RampDirection::Down);
    e200[i] = map_error(d, s, 200.0, 1, RampDirection::Down);
  });
  double worst30 = 0.0, worst200 = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    r.value("err30_omega" + format_number(amps[i]), e30[i]);
    worst30 = std::max(worst30, e30[i]);
    worst200 = std::max(worst200, e200[i]);
  }
  r.value("worst30", worst30);
  r.value("worst200", worst200);
  r.require("error < 1e-3 at 30 ns", worst30 < 1e-3);
  r.require("error < 1e-6 at 200 ns", worst200 < 1e-6);
  return r.done();
}

// 6: power Rabi optimum and DRAG leakage.
Outcome criterion6(const Context &ctx) {
  return from_scenario("fig5_power_rabi", ctx, [](const ScenarioReport &rep, Report &r) {
    adopt(rep, r, {"tuned_detuning_mhz", "naive_minus_tuned_detuning_mhz", "tuned_leakage"});
  });
}

// 7: X errors, dressed versus bare target.
Outcome criterion7(const Context &ctx) {
  return from_scenario("fig6_x_error_vs_amp", ctx, [](const ScenarioReport &rep, Report &r) {
    adopt(rep, r, {"dressed_worst_error_to_40mhz", "bare_worst_error"});
  });
}

// 8: bare-target error peak against the Q1 frequency.
Outcome criterion8(const Context &ctx) {
  return from_scenario("fig7_x_error_vs_freq", ctx, [](const ScenarioReport &rep, Report &r) {
    adopt(rep, r, {"bare_peak_over_median_near_4p95", "bare_peak_frequency_ghz"});
  });
}

// 9: CZ error against gate time.
Outcome criterion9(const Context &ctx) {
  return from_scenario("fig8_cz_error_vs_time", ctx, [](const ScenarioReport &rep, Report &r) {
    adopt(rep, r, {"best_error_below_100ns", "phase_error_at_best_rad"});
    r.value("best_gate_ns", find_check(rep, "best_gate_ns").value);
    const double rise = find_check(rep, "error_rise_after_best").value;
    r.value("error_rise_after_best", rise);
    r.require("error rises beyond the optimum", rise > 1.0);
  });
}

// 10: property suite.
Outcome criterion10(const Context &) {
  Report r;
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Device dev = default_device();
  const StarkDrive stark{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(30)};

  double herm = 0.0;
  for (int i = 0; i < 20; ++i) {
    const StarkDrive s{u(rng) < 0.5 ? ModeLabel::Q1 : ModeLabel::Q2, Frequency::mhz(30 + 100 * u(rng)),
                       Frequency::mhz(50 * u(rng))};
    herm = std::max(herm, static_hamiltonian(dev, Frequency::ghz(5.2 + u(rng)), s).hermiticity_defect());
  }
  PulseSchedule sched;
  sched.frame = stark;
  sched.gates.push_back({ModeLabel::Q1, drag_envelope(Frequency::mhz(25), 20.0, 0.5, Frequency::mhz(-300)),
                         Frequency::mhz(40), 0.0, 0.0});
  sched.duration_ns = 20.0;
  for (double t : {1.0, 7.5, 13.0})
    herm = std::max(herm, instantaneous_hamiltonian(dev, sched, t).hermiticity_defect());
  r.value("hermiticity", herm);
  r.require("Hermitian", herm < 1e-12);

  StepControl fixed;
  fixed.certify = false;
  fixed.step_ns = 0.04;
  const auto u1 = propagate(dev, sched, fixed).states;
  fixed.step_ns = 0.02;
  const auto u2 = propagate(dev, sched, fixed).states;
  fixed.step_ns = 0.01;
  const auto u3 = propagate(dev, sched, fixed).states;
  const double unit = unitarity_defect(u3);
  const double order = (u1 - u2).norm() / (u2 - u3).norm();
  r.value("unitarity", unit);
  r.value("halving_ratio", order);
  r.require("unitary", unit < 1e-10);
  r.require("second-order convergence", std::abs(order - 4.0) < 0.4);

  double flat = 0.0;
  for (double o = 0.0; o <= 100.0; o += 5.0) {
    const DressedQubit q(Frequency::mhz(50), Frequency::mhz(o));
    const double S = 2e-4, L = 5e-5, c = std::cos(q.theta()), s = std::sin(q.theta());
    const auto rates = dressed_rates({NoiseSpectrum{WhiteFloor{S}}, NoiseSpectrum{WhiteFloor{L}}}, q,
                                     stark.frame_frequency(dev));
    const double g1 = std::numbers::pi * ((1 + c * c) / 4 * S + s * s * L);
    const double gp = std::numbers::pi * (c * c * L + s * s / 4 * S);
    flat = std::max({flat, std::abs(rates.relaxation - g1) / g1, std::abs(rates.dephasing - gp) / gp});
  }
  r.value("flat_rate_rel_dev", flat);
  r.require("flat-spectrum identity", flat <= 1e-12);

  const DressedQubit q(Frequency::mhz(50), Frequency::mhz(30));
  double a4 = 0.0;
  for (double t = 0.0; t < 40.0; t += 0.7) {
    const auto f = dressed_frame_coefficients(Frequency::mhz(20), Frequency::mhz(41), 0.2, q, t);
    const double dz = f.z - q.splitting().rad_per_ns();
    a4 = std::max(a4, std::abs(dz * dz + f.x * f.x + f.y * f.y - std::pow(Frequency::mhz(20).rad_per_ns(), 2)));
  }
  Eigen::Matrix2d h2;
  const double D = stark.detuning.rad_per_ns(), W = stark.amplitude.rad_per_ns();
  h2 << 0.0, W / 2, W / 2, D;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h2);
  a4 = std::max(a4, std::abs(es.eigenvalues()(1) - es.eigenvalues()(0) - q.splitting().rad_per_ns()));
  r.value("a4_identity", a4);
  r.require("dressed coefficient identity", a4 < 1e-12);

  const double zero = 2.404825557695773;
  const Frequency od = Frequency::mhz(20);
  const Frequency dd = Frequency::angular(od.rad_per_ns() * std::sin(q.theta()) / zero);
  const double killed = std::abs(effective_rabi(od, dd, q).rad_per_ns()) / od.rad_per_ns();
  r.value("rabi_at_j0_zero", killed);
  r.require("J0 zero kills the Rabi rate", killed < 1e-12);

  ComputationalBasis b2;
  b2.labels = {{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {1, 0, 1}};
  b2.qubits = {ModeLabel::Q1, ModeLabel::Q2};
  b2.vectors = ComplexMatrix::Identity(4, 4);
  double vz = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double a = 6 * u(rng), c = 6 * u(rng), g = 6 * u(rng);
    Eigen::VectorXcd z(4);
    z << 1.0, std::polar(1.0, c), std::polar(1.0, a), std::polar(1.0, a + c);
    const ComplexMatrix block = std::polar(1.0, g) * z.asDiagonal() * cz_target();
    vz = std::max(vz, 1.0 - average_gate_fidelity(block, cz_target(), b2).fidelity);
  }
  r.value("virtual_z", vz);
  r.require("virtual-Z invariance", vz < 1e-10);

  const auto H = static_hamiltonian(dev, kIdleBusFrequency, stark);
  const HermitianOperator shifted(H.matrix() + Frequency::ghz(0.7).rad_per_ns() * ComplexMatrix::Identity(64, 64));
  const double offset = std::abs(zz_strength(labeled_eigensystem(H, 4)).rad_per_ns() -
                                 zz_strength(labeled_eigensystem(shifted, 4)).rad_per_ns());
  r.value("offset", offset);
  r.require("global-offset invariance", offset < 1e-10);

  Device decoupled = dev;
  decoupled.coupling_ref = Frequency{};
  const double z0 = std::max(std::abs(zz_strength(decoupled, kIdleBusFrequency, std::nullopt).in_khz()),
                             std::abs(zz_strength(decoupled, kIdleBusFrequency, stark).in_khz()));
  r.value("zeta_g0_khz", z0);
  r.require("g = 0 gives zeta = 0", z0 < 1e-6);

  Device weak = dev;
  weak.coupling_ref = Frequency::mhz(3);
  double pt = 0.0;
  for (double bus : {5.6, 5.7, 6.0}) {
    const double exact = zz_strength(weak, Frequency::ghz(bus), std::nullopt).rad_per_ns();
    const double ref = oracle::rspt4_zeta(weak, Frequency::ghz(bus));
    pt = std::max(pt, std::abs(exact - ref) / std::abs(ref));
  }
  r.value("pt_zz_rel_dev", pt);
  r.require("perturbative ZZ agreement", pt < 0.02);
  return r.done();
}

struct Criterion {
  int id;
  const char *title;
  double budget_s;
  Outcome (*run)(const Context &);
};

const Criterion kCriteria[]{
    {1, "stark shift vs perturbative formula", 10, criterion1},
    {2, "stark tuning range", 60, criterion2},
    {3, "residual ZZ", 10, criterion3},
    {4, "ZZ landscape features", 600, criterion4},
    {5, "adiabatic map", 120, criterion5},
    {6, "power Rabi", 1200, criterion6},
    {7, "X-gate errors", 1800, criterion7},
    {8, "X-error peak vs frequency", 3600, criterion8},
    {9, "CZ error vs gate time", 7200, criterion9},
    {10, "property suite", 300, criterion10},
};

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  Context ctx;
  std::string out = (fs::temp_directory_path() / "starkbus_acceptance").string();
  app.add_option("--only", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  app.add_option("--out", out, "Directory for scenario outputs")->capture_default_str();
  app.add_option("--jobs", ctx.workers, "Worker threads (0 = all)");
  CLI11_PARSE(app, argc, argv);
  ctx.out = out;
  fs::create_directories(ctx.out);

  int failed = 0;
  for (const auto &c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception &e) {
      o = {false, std::string(" error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.passed = false;
      o.detail += " [runtime budget " + format_number(c.budget_s) + " s exceeded]";
    }
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << ", "
              << format_number(secs, 4) << " s):" << o.detail << std::endl;
    if (!o.passed) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
