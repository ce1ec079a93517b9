#include "starkbus/gates.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "starkbus/errors.hpp"
#include "starkbus/optimize.hpp"
#include "starkbus/parallel.hpp"

namespace starkbus {

namespace {

constexpr double kPi = std::numbers::pi;

LabeledSpectrum lenient_spectrum(const Device &device, Frequency bus, const StarkDrive &frame) {
  SpectrumOptions opts;
  opts.strict = false;
  return labeled_eigensystem(device, bus, frame, opts);
}

Envelope repeated_drag(Frequency amplitude, double gate_ns, double alpha, Frequency eta, int pulses) {
  if (pulses == 1) return drag_envelope(amplitude, gate_ns, alpha, eta);
  std::vector<Envelope> parts(static_cast<std::size_t>(pulses), drag_envelope(amplitude, gate_ns, alpha, eta));
  return sequence(std::move(parts));
}

PulseSchedule drive_schedule(const StarkDrive &frame, ModeLabel target, const Envelope &env, Frequency detuning,
                             double phase, Frequency bus) {
  PulseSchedule s;
  s.frame = frame;
  s.bus = BusTrajectory(bus);
  s.gates.push_back(GateChannel{target, env, detuning, phase, 0.0});
  s.duration_ns = env.duration();
  return s;
}

// Final |0>, |1> populations from |1> for each (amplitude, detuning).
void rabi_grid(const Device &device, const StarkDrive &frame, ModeLabel target, const ComputationalBasis &basis,
               const std::vector<Frequency> &amps, const std::vector<Frequency> &dets, double gate_ns, double alpha,
               int pulses, Frequency bus, const StepControl &steps, int workers, Eigen::MatrixXd &p0,
               Eigen::MatrixXd &p1) {
  const auto na = static_cast<Eigen::Index>(amps.size());
  const auto nd = static_cast<Eigen::Index>(dets.size());
  p0.resize(na, nd);
  p1.resize(na, nd);
  const ComplexMatrix start = basis.vectors.col(1);
  const Frequency eta = device.mode(target).anharmonicity;
  parallel_for(amps.size() * dets.size(), workers, [&](std::size_t k) {
    const auto i = static_cast<Eigen::Index>(k / dets.size());
    const auto j = static_cast<Eigen::Index>(k % dets.size());
    double a0 = 0.0, a1 = 1.0;
    if (amps[static_cast<std::size_t>(i)].rad_per_ns() != 0.0) {
      const auto env = repeated_drag(amps[static_cast<std::size_t>(i)], gate_ns, alpha, eta, pulses);
      const auto s = drive_schedule(frame, target, env, dets[static_cast<std::size_t>(j)], 0.0, bus);
      const auto r = propagate_states(device, s, start, steps);
      const ComplexVector amp = basis.vectors.adjoint() * r.states.col(0);
      a0 = std::norm(amp(0));
      a1 = std::norm(amp(1));
    }
    p0(i, j) = a0;
    p1(i, j) = a1;
  });
}

std::vector<Frequency> grid(Frequency lo, Frequency hi, Frequency pitch) {
  std::vector<Frequency> out;
  const int n = static_cast<int>(std::floor((hi - lo) / pitch + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(lo + pitch * i);
  return out;
}

GateMetrics score(const Device &device, const PulseSchedule &schedule, const ComputationalBasis &basis,
                  const ComplexMatrix &target, const StepControl &steps) {
  const auto r = propagate_states(device, schedule, basis.vectors, steps);
  const ComplexMatrix block = project(r.states, basis);
  return GateMetrics{average_gate_fidelity(block, target, basis).fidelity, leakage(block)};
}

Frequency convert_detuning(const XGateCalibration &cal, Frequency frame) { return cal.frame + cal.detuning - frame; }

} // namespace

StarkDrive gate_frame(const std::optional<StarkDrive> &stark, ModeLabel target) {
  return stark ? *stark : frame_only(target);
}

RabiMap power_rabi_map(const Device &device, const StarkDrive &stark, const std::vector<Frequency> &amplitudes,
                       const std::vector<Frequency> &detunings, const RabiOptions &options) {
  if (amplitudes.empty() || detunings.empty()) throw InvalidArgument("power Rabi grid must be non-empty");
  if (options.pulses < 1) throw InvalidArgument("at least one pulse per point");
  stark.validate(device);
  const auto spec = lenient_spectrum(device, options.bus_frequency, stark);
  const auto basis = ComputationalBasis::single(spec, stark.target);
  RabiMap map{amplitudes, detunings, {}, {}};
  rabi_grid(device, stark, stark.target, basis, amplitudes, detunings, options.gate_ns, options.alpha,
            options.pulses, options.bus_frequency, options.steps, options.workers, map.p0, map.p1);
  return map;
}

XGateCalibration tune_x(const Device &device, const std::optional<StarkDrive> &stark, ModeLabel target,
                        const XGateOptions &options) {
  if (device.mode(target).is_bus) throw InvalidArgument("X gates target a qubit");
  const double ratio = kPi / options.rotation;
  const int pulses = static_cast<int>(std::lround(ratio));
  if (pulses < 1 || std::abs(ratio - pulses) > 1e-9)
    throw InvalidArgument("rotation must be pi / n for a power-Rabi tune-up");
  const StarkDrive frame = gate_frame(stark, target);
  frame.validate(device);
  const auto spec = lenient_spectrum(device, options.bus_frequency, frame);
  const auto basis = ComputationalBasis::single(spec, target);
  const Frequency transition = spec.energy(excited_label(target)) - spec.energy(kGroundLabel);
  const Frequency eta = device.mode(target).anharmonicity;

  const auto amps = grid(options.min_amplitude, options.max_amplitude, options.pitch);
  const auto dets = grid(transition - options.detuning_half_span, transition + options.detuning_half_span,
                         options.pitch);
  Eigen::MatrixXd p0, p1;
  rabi_grid(device, frame, target, basis, amps, dets, options.gate_ns, options.alpha, pulses,
            options.bus_frequency, options.coarse_steps, options.workers, p0, p1);
  Eigen::Index bi = 0, bj = 0;
  p0.maxCoeff(&bi, &bj);

  const ComplexMatrix goal = rotation_x(options.rotation);
  const bool with_phase = pulses > 1;
  auto schedule_for = [&](const std::vector<double> &x) {
    return drive_schedule(frame, target, drag_envelope(Frequency::mhz(x[0]), options.gate_ns, options.alpha, eta),
                          Frequency::mhz(x[1]), with_phase ? x[2] : 0.0, options.bus_frequency);
  };
  auto objective = [&](const std::vector<double> &x) {
    return 1.0 - score(device, schedule_for(x), basis, goal, options.search_steps).fidelity;
  };
  std::vector<double> x0{amps[static_cast<std::size_t>(bi)].in_mhz(), dets[static_cast<std::size_t>(bj)].in_mhz()};
  NelderMeadOptions nm;
  nm.initial_step = {options.pitch.in_mhz(), options.pitch.in_mhz()};
  if (with_phase) {
    x0.push_back(0.0);
    nm.initial_step.push_back(0.5);
  }
  nm.f_tolerance = 1e-10;
  nm.x_tolerance = 1e-4;
  nm.max_evaluations = options.max_evaluations;
  const auto best = nelder_mead(objective, x0, nm);

  XGateCalibration cal;
  cal.target = target;
  cal.frame = frame.frame_frequency(device);
  cal.amplitude = Frequency::mhz(best.x[0]);
  cal.detuning = Frequency::mhz(best.x[1]);
  cal.phase = with_phase ? best.x[2] : 0.0;
  cal.gate_ns = options.gate_ns;
  cal.alpha = options.alpha;
  cal.rotation = options.rotation;
  cal.transition = transition;
  const auto m = score(device, schedule_for(best.x), basis, goal, options.final_steps);
  cal.fidelity = m.fidelity;
  cal.leakage = m.leakage;
  if (options.strict && !(cal.fidelity > 0.99)) {
    std::ostringstream os;
    os << "X gate tune-up on " << to_string(target) << " reached only F = " << cal.fidelity;
    throw CalibrationError(os.str());
  }
  return cal;
}

GateChannel x_gate_channel(const Device &device, const XGateCalibration &cal, Frequency frame) {
  return GateChannel{cal.target,
                     drag_envelope(cal.amplitude, cal.gate_ns, cal.alpha, device.mode(cal.target).anharmonicity),
                     convert_detuning(cal, frame), cal.phase, 0.0};
}

GateMetrics evaluate_x(const Device &device, const std::optional<StarkDrive> &stark, const XGateCalibration &cal,
                       Frequency bus_frequency, const StepControl &steps) {
  const StarkDrive frame = gate_frame(stark, cal.target);
  const auto spec = lenient_spectrum(device, bus_frequency, frame);
  const auto basis = ComputationalBasis::single(spec, cal.target);
  PulseSchedule s;
  s.frame = frame;
  s.bus = BusTrajectory(bus_frequency);
  s.gates.push_back(x_gate_channel(device, cal, frame.frame_frequency(device)));
  s.duration_ns = cal.gate_ns;
  return score(device, s, basis, rotation_x(cal.rotation), steps);
}

GateMetrics simultaneous_x_error(const Device &device, const std::optional<StarkDrive> &stark,
                                 const XGateCalibration &q1, const XGateCalibration &q2, Frequency bus_frequency,
                                 const StepControl &steps) {
  if (q1.target == q2.target) throw InvalidArgument("simultaneous X needs calibrations for two different qubits");
  if (q1.amplitude.rad_per_ns() < 0.0 || q2.amplitude.rad_per_ns() < 0.0)
    throw InvalidArgument("missing calibration");
  const StarkDrive frame = gate_frame(stark, ModeLabel::Q1);
  const Frequency wf = frame.frame_frequency(device);
  const auto spec = lenient_spectrum(device, bus_frequency, frame);
  const auto basis = ComputationalBasis::two_qubit(spec);
  PulseSchedule s;
  s.frame = frame;
  s.bus = BusTrajectory(bus_frequency);
  s.gates.push_back(x_gate_channel(device, q1, wf));
  s.gates.push_back(x_gate_channel(device, q2, wf));
  s.duration_ns = std::max(q1.gate_ns, q2.gate_ns);
  return score(device, s, basis, x_tensor_x(), steps);
}

double map_error(const Device &device, const StarkDrive &stark, double ramp_ns, int state, RampDirection direction,
                 Frequency bus_frequency, const StepControl &steps) {
  if (!(ramp_ns > 0.0)) throw InvalidArgument("ramp time must be positive");
  if (state != 0 && state != 1) throw InvalidArgument("map state must be 0 or 1");
  stark.validate(device);
  if (stark.amplitude.rad_per_ns() == 0.0) return 0.0;
  StarkDrive idle = stark;
  idle.amplitude = Frequency{};
  const BareLabel label = state == 0 ? kGroundLabel : excited_label(stark.target);
  const auto driven = lenient_spectrum(device, bus_frequency, stark);
  const auto bare = lenient_spectrum(device, bus_frequency, idle);
  const std::array<BareLabel, 1> which{label};
  driven.require(which);
  bare.require(which);
  const bool down = direction == RampDirection::Down;
  const ComplexVector from = (down ? driven : bare).state(label).vector;
  const ComplexVector to = (down ? bare : driven).state(label).vector;

  PulseSchedule s;
  s.frame = stark;
  s.stark_envelope = cosine_ramp(stark.amplitude, ramp_ns, direction);
  s.bus = BusTrajectory(bus_frequency);
  s.duration_ns = ramp_ns;
  const auto r = propagate_states(device, s, from, steps);
  return std::max(0.0, 1.0 - std::norm(to.dot(r.states.col(0))));
}

PulseSchedule cz_schedule(const Device &device, const std::optional<StarkDrive> &stark,
                          std::shared_ptr<const ControlAngleMap> map, double gate_ns, double lambda1, double lambda2,
                          double theta_f, Frequency idle_bus) {
  if (!map) throw InvalidArgument("CZ schedule needs a control angle map");
  PulseSchedule s;
  s.frame = gate_frame(stark, ModeLabel::Q1);
  s.frame->validate(device);
  const double theta_i = map->theta_at(idle_bus);
  s.bus = BusTrajectory(fourier_adiabatic(theta_i, theta_f, lambda1, lambda2, gate_ns), std::move(map));
  s.duration_ns = gate_ns;
  return s;
}

CZCalibration evaluate_cz(const Device &device, const std::optional<StarkDrive> &stark,
                          std::shared_ptr<const ControlAngleMap> map, double gate_ns, double lambda1,
                          double lambda2, double theta_f, Frequency idle_bus, const StepControl &steps) {
  const StarkDrive frame = gate_frame(stark, ModeLabel::Q1);
  const auto spec = lenient_spectrum(device, idle_bus, frame);
  const auto basis = ComputationalBasis::two_qubit(spec);
  CZCalibration c;
  c.gate_ns = gate_ns;
  c.lambda1 = lambda1;
  c.lambda2 = lambda2;
  c.theta_f = theta_f;
  c.theta_i = map->theta_at(idle_bus);
  c.idle_bus = idle_bus;
  const auto s = cz_schedule(device, stark, map, gate_ns, lambda1, lambda2, theta_f, idle_bus);
  const auto r = propagate_states(device, s, basis.vectors, steps);
  const ComplexMatrix block = project(r.states, basis);
  c.fidelity = average_gate_fidelity(block, cz_target(), basis).fidelity;
  c.leakage = leakage(block);
  try {
    c.conditional_phase = conditional_phase(block);
  } catch (const InvalidArgument &) {
    c.conditional_phase = std::numeric_limits<double>::quiet_NaN();
  }
  return c;
}

CZCalibration tune_cz(const Device &device, const std::optional<StarkDrive> &stark, double gate_ns,
                      const CZOptions &options) {
  if (!(gate_ns > 0.0)) throw InvalidArgument("gate time must be positive");
  std::shared_ptr<const ControlAngleMap> map = options.map;
  if (!map)
    map = std::make_shared<const ControlAngleMap>(ControlAngleMap::build(device, gate_frame(stark, ModeLabel::Q1)));
  const double theta_i = map->theta_at(options.idle_bus);
  const double theta_lo = theta_i + 1e-3;
  const double theta_hi = std::min(map->max_theta(), kPi - 1e-6);
  if (!(theta_hi > theta_lo)) throw InvalidArgument("idle point leaves no room for a control angle excursion");

  auto run = [&](double l1, double l2, double tf, const StepControl &steps) {
    return evaluate_cz(device, stark, map, gate_ns, l1, l2, tf, options.idle_bus, steps);
  };

  // Single-harmonic pre-scan for the turning angle.
  const int np = std::max(2, options.prescan_points);
  double theta_seed = theta_hi;
  double seed_f = -1.0;
  for (int k = 0; k < np; ++k) {
    const double tf = theta_lo + (theta_hi - theta_lo) * (k + 1) / np;
    const double f = run(1.0, 0.0, tf, options.search_steps).fidelity;
    if (f > seed_f) {
      seed_f = f;
      theta_seed = tf;
    }
  }

  const std::array<std::array<double, 3>, 3> starts{{{1.0, 0.0, theta_seed},
                                                     {0.8, 0.15, theta_seed},
                                                     {1.1, -0.15, theta_seed}}};
  std::array<OptimizeResult, 3> results;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    NelderMeadOptions nm;
    nm.initial_step = {0.1, 0.05, 0.05 * (theta_hi - theta_lo)};
    nm.lower = {0.4, -0.3, theta_lo};
    nm.upper = {1.2, 0.3, theta_hi};
    nm.f_tolerance = options.f_tolerance;
    nm.x_tolerance = 1e-3;
    nm.max_evaluations = options.max_evaluations;
    results[k] = nelder_mead(
        [&](const std::vector<double> &x) { return 1.0 - run(x[0], x[1], x[2], options.search_steps).fidelity; },
        {starts[k][0], starts[k][1], starts[k][2]}, nm);
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < results.size(); ++k)
    if (results[k].value < results[best].value) best = k;
  const auto &x = results[best].x;
  CZCalibration cal = run(x[0], x[1], x[2], options.final_steps);
  cal.stagnated = !(cal.fidelity > 0.99);
  if (cal.stagnated && options.strict) {
    std::ostringstream os;
    os << "CZ optimisation stagnated at F = " << cal.fidelity << " for T = " << gate_ns << " ns";
    throw CalibrationError(os.str());
  }
  return cal;
}

std::string to_key_values(const XGateCalibration &c) {
  std::ostringstream os;
  os.precision(12);
  os << "gate=" << (c.rotation == kPi ? "X" : "X/2") << "\n"
     << "target=" << to_string(c.target) << "\n"
     << "frame_ghz=" << c.frame.in_ghz() << "\n"
     << "amplitude_mhz=" << c.amplitude.in_mhz() << "\n"
     << "detuning_mhz=" << c.detuning.in_mhz() << "\n"
     << "phase_rad=" << c.phase << "\n"
     << "transition_mhz=" << c.transition.in_mhz() << "\n"
     << "gate_ns=" << c.gate_ns << "\n"
     << "alpha=" << c.alpha << "\n"
     << "fidelity=" << c.fidelity << "\n"
     << "error=" << c.error() << "\n"
     << "leakage=" << c.leakage << "\n";
  return os.str();
}

std::string to_key_values(const CZCalibration &c) {
  std::ostringstream os;
  os.precision(12);
  os << "gate=CZ\n"
     << "gate_ns=" << c.gate_ns << "\n"
     << "lambda1=" << c.lambda1 << "\n"
     << "lambda2=" << c.lambda2 << "\n"
     << "lambda3=" << 1.0 - c.lambda1 << "\n"
     << "theta_i=" << c.theta_i << "\n"
     << "theta_f=" << c.theta_f << "\n"
     << "idle_bus_ghz=" << c.idle_bus.in_ghz() << "\n"
     << "fidelity=" << c.fidelity << "\n"
     << "error=" << c.error() << "\n"
     << "conditional_phase_rad=" << c.conditional_phase << "\n"
     << "leakage=" << c.leakage << "\n"
     << "stagnated=" << (c.stagnated ? "true" : "false") << "\n";
  return os.str();
}

} // namespace starkbus
