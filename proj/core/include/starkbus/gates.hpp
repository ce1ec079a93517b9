#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "starkbus/dynamics.hpp"
#include "starkbus/fidelity.hpp"

namespace starkbus {

/// Frame used for gates on `target`: the stark drive when present,
/// otherwise a frame-only drive on the target.
StarkDrive gate_frame(const std::optional<StarkDrive> &stark, ModeLabel target);

/// Certified steps for scoring X gates.
inline constexpr StepControl kGateSteps{0.0015};

struct RabiOptions {
  double gate_ns = 20.0;
  double alpha = 0.5;
  int pulses = 1; // consecutive identical pulses per point
  Frequency bus_frequency = kIdleBusFrequency;
  StepControl steps{0.02, false};
  int workers = 0;
};

/// Final dressed populations of |0> and |1> after DRAG pulses that start in
/// the dressed |1> of the stark target. Row-major over (amplitude, detuning).
struct RabiMap {
  std::vector<Frequency> amplitudes;
  std::vector<Frequency> detunings;
  Eigen::MatrixXd p0;
  Eigen::MatrixXd p1;
};

RabiMap power_rabi_map(const Device &device, const StarkDrive &stark, const std::vector<Frequency> &amplitudes,
                       const std::vector<Frequency> &detunings, const RabiOptions &options = {});

struct XGateOptions {
  double gate_ns = 20.0;
  double alpha = 0.5;
  double rotation = 3.141592653589793; // pi for X, pi/2 for X/2
  Frequency bus_frequency = kIdleBusFrequency;
  Frequency min_amplitude = Frequency::mhz(5.0);
  Frequency max_amplitude = Frequency::mhz(60.0);
  Frequency detuning_half_span = Frequency::mhz(30.0);
  Frequency pitch = Frequency::mhz(1.0);
  StepControl coarse_steps{0.02, false};
  StepControl search_steps{0.01, false};
  StepControl final_steps = kGateSteps;
  int max_evaluations = 300;
  int workers = 0;
  /// Throw CalibrationError when the tuned fidelity does not exceed 0.99.
  bool strict = true;
};

struct XGateCalibration {
  ModeLabel target = ModeLabel::Q1;
  Frequency frame;     // rotating-frame frequency the detuning refers to
  Frequency amplitude; // Omega_d
  Frequency detuning;  // Delta_d, carrier minus frame
  double phase = 0.0;
  double gate_ns = 20.0;
  double alpha = 0.5;
  double rotation = 3.141592653589793;
  Frequency transition; // dressed |0>-|1> splitting in the frame
  double fidelity = 0.0;
  double leakage = 0.0;
  double error() const { return 1.0 - fidelity; }
};

/// Coarse power-Rabi grid, then simplex refinement of the virtual-Z
/// corrected fidelity. X/2 is tuned with two consecutive pulses in the
/// coarse map and the drive phase as an extra refinement parameter.
XGateCalibration tune_x(const Device &device, const std::optional<StarkDrive> &stark, ModeLabel target,
                        const XGateOptions &options = {});

/// Drive channel of a calibration, with its carrier re-expressed in `frame`.
GateChannel x_gate_channel(const Device &device, const XGateCalibration &cal, Frequency frame);

struct GateMetrics {
  double fidelity = 0.0;
  double leakage = 0.0;
  double error() const { return 1.0 - fidelity; }
};

/// Plays a calibrated X gate in the given frame.
GateMetrics evaluate_x(const Device &device, const std::optional<StarkDrive> &stark, const XGateCalibration &cal,
                       Frequency bus_frequency = kIdleBusFrequency, const StepControl &steps = kGateSteps);

/// Both calibrated drives at once, scored against X (x) X on the two-qubit
/// subspace. Carrier detunings are converted to the common frame.
GateMetrics simultaneous_x_error(const Device &device, const std::optional<StarkDrive> &stark,
                                 const XGateCalibration &q1, const XGateCalibration &q2,
                                 Frequency bus_frequency = kIdleBusFrequency,
                                 const StepControl &steps = kGateSteps);

/// 1 - |<target|final>|^2 for a cosine ramp of the stark amplitude. Down:
/// from the labeled dressed state at full amplitude to the labeled state at
/// zero amplitude; Up: the reverse. state is 0 or 1 of the stark target.
double map_error(const Device &device, const StarkDrive &stark, double ramp_ns, int state,
                 RampDirection direction = RampDirection::Down, Frequency bus_frequency = kIdleBusFrequency,
                 const StepControl &steps = {});

struct CZOptions {
  Frequency idle_bus = kIdleBusFrequency;
  StepControl search_steps{0.02, false};
  StepControl final_steps{};
  int max_evaluations = 250;
  double f_tolerance = 1e-7;
  int prescan_points = 12;
  /// Reuse a table built for the same device and stark drive.
  std::shared_ptr<const ControlAngleMap> map;
  /// Throw CalibrationError when every start stagnates below F = 0.99.
  bool strict = false;
};

struct CZCalibration {
  double gate_ns = 0.0;
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  double theta_f = 0.0;
  double theta_i = 0.0;
  Frequency idle_bus;
  double fidelity = 0.0;
  double conditional_phase = 0.0;
  double leakage = 0.0;
  bool stagnated = false;
  double error() const { return 1.0 - fidelity; }
};

PulseSchedule cz_schedule(const Device &device, const std::optional<StarkDrive> &stark,
                          std::shared_ptr<const ControlAngleMap> map, double gate_ns, double lambda1,
                          double lambda2, double theta_f, Frequency idle_bus);

/// Fidelity, leakage and conditional phase of one fast-adiabatic trajectory.
CZCalibration evaluate_cz(const Device &device, const std::optional<StarkDrive> &stark,
                          std::shared_ptr<const ControlAngleMap> map, double gate_ns, double lambda1,
                          double lambda2, double theta_f, Frequency idle_bus, const StepControl &steps = {});

/// Optimises (lambda1, lambda2, theta_f) from three deterministic starts.
CZCalibration tune_cz(const Device &device, const std::optional<StarkDrive> &stark, double gate_ns,
                      const CZOptions &options = {});

std::string to_key_values(const XGateCalibration &cal);
std::string to_key_values(const CZCalibration &cal);

} // namespace starkbus
