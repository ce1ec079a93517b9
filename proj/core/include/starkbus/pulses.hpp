#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "starkbus/control_angle.hpp"
#include "starkbus/device.hpp"

namespace starkbus {

enum class RampDirection { Up, Down };

struct CosineRamp {
  Frequency amplitude;
  double rise_ns = 0.0;
  RampDirection direction = RampDirection::Up;
};

/// Omega_x = Omega_d/2 (1 - cos(2 pi t/t_g)), Omega_y = -(alpha/eta) dOmega_x/dt.
struct Drag {
  Frequency amplitude;
  double gate_ns = 0.0;
  double alpha = 0.0;
  Frequency anharmonicity;
};

struct Constant {
  Frequency amplitude;
  double duration_ns = 0.0;
};

class Envelope;

/// Envelopes played back to back.
struct Sequence {
  std::vector<Envelope> parts;
};

/// Complex amplitude (rad/ns) versus time, zero outside [0, duration].
class Envelope {
public:
  using Shape = std::variant<CosineRamp, Drag, Constant, Sequence>;

  explicit Envelope(Shape shape);

  std::complex<double> operator()(double t_ns) const;
  double duration() const;
  const Shape &shape() const { return shape_; }

private:
  Shape shape_;
};

Envelope cosine_ramp(Frequency amplitude, double rise_ns, RampDirection direction);
Envelope drag_envelope(Frequency amplitude, double gate_ns, double alpha, Frequency anharmonicity);
Envelope constant_envelope(Frequency amplitude, double duration_ns);
Envelope sequence(std::vector<Envelope> parts);

/// theta(t) = theta_i + (theta_f - theta_i)/2 * sum_{n=1..3} lambda_n (1 - cos(2 pi n t/T))
/// with lambda_3 = 1 - lambda_1.
class FourierAdiabatic {
public:
  FourierAdiabatic(double theta_i, double theta_f, double lambda1, double lambda2, double duration_ns);

  double operator()(double t_ns) const;
  double theta_i() const { return theta_i_; }
  double theta_f() const { return theta_f_; }
  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }
  double lambda3() const { return 1.0 - lambda1_; }
  double duration() const { return duration_; }

private:
  double theta_i_, theta_f_, lambda1_, lambda2_, duration_;
};

FourierAdiabatic fourier_adiabatic(double theta_i, double theta_f, double lambda1, double lambda2,
                                   double duration_ns);

/// Bus frequency versus time: either parked, or steered along a control
/// angle trajectory through a ControlAngleMap. Angles beyond the tabulated
/// range are clamped to its edges. After the trajectory ends the bus sits at
/// the frequency of theta_i.
class BusTrajectory {
public:
  explicit BusTrajectory(Frequency parked = kIdleBusFrequency);
  BusTrajectory(FourierAdiabatic angle, std::shared_ptr<const ControlAngleMap> map);

  Frequency operator()(double t_ns) const;
  double duration() const;
  bool is_parked() const { return !angle_.has_value(); }
  const std::optional<FourierAdiabatic> &angle() const { return angle_; }

private:
  Frequency parked_;
  std::optional<FourierAdiabatic> angle_;
  std::shared_ptr<const ControlAngleMap> map_;
};

/// Microwave drive on one qubit. The carrier sits `detuning` above the
/// stark frame frequency; the rotating-frame term is
/// (Omega(t)/2) a^dagger exp(-i(detuning t + phase)) + h.c.
struct GateChannel {
  ModeLabel target = ModeLabel::Q1;
  Envelope envelope = constant_envelope(Frequency{}, 0.0);
  Frequency detuning;
  double phase = 0.0;
  double start_ns = 0.0;
};

/// Everything that drives the device over one evolution window. `frame`
/// fixes the rotating frame (stark target and detuning); its amplitude is
/// applied throughout unless `stark_envelope` overrides it.
struct PulseSchedule {
  std::optional<StarkDrive> frame;
  std::optional<Envelope> stark_envelope;
  std::vector<GateChannel> gates;
  BusTrajectory bus;
  double duration_ns = 0.0;

  /// Stark amplitude (rad/ns) at time t.
  double stark_amplitude(double t_ns) const;
  void validate(const Device &device) const;
};

/// Frame-only stark drive: zero amplitude, rotating frame at the target
/// qubit's bare frequency.
StarkDrive frame_only(ModeLabel target);

} // namespace starkbus
