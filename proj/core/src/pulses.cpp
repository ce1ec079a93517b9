#include "starkbus/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "starkbus/errors.hpp"

namespace starkbus {

namespace {

constexpr double kPi = std::numbers::pi;

struct Evaluate {
  double t;

  std::complex<double> operator()(const CosineRamp &r) const {
    const double c = std::cos(kPi * t / r.rise_ns);
    const double f = r.direction == RampDirection::Up ? 0.5 * (1.0 - c) : 0.5 * (1.0 + c);
    return r.amplitude.rad_per_ns() * f;
  }
  std::complex<double> operator()(const Drag &d) const {
    const double w = kTwoPi / d.gate_ns;
    const double od = d.amplitude.rad_per_ns();
    const double x = 0.5 * od * (1.0 - std::cos(w * t));
    const double dx = 0.5 * od * w * std::sin(w * t);
    return {x, -d.alpha / d.anharmonicity.rad_per_ns() * dx};
  }
  std::complex<double> operator()(const Constant &c) const { return c.amplitude.rad_per_ns(); }
  std::complex<double> operator()(const Sequence &s) const {
    double offset = 0.0;
    for (const auto &p : s.parts) {
      const double d = p.duration();
      if (t <= offset + d) return p(t - offset);
      offset += d;
    }
    return 0.0;
  }
};

struct Duration {
  double operator()(const CosineRamp &r) const { return r.rise_ns; }
  double operator()(const Drag &d) const { return d.gate_ns; }
  double operator()(const Constant &c) const { return c.duration_ns; }
  double operator()(const Sequence &s) const {
    double total = 0.0;
    for (const auto &p : s.parts) total += p.duration();
    return total;
  }
};

} // namespace

Envelope::Envelope(Shape shape) : shape_(std::move(shape)) {}

std::complex<double> Envelope::operator()(double t_ns) const {
  if (t_ns < 0.0 || t_ns > duration()) return 0.0;
  return std::visit(Evaluate{t_ns}, shape_);
}

double Envelope::duration() const { return std::visit(Duration{}, shape_); }

Envelope cosine_ramp(Frequency amplitude, double rise_ns, RampDirection direction) {
  if (!(rise_ns > 0.0)) throw InvalidArgument("ramp time must be positive");
  return Envelope(CosineRamp{amplitude, rise_ns, direction});
}

Envelope drag_envelope(Frequency amplitude, double gate_ns, double alpha, Frequency anharmonicity) {
  if (!(gate_ns > 0.0)) throw InvalidArgument("gate time must be positive");
  if (anharmonicity.rad_per_ns() == 0.0) throw InvalidArgument("DRAG needs a nonzero anharmonicity");
  return Envelope(Drag{amplitude, gate_ns, alpha, anharmonicity});
}

Envelope constant_envelope(Frequency amplitude, double duration_ns) {
  if (duration_ns < 0.0) throw InvalidArgument("duration must be non-negative");
  return Envelope(Constant{amplitude, duration_ns});
}

Envelope sequence(std::vector<Envelope> parts) { return Envelope(Sequence{std::move(parts)}); }

FourierAdiabatic::FourierAdiabatic(double theta_i, double theta_f, double lambda1, double lambda2,
                                   double duration_ns)
    : theta_i_(theta_i), theta_f_(theta_f), lambda1_(lambda1), lambda2_(lambda2), duration_(duration_ns) {
  if (!(duration_ns > 0.0)) throw InvalidArgument("trajectory duration must be positive");
}

double FourierAdiabatic::operator()(double t_ns) const {
  const double t = std::clamp(t_ns, 0.0, duration_);
  const double x = kTwoPi * t / duration_;
  const double s = lambda1_ * (1.0 - std::cos(x)) + lambda2_ * (1.0 - std::cos(2.0 * x)) +
                   lambda3() * (1.0 - std::cos(3.0 * x));
  return theta_i_ + 0.5 * (theta_f_ - theta_i_) * s;
}

FourierAdiabatic fourier_adiabatic(double theta_i, double theta_f, double lambda1, double lambda2,
                                   double duration_ns) {
  return FourierAdiabatic(theta_i, theta_f, lambda1, lambda2, duration_ns);
}

BusTrajectory::BusTrajectory(Frequency parked) : parked_(parked) {
  if (parked.rad_per_ns() <= 0.0) throw InvalidArgument("bus frequency must be positive");
}

BusTrajectory::BusTrajectory(FourierAdiabatic angle, std::shared_ptr<const ControlAngleMap> map)
    : angle_(angle), map_(std::move(map)) {
  if (!map_) throw InvalidArgument("bus trajectory needs a control angle map");
  parked_ = map_->bus_frequency_at(angle.theta_i());
}

Frequency BusTrajectory::operator()(double t_ns) const {
  if (!angle_ || t_ns <= 0.0 || t_ns >= angle_->duration()) return parked_;
  const double theta = std::clamp((*angle_)(t_ns), map_->min_theta(), map_->max_theta());
  return map_->bus_frequency_at(theta);
}

double BusTrajectory::duration() const { return angle_ ? angle_->duration() : 0.0; }

double PulseSchedule::stark_amplitude(double t_ns) const {
  if (stark_envelope) return (*stark_envelope)(t_ns).real();
  return frame ? frame->amplitude.rad_per_ns() : 0.0;
}

void PulseSchedule::validate(const Device &device) const {
  if (duration_ns < 0.0) throw InvalidArgument("schedule duration must be non-negative");
  if (frame) frame->validate(device);
  if (stark_envelope && !frame) throw InvalidArgument("a stark envelope needs a stark frame");
  const double slack = 1e-9;
  if (stark_envelope && stark_envelope->duration() > duration_ns + slack)
    throw InvalidArgument("stark envelope is longer than the schedule");
  if (bus.duration() > duration_ns + slack) throw InvalidArgument("bus trajectory is longer than the schedule");
  for (const auto &g : gates) {
    if (device.mode(g.target).is_bus) throw InvalidArgument("gate drives must target a qubit");
    if (g.start_ns < 0.0 || g.start_ns + g.envelope.duration() > duration_ns + slack)
      throw InvalidArgument("gate channel extends past the schedule");
  }
}

StarkDrive frame_only(ModeLabel target) { return StarkDrive{target, Frequency{}, Frequency{}}; }

} // namespace starkbus
