#include "starkbus/dressed.hpp"

#include <cmath>
#include <numbers>

#include "starkbus/errors.hpp"

namespace starkbus {

double mixing_angle(Frequency detuning, Frequency amplitude) {
  const double d = detuning.rad_per_ns();
  const double o = amplitude.rad_per_ns();
  if (d == 0.0 && o == 0.0) throw InvalidArgument("mixing angle undefined for zero detuning and amplitude");
  if (d == 0.0) return std::copysign(std::numbers::pi / 2.0, o);
  return std::atan(o / d);
}

DressedQubit::DressedQubit(Frequency detuning, Frequency amplitude)
    : detuning_(detuning), amplitude_(amplitude), theta_(mixing_angle(detuning, amplitude)),
      splitting_(Frequency::angular(std::hypot(detuning.rad_per_ns(), amplitude.rad_per_ns()))) {}

double DressedQubit::ground_weight_of_one() const { return std::sin(theta_ / 2.0); }
double DressedQubit::excited_weight_of_one() const { return std::cos(theta_ / 2.0); }

Frequency stark_shift_perturbative(Frequency detuning, Frequency amplitude, Frequency anharmonicity) {
  const double d = detuning.rad_per_ns();
  const double o = amplitude.rad_per_ns();
  const double eta = anharmonicity.rad_per_ns();
  if (d == 0.0) throw PoleAtDetuning("perturbative stark shift diverges at zero detuning");
  if (d + eta == 0.0) throw PoleAtDetuning("perturbative stark shift diverges at detuning = -anharmonicity");
  return Frequency::angular(eta * o * o / (2.0 * d * (d + eta)));
}

double DressedRates::t1_us() const { return relaxation > 0.0 ? 1e-3 / relaxation : INFINITY; }
double DressedRates::tphi_us() const { return dephasing > 0.0 ? 1e-3 / dephasing : INFINITY; }

DressedRates dressed_rates(const NoiseChannels &noise, const DressedQubit &qubit, Frequency stark_frequency) {
  const double c = std::cos(qubit.theta());
  const double s = std::sin(qubit.theta());
  const Frequency split = qubit.splitting();
  const double sidebands = noise.transverse(stark_frequency + split) + noise.transverse(stark_frequency - split);
  DressedRates r;
  r.relaxation = std::numbers::pi * ((1.0 + c * c) / 4.0 * sidebands / 2.0 + s * s * noise.longitudinal(split));
  r.dephasing = std::numbers::pi * (c * c * noise.longitudinal(Frequency{}) +
                                    s * s / 4.0 * noise.transverse(stark_frequency));
  return r;
}

MitigationResult mitigation_factor(const NoiseSpectrum &tls, const Device &device, const StarkDrive &stark) {
  stark.validate(device);
  const NoiseChannels channels{tls, NoiseSpectrum{}};
  const Frequency ws = stark.frame_frequency(device);
  const DressedQubit driven(stark.detuning, stark.amplitude);
  const DressedQubit undriven(stark.detuning, Frequency{});

  MitigationResult out;
  out.upper_sideband = ws + driven.splitting();
  out.lower_sideband = ws - driven.splitting();
  out.dressed = dressed_rates(channels, driven, ws);
  out.baseline = dressed_rates(channels, undriven, ws);
  if (out.baseline.relaxation <= 0.0)
    throw InvalidArgument("TLS spectrum vanishes at the bare qubit; mitigation ratio undefined");
  out.ratio = out.dressed.relaxation / out.baseline.relaxation;
  return out;
}

FrameCoefficients dressed_frame_coefficients(Frequency drive_amplitude, Frequency drive_detuning,
                                             double phase, const DressedQubit &qubit, double t_ns) {
  const double od = drive_amplitude.rad_per_ns();
  const double arg = drive_detuning.rad_per_ns() * t_ns + phase;
  const double st = std::sin(qubit.theta());
  const double ct = std::cos(qubit.theta());
  return FrameCoefficients{qubit.splitting().rad_per_ns() - od * st * std::cos(arg), od * ct * std::cos(arg),
                           od * std::sin(arg)};
}

Frequency effective_rabi(Frequency drive_amplitude, Frequency drive_detuning, const DressedQubit &qubit) {
  if (drive_detuning.rad_per_ns() == 0.0)
    throw InvalidArgument("effective Rabi rate needs a nonzero drive detuning");
  const double half = std::cos(qubit.theta() / 2.0);
  const double arg = drive_amplitude.rad_per_ns() * std::sin(qubit.theta()) / drive_detuning.rad_per_ns();
  return drive_amplitude * (half * half * bessel_j0(arg));
}

double bessel_j0(double x) {
  x = std::abs(x);
  if (x < 14.0) {
    // sum_k (-1)^k (x/2)^{2k} / (k!)^2
    const long double q = static_cast<long double>(x) * x / 4.0L;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
      term *= -q / (static_cast<long double>(k) * k);
      sum += term;
      if (std::abs(term) < 1e-22L) break;
    }
    return static_cast<double>(sum);
  }
  // Hankel expansion: J0 = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4,
  // c_m = prod_{j=1..m} (-(2j-1)^2) / m!, P = sum (-1)^k c_2k / (8x)^2k,
  // Q = sum (-1)^k c_{2k+1} / (8x)^{2k+1}. Truncate at the smallest term.
  const double y = 8.0 * x;
  double p = 0.0, qsum = 0.0;
  double coeff = 1.0; // c_m / (8x)^m
  double last = INFINITY;
  for (int m = 0; m < 60; ++m) {
    if (m > 0) {
      const double odd = 2.0 * m - 1.0;
      coeff *= -(odd * odd) / (m * y);
    }
    const double mag = std::abs(coeff);
    if (mag > last) break;
    last = mag;
    const double sign = ((m / 2) % 2 == 0) ? 1.0 : -1.0;
    if (m % 2 == 0)
      p += sign * coeff;
    else
      qsum += sign * coeff;
    if (mag < 1e-18) break;
  }
  const double chi = x - std::numbers::pi / 4.0;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - qsum * std::sin(chi));
}

} // namespace starkbus
