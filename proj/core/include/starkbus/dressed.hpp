#pragma once

#include "starkbus/device.hpp"
#include "starkbus/noise.hpp"
#include "starkbus/units.hpp"

namespace starkbus {

/// Two-level qubit under an off-resonant drive, diagonalized in the frame of
/// the drive. theta = arctan(amplitude / detuning), splitting
/// sqrt(detuning^2 + amplitude^2).
class DressedQubit {
public:
  DressedQubit(Frequency detuning, Frequency amplitude);

  Frequency detuning() const { return detuning_; }
  Frequency amplitude() const { return amplitude_; }
  double theta() const { return theta_; }
  Frequency splitting() const { return splitting_; }

  /// Bare |g>, |e> components of the dressed |0> and |1> states.
  double ground_weight_of_one() const;  // sin(theta/2)
  double excited_weight_of_one() const; // cos(theta/2)

private:
  Frequency detuning_;
  Frequency amplitude_;
  double theta_;
  Frequency splitting_;
};

/// arctan(amplitude / detuning); in (-pi/2, pi/2) for positive detuning.
double mixing_angle(Frequency detuning, Frequency amplitude);

/// Second-order shift including the |f> level:
/// eta * Omega^2 / (2 * Delta * (Delta + eta)).
Frequency stark_shift_perturbative(Frequency detuning, Frequency amplitude, Frequency anharmonicity);

struct DressedRates {
  double relaxation = 0.0; // 1/T1 in 1/ns
  double dephasing = 0.0;  // 1/Tphi in 1/ns

  double t1_us() const;
  double tphi_us() const;
};

/// Relaxation and pure-dephasing rates of the dressed qubit, sensing the
/// transverse noise at the two sidebands omega_s +/- splitting and at omega_s,
/// and the longitudinal noise at the splitting and at zero frequency.
DressedRates dressed_rates(const NoiseChannels &noise, const DressedQubit &qubit, Frequency stark_frequency);

struct MitigationResult {
  double ratio = 1.0;
  Frequency upper_sideband; // omega_s + splitting
  Frequency lower_sideband; // omega_s - splitting
  DressedRates dressed;
  DressedRates baseline;
};

/// Relaxation rate of the driven qubit relative to the same qubit with the
/// drive amplitude set to zero, both evaluated with a transverse TLS
/// spectrum. Only the transverse channel enters.
MitigationResult mitigation_factor(const NoiseSpectrum &tls, const Device &device, const StarkDrive &stark);

struct FrameCoefficients {
  double z = 0.0;
  double x = 0.0;
  double y = 0.0;
};

/// Instantaneous Z, X, Y coefficients (rad/ns) of a gate drive
/// (amplitude, detuning from the stark frequency, phase) expressed in the
/// dressed basis at time t_ns.
FrameCoefficients dressed_frame_coefficients(Frequency drive_amplitude, Frequency drive_detuning,
                                             double phase, const DressedQubit &qubit, double t_ns);

/// Rabi rate of the resonant dressed-qubit term after the Jacobi-Anger
/// expansion: Omega_d cos^2(theta/2) J0(Omega_d sin(theta) / Delta_d).
Frequency effective_rabi(Frequency drive_amplitude, Frequency drive_detuning, const DressedQubit &qubit);

/// Bessel function of the first kind, order zero. Power series below
/// |x| = 14, Hankel asymptotic expansion above; absolute error < 1e-10.
double bessel_j0(double x);

} // namespace starkbus
