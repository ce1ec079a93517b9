#pragma once

#include <optional>
#include <vector>

#include "starkbus/hamiltonian.hpp"
#include "starkbus/pulses.hpp"
#include "starkbus/spectrum.hpp"

namespace starkbus {

struct StepControl {
  double step_ns = 0.005;
  /// Re-run at half the step and compare; halve up to max_halvings times.
  bool certify = true;
  double tolerance = 1e-7;
  int max_halvings = 3;
  bool record_trajectory = false;
  double sample_interval_ns = 0.1;
};

struct Certificate {
  bool checked = false;
  double step_ns = 0.0;    // step of the returned result
  double difference = 0.0; // spectral norm of the last h vs h/2 difference
  int halvings = 0;
};

struct Trajectory {
  std::vector<double> times_ns;
  std::vector<ComplexMatrix> states; // evolved columns at each sample time
};

struct EvolutionResult {
  /// Full propagator U, or U times the initial columns for propagate_states.
  ComplexMatrix states;
  double start_ns = 0.0;
  double end_ns = 0.0;
  std::optional<Trajectory> trajectory;
  Certificate certificate;
};

/// Time-ordered product of midpoint-sampled piecewise-constant exponentials
/// in the frame of schedule.frame (lab frame when absent). Throws
/// ConvergenceError when certification fails after max_halvings.
EvolutionResult propagate(const Device &device, const PulseSchedule &schedule, const StepControl &control = {});
EvolutionResult propagate(const Device &device, const PulseSchedule &schedule, const StepControl &control,
                          double start_ns, double end_ns);

/// Evolves only the given columns; cost scales with their number.
EvolutionResult propagate_states(const Device &device, const PulseSchedule &schedule,
                                 const ComplexMatrix &initial, const StepControl &control = {});

/// Time-independent generator of `schedule` at time t (rad/ns).
HermitianOperator instantaneous_hamiltonian(const Device &device, const PulseSchedule &schedule, double t_ns);

/// max |U^dagger U - I|.
double unitarity_defect(const ComplexMatrix &u);

struct PopulationTable {
  std::vector<double> times_ns;
  std::vector<BareLabel> labels;
  Eigen::MatrixXd values; // rows: sample times, columns: labels
};

/// Populations of trajectory column `column` in the bare product basis.
PopulationTable bare_populations(const EvolutionResult &result, int levels, int column = 0);
/// Populations in the labeled eigenbasis of `basis`.
PopulationTable dressed_populations(const EvolutionResult &result, const LabeledSpectrum &basis, int column = 0);

} // namespace starkbus
