#pragma once

#include <optional>
#include <span>
#include <vector>

#include "starkbus/device.hpp"
#include "starkbus/hamiltonian.hpp"

namespace starkbus {

/// Overlap below which a label assignment is considered ambiguous.
inline constexpr double kAmbiguityThreshold = 0.5;

struct LabeledState {
  BareLabel label{};
  double energy = 0.0; // rad/ns
  ComplexVector vector;
  double overlap = 0.0; // |<bare|eig>|^2
  bool flagged() const { return overlap < kAmbiguityThreshold; }
};

/// Eigenpairs of a rotating-frame Hamiltonian, each tagged with the bare
/// product state it is adiabatically connected to. Entries are stored in
/// bare-basis order; eigenvector phases are fixed so <bare|eig> > 0.
class LabeledSpectrum {
public:
  LabeledSpectrum() = default;
  LabeledSpectrum(int levels, std::vector<LabeledState> entries);

  int levels() const { return levels_; }
  const std::vector<LabeledState> &entries() const { return entries_; }
  const LabeledState &state(const BareLabel &label) const;
  Frequency energy(const BareLabel &label) const;
  std::vector<BareLabel> flagged_labels() const;
  bool any_flagged() const { return !flagged_labels().empty(); }

  /// Throws AmbiguousLabel if any of `labels` is flagged.
  void require(std::span<const BareLabel> labels) const;
  /// Columns are the labeled eigenvectors, in the order given.
  ComplexMatrix vectors(std::span<const BareLabel> labels) const;

private:
  int levels_ = 0;
  std::vector<LabeledState> entries_;
};

struct SpectrumOptions {
  /// Number of continuation steps ramping couplings and drive from zero.
  int continuation_steps = 10;
  /// Throw AmbiguousLabel when any label of the full spectrum is flagged.
  /// Consumers that only read a few labels turn this off and call require().
  bool strict = true;
};

/// Labels by continuation: the off-diagonal part (couplings and stark drive)
/// is scaled from 0 to 1 and labels are carried by maximum-overlap
/// assignment between consecutive steps.
LabeledSpectrum labeled_eigensystem(const HermitianOperator &hamiltonian, int levels,
                                    const SpectrumOptions &options = {});
LabeledSpectrum labeled_eigensystem(const Device &device, Frequency bus_frequency,
                                    const std::optional<StarkDrive> &stark,
                                    const SpectrumOptions &options = {});

/// (E_11 - E_10) - (E_01 - E_00) with |jk> connected to bare |j0k>.
Frequency zz_strength(const LabeledSpectrum &spectrum);
Frequency zz_strength(const Device &device, Frequency bus_frequency,
                      const std::optional<StarkDrive> &stark, const SpectrumOptions &options = {});

/// Label of the first excited state of `qubit` with everything else in the
/// ground state, e.g. |100> for Q1.
BareLabel excited_label(ModeLabel qubit);
inline constexpr BareLabel kGroundLabel{0, 0, 0};

/// Drive-induced shift of the dressed qubit transition, measured against the
/// same coupled system with the drive amplitude set to zero.
Frequency stark_shift_numeric(const Device &device, const StarkDrive &stark,
                              Frequency bus_frequency = kIdleBusFrequency,
                              const SpectrumOptions &options = {});

struct ResonanceWindow {
  Frequency lower = Frequency::ghz(5.2);
  Frequency upper = Frequency::ghz(6.2);
};

struct CzResonance {
  Frequency bus_frequency;
  Frequency coupling; // J_101, half the minimal gap
};

/// |E(|101>) - E(|020>)| at one bus frequency.
Frequency cz_pair_gap(const Device &device, Frequency bus_frequency,
                      const std::optional<StarkDrive> &stark, const SpectrumOptions &options = {});

/// Locates the |101>/|020> anti-crossing: coarse scan of the window, then
/// golden-section refinement to 10 kHz. Throws NoAntiCrossing when the gap
/// is monotone over the window or its minimum is an unresolved crossing.
CzResonance find_cz_resonance(const Device &device, const std::optional<StarkDrive> &stark,
                              const ResonanceWindow &window = {},
                              const SpectrumOptions &options = {});

enum class AmplitudeRule { Full, Half, Quarter };

double amplitude_fraction(AmplitudeRule rule);

struct ZZPoint {
  Frequency bus_frequency;
  Frequency detuning;
  Frequency amplitude;
  Frequency zeta;
  bool flagged = false;
};

struct LandscapeGrid {
  ModeLabel target = ModeLabel::Q1;
  std::vector<Frequency> bus_frequencies;
  std::vector<Frequency> detunings;
  AmplitudeRule rule = AmplitudeRule::Full;
};

/// Row-major over (bus frequency, detuning). Points whose computational
/// labels are ambiguous are kept and marked flagged.
std::vector<ZZPoint> zz_landscape(const Device &device, const LandscapeGrid &grid,
                                  int workers = 0, const SpectrumOptions &options = {});

} // namespace starkbus
