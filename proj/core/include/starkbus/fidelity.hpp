#pragma once

#include <vector>

#include "starkbus/spectrum.hpp"

namespace starkbus {

/// Computational subspace: labeled eigenvectors of the static Hamiltonian
/// at the operating point. Single-qubit subspaces are {|0>, |1>} of one
/// qubit with the spectator grounded; the two-qubit subspace is ordered
/// |00>, |01>, |10>, |11> with the first digit Q1.
struct ComputationalBasis {
  std::vector<BareLabel> labels;
  std::vector<ModeLabel> qubits; // one virtual-Z phase per entry
  ComplexMatrix vectors;         // columns follow `labels`

  static ComputationalBasis single(const LabeledSpectrum &spectrum, ModeLabel qubit);
  static ComputationalBasis two_qubit(const LabeledSpectrum &spectrum);

  Eigen::Index dimension() const { return static_cast<Eigen::Index>(labels.size()); }
};

/// d x d block V^dagger X V; `evolved` is either a full propagator or the
/// propagated basis columns (U V).
ComplexMatrix project(const ComplexMatrix &evolved, const ComputationalBasis &basis);

struct FidelityResult {
  double fidelity = 0.0;
  std::vector<double> phases; // virtual-Z phase per qubit, applied after the gate
};

/// [Tr(M^dagger M) + |Tr(M)|^2] / (d(d+1)) with M = target^dagger Z(phases) block,
/// maximised over the virtual-Z phases when `virtual_z` is set.
FidelityResult average_gate_fidelity(const ComplexMatrix &block, const ComplexMatrix &target,
                                     const ComputationalBasis &basis, bool virtual_z = true);

/// 1 - (1/d) sum_jk |block_jk|^2.
double leakage(const ComplexMatrix &block);

/// arg(U00 U11 / (U01 U10)) from the diagonal of a two-qubit block, in (-pi, pi].
double conditional_phase(const ComplexMatrix &block);

ComplexMatrix pauli_x();
ComplexMatrix rotation_x(double angle);
ComplexMatrix cz_target();
ComplexMatrix x_tensor_x();

} // namespace starkbus
