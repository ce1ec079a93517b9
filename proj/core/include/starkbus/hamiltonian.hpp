#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "starkbus/device.hpp"

namespace starkbus {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using SparseOperator = Eigen::SparseMatrix<std::complex<double>>;

/// Bare occupation numbers (n1, nt, n2).
using BareLabel = std::array<int, 3>;

std::size_t basis_index(const BareLabel &label, int levels);
BareLabel basis_label(std::size_t index, int levels);

/// Dense Hermitian matrix over the (Q1, Qt, Q2) product basis.
class HermitianOperator {
public:
  HermitianOperator() = default;
  explicit HermitianOperator(ComplexMatrix m);

  const ComplexMatrix &matrix() const { return m_; }
  std::size_t dimension() const { return static_cast<std::size_t>(m_.rows()); }
  /// max |H - H^dagger| relative to max |H| (0 for the zero matrix).
  double hermiticity_defect() const;

private:
  ComplexMatrix m_;
};

Frequency coupling_at(const Device &device, ModeLabel qubit, Frequency bus_frequency);

/// Rotating-frame Hamiltonian at the stark frequency (lab frame without a
/// stark drive), RWA for coupling and drive terms.
HermitianOperator static_hamiltonian(const Device &device, Frequency bus_frequency,
                                     const std::optional<StarkDrive> &stark);

/// (a + a^dagger) on the target mode, identity elsewhere.
HermitianOperator drive_operator(const Device &device, ModeLabel target);

/// Sparse building blocks shared by the static and the time-dependent
/// Hamiltonians. Everything here is frequency independent except the
/// per-mode number diagonals, which are combined with frequencies on demand.
struct LadderTerms {
  int levels = 0;
  std::size_t dimension = 0;
  std::array<Eigen::VectorXd, 3> number;        // n_i on the diagonal
  std::array<Eigen::VectorXd, 3> anharmonic;    // n_i (n_i - 1) / 2
  std::array<SparseOperator, 3> lowering;       // a_i
  std::array<SparseOperator, 3> raising;        // a_i^dagger
  std::array<SparseOperator, 2> exchange;       // a_t^dagger a_k + h.c. for k = Q1, Q2

  explicit LadderTerms(int levels);
};

/// Diagonal of the static Hamiltonian for given mode frequencies and frame.
Eigen::VectorXd ladder_diagonal(const Device &device, const LadderTerms &terms,
                                Frequency bus_frequency, Frequency frame);

} // namespace starkbus
