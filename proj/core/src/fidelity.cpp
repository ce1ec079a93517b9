#include "starkbus/fidelity.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "starkbus/errors.hpp"
#include "starkbus/optimize.hpp"

namespace starkbus {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

} // namespace

ComputationalBasis ComputationalBasis::single(const LabeledSpectrum &spectrum, ModeLabel qubit) {
  if (qubit == ModeLabel::Qt) throw InvalidArgument("computational basis needs a qubit, not the bus");
  ComputationalBasis b;
  b.labels = {kGroundLabel, excited_label(qubit)};
  b.qubits = {qubit};
  spectrum.require(b.labels);
  b.vectors = spectrum.vectors(b.labels);
  return b;
}

ComputationalBasis ComputationalBasis::two_qubit(const LabeledSpectrum &spectrum) {
  ComputationalBasis b;
  b.labels = {BareLabel{0, 0, 0}, BareLabel{0, 0, 1}, BareLabel{1, 0, 0}, BareLabel{1, 0, 1}};
  b.qubits = {ModeLabel::Q1, ModeLabel::Q2};
  spectrum.require(b.labels);
  b.vectors = spectrum.vectors(b.labels);
  return b;
}

ComplexMatrix project(const ComplexMatrix &evolved, const ComputationalBasis &basis) {
  const Eigen::Index dim = basis.vectors.rows();
  if (evolved.rows() != dim) throw InvalidArgument("evolved operator does not match the basis dimension");
  if (evolved.cols() == dim) return basis.vectors.adjoint() * evolved * basis.vectors;
  if (evolved.cols() == basis.dimension()) return basis.vectors.adjoint() * evolved;
  throw InvalidArgument("evolved block has neither full nor subspace width");
}

FidelityResult average_gate_fidelity(const ComplexMatrix &block, const ComplexMatrix &target,
                                     const ComputationalBasis &basis, bool virtual_z) {
  const Eigen::Index d = basis.dimension();
  if (block.rows() != d || block.cols() != d || target.rows() != d || target.cols() != d)
    throw InvalidArgument("fidelity needs square blocks of the subspace dimension");
  // Tr(T^dagger Z M) = sum_k Z_kk (M T^dagger)_kk.
  const ComplexMatrix a = block * target.adjoint();
  const double norm = (block.adjoint() * block).trace().real();
  const double scale = static_cast<double>(d * (d + 1));

  // occupation of each qubit in each basis state
  std::vector<std::vector<int>> occ(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k)
    for (ModeLabel q : basis.qubits) occ[static_cast<std::size_t>(k)].push_back(basis.labels[static_cast<std::size_t>(k)][mode_index(q)]);

  auto overlap = [&](const std::vector<double> &phases) {
    cd s{};
    for (Eigen::Index k = 0; k < d; ++k) {
      double p = 0.0;
      for (std::size_t q = 0; q < phases.size(); ++q) p += phases[q] * occ[static_cast<std::size_t>(k)][q];
      s += std::polar(1.0, p) * a(k, k);
    }
    return std::norm(s);
  };

  FidelityResult r;
  r.phases.assign(basis.qubits.size(), 0.0);
  if (!virtual_z) {
    r.fidelity = (norm + overlap(r.phases)) / scale;
    return r;
  }
  double best = -1.0;
  for (double start : {0.0, kPi / 2, kPi, 3 * kPi / 2}) {
    NelderMeadOptions opt;
    opt.initial_step.assign(r.phases.size(), 0.3);
    opt.f_tolerance = 1e-15;
    opt.x_tolerance = 1e-9;
    opt.max_evaluations = 600;
    const auto res = nelder_mead([&](const std::vector<double> &p) { return -overlap(p); },
                                 std::vector<double>(r.phases.size(), start), opt);
    if (-res.value > best) {
      best = -res.value;
      r.phases = res.x;
    }
  }
  for (double &p : r.phases) p = std::remainder(p, 2 * kPi);
  r.fidelity = (norm + best) / scale;
  return r;
}

double leakage(const ComplexMatrix &block) {
  return 1.0 - block.cwiseAbs2().sum() / static_cast<double>(block.cols());
}

double conditional_phase(const ComplexMatrix &block) {
  if (block.rows() != 4 || block.cols() != 4) throw InvalidArgument("conditional phase needs a two-qubit block");
  const cd u00 = block(0, 0), u01 = block(1, 1), u10 = block(2, 2), u11 = block(3, 3);
  for (const cd &u : {u00, u01, u10, u11})
    if (std::abs(u) < 0.5) throw InvalidArgument("gate is not phase-like: diagonal element below 0.5");
  double phi = std::arg(u00 * u11 / (u01 * u10));
  if (phi <= -kPi) phi += 2 * kPi;
  return phi;
}

ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

ComplexMatrix rotation_x(double angle) {
  ComplexMatrix r(2, 2);
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  r << c, cd(0, -s), cd(0, -s), c;
  return r;
}

ComplexMatrix cz_target() {
  ComplexMatrix z = ComplexMatrix::Identity(4, 4);
  z(3, 3) = -1.0;
  return z;
}

ComplexMatrix x_tensor_x() {
  ComplexMatrix x = ComplexMatrix::Zero(4, 4);
  x(0, 3) = x(1, 2) = x(2, 1) = x(3, 0) = 1.0;
  return x;
}

} // namespace starkbus
