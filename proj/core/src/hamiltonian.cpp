#include "starkbus/hamiltonian.hpp"

#include <cmath>
#include <vector>

#include "starkbus/errors.hpp"

namespace starkbus {

std::size_t basis_index(const BareLabel &label, int levels) {
  for (int n : label)
    if (n < 0 || n >= levels)
      throw InvalidArgument("bare label outside the truncated ladder");
  const auto l = static_cast<std::size_t>(levels);
  return (static_cast<std::size_t>(label[0]) * l + static_cast<std::size_t>(label[1])) * l +
         static_cast<std::size_t>(label[2]);
}

BareLabel basis_label(std::size_t index, int levels) {
  const auto l = static_cast<std::size_t>(levels);
  return {static_cast<int>(index / (l * l)), static_cast<int>((index / l) % l),
          static_cast<int>(index % l)};
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols())
    throw InvalidArgument("Hermitian operator must be square");
}

double HermitianOperator::hermiticity_defect() const {
  const double scale = m_.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() / scale;
}

Frequency coupling_at(const Device &device, ModeLabel qubit, Frequency bus_frequency) {
  if (device.mode(qubit).is_bus)
    throw InvalidArgument("coupling_at expects a qubit label, got the bus");
  if (bus_frequency.rad_per_ns() <= 0.0)
    throw InvalidArgument("bus frequency must be positive");
  const double wk = device.mode(qubit).frequency.rad_per_ns();
  const double wt = bus_frequency.rad_per_ns();
  const double wref = device.omega_ref.rad_per_ns();
  return device.coupling_ref * (std::sqrt(wk * wt) / wref);
}

namespace {

using Triplet = Eigen::Triplet<std::complex<double>>;

SparseOperator from_triplets(std::size_t dim, const std::vector<Triplet> &t) {
  SparseOperator op(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  op.setFromTriplets(t.begin(), t.end());
  op.makeCompressed();
  return op;
}

} // namespace

LadderTerms::LadderTerms(int l) : levels(l) {
  if (l < 2) throw InvalidArgument("ladder truncation must be >= 2");
  const auto ul = static_cast<std::size_t>(l);
  dimension = ul * ul * ul;
  const auto dim = static_cast<Eigen::Index>(dimension);
  for (std::size_t m = 0; m < 3; ++m) {
    number[m] = Eigen::VectorXd::Zero(dim);
    anharmonic[m] = Eigen::VectorXd::Zero(dim);
  }
  std::array<std::vector<Triplet>, 3> lower;
  std::array<std::vector<Triplet>, 2> exch;
  for (std::size_t i = 0; i < dimension; ++i) {
    const BareLabel n = basis_label(i, l);
    for (std::size_t m = 0; m < 3; ++m) {
      number[m](static_cast<Eigen::Index>(i)) = n[m];
      anharmonic[m](static_cast<Eigen::Index>(i)) = 0.5 * n[m] * (n[m] - 1);
      if (n[m] > 0) {
        BareLabel lowered = n;
        --lowered[m];
        lower[m].emplace_back(static_cast<int>(basis_index(lowered, l)), static_cast<int>(i),
                              std::sqrt(static_cast<double>(n[m])));
      }
    }
    // a_t^dagger a_k |n> for k in {Q1, Q2}
    for (std::size_t k = 0; k < 2; ++k) {
      const std::size_t q = k == 0 ? 0 : 2;
      if (n[q] > 0 && n[1] + 1 < l) {
        BareLabel out = n;
        --out[q];
        ++out[1];
        const double amp = std::sqrt(static_cast<double>(n[q]) * (n[1] + 1));
        const int r = static_cast<int>(basis_index(out, l));
        exch[k].emplace_back(r, static_cast<int>(i), amp);
        exch[k].emplace_back(static_cast<int>(i), r, amp);
      }
    }
  }
  for (std::size_t m = 0; m < 3; ++m) {
    lowering[m] = from_triplets(dimension, lower[m]);
    raising[m] = SparseOperator(lowering[m].adjoint());
  }
  for (std::size_t k = 0; k < 2; ++k) exchange[k] = from_triplets(dimension, exch[k]);
}

Eigen::VectorXd ladder_diagonal(const Device &device, const LadderTerms &terms,
                                Frequency bus_frequency, Frequency frame) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(terms.dimension));
  for (ModeLabel m : kModeOrder) {
    const std::size_t i = mode_index(m);
    const Frequency w = m == ModeLabel::Qt ? bus_frequency : device.mode(m).frequency;
    diag += (w - frame).rad_per_ns() * terms.number[i] +
            device.mode(m).anharmonicity.rad_per_ns() * terms.anharmonic[i];
  }
  return diag;
}

HermitianOperator static_hamiltonian(const Device &device, Frequency bus_frequency,
                                     const std::optional<StarkDrive> &stark) {
  device.validate();
  if (stark) stark->validate(device);
  const LadderTerms terms(device.levels_per_mode);
  const Frequency frame = frame_frequency(device, stark);

  ComplexMatrix h = ComplexMatrix::Zero(static_cast<Eigen::Index>(terms.dimension),
                                        static_cast<Eigen::Index>(terms.dimension));
  h.diagonal() = ladder_diagonal(device, terms, bus_frequency, frame).cast<std::complex<double>>();
  h += coupling_at(device, ModeLabel::Q1, bus_frequency).rad_per_ns() * ComplexMatrix(terms.exchange[0]);
  h += coupling_at(device, ModeLabel::Q2, bus_frequency).rad_per_ns() * ComplexMatrix(terms.exchange[1]);
  if (stark && stark->amplitude.rad_per_ns() != 0.0) {
    const std::size_t t = mode_index(stark->target);
    h += 0.5 * stark->amplitude.rad_per_ns() *
         ComplexMatrix(terms.lowering[t] + terms.raising[t]);
  }
  return HermitianOperator(std::move(h));
}

HermitianOperator drive_operator(const Device &device, ModeLabel target) {
  const LadderTerms terms(device.levels_per_mode);
  const std::size_t t = mode_index(target);
  return HermitianOperator(ComplexMatrix(terms.lowering[t] + terms.raising[t]));
}

} // namespace starkbus
