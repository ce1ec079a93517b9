#include <gtest/gtest.h>

#include <cmath>

#include "starkbus/dressed.hpp"
#include "starkbus/errors.hpp"
#include "starkbus/spectrum.hpp"

#include "oracles.hpp"

using namespace starkbus;

namespace {

// Max-overlap labeling of a direct diagonalization; valid only where the
// dressing is weak.
double overlap_labeled_energy(const HermitianOperator &H, const BareLabel &label) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.matrix());
  const auto i = static_cast<Eigen::Index>(basis_index(label, 4));
  Eigen::Index best = 0;
  es.eigenvectors().row(i).cwiseAbs().maxCoeff(&best);
  return es.eigenvalues()(best);
}

double overlap_zeta(const HermitianOperator &H) {
  return overlap_labeled_energy(H, {1, 0, 1}) - overlap_labeled_energy(H, {1, 0, 0}) -
         overlap_labeled_energy(H, {0, 0, 1}) + overlap_labeled_energy(H, {0, 0, 0});
}

Device with_coupling(double mhz) {
  Device d = default_device();
  d.coupling_ref = Frequency::mhz(mhz);
  return d;
}

const StarkDrive kStark{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(30)};

} // namespace

TEST(LabeledSpectrum, EigenvectorsAreOrthonormal) {
  const auto s = labeled_eigensystem(default_device(), Frequency::ghz(5.7), kStark);
  ASSERT_EQ(s.entries().size(), 64u);
  Eigen::MatrixXcd V(64, 64);
  for (std::size_t i = 0; i < 64; ++i) V.col(static_cast<Eigen::Index>(i)) = s.entries()[i].vector;
  EXPECT_LT((V.adjoint() * V - Eigen::MatrixXcd::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(LabeledSpectrum, SatisfiesEigenEquation) {
  const auto H = static_hamiltonian(default_device(), Frequency::ghz(5.7), kStark);
  const auto s = labeled_eigensystem(H, 4);
  for (const auto &e : s.entries())
    EXPECT_LT((H.matrix() * e.vector - e.energy * e.vector).norm(), 1e-9);
}

TEST(LabeledSpectrum, EntriesInBareOrderWithPositiveGauge) {
  const auto s = labeled_eigensystem(default_device(), Frequency::ghz(5.7), kStark);
  for (std::size_t i = 0; i < 64; ++i) {
    const auto &e = s.entries()[i];
    EXPECT_EQ(e.label, basis_label(i, 4));
    const auto c = e.vector(static_cast<Eigen::Index>(i));
    EXPECT_GT(c.real(), 0.0);
    EXPECT_NEAR(c.imag(), 0.0, 1e-12);
    EXPECT_NEAR(e.overlap, std::norm(c), 1e-12);
  }
}

TEST(LabeledSpectrum, LabelsArePermutation) {
  const auto s = labeled_eigensystem(default_device(), Frequency::ghz(5.45), kStark, {10, false});
  std::vector<double> energies;
  for (const auto &e : s.entries()) energies.push_back(e.energy);
  std::sort(energies.begin(), energies.end());
  EXPECT_EQ(std::adjacent_find(energies.begin(), energies.end()), energies.end());
}

TEST(LabeledSpectrum, Deterministic) {
  const auto a = zz_strength(default_device(), Frequency::ghz(5.63), kStark);
  const auto b = zz_strength(default_device(), Frequency::ghz(5.63), kStark);
  EXPECT_EQ(a.rad_per_ns(), b.rad_per_ns());
}

TEST(LabeledSpectrum, RejectsUnknownLabel) {
  const auto s = labeled_eigensystem(default_device(), Frequency::ghz(5.7), std::nullopt);
  EXPECT_THROW(s.state({4, 0, 0}), InvalidArgument);
}

TEST(ZZ, AgreesWithOverlapLabelingAtBenignPoints) {
  for (double bus : {5.6, 5.7, 6.0}) {
    for (const auto &stark : {std::optional<StarkDrive>{}, std::optional<StarkDrive>{kStark}}) {
      const Device d = default_device();
      const auto H = static_hamiltonian(d, Frequency::ghz(bus), stark);
      EXPECT_NEAR(zz_strength(d, Frequency::ghz(bus), stark).rad_per_ns(), overlap_zeta(H), 1e-10) << bus;
    }
  }
}

TEST(ZZ, VanishesWithoutCoupling) {
  const Device d = with_coupling(0.0);
  EXPECT_NEAR(zz_strength(d, Frequency::ghz(5.7), std::nullopt).rad_per_ns(), 0.0, 1e-12);
  EXPECT_NEAR(zz_strength(d, Frequency::ghz(5.7), kStark).rad_per_ns(), 0.0, 1e-12);
}

TEST(ZZ, ScalesAsFourthPowerOfCoupling) {
  const double z1 = zz_strength(with_coupling(1.0), Frequency::ghz(5.7), std::nullopt).rad_per_ns();
  const double z2 = zz_strength(with_coupling(2.0), Frequency::ghz(5.7), std::nullopt).rad_per_ns();
  EXPECT_NEAR(z2 / z1, 16.0, 0.16);
}

TEST(ZZ, MatchesFourthOrderPerturbationTheory) {
  for (double bus : {5.6, 5.7, 6.0}) {
    const Device d = with_coupling(3.0);
    const double exact = zz_strength(d, Frequency::ghz(bus), std::nullopt).rad_per_ns();
    const double pt = oracle::rspt4_zeta(d, Frequency::ghz(bus));
    EXPECT_NEAR(exact, pt, 0.02 * std::abs(pt)) << bus;
  }
}

TEST(ZZ, GlobalOffsetInvariance) {
  const auto H = static_hamiltonian(default_device(), Frequency::ghz(5.7), kStark);
  const double c = Frequency::ghz(1.3).rad_per_ns();
  const HermitianOperator shifted(H.matrix() + c * ComplexMatrix::Identity(64, 64));
  const auto a = labeled_eigensystem(H, 4);
  const auto b = labeled_eigensystem(shifted, 4);
  EXPECT_NEAR(zz_strength(a).rad_per_ns(), zz_strength(b).rad_per_ns(), 1e-10);
  for (std::size_t i = 0; i < 64; ++i) EXPECT_NEAR(b.entries()[i].energy - a.entries()[i].energy, c, 1e-9);
}

TEST(ZZ, IdlePointMagnitude) {
  const double khz = zz_strength(default_device(), kIdleBusFrequency, std::nullopt).in_khz();
  EXPECT_GT(std::abs(khz), 1.0);
  EXPECT_LT(std::abs(khz), 100.0);
}

TEST(Spectrum, SecondOrderQubitShift) {
  // Dispersive shift of |100> from the bus exchange: g^2 / (w1 - wt).
  const Device d = with_coupling(2.0);
  const Frequency bus = Frequency::ghz(5.7);
  const auto s = labeled_eigensystem(d, bus, std::nullopt);
  const double g = coupling_at(d, ModeLabel::Q1, bus).rad_per_ns();
  const double w1 = Frequency::ghz(5.0).rad_per_ns();
  const double expected = w1 + g * g / (w1 - bus.rad_per_ns());
  const double e100 = (s.energy({1, 0, 0}) - s.energy(kGroundLabel)).rad_per_ns();
  EXPECT_NEAR(e100 - w1, expected - w1, 1e-3 * std::abs(expected - w1));
}

TEST(StarkShift, WeakDriveMatchesPerturbative) {
  const StarkDrive weak{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(5)};
  const double numeric = stark_shift_numeric(default_device(), weak).rad_per_ns();
  const double pert = stark_shift_perturbative(weak.detuning, weak.amplitude, Frequency::mhz(-300)).rad_per_ns();
  EXPECT_NEAR(numeric / pert, 1.0, 0.05);
}

TEST(StarkShift, ZeroAmplitudeGivesZero) {
  const StarkDrive off{ModeLabel::Q2, Frequency::mhz(70), Frequency{}};
  EXPECT_NEAR(stark_shift_numeric(default_device(), off).in_mhz(), 0.0, 1e-9);
}

TEST(StarkShift, SignFollowsDetuning) {
  // Drive below the qubit pushes it up.
  EXPECT_GT(stark_shift_numeric(default_device(), kStark).in_mhz(), 0.0);
  const StarkDrive above{ModeLabel::Q1, Frequency::mhz(-100), Frequency::mhz(20)};
  EXPECT_LT(stark_shift_numeric(default_device(), above).in_mhz(), 0.0);
}

TEST(CzResonance, MatchesDenseScan) {
  const Device d = default_device();
  const auto r = find_cz_resonance(d, std::nullopt);
  double best = 1e9, best_bus = 0;
  for (double f = 5.2; f <= 6.2; f += 0.001) {
    const double gap = cz_pair_gap(d, Frequency::ghz(f), std::nullopt).rad_per_ns();
    if (gap < best) { best = gap; best_bus = f; }
  }
  EXPECT_NEAR(r.bus_frequency.in_ghz(), best_bus, 1e-3);
  EXPECT_LE(2 * r.coupling.rad_per_ns(), best + 1e-9);
  EXPECT_NEAR(2 * r.coupling.rad_per_ns(), best, 0.01 * best);
}

TEST(CzResonance, ThrowsWhenWindowHasNoMinimum) {
  EXPECT_THROW(find_cz_resonance(default_device(), std::nullopt, {Frequency::ghz(5.9), Frequency::ghz(6.2)}),
               NoAntiCrossing);
}

TEST(Landscape, RowMajorAndConsistentWithPointwise) {
  const Device d = default_device();
  LandscapeGrid grid;
  grid.bus_frequencies = {Frequency::ghz(5.6), Frequency::ghz(5.8)};
  grid.detunings = {Frequency::mhz(-100), Frequency::mhz(60), Frequency::mhz(150)};
  grid.rule = AmplitudeRule::Half;
  const auto pts = zz_landscape(d, grid, 1);
  ASSERT_EQ(pts.size(), 6u);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const auto &p = pts[i * 3 + j];
      EXPECT_EQ(p.bus_frequency, grid.bus_frequencies[i]);
      EXPECT_EQ(p.detuning, grid.detunings[j]);
      EXPECT_NEAR(p.amplitude.rad_per_ns(), 0.5 * std::abs(p.detuning.rad_per_ns()), 1e-12);
      const StarkDrive s{ModeLabel::Q1, p.detuning, p.amplitude};
      EXPECT_EQ(p.zeta.rad_per_ns(), zz_strength(d, p.bus_frequency, s, {10, false}).rad_per_ns());
    }
  const auto par = zz_landscape(d, grid, 2);
  for (std::size_t k = 0; k < pts.size(); ++k) EXPECT_EQ(par[k].zeta.rad_per_ns(), pts[k].zeta.rad_per_ns());
}

TEST(Landscape, AmplitudeRules) {
  EXPECT_DOUBLE_EQ(amplitude_fraction(AmplitudeRule::Full), 1.0);
  EXPECT_DOUBLE_EQ(amplitude_fraction(AmplitudeRule::Half), 0.5);
  EXPECT_DOUBLE_EQ(amplitude_fraction(AmplitudeRule::Quarter), 0.25);
}
