#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "starkbus/dynamics.hpp"
#include "starkbus/errors.hpp"
#include "starkbus/fidelity.hpp"
#include "starkbus/pulses.hpp"
#include "starkbus/spectrum.hpp"

using namespace starkbus;
using cd = std::complex<double>;

namespace {

ComplexMatrix exp_minus_iHt(const HermitianOperator &H, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H.matrix());
  const Eigen::VectorXcd ph = (es.eigenvalues().cast<cd>() * cd(0, -t)).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

PulseSchedule driven_schedule(double duration) {
  PulseSchedule s;
  s.frame = StarkDrive{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(30)};
  s.gates.push_back({ModeLabel::Q1, drag_envelope(Frequency::mhz(25), duration, 0.5, Frequency::mhz(-300)),
                     Frequency::mhz(40), 0.0, 0.0});
  s.duration_ns = duration;
  return s;
}

StepControl fixed(double h) {
  StepControl c;
  c.step_ns = h;
  c.certify = false;
  return c;
}

ComplexMatrix random_unitary(int d, std::mt19937 &rng) {
  std::normal_distribution<double> n;
  ComplexMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = cd(n(rng), n(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  return qr.householderQ();
}

ComputationalBasis bare_basis(std::vector<BareLabel> labels, std::vector<ModeLabel> qubits) {
  ComputationalBasis b;
  b.labels = std::move(labels);
  b.qubits = std::move(qubits);
  b.vectors = ComplexMatrix::Identity(static_cast<Eigen::Index>(b.labels.size()), static_cast<Eigen::Index>(b.labels.size()));
  return b;
}

ComplexMatrix diag(std::initializer_list<cd> v) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const cd &x : v) d(i++) = x;
  return d.asDiagonal();
}

} // namespace

TEST(Propagate, ZeroDurationIsIdentity) {
  PulseSchedule s;
  s.frame = StarkDrive{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(30)};
  const auto r = propagate(default_device(), s);
  EXPECT_LT((r.states - ComplexMatrix::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Propagate, StaticScheduleMatchesExactExponential) {
  const Device d = default_device();
  PulseSchedule s;
  s.frame = StarkDrive{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(30)};
  s.duration_ns = 7.3;
  const auto r = propagate(d, s, fixed(0.01));
  const auto exact = exp_minus_iHt(static_hamiltonian(d, kIdleBusFrequency, s.frame), 7.3);
  EXPECT_LT((r.states - exact).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Propagate, InstantaneousHamiltonianReducesToStatic) {
  const Device d = default_device();
  PulseSchedule s;
  s.frame = StarkDrive{ModeLabel::Q2, Frequency::mhz(70), Frequency::mhz(40)};
  s.duration_ns = 10;
  const auto H = instantaneous_hamiltonian(d, s, 3.0);
  EXPECT_LT((H.matrix() - static_hamiltonian(d, kIdleBusFrequency, s.frame).matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagate, DriveTermHasRotatingPhase) {
  const Device d = default_device();
  auto s = driven_schedule(20.0);
  const double t = 6.0;
  const ComplexMatrix H = instantaneous_hamiltonian(d, s, t).matrix() - static_hamiltonian(d, kIdleBusFrequency, s.frame).matrix();
  const cd env = s.gates[0].envelope(t);
  const cd expected = 0.5 * env * std::exp(cd(0, -Frequency::mhz(40).rad_per_ns() * t));
  const auto g = static_cast<Eigen::Index>(basis_index({0, 0, 0}, 4));
  const auto e = static_cast<Eigen::Index>(basis_index({1, 0, 0}, 4));
  EXPECT_NEAR(std::abs(H(e, g) - expected), 0.0, 1e-12);
  EXPECT_LT(HermitianOperator(H).hermiticity_defect(), 1e-12);
}

TEST(Propagate, UnitaryForDrivenSchedule) {
  const auto r = propagate(default_device(), driven_schedule(20.0), fixed(0.02));
  EXPECT_LT(unitarity_defect(r.states), 1e-10);
}

TEST(Propagate, Composition) {
  const Device d = default_device();
  const auto s = driven_schedule(20.0);
  const auto full = propagate(d, s, fixed(0.01), 0.0, 20.0);
  const auto a = propagate(d, s, fixed(0.01), 0.0, 8.0);
  const auto b = propagate(d, s, fixed(0.01), 8.0, 20.0);
  EXPECT_LT((full.states - b.states * a.states).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Propagate, StatesMatchFullPropagator) {
  const Device d = default_device();
  const auto s = driven_schedule(20.0);
  const auto full = propagate(d, s, fixed(0.02));
  ComplexMatrix cols = ComplexMatrix::Zero(64, 2);
  cols(0, 0) = 1.0;
  cols(16, 1) = 1.0;
  const auto part = propagate_states(d, s, cols, fixed(0.02));
  EXPECT_LT((part.states - full.states * cols).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagate, SecondOrderConvergence) {
  const Device d = default_device();
  const auto s = driven_schedule(20.0);
  const auto u1 = propagate(d, s, fixed(0.08)).states;
  const auto u2 = propagate(d, s, fixed(0.04)).states;
  const auto u3 = propagate(d, s, fixed(0.02)).states;
  const double ratio = (u1 - u2).norm() / (u2 - u3).norm();
  EXPECT_NEAR(ratio, 4.0, 0.4);
}

TEST(Propagate, CertificateReportsConvergence) {
  StepControl c;
  c.step_ns = 0.02;
  const auto r = propagate(default_device(), driven_schedule(20.0), c);
  EXPECT_TRUE(r.certificate.checked);
  EXPECT_LE(r.certificate.difference, c.tolerance);
  EXPECT_LE(r.certificate.step_ns, 0.02);
}

TEST(Propagate, CertificationFailureThrows) {
  StepControl c;
  c.step_ns = 2.0;
  c.tolerance = 1e-14;
  c.max_halvings = 1;
  EXPECT_THROW(propagate(default_device(), driven_schedule(20.0), c), ConvergenceError);
}

TEST(Propagate, ResonantRabiFlip) {
  Device d = default_device();
  d.coupling_ref = Frequency{};
  const Frequency omega = Frequency::mhz(2);
  const double T = std::numbers::pi / omega.rad_per_ns();
  PulseSchedule s;
  s.frame = frame_only(ModeLabel::Q1);
  s.gates.push_back({ModeLabel::Q1, constant_envelope(omega, T), Frequency{}, 0.0, 0.0});
  s.duration_ns = T;
  ComplexMatrix g = ComplexMatrix::Zero(64, 1);
  g(0, 0) = 1.0;
  const auto r = propagate_states(d, s, g, fixed(0.05));
  const auto e = static_cast<Eigen::Index>(basis_index({1, 0, 0}, 4));
  EXPECT_GT(std::norm(r.states(e, 0)), 0.999);
}

TEST(Propagate, TrajectoryPopulationsSumToOne) {
  auto c = fixed(0.02);
  c.record_trajectory = true;
  c.sample_interval_ns = 1.0;
  ComplexMatrix g = ComplexMatrix::Zero(64, 1);
  g(0, 0) = 1.0;
  const auto r = propagate_states(default_device(), driven_schedule(20.0), g, c);
  ASSERT_TRUE(r.trajectory);
  EXPECT_NEAR(r.trajectory->times_ns.front(), 0.0, 1e-12);
  EXPECT_NEAR(r.trajectory->times_ns.back(), 20.0, 1e-9);
  const auto bare = bare_populations(r, 4);
  EXPECT_EQ(bare.values.cols(), 64);
  for (Eigen::Index i = 0; i < bare.values.rows(); ++i) EXPECT_NEAR(bare.values.row(i).sum(), 1.0, 1e-10);
  const auto spec = labeled_eigensystem(default_device(), kIdleBusFrequency,
                                        StarkDrive{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(30)});
  const auto dressed = dressed_populations(r, spec);
  for (Eigen::Index i = 0; i < dressed.values.rows(); ++i) EXPECT_NEAR(dressed.values.row(i).sum(), 1.0, 1e-10);
}

TEST(Fidelity, PerfectGate) {
  const auto b = bare_basis({{0, 0, 0}, {1, 0, 0}}, {ModeLabel::Q1});
  EXPECT_NEAR(average_gate_fidelity(pauli_x(), pauli_x(), b).fidelity, 1.0, 1e-12);
  const auto b2 = bare_basis({{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {1, 0, 1}}, {ModeLabel::Q1, ModeLabel::Q2});
  EXPECT_NEAR(average_gate_fidelity(cz_target(), cz_target(), b2).fidelity, 1.0, 1e-12);
}

TEST(Fidelity, PhaseErrorClosedForm) {
  const auto b = bare_basis({{0, 0, 0}, {1, 0, 0}}, {ModeLabel::Q1});
  for (double eps : {0.01, 0.1, 0.7}) {
    const ComplexMatrix m = diag({1.0, std::polar(1.0, eps)});
    const double expected = (2 + std::norm(1.0 + std::polar(1.0, eps))) / 6;
    EXPECT_NEAR(average_gate_fidelity(m, ComplexMatrix::Identity(2, 2), b, false).fidelity, expected, 1e-14);
    EXPECT_NEAR(average_gate_fidelity(m, ComplexMatrix::Identity(2, 2), b, true).fidelity, 1.0, 1e-12);
  }
}

TEST(Fidelity, VirtualZInvariance) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  const auto b2 = bare_basis({{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {1, 0, 1}}, {ModeLabel::Q1, ModeLabel::Q2});
  for (int trial = 0; trial < 10; ++trial) {
    const double a = u(rng), c = u(rng), g = u(rng);
    const ComplexMatrix z = diag({1.0, std::polar(1.0, c), std::polar(1.0, a), std::polar(1.0, a + c)});
    const ComplexMatrix block = std::polar(1.0, g) * z * cz_target();
    EXPECT_NEAR(average_gate_fidelity(block, cz_target(), b2).fidelity, 1.0, 1e-10);
  }
}

TEST(Fidelity, BoundedByLeakage) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto b2 = bare_basis({{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {1, 0, 1}}, {ModeLabel::Q1, ModeLabel::Q2});
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix full = random_unitary(6, rng);
    const ComplexMatrix block = full.topLeftCorner(4, 4);
    const double L = leakage(block);
    EXPECT_GE(L, -1e-12);
    EXPECT_LE(average_gate_fidelity(block, cz_target(), b2, false).fidelity, 1 - L + 1e-12);
  }
}

TEST(Fidelity, LeakageOfScaledIdentity) {
  EXPECT_NEAR(leakage(std::sqrt(0.9) * ComplexMatrix::Identity(4, 4)), 0.1, 1e-14);
  EXPECT_NEAR(leakage(ComplexMatrix::Zero(2, 2)), 1.0, 1e-15);
}

TEST(Fidelity, ConditionalPhase) {
  EXPECT_NEAR(conditional_phase(cz_target()), std::numbers::pi, 1e-14);
  EXPECT_NEAR(conditional_phase(ComplexMatrix::Identity(4, 4)), 0.0, 1e-14);
  const double a = 0.4, c = -1.1, phi = 2.2;
  EXPECT_NEAR(conditional_phase(diag({1.0, std::polar(1.0, c), std::polar(1.0, a), std::polar(1.0, a + c + phi)})),
              phi, 1e-13);
  EXPECT_THROW(conditional_phase(x_tensor_x()), InvalidArgument);
}

TEST(Fidelity, Targets) {
  EXPECT_LT((rotation_x(std::numbers::pi) - cd(0, -1) * pauli_x()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((rotation_x(std::numbers::pi / 2) * rotation_x(std::numbers::pi / 2) - rotation_x(std::numbers::pi))
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
  ComplexMatrix xx(4, 4);
  xx << 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0;
  EXPECT_EQ(x_tensor_x(), xx);
}

TEST(Fidelity, ProjectOntoDressedBasis) {
  const auto spec = labeled_eigensystem(default_device(), kIdleBusFrequency, std::nullopt);
  const auto b = ComputationalBasis::two_qubit(spec);
  const ComplexMatrix block = project(ComplexMatrix::Identity(64, 64), b);
  EXPECT_LT((block - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(ComputationalBasis::single(spec, ModeLabel::Qt), InvalidArgument);
}
