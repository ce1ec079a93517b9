#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "starkbus/dressed.hpp"
#include "starkbus/errors.hpp"

using namespace starkbus;

namespace {

double series_j0(double x, int terms) {
  double sum = 0.0, term = 1.0;
  for (int k = 0; k < terms; ++k) {
    if (k > 0) term *= -(x * x / 4.0) / (k * k);
    sum += term;
  }
  return sum;
}

NoiseChannels flat(double transverse, double longitudinal) {
  return {NoiseSpectrum{WhiteFloor{transverse}}, NoiseSpectrum{WhiteFloor{longitudinal}}};
}

} // namespace

TEST(StarkShiftFormula, ReferenceValue) {
  EXPECT_NEAR(stark_shift_perturbative(Frequency::mhz(50), Frequency::mhz(30), Frequency::mhz(-300)).in_mhz(), 10.8,
              1e-12);
}

TEST(StarkShiftFormula, TwoLevelLimit) {
  const Frequency d = Frequency::mhz(80), o = Frequency::mhz(20);
  const double two_level = o.rad_per_ns() * o.rad_per_ns() / (2 * d.rad_per_ns());
  EXPECT_NEAR(stark_shift_perturbative(d, o, Frequency::ghz(-1e6)).rad_per_ns(), two_level, 1e-6 * two_level);
}

TEST(StarkShiftFormula, QuadraticInAmplitude) {
  const Frequency d = Frequency::mhz(-70), eta = Frequency::mhz(-300);
  const double a = stark_shift_perturbative(d, Frequency::mhz(10), eta).rad_per_ns();
  const double b = stark_shift_perturbative(d, Frequency::mhz(30), eta).rad_per_ns();
  EXPECT_NEAR(b / a, 9.0, 1e-12);
}

TEST(StarkShiftFormula, PolesThrow) {
  EXPECT_THROW(stark_shift_perturbative(Frequency{}, Frequency::mhz(10), Frequency::mhz(-300)), PoleAtDetuning);
  EXPECT_THROW(stark_shift_perturbative(Frequency::mhz(300), Frequency::mhz(10), Frequency::mhz(-300)),
               PoleAtDetuning);
}

TEST(DressedQubit, AngleAndSplitting) {
  const DressedQubit q(Frequency::mhz(40), Frequency::mhz(30));
  EXPECT_NEAR(q.splitting().in_mhz(), 50.0, 1e-12);
  EXPECT_NEAR(q.theta(), std::atan2(3.0, 4.0), 1e-15);
  EXPECT_NEAR(DressedQubit(Frequency{}, Frequency::mhz(5)).theta(), std::numbers::pi / 2, 1e-15);
  EXPECT_THROW(DressedQubit(Frequency{}, Frequency{}), InvalidArgument);
}

TEST(DressedQubit, MatchesTwoByTwoDiagonalization) {
  // Frame of the drive: H = [[0, W/2], [W/2, D]] on (|g>, |e>).
  for (double o : {5.0, 20.0, 50.0}) {
    const double D = Frequency::mhz(60).rad_per_ns(), W = Frequency::mhz(o).rad_per_ns();
    Eigen::Matrix2d H;
    H << 0.0, W / 2, W / 2, D;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H);
    const DressedQubit q(Frequency::mhz(60), Frequency::mhz(o));
    EXPECT_NEAR(es.eigenvalues()(1) - es.eigenvalues()(0), q.splitting().rad_per_ns(), 1e-12);
    const Eigen::Vector2d one = es.eigenvectors().col(1);
    EXPECT_NEAR(std::abs(one(0)), q.ground_weight_of_one(), 1e-12);
    EXPECT_NEAR(std::abs(one(1)), q.excited_weight_of_one(), 1e-12);
  }
}

TEST(DressedRates, FlatSpectrumIdentities) {
  const double S = 1e-4, L = 3e-5;
  for (double o : {0.0, 10.0, 50.0, 200.0}) {
    const DressedQubit q(Frequency::mhz(50), Frequency::mhz(o));
    const double c = std::cos(q.theta()), s = std::sin(q.theta());
    const auto r = dressed_rates(flat(S, L), q, Frequency::ghz(4.95));
    EXPECT_NEAR(r.relaxation, std::numbers::pi * ((1 + c * c) / 4 * S + s * s * L), 1e-18);
    EXPECT_NEAR(r.dephasing, std::numbers::pi * (c * c * L + s * s / 4 * S), 1e-18);
  }
}

TEST(DressedRates, EqualMixingPoint) {
  const DressedQubit q(Frequency{}, Frequency::mhz(40));
  const auto r = dressed_rates(flat(2e-4, 0.0), q, Frequency::ghz(5.0));
  EXPECT_NEAR(r.relaxation, r.dephasing, 1e-18);
}

TEST(DressedRates, TimesAreInverseRates) {
  DressedRates r{1e-5, 2e-5};
  EXPECT_NEAR(r.t1_us(), 100.0, 1e-9);
  EXPECT_NEAR(r.tphi_us(), 50.0, 1e-9);
  EXPECT_TRUE(std::isinf(DressedRates{}.t1_us()));
}

TEST(Noise, LorentzianShapeAndOneSided) {
  const NoiseSpectrum s{LorentzianTLS{Frequency::ghz(5.0), Frequency::mhz(0.2), 3e-3}, WhiteFloor{1e-6}};
  EXPECT_NEAR(s(Frequency::ghz(5.0)), 3e-3 + 1e-6, 1e-15);
  EXPECT_NEAR(s(Frequency::ghz(5.0) + Frequency::mhz(0.2)), 1.5e-3 + 1e-6, 1e-12);
  EXPECT_EQ(s(Frequency::ghz(-5.0)), 0.0);
  EXPECT_EQ(NoiseSpectrum{}(Frequency::ghz(5.0)), 0.0);
}

TEST(Mitigation, UndrivenRatioIsOne) {
  const NoiseSpectrum tls{LorentzianTLS{Frequency::ghz(5.0), Frequency::mhz(0.1), 1e-3}};
  const StarkDrive s{ModeLabel::Q1, Frequency::mhz(50), Frequency{}};
  EXPECT_NEAR(mitigation_factor(tls, default_device(), s).ratio, 1.0, 1e-12);
}

TEST(Mitigation, StrongDriveMovesSidebandsOffTls) {
  // TLS on resonance with the bare qubit, narrow.
  const NoiseSpectrum tls{LorentzianTLS{Frequency::ghz(5.0), Frequency::mhz(0.1), 1e-3}};
  const StarkDrive s{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(50)};
  const auto m = mitigation_factor(tls, default_device(), s);
  EXPECT_NEAR((m.upper_sideband - Frequency::ghz(4.95)).in_mhz(), std::hypot(50.0, 50.0), 1e-9);
  EXPECT_NEAR((Frequency::ghz(4.95) - m.lower_sideband).in_mhz(), std::hypot(50.0, 50.0), 1e-9);
  EXPECT_LT(m.ratio, 1e-3);
}

TEST(Mitigation, RatioDependsOnlyOnTransverse) {
  const NoiseSpectrum tls{WhiteFloor{1e-4}};
  const StarkDrive s{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(30)};
  const auto m = mitigation_factor(tls, default_device(), s);
  const double c = std::cos(std::atan2(30.0, 50.0));
  EXPECT_NEAR(m.ratio, (1 + c * c) / 2, 1e-12);
}

TEST(FrameCoefficients, PythagoreanIdentity) {
  const DressedQubit q(Frequency::mhz(50), Frequency::mhz(30));
  const Frequency od = Frequency::mhz(20);
  for (double t = 0.0; t < 30.0; t += 1.7) {
    const auto f = dressed_frame_coefficients(od, Frequency::mhz(41), 0.3, q, t);
    const double dz = f.z - q.splitting().rad_per_ns();
    EXPECT_NEAR(dz * dz + f.x * f.x + f.y * f.y, od.rad_per_ns() * od.rad_per_ns(), 1e-14);
  }
}

TEST(FrameCoefficients, UndressedLimit) {
  const DressedQubit q(Frequency::mhz(50), Frequency{});
  const auto f = dressed_frame_coefficients(Frequency::mhz(20), Frequency::mhz(10), 0.0, q, 0.0);
  EXPECT_NEAR(f.z, Frequency::mhz(50).rad_per_ns(), 1e-15);
  EXPECT_NEAR(f.x, Frequency::mhz(20).rad_per_ns(), 1e-15);
  EXPECT_NEAR(f.y, 0.0, 1e-15);
}

TEST(EffectiveRabi, UndressedIsDriveAmplitude) {
  const DressedQubit q(Frequency::mhz(50), Frequency{});
  EXPECT_NEAR(effective_rabi(Frequency::mhz(20), Frequency::mhz(40), q).in_mhz(), 20.0, 1e-12);
  EXPECT_THROW(effective_rabi(Frequency::mhz(20), Frequency{}, q), InvalidArgument);
}

TEST(EffectiveRabi, ClosedForm) {
  const DressedQubit q(Frequency::mhz(50), Frequency::mhz(30));
  const double od = 20.0, dd = 40.0;
  const double expected = od * std::pow(std::cos(q.theta() / 2), 2) * std::cyl_bessel_j(0.0, od * std::sin(q.theta()) / dd);
  EXPECT_NEAR(effective_rabi(Frequency::mhz(od), Frequency::mhz(dd), q).in_mhz(), expected, 1e-9);
}

TEST(BesselJ0, MatchesStandardLibrary) {
  for (double x = 0.0; x <= 60.0; x += 0.173)
    EXPECT_NEAR(bessel_j0(x), std::cyl_bessel_j(0.0, x), 1e-10) << x;
}

TEST(BesselJ0, EvenFunction) {
  for (double x : {0.3, 2.0, 9.7, 15.2, 40.0}) EXPECT_EQ(bessel_j0(-x), bessel_j0(x));
}

TEST(BesselJ0, SeriesAndFirstZero) {
  EXPECT_EQ(bessel_j0(0.0), 1.0);
  for (double x : {0.1, 0.5, 1.0, 2.0, 3.0}) EXPECT_NEAR(bessel_j0(x), series_j0(x, 20), 1e-14);
  EXPECT_NEAR(bessel_j0(2.404825557695773), 0.0, 1e-12);
}

TEST(BesselJ0, ContinuousAcrossBranchSwitch) {
  EXPECT_NEAR(bessel_j0(14.0 - 1e-9), bessel_j0(14.0 + 1e-9), 1e-9);
}
