#include "starkbus/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "starkbus/assignment.hpp"
#include "starkbus/errors.hpp"
#include "starkbus/parallel.hpp"

namespace starkbus {

namespace {

std::string format_label(const BareLabel &l) {
  std::ostringstream os;
  os << '|' << l[0] << l[1] << l[2] << '>';
  return os.str();
}

constexpr std::array<BareLabel, 4> kTwoQubitLabels{
    BareLabel{0, 0, 0}, BareLabel{0, 0, 1}, BareLabel{1, 0, 0}, BareLabel{1, 0, 1}};

constexpr BareLabel kPair101{1, 0, 1};
constexpr BareLabel kPair020{0, 2, 0};

} // namespace

LabeledSpectrum::LabeledSpectrum(int levels, std::vector<LabeledState> entries)
    : levels_(levels), entries_(std::move(entries)) {}

const LabeledState &LabeledSpectrum::state(const BareLabel &label) const {
  const std::size_t i = basis_index(label, levels_);
  if (i >= entries_.size()) throw InvalidArgument("label " + format_label(label) + " not in spectrum");
  return entries_[i];
}

Frequency LabeledSpectrum::energy(const BareLabel &label) const {
  return Frequency::angular(state(label).energy);
}

std::vector<BareLabel> LabeledSpectrum::flagged_labels() const {
  std::vector<BareLabel> out;
  for (const auto &e : entries_)
    if (e.flagged()) out.push_back(e.label);
  return out;
}

void LabeledSpectrum::require(std::span<const BareLabel> labels) const {
  for (const auto &l : labels) {
    const auto &s = state(l);
    if (s.flagged()) {
      std::ostringstream os;
      os << "ambiguous label " << format_label(l) << " (overlap " << s.overlap << " < "
         << kAmbiguityThreshold << ")";
      throw AmbiguousLabel(os.str());
    }
  }
}

ComplexMatrix LabeledSpectrum::vectors(std::span<const BareLabel> labels) const {
  const auto dim = static_cast<Eigen::Index>(entries_.size());
  ComplexMatrix out(dim, static_cast<Eigen::Index>(labels.size()));
  for (std::size_t j = 0; j < labels.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = state(labels[j]).vector;
  return out;
}

LabeledSpectrum labeled_eigensystem(const HermitianOperator &hamiltonian, int levels,
                                    const SpectrumOptions &options) {
  const ComplexMatrix &h = hamiltonian.matrix();
  const Eigen::Index dim = h.rows();
  if (static_cast<std::size_t>(dim) != static_cast<std::size_t>(levels) * levels * levels)
    throw InvalidArgument("Hamiltonian dimension does not match levels^3");
  if (options.continuation_steps < 1) throw InvalidArgument("continuation_steps must be >= 1");

  const Eigen::VectorXd diag = h.diagonal().real();
  ComplexMatrix off = h;
  off.diagonal().setZero();

  // At zero coupling the bare states are the eigenvectors, including inside
  // degenerate subspaces.
  ComplexMatrix tracked = ComplexMatrix::Identity(dim, dim);
  Eigen::VectorXd energies = diag;

  // Every term of the static Hamiltonian is real in the bare basis, so the
  // cheaper real symmetric solver applies whenever the imaginary part vanishes.
  const bool real_valued = h.imag().cwiseAbs().maxCoeff() == 0.0;
  const Eigen::MatrixXd off_re = off.real();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> real_solver;
  const bool has_off_diagonal = off.cwiseAbs().maxCoeff() > 0.0;
  if (has_off_diagonal) {
    for (int step = 1; step <= options.continuation_steps; ++step) {
      const double s = static_cast<double>(step) / options.continuation_steps;
      ComplexMatrix vecs;
      Eigen::VectorXd values;
      if (real_valued) {
        Eigen::MatrixXd hs = s * off_re;
        hs.diagonal() = diag;
        real_solver.compute(hs, Eigen::ComputeEigenvectors);
        if (real_solver.info() != Eigen::Success) throw ConvergenceError("symmetric eigensolver failed");
        vecs = real_solver.eigenvectors().cast<std::complex<double>>();
        values = real_solver.eigenvalues();
      } else {
        ComplexMatrix hs = s * off;
        hs.diagonal() = diag.cast<std::complex<double>>();
        solver.compute(hs, Eigen::ComputeEigenvectors);
        if (solver.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver failed");
        vecs = solver.eigenvectors();
        values = solver.eigenvalues();
      }
      const Eigen::MatrixXd weights = (tracked.adjoint() * vecs).cwiseAbs2();
      const std::vector<int> column = max_weight_assignment(weights);
      ComplexMatrix next(dim, dim);
      Eigen::VectorXd next_e(dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        next.col(i) = vecs.col(column[static_cast<std::size_t>(i)]);
        next_e(i) = values(column[static_cast<std::size_t>(i)]);
      }
      tracked = std::move(next);
      energies = std::move(next_e);
    }
  }

  std::vector<LabeledState> entries;
  entries.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    ComplexVector v = tracked.col(i);
    const std::complex<double> amp = v(i);
    if (std::abs(amp) > 0.0) v *= std::conj(amp) / std::abs(amp);
    LabeledState st;
    st.label = basis_label(static_cast<std::size_t>(i), levels);
    st.energy = energies(i);
    st.overlap = std::norm(amp);
    st.vector = std::move(v);
    entries.push_back(std::move(st));
  }
  LabeledSpectrum spectrum(levels, std::move(entries));
  if (options.strict) {
    const auto flagged = spectrum.flagged_labels();
    if (!flagged.empty()) spectrum.require(std::span<const BareLabel>(flagged.data(), 1));
  }
  return spectrum;
}

LabeledSpectrum labeled_eigensystem(const Device &device, Frequency bus_frequency,
                                    const std::optional<StarkDrive> &stark,
                                    const SpectrumOptions &options) {
  return labeled_eigensystem(static_hamiltonian(device, bus_frequency, stark),
                             device.levels_per_mode, options);
}

Frequency zz_strength(const LabeledSpectrum &spectrum) {
  spectrum.require(kTwoQubitLabels);
  return (spectrum.energy({1, 0, 1}) - spectrum.energy({1, 0, 0})) -
         (spectrum.energy({0, 0, 1}) - spectrum.energy({0, 0, 0}));
}

Frequency zz_strength(const Device &device, Frequency bus_frequency,
                      const std::optional<StarkDrive> &stark, const SpectrumOptions &options) {
  SpectrumOptions lenient = options;
  lenient.strict = false;
  return zz_strength(labeled_eigensystem(device, bus_frequency, stark, lenient));
}

BareLabel excited_label(ModeLabel qubit) {
  BareLabel l{0, 0, 0};
  l[mode_index(qubit)] = 1;
  return l;
}

Frequency stark_shift_numeric(const Device &device, const StarkDrive &stark,
                              Frequency bus_frequency, const SpectrumOptions &options) {
  stark.validate(device);
  SpectrumOptions lenient = options;
  lenient.strict = false;
  const BareLabel excited = excited_label(stark.target);
  const std::array<BareLabel, 2> labels{kGroundLabel, excited};

  auto transition = [&](const StarkDrive &drive) {
    const auto spec = labeled_eigensystem(device, bus_frequency, drive, lenient);
    spec.require(labels);
    return spec.energy(excited) - spec.energy(kGroundLabel);
  };
  if (stark.amplitude.rad_per_ns() == 0.0) return Frequency{};
  StarkDrive undriven = stark;
  undriven.amplitude = Frequency{};
  return transition(stark) - transition(undriven);
}

Frequency cz_pair_gap(const Device &device, Frequency bus_frequency,
                      const std::optional<StarkDrive> &stark, const SpectrumOptions &options) {
  SpectrumOptions lenient = options;
  lenient.strict = false;
  const auto spec = labeled_eigensystem(device, bus_frequency, stark, lenient);
  return abs(spec.energy(kPair101) - spec.energy(kPair020));
}

CzResonance find_cz_resonance(const Device &device, const std::optional<StarkDrive> &stark,
                              const ResonanceWindow &window, const SpectrumOptions &options) {
  if (!(window.lower < window.upper)) throw InvalidArgument("empty resonance search window");
  constexpr int kCoarse = 41;
  const Frequency resolution = Frequency::khz(10.0);
  // A minimum narrower than this cannot be told apart from an exact crossing.
  const Frequency min_resolvable_gap = Frequency::khz(50.0);

  auto gap = [&](Frequency w) { return cz_pair_gap(device, w, stark, options).rad_per_ns(); };
  const Frequency step = (window.upper - window.lower) / (kCoarse - 1);
  std::vector<double> coarse(kCoarse);
  for (int i = 0; i < kCoarse; ++i) coarse[static_cast<std::size_t>(i)] = gap(window.lower + step * i);
  const auto best = static_cast<int>(std::min_element(coarse.begin(), coarse.end()) - coarse.begin());
  if (best == 0 || best == kCoarse - 1)
    throw NoAntiCrossing("|101>/|020> gap is monotone over the search window");

  // Golden-section search on the bracketing interval.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = (window.lower + step * (best - 1)).rad_per_ns();
  double b = (window.lower + step * (best + 1)).rad_per_ns();
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = gap(Frequency::angular(c));
  double fd = gap(Frequency::angular(d));
  while (b - a > resolution.rad_per_ns()) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = gap(Frequency::angular(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = gap(Frequency::angular(d));
    }
  }
  const double x = fc < fd ? c : d;
  const double g = std::min(fc, fd);
  if (g < min_resolvable_gap.rad_per_ns())
    throw NoAntiCrossing("|101>/|020> levels cross without a resolvable gap");
  return CzResonance{Frequency::angular(x), Frequency::angular(0.5 * g)};
}

double amplitude_fraction(AmplitudeRule rule) {
  switch (rule) {
  case AmplitudeRule::Full: return 1.0;
  case AmplitudeRule::Half: return 0.5;
  case AmplitudeRule::Quarter: return 0.25;
  }
  return 1.0;
}

std::vector<ZZPoint> zz_landscape(const Device &device, const LandscapeGrid &grid, int workers,
                                  const SpectrumOptions &options) {
  if (grid.bus_frequencies.empty() || grid.detunings.empty())
    throw InvalidArgument("landscape grids must be non-empty");
  device.validate();
  const std::size_t nd = grid.detunings.size();
  std::vector<ZZPoint> out(grid.bus_frequencies.size() * nd);
  SpectrumOptions lenient = options;
  lenient.strict = false;
  parallel_for(out.size(), workers, [&](std::size_t k) {
    ZZPoint p;
    p.bus_frequency = grid.bus_frequencies[k / nd];
    p.detuning = grid.detunings[k % nd];
    p.amplitude = abs(p.detuning) * amplitude_fraction(grid.rule);
    const StarkDrive drive{grid.target, p.detuning, p.amplitude};
    const auto spec = labeled_eigensystem(device, p.bus_frequency, drive, lenient);
    try {
      p.zeta = zz_strength(spec);
    } catch (const AmbiguousLabel &) {
      p.flagged = true;
      p.zeta = (spec.energy({1, 0, 1}) - spec.energy({1, 0, 0})) -
               (spec.energy({0, 0, 1}) - spec.energy({0, 0, 0}));
    }
    out[k] = p;
  });
  return out;
}

} // namespace starkbus
