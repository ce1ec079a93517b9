#include "starkbus/dynamics.hpp"

#include <cmath>
#include <complex>
#include <iomanip>
#include <sstream>

#include <Eigen/SVD>

#include "starkbus/errors.hpp"

namespace starkbus {

namespace {

using cd = std::complex<double>;
using RowSparse = Eigen::SparseMatrix<cd, Eigen::RowMajor>;

// All time-dependent pieces of H(t) live on one fixed sparsity pattern, so
// assembling a step is a handful of axpy operations on the value array.
class Generator {
public:
  Generator(const Device &device, const PulseSchedule &schedule)
      : device_(device), schedule_(schedule), terms_(device.levels_per_mode) {
    device.validate();
    schedule.validate(device);
    const auto dim = static_cast<Eigen::Index>(terms_.dimension);
    const Frequency frame = frame_frequency(device, schedule.frame);

    SparseOperator pattern(dim, dim);
    pattern.setIdentity();
    pattern += terms_.exchange[0] + terms_.exchange[1];
    if (schedule.frame) {
      const auto s = mode_index(schedule.frame->target);
      pattern += terms_.lowering[s] + terms_.raising[s];
    }
    for (const auto &g : schedule.gates) {
      const auto q = mode_index(g.target);
      pattern += terms_.lowering[q] + terms_.raising[q];
    }
    h_ = RowSparse(pattern);
    h_.makeCompressed();
    const Eigen::Index nnz = h_.nonZeros();

    // Static diagonal without the bus frequency; the bus number operator is
    // added with weight omega_t(t) each step.
    Eigen::VectorXd base = Eigen::VectorXd::Zero(dim);
    for (ModeLabel m : kModeOrder) {
      const auto i = mode_index(m);
      const Frequency w = m == ModeLabel::Qt ? Frequency{} : device.mode(m).frequency;
      base += (w - frame).rad_per_ns() * terms_.number[i] +
              device.mode(m).anharmonicity.rad_per_ns() * terms_.anharmonic[i];
    }
    diag_base_ = Eigen::VectorXcd::Zero(nnz);
    diag_bus_ = Eigen::VectorXcd::Zero(nnz);
    const auto &nt = terms_.number[mode_index(ModeLabel::Qt)];
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index p = h_.outerIndexPtr()[r]; p < h_.outerIndexPtr()[r + 1]; ++p)
        if (h_.innerIndexPtr()[p] == r) {
          diag_base_(p) = base(r);
          diag_bus_(p) = nt(r);
        }
    exchange_[0] = aligned(terms_.exchange[0]);
    exchange_[1] = aligned(terms_.exchange[1]);
    if (schedule.frame) {
      const auto s = mode_index(schedule.frame->target);
      stark_ = aligned(terms_.lowering[s] + terms_.raising[s]);
    }
    for (const auto &g : schedule.gates) {
      const auto q = mode_index(g.target);
      raise_.push_back(aligned(terms_.raising[q]));
      lower_.push_back(aligned(terms_.lowering[q]));
    }
  }

  // Fills the value array of the pattern with H(t).
  const RowSparse &at(double t) {
    const Frequency bus = schedule_.bus(t);
    Eigen::Map<Eigen::VectorXcd> v(h_.valuePtr(), h_.nonZeros());
    v = diag_base_ + bus.rad_per_ns() * diag_bus_;
    v += coupling_at(device_, ModeLabel::Q1, bus).rad_per_ns() * exchange_[0];
    v += coupling_at(device_, ModeLabel::Q2, bus).rad_per_ns() * exchange_[1];
    if (schedule_.frame) {
      const double a = schedule_.stark_amplitude(t);
      if (a != 0.0) v += 0.5 * a * stark_;
    }
    for (std::size_t k = 0; k < schedule_.gates.size(); ++k) {
      const GateChannel &g = schedule_.gates[k];
      const cd env = g.envelope(t - g.start_ns);
      if (env == cd{}) continue;
      const cd c = 0.5 * env * std::exp(cd(0.0, -(g.detuning.rad_per_ns() * t + g.phase)));
      v += c * raise_[k] + std::conj(c) * lower_[k];
    }
    return h_;
  }

  std::size_t dimension() const { return terms_.dimension; }

private:
  Eigen::VectorXcd aligned(const SparseOperator &op) const {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(h_.nonZeros());
    for (Eigen::Index r = 0; r < h_.outerSize(); ++r)
      for (Eigen::Index p = h_.outerIndexPtr()[r]; p < h_.outerIndexPtr()[r + 1]; ++p)
        out(p) = op.coeff(r, h_.innerIndexPtr()[p]);
    return out;
  }

  const Device &device_;
  const PulseSchedule &schedule_;
  LadderTerms terms_;
  RowSparse h_;
  Eigen::VectorXcd diag_base_, diag_bus_;
  std::array<Eigen::VectorXcd, 2> exchange_;
  Eigen::VectorXcd stark_;
  std::vector<Eigen::VectorXcd> raise_, lower_;
};

// y = H x for a row-major sparse H and dense block x.
void apply(const RowSparse &h, const ComplexMatrix &x, ComplexMatrix &y) {
  const Eigen::Index k = x.cols();
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index r = 0; r < h.outerSize(); ++r) {
      cd acc{};
      for (RowSparse::InnerIterator it(h, r); it; ++it) acc += it.value() * x(it.col(), j);
      y(r, j) = acc;
    }
}

// x <- exp(-i H h) x by a truncated Taylor series on the shifted generator
// H - mu, substepping so each substep has norm <= 1.
void exponential_step(const RowSparse &h, double dt, ComplexMatrix &x, ComplexMatrix &term, ComplexMatrix &tmp) {
  double lo = INFINITY, hi = -INFINITY, row_norm = 0.0;
  for (Eigen::Index r = 0; r < h.outerSize(); ++r) {
    double sum = 0.0;
    for (RowSparse::InnerIterator it(h, r); it; ++it) {
      if (it.col() == r) {
        lo = std::min(lo, it.value().real());
        hi = std::max(hi, it.value().real());
      }
      sum += std::abs(it.value());
    }
    row_norm = std::max(row_norm, sum);
  }
  const double mu = 0.5 * (lo + hi);
  const double norm = (row_norm + std::abs(mu)) * dt;
  const int substeps = std::max(1, static_cast<int>(std::ceil(norm)));
  const double tau = dt / substeps;
  const cd phase = std::exp(cd(0.0, -mu * dt));
  for (int s = 0; s < substeps; ++s) {
    term = x;
    for (int n = 1; n < 40; ++n) {
      apply(h, term, tmp);
      tmp -= mu * term;
      term = tmp * cd(0.0, -tau / n);
      x += term;
      if (term.cwiseAbs().maxCoeff() < 1e-17) break;
    }
  }
  x *= phase;
}

struct RunOutput {
  ComplexMatrix states;
  std::optional<Trajectory> trajectory;
};

RunOutput run(const Device &device, const PulseSchedule &schedule, const ComplexMatrix &initial, double start,
              double end, double step, const StepControl &control) {
  Generator gen(device, schedule);
  RunOutput out;
  out.states = initial;
  const double span = end - start;
  const int n = span > 0.0 ? std::max(1, static_cast<int>(std::ceil(span / step - 1e-9))) : 0;
  const double h = n > 0 ? span / n : 0.0;
  int every = 0;
  if (control.record_trajectory) {
    out.trajectory.emplace();
    every = h > 0.0 ? std::max(1, static_cast<int>(std::lround(control.sample_interval_ns / h))) : 1;
    out.trajectory->times_ns.push_back(start);
    out.trajectory->states.push_back(out.states);
  }
  ComplexMatrix term(initial.rows(), initial.cols()), tmp(initial.rows(), initial.cols());
  for (int i = 0; i < n; ++i) {
    const double mid = start + (i + 0.5) * h;
    exponential_step(gen.at(mid), h, out.states, term, tmp);
    if (out.trajectory && ((i + 1) % every == 0 || i + 1 == n)) {
      out.trajectory->times_ns.push_back(start + (i + 1) * h);
      out.trajectory->states.push_back(out.states);
    }
  }
  return out;
}

double spectral_norm(const ComplexMatrix &m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

EvolutionResult evolve(const Device &device, const PulseSchedule &schedule, const ComplexMatrix &initial,
                       const StepControl &control, double start, double end) {
  if (!(control.step_ns > 0.0)) throw InvalidArgument("step must be positive");
  if (end < start) throw InvalidArgument("evolution window must not run backwards");
  EvolutionResult result;
  result.start_ns = start;
  result.end_ns = end;
  double step = control.step_ns;
  RunOutput coarse = run(device, schedule, initial, start, end, step, control);
  if (!control.certify || end == start) {
    result.states = std::move(coarse.states);
    result.trajectory = std::move(coarse.trajectory);
    result.certificate.step_ns = step;
    return result;
  }
  for (int halving = 1; halving <= control.max_halvings; ++halving) {
    step *= 0.5;
    RunOutput fine = run(device, schedule, initial, start, end, step, control);
    const double diff = spectral_norm(fine.states - coarse.states);
    result.certificate = Certificate{true, step, diff, halving};
    if (diff <= control.tolerance) {
      result.states = std::move(fine.states);
      result.trajectory = std::move(fine.trajectory);
      return result;
    }
    coarse = std::move(fine);
  }
  std::ostringstream msg;
  msg << "propagation did not converge: |U_h - U_h/2| = " << std::scientific << std::setprecision(3)
      << result.certificate.difference << " at step " << step << " ns after " << control.max_halvings
      << " step halvings";
  throw ConvergenceError(msg.str());
}

PopulationTable project(const EvolutionResult &result, const ComplexMatrix &basis, std::vector<BareLabel> labels,
                        int column) {
  if (!result.trajectory) throw InvalidArgument("no trajectory was recorded");
  const auto &traj = *result.trajectory;
  if (column < 0 || traj.states.empty() || column >= traj.states.front().cols())
    throw InvalidArgument("trajectory column out of range");
  PopulationTable t;
  t.times_ns = traj.times_ns;
  t.labels = std::move(labels);
  t.values.resize(static_cast<Eigen::Index>(traj.states.size()), basis.cols());
  for (std::size_t i = 0; i < traj.states.size(); ++i)
    t.values.row(static_cast<Eigen::Index>(i)) =
        (basis.adjoint() * traj.states[i].col(column)).cwiseAbs2().transpose();
  return t;
}

} // namespace

EvolutionResult propagate(const Device &device, const PulseSchedule &schedule, const StepControl &control) {
  return propagate(device, schedule, control, 0.0, schedule.duration_ns);
}

EvolutionResult propagate(const Device &device, const PulseSchedule &schedule, const StepControl &control,
                          double start_ns, double end_ns) {
  const auto dim = static_cast<Eigen::Index>(device.dimension());
  return evolve(device, schedule, ComplexMatrix::Identity(dim, dim), control, start_ns, end_ns);
}

EvolutionResult propagate_states(const Device &device, const PulseSchedule &schedule, const ComplexMatrix &initial,
                                 const StepControl &control) {
  if (initial.rows() != static_cast<Eigen::Index>(device.dimension()))
    throw InvalidArgument("initial states do not match the Hilbert space dimension");
  return evolve(device, schedule, initial, control, 0.0, schedule.duration_ns);
}

HermitianOperator instantaneous_hamiltonian(const Device &device, const PulseSchedule &schedule, double t_ns) {
  Generator gen(device, schedule);
  return HermitianOperator(ComplexMatrix(gen.at(t_ns)));
}

double unitarity_defect(const ComplexMatrix &u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

PopulationTable bare_populations(const EvolutionResult &result, int levels, int column) {
  const auto dim = static_cast<Eigen::Index>(levels) * levels * levels;
  std::vector<BareLabel> labels;
  for (Eigen::Index i = 0; i < dim; ++i) labels.push_back(basis_label(static_cast<std::size_t>(i), levels));
  return project(result, ComplexMatrix::Identity(dim, dim), std::move(labels), column);
}

PopulationTable dressed_populations(const EvolutionResult &result, const LabeledSpectrum &basis, int column) {
  std::vector<BareLabel> labels;
  for (const auto &e : basis.entries()) labels.push_back(e.label);
  return project(result, basis.vectors(labels), labels, column);
}

} // namespace starkbus
