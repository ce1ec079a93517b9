#include <benchmark/benchmark.h>

#include "starkbus/dynamics.hpp"
#include "starkbus/fidelity.hpp"
#include "starkbus/spectrum.hpp"

using namespace starkbus;

namespace {

const StarkDrive kStark{ModeLabel::Q1, Frequency::mhz(50), Frequency::mhz(30)};

PulseSchedule x_schedule(double gate_ns) {
  PulseSchedule s;
  s.frame = kStark;
  s.gates.push_back({ModeLabel::Q1, drag_envelope(Frequency::mhz(25), gate_ns, 0.5, Frequency::mhz(-300)),
                     Frequency::mhz(40), 0.0, 0.0});
  s.duration_ns = gate_ns;
  return s;
}

} // namespace

static void BM_LabeledEigensystem(benchmark::State &state) {
  const Device d = default_device();
  const SpectrumOptions opts{static_cast<int>(state.range(0)), false};
  for (auto _ : state) benchmark::DoNotOptimize(labeled_eigensystem(d, kIdleBusFrequency, kStark, opts));
}
BENCHMARK(BM_LabeledEigensystem)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_ZZStrength(benchmark::State &state) {
  const Device d = default_device();
  for (auto _ : state) benchmark::DoNotOptimize(zz_strength(d, Frequency::ghz(5.6), kStark));
}
BENCHMARK(BM_ZZStrength)->Unit(benchmark::kMillisecond);

// One X gate, full propagator versus two columns.
static void BM_PropagateFull(benchmark::State &state) {
  const Device d = default_device();
  const auto s = x_schedule(20.0);
  StepControl c;
  c.step_ns = 0.02;
  c.certify = false;
  for (auto _ : state) benchmark::DoNotOptimize(propagate(d, s, c));
  state.counters["steps"] = 20.0 / c.step_ns;
}
BENCHMARK(BM_PropagateFull)->Unit(benchmark::kMillisecond);

static void BM_PropagateColumns(benchmark::State &state) {
  const Device d = default_device();
  const auto s = x_schedule(20.0);
  StepControl c;
  c.step_ns = 0.02;
  c.certify = false;
  ComplexMatrix cols = ComplexMatrix::Zero(64, state.range(0));
  for (Eigen::Index i = 0; i < cols.cols(); ++i) cols(i, i) = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(propagate_states(d, s, cols, c));
}
BENCHMARK(BM_PropagateColumns)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_VirtualZFidelity(benchmark::State &state) {
  const auto spec = labeled_eigensystem(default_device(), kIdleBusFrequency, kStark);
  const auto basis = ComputationalBasis::two_qubit(spec);
  ComplexMatrix block = cz_target();
  block(1, 1) = std::polar(0.999, 0.3);
  block(2, 2) = std::polar(0.998, -0.7);
  for (auto _ : state) benchmark::DoNotOptimize(average_gate_fidelity(block, cz_target(), basis));
}
BENCHMARK(BM_VirtualZFidelity);

BENCHMARK_MAIN();
