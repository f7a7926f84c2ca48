#include "qecqm/kernels.hpp"
#include "qecqm/qec_protocol.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using qecqm::Execution;

std::vector<double> grid(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

void BM_VtPtGrid(benchmark::State& state, Execution exec) {
  const auto thetas = grid(0.0, M_PI / 2, 50);
  const auto ss = grid(0.0, 3.0, 50);
  for (auto _ : state) benchmark::DoNotOptimize(qecqm::vt_pt_grid(thetas, ss, exec));
}

void BM_ZeroDiagonalBatch(benchmark::State& state, Execution exec) {
  for (auto _ : state) benchmark::DoNotOptimize(qecqm::zero_diagonal_batch(4, 100, 7, exec));
}

void BM_DtScan(benchmark::State& state, Execution exec) {
  qecqm::LindbladModel model{qecqm::named::pauli_z(), 1.0, {qecqm::named::pauli_x()}};
  const auto protocol = qecqm::make_cnot_protocol(model);
  const auto rho0 = qecqm::DensityState::from_ket(qecqm::named::ket_plus());
  const std::vector<double> dts{0.02, 0.01, 0.005, 0.0025};
  for (auto _ : state)
    benchmark::DoNotOptimize(qecqm::dt_scan(rho0, model, protocol, {}, 1.0, dts, {}, exec));
}

}  // namespace

BENCHMARK_CAPTURE(BM_VtPtGrid, serial, Execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_VtPtGrid, parallel, Execution::parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ZeroDiagonalBatch, serial, Execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ZeroDiagonalBatch, parallel, Execution::parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_DtScan, serial, Execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_DtScan, parallel, Execution::parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
