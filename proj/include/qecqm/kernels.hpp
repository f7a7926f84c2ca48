#pragma once

#include "qecqm/lindblad.hpp"
#include "qecqm/qec_protocol.hpp"

#include <cstdint>
#include <exception>
#include <string>
#include <vector>

namespace qecqm {

enum class Execution { serial, parallel };

/// Calls f(i) for i in [0, n) and stores results by index, so the output does
/// not depend on scheduling. The first failing index (lowest) is rethrown.
/// workers <= 0 uses the OpenMP default.
template <class F>
auto indexed_map(std::size_t n, F&& f, Execution exec, int workers = 0) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errs(n);
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        out[i] = f(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  } else {
    const int threads = workers > 0 ? workers : 0;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads != 1)
    for (std::int64_t i = 0; i < count; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
      } catch (...) {
        errs[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Minimum partial-transpose eigenvalue of the Vidal-Tarrach state on a theta x s
/// grid, row-major in theta.
std::vector<double> vt_pt_grid(const std::vector<double>& thetas, const std::vector<double>& ss, Execution exec,
                               int workers = 0);

struct ZeroDiagonalSample {
  std::size_t index = 0;
  double trace_defect = 0.0;  // |Tr G|
  std::size_t rank = 0;
  double overlap = 0.0;       // |Tr(G L)|
  bool converged = true;
};

/// Random traceless L of the given dimension, sample i drawn from stream_rng(seed, i).
std::vector<ZeroDiagonalSample> zero_diagonal_batch(std::size_t dim, std::size_t samples, std::uint64_t seed, Execution exec,
                                       int workers = 0);

struct DtScanPoint {
  double dt = 0.0;
  std::size_t rounds = 0;
  double final_trace_distance = 0.0;  // probe vs ideal evolution at the end
};

/// Runs the protocol up to total time t_final for each dt; rounds = round(t_final / dt).
std::vector<DtScanPoint> dt_scan(const DensityState& rho0, const LindbladModel& model, const RoundProtocol& protocol,
                                 const EvolutionConfig& base, double t_final, const std::vector<double>& dts,
                                 const ProtocolOptions& options, Execution exec, int workers = 0);

}  // namespace qecqm
