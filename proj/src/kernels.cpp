#include "qecqm/kernels.hpp"

#include "qecqm/errors.hpp"
#include "qecqm/random_ops.hpp"
#include "qecqm/separability.hpp"
#include "qecqm/span_codes.hpp"

#include <cmath>

namespace qecqm {

std::vector<double> vt_pt_grid(const std::vector<double>& thetas, const std::vector<double>& ss, Execution exec,
                               int workers) {
  const std::size_t ns = ss.size();
  return indexed_map(
      thetas.size() * ns,
      [&](std::size_t i) {
        return ppt_check(vidal_tarrach_state(thetas[i / ns], ss[i % ns]), Bipartition::first_vs_rest())
            .min_pt_eigenvalue;
      },
      exec, workers);
}

std::vector<ZeroDiagonalSample> zero_diagonal_batch(std::size_t dim, std::size_t samples, std::uint64_t seed, Execution exec,
                                       int workers) {
  if (dim < 2) throw DomainError("zero_diagonal_batch: dimension must be at least 2");
  return indexed_map(
      samples,
      [&](std::size_t i) {
        Rng rng = stream_rng(seed, i);
        const ComplexOperator l = random_traceless(dim, rng);
        ZeroDiagonalSample s;
        s.index = i;
        try {
          const ComplexOperator g = construct_generator_from_noise(l, seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
          s.trace_defect = std::abs(g.trace());
          s.rank = numerical_rank(g);
          s.overlap = std::abs((g * l).trace());
        } catch (const ConvergenceError&) {
          s.converged = false;
        }
        return s;
      },
      exec, workers);
}

std::vector<DtScanPoint> dt_scan(const DensityState& rho0, const LindbladModel& model, const RoundProtocol& protocol,
                                 const EvolutionConfig& base, double t_final, const std::vector<double>& dts,
                                 const ProtocolOptions& options, Execution exec, int workers) {
  if (!(t_final > 0.0)) throw DomainError("dt_scan: t_final must be positive");
  return indexed_map(
      dts.size(),
      [&](std::size_t i) {
        const double dt = dts[i];
        if (!(dt > 0.0)) throw DomainError("dt_scan: dt must be positive");
        const auto rounds = static_cast<std::size_t>(std::llround(t_final / dt));
        if (rounds < 1) throw DomainError("dt_scan: dt exceeds the total time");
        EvolutionConfig cfg = base;
        cfg.dt = dt;
        const ProtocolTrace trace = run_protocol(rho0, model, protocol, cfg, rounds, options);
        return DtScanPoint{dt, rounds, trace.rounds.back().ideal_trace_distance};
      },
      exec, workers);
}

}  // namespace qecqm
