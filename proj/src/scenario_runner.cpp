#include "qecqm/scenario_runner.hpp"

#include "qecqm/errors.hpp"
#include "qecqm/kernels.hpp"
#include "qecqm/metrology.hpp"
#include "qecqm/separability.hpp"
#include "qecqm/span_codes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#ifndef QECQM_VERSION
#define QECQM_VERSION "0.0.0"
#endif

namespace qecqm {

namespace fs = std::filesystem;

namespace {

Cell num(double v) { return v; }
Cell integer(std::size_t v) { return static_cast<std::int64_t>(v); }

// Rounds sampled for QFI and scaling: the t sweep if given, otherwise every round.
std::vector<std::size_t> sample_rounds(const ScenarioConfig& cfg) {
  std::vector<std::size_t> rounds;
  if (cfg.sweeps.t.empty()) {
    for (std::size_t k = 1; k <= cfg.kappa; ++k) rounds.push_back(k);
    return rounds;
  }
  for (double t : cfg.sweeps.t) {
    const auto k = static_cast<std::size_t>(std::llround(t / cfg.dt));
    if (k < 1 || k > cfg.kappa)
      throw DomainError("sweeps.t value " + format_double(t) + " lies outside the run (kappa * dt)");
    rounds.push_back(k);
  }
  return rounds;
}

struct ProtocolRun {
  RoundProtocol protocol;
  ProtocolTrace trace;
};

Table trace_table(const ProtocolTrace& trace) {
  Table t{{"round", "t", "ideal_trace_distance", "min_pt_eigenvalue", "probe_purity", "ancilla_purity"}, {}};
  for (const auto& r : trace.rounds)
    t.rows.push_back({integer(r.round), num(r.time), num(r.ideal_trace_distance), num(r.min_pt_eigenvalue),
                      num(purity(r.probe.op())), num(purity(r.ancilla.op()))});
  return t;
}

std::vector<std::pair<double, double>> fisher_points(const ProtocolRun& run, const std::vector<std::size_t>& rounds) {
  std::vector<std::pair<double, double>> pts;
  for (auto k : rounds) {
    const auto& rec = run.trace.rounds[k - 1];
    pts.emplace_back(rec.time, qfi(rec.probe, run.protocol.ideal_generator, rec.time).fisher);
  }
  return pts;
}

Table qfi_table(const ProtocolRun& run, const std::vector<std::size_t>& rounds) {
  Table t{{"round", "t", "i_value", "fisher", "cramer_rao", "skipped_pairs"}, {}};
  for (auto k : rounds) {
    const auto& rec = run.trace.rounds[k - 1];
    const QFIResult q = qfi(rec.probe, run.protocol.ideal_generator, rec.time);
    const Cell bound = q.fisher > 0.0 ? Cell(cramer_rao(q.fisher, 1)) : Cell(std::monostate{});
    t.rows.push_back({integer(k), num(rec.time), num(q.i_value), num(q.fisher), bound, integer(q.skipped_pairs)});
  }
  return t;
}

// Local log-log slope: central differences inside, one-sided at the ends.
std::vector<double> running_exponent(const std::vector<std::pair<double, double>>& pts) {
  std::vector<double> out(pts.size(), std::nan(""));
  if (pts.size() < 2) return out;
  auto slope = [&](std::size_t a, std::size_t b) {
    const double dx = std::log(pts[b].first) - std::log(pts[a].first);
    if (dx == 0.0 || pts[a].second <= 0.0 || pts[b].second <= 0.0) return std::nan("");
    return (std::log(pts[b].second) - std::log(pts[a].second)) / dx;
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == pts.size() ? i : i + 1;
    out[i] = slope(a, b);
  }
  return out;
}

void scaling_tables(const ProtocolRun& run, const std::vector<std::size_t>& rounds, RunReport& report) {
  const auto pts = fisher_points(run, rounds);
  const auto running = running_exponent(pts);
  Table t{{"t", "fisher", "exponent_running"}, {}};
  for (std::size_t i = 0; i < pts.size(); ++i) t.rows.push_back({num(pts[i].first), num(pts[i].second), num(running[i])});
  report.tables["scaling"] = std::move(t);
  const ScalingFit fit = scaling_exponent(pts);
  Table s{{"exponent", "intercept", "r_squared", "points", "t_min", "t_max"}, {}};
  s.rows.push_back({num(fit.exponent), num(fit.intercept), num(fit.r_squared), integer(pts.size()),
                    num(fit.t_grid.front()), num(fit.t_grid.back())});
  report.tables["scaling_summary"] = std::move(s);
}

Table protocol_separability(const ProtocolTrace& trace) {
  double worst = 0.0;
  std::size_t worst_round = 0;
  for (const auto& r : trace.rounds)
    if (worst_round == 0 || r.min_pt_eigenvalue < worst) {
      worst = r.min_pt_eigenvalue;
      worst_round = r.round;
    }
  Table t{{"rounds", "min_pt_eigenvalue", "worst_round", "ppt_all_rounds"}, {}};
  t.rows.push_back({integer(trace.rounds.size()), num(worst), integer(worst_round), worst >= -kPptTol});
  return t;
}

Table vt_scan_table(const ScenarioConfig& cfg, int workers) {
  const auto& th = cfg.sweeps.theta;
  const auto& ss = cfg.sweeps.s;
  const auto verdicts = indexed_map(
      th.size() * ss.size(),
      [&](std::size_t i) {
        return ppt_check(vidal_tarrach_state(th[i / ss.size()], ss[i % ss.size()]), Bipartition::first_vs_rest());
      },
      Execution::parallel, workers);
  Table t{{"theta", "s", "threshold", "min_pt_eigenvalue", "ppt", "negativity"}, {}};
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const double theta = th[i / ss.size()];
    t.rows.push_back({num(theta), num(ss[i % ss.size()]), num(vidal_tarrach_threshold(theta)),
                      num(verdicts[i].min_pt_eigenvalue), verdicts[i].ppt, num(verdicts[i].negativity)});
  }
  return t;
}

// The (kappa+1)-qubit input state, materialized for at most four ancillae.
Table input_cuts_table(const ScenarioConfig& cfg) {
  const std::size_t k = std::min<std::size_t>(cfg.kappa, 4);
  const DensityState in = separable_input_state(cfg.initial_state.theta, cfg.initial_state.s, k);
  Table t{{"ancillae", "cut", "min_pt_eigenvalue", "ppt", "conclusive"}, {}};
  for (const auto& v : ppt_all_cuts(in))
    t.rows.push_back({integer(k), v.cut, num(v.min_pt_eigenvalue), v.ppt, v.conclusive});
  return t;
}

void kl_tables(const LindbladModel& model, RunReport& report) {
  const LindbladSpan span = build_span(model.jumps, model.dim());
  const GeneratorDecomposition dec = decompose_generator(model.generator, span);
  const SectorCodespaces codes = sector_codespaces(dec);
  Table t{{"code", "operator", "mu_re", "mu_im", "residual", "passed"}, {}};
  Table s{{"code", "passed", "max_residual", "effective_gap"}, {}};
  for (const Codespace* cs : {&codes.plus, &codes.minus, &codes.combined}) {
    const KLReport kl = check_kl_conditions(*cs, model.jumps);
    double worst = 0.0;
    for (const auto& r : kl.records) {
      t.rows.push_back({to_string(cs->label), r.tag, num(r.mu.real()), num(r.mu.imag()), num(r.residual),
                        r.residual <= kl.tolerance});
      worst = std::max(worst, r.residual);
    }
    s.rows.push_back({to_string(cs->label), kl.passed, num(worst), num(effective_generator(*cs, model.generator).gap)});
  }
  report.tables["kl_report"] = std::move(t);
  report.tables["kl_report_summary"] = std::move(s);
}

Table span_table(const LindbladModel& model) {
  const LindbladSpan span = build_span(model.jumps, model.dim());
  const GeneratorDecomposition dec = decompose_generator(model.generator, span);
  Table t{{"span_dim", "generator_norm", "parallel_norm", "perp_norm", "perp_rank", "lambda", "hs_achievable"}, {}};
  t.rows.push_back({integer(span.dim()), num(model.generator.norm()), num(dec.g_parallel.norm()), num(dec.perp_norm),
                    integer(dec.perp_rank), dec.lambda ? Cell(*dec.lambda) : Cell(std::monostate{}),
                    hs_achievable(model.generator, span)});
  return t;
}

Table noise_generator_table(const ScenarioConfig& cfg, std::uint64_t seed, int workers) {
  const NoiseGeneratorSpec spec = cfg.noise_generator.value_or(NoiseGeneratorSpec{{2, 3, 4}, 100});
  Table t{{"dim", "samples", "converged", "max_trace_defect", "max_overlap", "all_rank_two"}, {}};
  for (std::size_t d : spec.dims) {
    const auto batch = zero_diagonal_batch(d, spec.samples, seed + d, Execution::parallel, workers);
    std::size_t converged = 0;
    double max_tr = 0.0, max_ov = 0.0;
    bool rank2 = true;
    for (const auto& s : batch) {
      if (!s.converged) continue;
      ++converged;
      max_tr = std::max(max_tr, s.trace_defect);
      max_ov = std::max(max_ov, s.overlap);
      rank2 = rank2 && s.rank == 2;
    }
    t.rows.push_back({integer(d), integer(spec.samples), integer(converged), num(max_tr), num(max_ov),
                      rank2 && converged == spec.samples});
  }
  return t;
}

}  // namespace

std::string config_hash(const ScenarioConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(serialize_config(cfg))));
  return buf;
}

RunReport run_scenario(const ScenarioConfig& input, const RunOptions& options) {
  ScenarioConfig cfg = input;
  if (options.seed) cfg.seed = *options.seed;

  RunReport report;
  report.scenario = cfg.name;
  report.requested = cfg.outputs;
  report.provenance = Provenance{config_hash(cfg), QECQM_VERSION, cfg.seed};
  if (cfg.outputs.empty()) return report;

  std::optional<ResolvedScenario> sc;
  try {
    sc = resolve_scenario(cfg);
  } catch (const std::exception& e) {
    for (const auto& o : cfg.outputs) report.errors[o] = std::string("resolving scenario: ") + e.what();
    return report;
  }

  // The protocol trace is shared by trace, qfi, scaling and separability.
  std::optional<ProtocolRun> run;
  std::string run_error;
  auto need_run = [&]() -> const ProtocolRun& {
    if (!run && run_error.empty()) {
      try {
        RoundProtocol protocol = make_protocol(cfg.protocol, sc->model);
        protocol.ancilla_refresh = cfg.ancilla_refresh;
        ProtocolTrace trace =
            run_protocol(sc->rho0, sc->model, protocol, sc->evolution, cfg.kappa, ProtocolOptions{sc->white_noise_s});
        run = ProtocolRun{std::move(protocol), std::move(trace)};
      } catch (const std::exception& e) {
        run_error = std::string("running protocol: ") + e.what();
      }
    }
    if (!run) throw std::runtime_error(run_error);
    return *run;
  };

  const std::map<std::string, std::function<void()>> analyses{
      {"trace", [&] { report.tables["trace"] = trace_table(need_run().trace); }},
      {"qfi", [&] { report.tables["qfi"] = qfi_table(need_run(), sample_rounds(cfg)); }},
      {"scaling", [&] { scaling_tables(need_run(), sample_rounds(cfg), report); }},
      {"separability",
       [&] {
         const bool scan = !cfg.sweeps.theta.empty() && !cfg.sweeps.s.empty();
         if (scan) report.tables["separability"] = vt_scan_table(cfg, options.workers);
         if (cfg.initial_state.kind == StateSpec::Kind::separable_mixture)
           report.tables["separability_input"] = input_cuts_table(cfg);
         report.tables[scan ? "separability_rounds" : "separability"] = protocol_separability(need_run().trace);
       }},
      {"kl_report", [&] { kl_tables(sc->model, report); }},
      {"span_report", [&] { report.tables["span_report"] = span_table(sc->model); }},
      {"noise_generator",
       [&] { report.tables["noise_generator"] = noise_generator_table(cfg, cfg.seed, options.workers); }},
      {"dt_scan",
       [&] {
         if (cfg.sweeps.dt.empty()) throw DomainError("dt_scan needs sweeps.dt");
         RoundProtocol protocol = make_protocol(cfg.protocol, sc->model);
         protocol.ancilla_refresh = cfg.ancilla_refresh;
         const auto pts = dt_scan(sc->rho0, sc->model, protocol, sc->evolution, cfg.kappa * cfg.dt, cfg.sweeps.dt,
                                  ProtocolOptions{sc->white_noise_s}, Execution::parallel, options.workers);
         Table t{{"dt", "rounds", "final_trace_distance"}, {}};
         for (const auto& p : pts) t.rows.push_back({num(p.dt), integer(p.rounds), num(p.final_trace_distance)});
         report.tables["dt_scan"] = std::move(t);
       }},
  };

  for (const auto& name : cfg.outputs) {
    try {
      analyses.at(name)();
    } catch (const std::exception& e) {
      report.errors[name] = e.what();
    }
  }
  return report;
}

std::vector<CorpusEntry> run_corpus(const CorpusOptions& options) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(options.scenario_dir, ec))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  if (ec) throw IoError("cannot list scenario directory '" + options.scenario_dir + "': " + ec.message());
  std::sort(files.begin(), files.end());

  auto read = [](const fs::path& p) -> std::optional<std::string> {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  // Scenarios run concurrently; each writes only its own report file.
  return indexed_map(
      files.size(),
      [&](std::size_t i) {
        CorpusEntry e;
        e.scenario = files[i].stem().string();
        try {
          const ScenarioConfig cfg = load_config(files[i].string());
          e.scenario = cfg.name;
          const RunReport report = run_scenario(cfg, RunOptions{std::nullopt, 1});
          e.report_path = emit_report(report, options.out_dir, ReportFormat::json).front();
          if (options.golden_dir.empty()) {
            e.matched = true;
            e.message = "written";
            return e;
          }
          const fs::path golden = fs::path(options.golden_dir) / (cfg.name + ".json");
          const std::string produced = report_to_json(report);
          if (options.update) {
            fs::create_directories(golden.parent_path());
            std::ofstream out(golden, std::ios::binary | std::ios::trunc);
            out << produced;
            e.matched = static_cast<bool>(out);
            e.message = e.matched ? "golden updated" : "cannot write golden file";
            return e;
          }
          const auto expected = read(golden);
          if (!expected) e.message = "missing golden file " + golden.string();
          else if (*expected != produced) e.message = "differs from " + golden.string();
          else {
            e.matched = true;
            e.message = "matches golden";
          }
        } catch (const std::exception& ex) {
          e.message = ex.what();
        }
        return e;
      },
      Execution::parallel, options.workers);
}

}  // namespace qecqm
