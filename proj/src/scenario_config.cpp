#include "qecqm/scenario_config.hpp"

#include "qecqm/errors.hpp"
#include "qecqm/span_codes.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qecqm {

using json = nlohmann::json;

std::string to_string(Integrator method) {
  return method == Integrator::runge_kutta_4 ? "runge_kutta_4" : "liouvillian_exponential";
}

const std::vector<std::string>& known_outputs() {
  static const std::vector<std::string> names{"trace",      "qfi",        "scaling",       "separability",
                                              "kl_report",  "span_report", "noise_generator", "dt_scan"};
  return names;
}

namespace {

bool is_pauli_string(const std::string& s) {
  return !s.empty() && s.size() <= 8 &&
         std::all_of(s.begin(), s.end(), [](char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; });
}

ComplexOperator pauli_string_operator(const std::string& s) {
  std::vector<ComplexOperator> factors;
  for (char c : s) {
    switch (c) {
      case 'I': factors.push_back(named::identity(2)); break;
      case 'X': factors.push_back(named::pauli_x()); break;
      case 'Y': factors.push_back(named::pauli_y()); break;
      default: factors.push_back(named::pauli_z()); break;
    }
  }
  return tensor_product(factors);
}

// Collects every problem instead of stopping at the first.
class Parser {
 public:
  std::vector<std::string> issues;

  void issue(const std::string& path, const std::string& msg) { issues.push_back(path + ": " + msg); }

  std::optional<double> number(const json& j, const std::string& path) {
    if (!j.is_number()) {
      issue(path, "expected a number");
      return std::nullopt;
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      issue(path, "must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::uint64_t> unsigned_int(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
      issue(path, "must be nonnegative");
      return std::nullopt;
    }
    issue(path, "expected an integer");
    return std::nullopt;
  }

  std::optional<std::string> string(const json& j, const std::string& path) {
    if (!j.is_string()) {
      issue(path, "expected a string");
      return std::nullopt;
    }
    return j.get<std::string>();
  }

  std::vector<double> number_list(const json& j, const std::string& path) {
    std::vector<double> out;
    if (!j.is_array()) {
      issue(path, "expected an array of numbers");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i)
      if (auto v = number(j[i], path + "[" + std::to_string(i) + "]")) out.push_back(*v);
    return out;
  }

  std::optional<Complex> complex_entry(const json& j, const std::string& path) {
    if (j.is_number()) {
      if (auto v = number(j, path)) return Complex(*v, 0.0);
      return std::nullopt;
    }
    if (j.is_array() && j.size() == 2) {
      auto re = number(j[0], path + "[0]");
      auto im = number(j[1], path + "[1]");
      if (re && im) return Complex(*re, *im);
      return std::nullopt;
    }
    issue(path, "expected a number or a [re, im] pair");
    return std::nullopt;
  }

  std::optional<OperatorSpec> operator_spec(const json& j, const std::string& path) {
    OperatorSpec spec;
    if (j.is_string()) {
      spec.kind = OperatorSpec::Kind::named;
      spec.name = j.get<std::string>();
      if (!is_pauli_string(spec.name)) {
        issue(path, "unknown operator name '" + spec.name + "'");
        return std::nullopt;
      }
      return spec;
    }
    if (!j.is_object() || j.size() != 1) {
      issue(path, "expected an operator name or an object with one of pauli, matrix, from_noise");
      return std::nullopt;
    }
    const auto& [key, value] = *j.items().begin();
    if (key == "pauli") {
      spec.kind = OperatorSpec::Kind::pauli_sum;
      if (!value.is_object() || value.empty()) {
        issue(path + ".pauli", "expected a nonempty map from Pauli strings to coefficients");
        return std::nullopt;
      }
      bool ok = true;
      std::size_t len = 0;
      for (const auto& [p, c] : value.items()) {
        const std::string sub = path + ".pauli." + p;
        if (!is_pauli_string(p)) {
          issue(sub, "unknown operator name '" + p + "'");
          ok = false;
          continue;
        }
        if (len != 0 && p.size() != len) {
          issue(sub, "Pauli strings must all have the same length");
          ok = false;
        }
        len = p.size();
        if (auto v = number(c, sub)) spec.terms.emplace_back(p, *v);
        else ok = false;
      }
      if (!ok) return std::nullopt;
      std::sort(spec.terms.begin(), spec.terms.end());
      return spec;
    }
    if (key == "matrix") {
      spec.kind = OperatorSpec::Kind::matrix;
      if (!value.is_array() || value.empty()) {
        issue(path + ".matrix", "expected a nonempty array of rows");
        return std::nullopt;
      }
      bool ok = true;
      for (std::size_t r = 0; r < value.size(); ++r) {
        const std::string rp = path + ".matrix[" + std::to_string(r) + "]";
        if (!value[r].is_array() || value[r].size() != value.size()) {
          issue(rp, "matrix must be square");
          ok = false;
          continue;
        }
        std::vector<Complex> row;
        for (std::size_t c = 0; c < value[r].size(); ++c) {
          if (auto z = complex_entry(value[r][c], rp + "[" + std::to_string(c) + "]")) row.push_back(*z);
          else ok = false;
        }
        spec.matrix.push_back(std::move(row));
      }
      if (!ok) return std::nullopt;
      return spec;
    }
    if (key == "from_noise") {
      spec.kind = OperatorSpec::Kind::from_noise;
      auto idx = unsigned_int(value, path + ".from_noise");
      if (!idx) return std::nullopt;
      spec.noise_index = static_cast<std::size_t>(*idx);
      return spec;
    }
    issue(path, "unknown operator form '" + key + "'");
    return std::nullopt;
  }

  std::optional<StateSpec> state_spec(const json& j, const std::string& path) {
    if (!j.is_object() || j.size() != 1) {
      issue(path, "expected an object with one of ket, bloch, theta, vector, separable_mixture");
      return std::nullopt;
    }
    StateSpec spec;
    const auto& [key, value] = *j.items().begin();
    const std::string sub = path + "." + key;
    if (key == "ket") {
      spec.kind = StateSpec::Kind::ket;
      auto k = string(value, sub);
      if (!k) return std::nullopt;
      if (*k != "0" && *k != "1" && *k != "+" && *k != "-") {
        issue(sub, "unknown ket '" + *k + "' (expected 0, 1, + or -)");
        return std::nullopt;
      }
      spec.ket = *k;
      return spec;
    }
    if (key == "bloch") {
      spec.kind = StateSpec::Kind::bloch;
      auto v = number_list(value, sub);
      if (v.size() != 3) {
        issue(sub, "expected three components");
        return std::nullopt;
      }
      const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      if (r > 1.0 + 1e-12) {
        issue(sub, "Bloch vector longer than 1");
        return std::nullopt;
      }
      spec.bloch = {v[0], v[1], v[2]};
      return spec;
    }
    if (key == "theta") {
      spec.kind = StateSpec::Kind::theta;
      auto t = number(value, sub);
      if (!t) return std::nullopt;
      spec.theta = *t;
      return spec;
    }
    if (key == "vector") {
      spec.kind = StateSpec::Kind::vector;
      if (!value.is_array() || value.empty()) {
        issue(sub, "expected a nonempty array of amplitudes");
        return std::nullopt;
      }
      bool ok = true;
      double norm2 = 0.0;
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (auto z = complex_entry(value[i], sub + "[" + std::to_string(i) + "]")) {
          spec.vector.push_back(*z);
          norm2 += std::norm(*z);
        } else {
          ok = false;
        }
      }
      if (ok && norm2 == 0.0) {
        issue(sub, "zero vector");
        ok = false;
      }
      if (!ok) return std::nullopt;
      return spec;
    }
    if (key == "separable_mixture") {
      spec.kind = StateSpec::Kind::separable_mixture;
      if (!value.is_object()) {
        issue(sub, "expected {theta, s}");
        return std::nullopt;
      }
      bool ok = true;
      for (const auto& [k, v] : value.items())
        if (k != "theta" && k != "s") {
          issue(sub + "." + k, "unknown field");
          ok = false;
        }
      if (!value.contains("theta") || !value.contains("s")) {
        issue(sub, "needs both theta and s");
        return std::nullopt;
      }
      auto t = number(value["theta"], sub + ".theta");
      auto s = number(value["s"], sub + ".s");
      if (s && *s < 0.0) {
        issue(sub + ".s", "must be nonnegative");
        ok = false;
      }
      if (!t || !s || !ok) return std::nullopt;
      spec.theta = *t;
      spec.s = *s;
      return spec;
    }
    issue(path, "unknown state form '" + key + "'");
    return std::nullopt;
  }
};

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  }) && s.front() != '.';
}

std::optional<ProtocolKind> protocol_kind(const std::string& s) {
  for (auto k : {ProtocolKind::none, ProtocolKind::cnot_propagation, ProtocolKind::prop1_projective})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

ComplexOperator matrix_of(const OperatorSpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.matrix.size());
  ComplexOperator m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = spec.matrix[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

// Semantic checks that need the resolved operators.
void check_operators(const ScenarioConfig& cfg, std::vector<std::string>& issues) {
  std::vector<ComplexOperator> jumps;
  std::optional<std::size_t> dim;
  for (std::size_t k = 0; k < cfg.jumps.size(); ++k) {
    const std::string path = "model.jumps[" + std::to_string(k) + "]";
    if (cfg.jumps[k].kind == OperatorSpec::Kind::from_noise) {
      issues.push_back(path + ": from_noise is only valid for the generator");
      return;
    }
    jumps.push_back(resolve_operator(cfg.jumps[k], {}, cfg.seed));
    const auto d = static_cast<std::size_t>(jumps.back().rows());
    if (dim && *dim != d) {
      issues.push_back(path + ": dimension " + std::to_string(d) + " differs from " + std::to_string(*dim));
      return;
    }
    dim = d;
  }
  const auto& g = cfg.generator;
  if (g.kind == OperatorSpec::Kind::from_noise) {
    if (g.noise_index >= jumps.size()) {
      issues.push_back("model.generator.from_noise: no jump with index " + std::to_string(g.noise_index));
      return;
    }
    const auto& l = jumps[g.noise_index];
    if (std::abs(l.trace()) > 1e-10 * std::max(1.0, l.norm())) {
      issues.push_back("model.generator.from_noise: jump " + std::to_string(g.noise_index) + " is not traceless");
      return;
    }
  } else {
    const ComplexOperator gm = resolve_operator(g, jumps, cfg.seed);
    if (!is_hermitian(gm, 1e-12)) issues.push_back("model.generator: not Hermitian");
    const auto d = static_cast<std::size_t>(gm.rows());
    if (dim && *dim != d) {
      issues.push_back("model.generator: dimension " + std::to_string(d) + " differs from the jumps (" +
                       std::to_string(*dim) + ")");
      return;
    }
    dim = d;
  }
  const std::size_t d = dim.value_or(2);
  const auto& st = cfg.initial_state;
  if ((st.kind == StateSpec::Kind::ket || st.kind == StateSpec::Kind::bloch || st.kind == StateSpec::Kind::theta ||
       st.kind == StateSpec::Kind::separable_mixture) &&
      d != 2)
    issues.push_back("initial_state: this form describes a qubit but the probe has dimension " + std::to_string(d));
  if (st.kind == StateSpec::Kind::vector && st.vector.size() != d)
    issues.push_back("initial_state.vector: length " + std::to_string(st.vector.size()) +
                     " differs from the probe dimension " + std::to_string(d));
  if (cfg.protocol == ProtocolKind::cnot_propagation && d != 2)
    issues.push_back("protocol.kind: cnot_propagation needs a qubit probe");
  if (st.kind == StateSpec::Kind::separable_mixture && st.s > 0.0 &&
      cfg.ancilla_refresh != AncillaRefresh::fresh_each_round)
    issues.push_back("initial_state.separable_mixture: needs ancilla_refresh fresh_each_round");
}

json operator_to_json(const OperatorSpec& spec) {
  switch (spec.kind) {
    case OperatorSpec::Kind::named: return spec.name;
    case OperatorSpec::Kind::pauli_sum: {
      json terms = json::object();
      for (const auto& [p, c] : spec.terms) terms[p] = c;
      return json{{"pauli", terms}};
    }
    case OperatorSpec::Kind::matrix: {
      json rows = json::array();
      for (const auto& row : spec.matrix) {
        json r = json::array();
        for (const auto& z : row) r.push_back(json::array({z.real(), z.imag()}));
        rows.push_back(r);
      }
      return json{{"matrix", rows}};
    }
    case OperatorSpec::Kind::from_noise: return json{{"from_noise", spec.noise_index}};
  }
  return nullptr;
}

json state_to_json(const StateSpec& spec) {
  switch (spec.kind) {
    case StateSpec::Kind::ket: return json{{"ket", spec.ket}};
    case StateSpec::Kind::bloch: return json{{"bloch", json::array({spec.bloch[0], spec.bloch[1], spec.bloch[2]})}};
    case StateSpec::Kind::theta: return json{{"theta", spec.theta}};
    case StateSpec::Kind::vector: {
      json v = json::array();
      for (const auto& z : spec.vector) v.push_back(json::array({z.real(), z.imag()}));
      return json{{"vector", v}};
    }
    case StateSpec::Kind::separable_mixture:
      return json{{"separable_mixture", json{{"theta", spec.theta}, {"s", spec.s}}}};
  }
  return nullptr;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    if (auto p = msg.find("parse error at"); p != std::string::npos) msg = msg.substr(p);
    throw ConfigError({"syntax error at " + line_column(text, e.byte) + ": " + msg});
  }
  Parser p;
  ScenarioConfig cfg;
  if (!root.is_object()) throw ConfigError({"config: top level must be an object"});

  static const std::set<std::string> fields{"name",  "description", "model",  "initial_state", "protocol",
                                            "kappa", "dt",          "substeps", "method",      "seed",
                                            "sweeps", "outputs",    "noise_generator"};
  for (const auto& [k, v] : root.items())
    if (!fields.count(k)) p.issue(k, "unknown field");

  if (!root.contains("name")) p.issue("name", "missing");
  else if (auto n = p.string(root["name"], "name")) {
    if (!valid_name(*n)) p.issue("name", "must be nonempty and use only letters, digits, '_', '-' or '.'");
    cfg.name = *n;
  }
  if (root.contains("description"))
    if (auto d = p.string(root["description"], "description")) cfg.description = *d;

  bool operators_ok = true;
  if (!root.contains("model") || !root["model"].is_object()) {
    p.issue("model", "missing or not an object");
    operators_ok = false;
  } else {
    const json& m = root["model"];
    for (const auto& [k, v] : m.items())
      if (k != "generator" && k != "theta" && k != "jumps") p.issue("model." + k, "unknown field");
    if (!m.contains("generator")) {
      p.issue("model.generator", "missing");
      operators_ok = false;
    } else if (auto g = p.operator_spec(m["generator"], "model.generator")) {
      cfg.generator = *g;
    } else {
      operators_ok = false;
    }
    if (m.contains("theta"))
      if (auto t = p.number(m["theta"], "model.theta")) cfg.theta = *t;
    if (m.contains("jumps")) {
      if (!m["jumps"].is_array()) {
        p.issue("model.jumps", "expected an array");
        operators_ok = false;
      } else {
        for (std::size_t k = 0; k < m["jumps"].size(); ++k) {
          if (auto l = p.operator_spec(m["jumps"][k], "model.jumps[" + std::to_string(k) + "]"))
            cfg.jumps.push_back(*l);
          else
            operators_ok = false;
        }
      }
    }
  }

  bool state_ok = false;
  if (!root.contains("initial_state")) p.issue("initial_state", "missing");
  else if (auto s = p.state_spec(root["initial_state"], "initial_state")) {
    cfg.initial_state = *s;
    state_ok = true;
  }

  if (root.contains("protocol")) {
    const json& pr = root["protocol"];
    if (!pr.is_object()) {
      p.issue("protocol", "expected an object");
    } else {
      for (const auto& [k, v] : pr.items())
        if (k != "kind" && k != "ancilla_refresh") p.issue("protocol." + k, "unknown field");
      if (pr.contains("kind"))
        if (auto k = p.string(pr["kind"], "protocol.kind")) {
          if (auto kind = protocol_kind(*k)) cfg.protocol = *kind;
          else p.issue("protocol.kind", "unknown protocol '" + *k + "'");
        }
      if (pr.contains("ancilla_refresh"))
        if (auto r = p.string(pr["ancilla_refresh"], "protocol.ancilla_refresh")) {
          if (*r == "fresh_each_round") cfg.ancilla_refresh = AncillaRefresh::fresh_each_round;
          else if (*r == "persistent") cfg.ancilla_refresh = AncillaRefresh::persistent;
          else p.issue("protocol.ancilla_refresh", "unknown refresh policy '" + *r + "'");
        }
    }
  }

  if (root.contains("kappa"))
    if (auto k = p.unsigned_int(root["kappa"], "kappa")) {
      if (*k < 1) p.issue("kappa", "must be at least 1");
      cfg.kappa = static_cast<std::size_t>(*k);
    }
  if (root.contains("dt"))
    if (auto d = p.number(root["dt"], "dt")) {
      if (*d <= 0.0) p.issue("dt", "must be positive");
      cfg.dt = *d;
    }
  if (root.contains("substeps"))
    if (auto s = p.unsigned_int(root["substeps"], "substeps")) {
      if (*s < 1 || *s > 1000000) p.issue("substeps", "must be between 1 and 1000000");
      cfg.substeps = static_cast<std::size_t>(*s);
    }
  if (root.contains("method"))
    if (auto m = p.string(root["method"], "method")) {
      if (*m == "runge_kutta_4") cfg.method = Integrator::runge_kutta_4;
      else if (*m == "liouvillian_exponential") cfg.method = Integrator::liouvillian_exponential;
      else p.issue("method", "unknown integrator '" + *m + "'");
    }
  if (root.contains("seed"))
    if (auto s = p.unsigned_int(root["seed"], "seed")) cfg.seed = *s;

  if (root.contains("sweeps")) {
    const json& sw = root["sweeps"];
    if (!sw.is_object()) {
      p.issue("sweeps", "expected an object");
    } else {
      for (const auto& [k, v] : sw.items()) {
        const std::string path = "sweeps." + k;
        std::vector<double>* target = k == "t" ? &cfg.sweeps.t
                                      : k == "dt" ? &cfg.sweeps.dt
                                      : k == "s" ? &cfg.sweeps.s
                                      : k == "theta" ? &cfg.sweeps.theta
                                                     : nullptr;
        if (!target) {
          p.issue(path, "unknown sweep");
          continue;
        }
        *target = p.number_list(v, path);
        for (double x : *target) {
          if ((k == "t" || k == "dt") && x <= 0.0) {
            p.issue(path, "values must be positive");
            break;
          }
          if (k == "s" && x < 0.0) {
            p.issue(path, "values must be nonnegative");
            break;
          }
        }
      }
    }
  }

  if (root.contains("outputs")) {
    const json& out = root["outputs"];
    if (!out.is_array()) {
      p.issue("outputs", "expected an array");
    } else {
      std::set<std::string> seen;
      for (std::size_t i = 0; i < out.size(); ++i) {
        const std::string path = "outputs[" + std::to_string(i) + "]";
        auto s = p.string(out[i], path);
        if (!s) continue;
        const auto& names = known_outputs();
        if (std::find(names.begin(), names.end(), *s) == names.end()) p.issue(path, "unknown output '" + *s + "'");
        else if (!seen.insert(*s).second) p.issue(path, "duplicate output '" + *s + "'");
        else cfg.outputs.push_back(*s);
      }
    }
  }

  if (root.contains("noise_generator")) {
    const json& ng = root["noise_generator"];
    if (!ng.is_object()) {
      p.issue("noise_generator", "expected an object");
    } else {
      NoiseGeneratorSpec spec;
      for (const auto& [k, v] : ng.items())
        if (k != "dims" && k != "samples") p.issue("noise_generator." + k, "unknown field");
      if (ng.contains("dims")) {
        if (!ng["dims"].is_array() || ng["dims"].empty()) {
          p.issue("noise_generator.dims", "expected a nonempty array");
        } else {
          for (std::size_t i = 0; i < ng["dims"].size(); ++i) {
            const std::string path = "noise_generator.dims[" + std::to_string(i) + "]";
            if (auto d = p.unsigned_int(ng["dims"][i], path)) {
              if (*d < 2 || *d > 16) p.issue(path, "dimension must be between 2 and 16");
              else spec.dims.push_back(static_cast<std::size_t>(*d));
            }
          }
        }
      } else {
        p.issue("noise_generator.dims", "missing");
      }
      if (ng.contains("samples"))
        if (auto s = p.unsigned_int(ng["samples"], "noise_generator.samples")) {
          if (*s < 1) p.issue("noise_generator.samples", "must be at least 1");
          spec.samples = static_cast<std::size_t>(*s);
        }
      cfg.noise_generator = spec;
    }
  }

  if (operators_ok && state_ok && p.issues.empty()) check_operators(cfg, p.issues);
  if (!p.issues.empty()) throw ConfigError(p.issues);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  if (!cfg.description.empty()) j["description"] = cfg.description;
  json jumps = json::array();
  for (const auto& l : cfg.jumps) jumps.push_back(operator_to_json(l));
  j["model"] = json{{"generator", operator_to_json(cfg.generator)}, {"theta", cfg.theta}, {"jumps", jumps}};
  j["initial_state"] = state_to_json(cfg.initial_state);
  j["protocol"] = json{{"kind", to_string(cfg.protocol)}, {"ancilla_refresh", to_string(cfg.ancilla_refresh)}};
  j["kappa"] = cfg.kappa;
  j["dt"] = cfg.dt;
  j["substeps"] = cfg.substeps;
  j["method"] = to_string(cfg.method);
  j["seed"] = cfg.seed;
  json sweeps = json::object();
  if (!cfg.sweeps.t.empty()) sweeps["t"] = cfg.sweeps.t;
  if (!cfg.sweeps.dt.empty()) sweeps["dt"] = cfg.sweeps.dt;
  if (!cfg.sweeps.s.empty()) sweeps["s"] = cfg.sweeps.s;
  if (!cfg.sweeps.theta.empty()) sweeps["theta"] = cfg.sweeps.theta;
  if (!sweeps.empty()) j["sweeps"] = sweeps;
  j["outputs"] = cfg.outputs;
  if (cfg.noise_generator)
    j["noise_generator"] = json{{"dims", cfg.noise_generator->dims}, {"samples", cfg.noise_generator->samples}};
  return j.dump(2) + "\n";
}

ComplexOperator resolve_operator(const OperatorSpec& spec, const std::vector<ComplexOperator>& jumps,
                                 std::uint64_t seed) {
  switch (spec.kind) {
    case OperatorSpec::Kind::named: return pauli_string_operator(spec.name);
    case OperatorSpec::Kind::pauli_sum: {
      ComplexOperator sum;
      for (const auto& [p, c] : spec.terms) {
        const ComplexOperator term = c * pauli_string_operator(p);
        sum = sum.size() == 0 ? term : ComplexOperator(sum + term);
      }
      return sum;
    }
    case OperatorSpec::Kind::matrix: return matrix_of(spec);
    case OperatorSpec::Kind::from_noise:
      if (spec.noise_index >= jumps.size()) throw DomainError("from_noise: jump index out of range");
      return construct_generator_from_noise(jumps[spec.noise_index], seed);
  }
  throw DomainError("resolve_operator: unknown kind");
}

ResolvedScenario resolve_scenario(const ScenarioConfig& cfg) {
  std::vector<ComplexOperator> jumps;
  for (const auto& l : cfg.jumps) jumps.push_back(resolve_operator(l, {}, cfg.seed));
  LindbladModel model;
  model.generator = resolve_operator(cfg.generator, jumps, cfg.seed);
  model.coupling = cfg.theta;
  model.jumps = std::move(jumps);
  model.validate();

  const auto& st = cfg.initial_state;
  ComplexOperator rho;
  double s = 0.0;
  switch (st.kind) {
    case StateSpec::Kind::ket: {
      const StateVector k = st.ket == "0"   ? named::ket0()
                            : st.ket == "1" ? named::ket1()
                            : st.ket == "+" ? named::ket_plus()
                                            : named::ket_minus();
      rho = projector(k);
      break;
    }
    case StateSpec::Kind::bloch:
      rho = 0.5 * (named::identity(2) + st.bloch[0] * named::pauli_x() + st.bloch[1] * named::pauli_y() +
                   st.bloch[2] * named::pauli_z());
      break;
    case StateSpec::Kind::theta: rho = projector(named::ket_theta(st.theta)); break;
    case StateSpec::Kind::vector: {
      StateVector v(static_cast<Eigen::Index>(st.vector.size()));
      for (std::size_t i = 0; i < st.vector.size(); ++i) v(static_cast<Eigen::Index>(i)) = st.vector[i];
      rho = projector(v / v.norm());
      break;
    }
    case StateSpec::Kind::separable_mixture:
      rho = projector(named::ket_theta(st.theta));
      s = st.s;
      break;
  }
  EvolutionConfig evo;
  evo.dt = cfg.dt;
  evo.substeps = static_cast<int>(cfg.substeps);
  evo.method = cfg.method;
  return ResolvedScenario{std::move(model), DensityState(rho, SubsystemDims{static_cast<std::size_t>(rho.rows())}),
                          s, evo};
}

}  // namespace qecqm
