#include "geoctl/io.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "geoctl/error.hpp"

namespace geoctl {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) fail(ErrorKind::Io, "cannot write " + path.string());
  return os;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::Io, "cannot read " + path.string());
  return is;
}

std::vector<double> split_numbers(const std::string& line, std::size_t row) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      fail(ErrorKind::Io, "csv row " + std::to_string(row) + ": bad number '" + cell + "'");
    }
  }
  return out;
}

json vec(const RVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

RVector vec_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const RVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

template <class T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

// ---------------------------------------------------------------------------
// CSV

void write_field_csv(std::ostream& os, const ControlField& field) {
  field.validate();
  os << "t";
  for (int j = 0; j < field.components(); ++j) os << ",h" << j + 1;
  os << "\n";
  for (int k = 0; k <= field.steps(); ++k) {
    os << num(static_cast<double>(k) / field.steps());
    for (int j = 0; j < field.components(); ++j) os << ',' << num(field.values(k, j));
    os << "\n";
  }
}

ControlField read_field_csv(std::istream& is, double tau) {
  std::string line;
  if (!std::getline(is, line) || !line.starts_with("t,h1")) fail(ErrorKind::Io, "field csv: missing 't,h1,...' header");
  const auto d = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto r = split_numbers(line, rows.size() + 1);
    if (r.size() != d + 1) fail(ErrorKind::Io, "field csv: row " + std::to_string(rows.size() + 1) + " has wrong width");
    rows.push_back(std::move(r));
  }
  if (rows.size() < 3) fail(ErrorKind::Io, "field csv: need at least 3 rows");
  const std::size_t n = rows.size() - 1;
  RMatrix values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (std::abs(rows[k][0] - static_cast<double>(k) / static_cast<double>(n)) > 1e-9) {
      fail(ErrorKind::Io, "field csv: time column is not a uniform grid on [0, 1]");
    }
    for (std::size_t j = 0; j < d; ++j) {
      values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = rows[k][j + 1];
    }
  }
  ControlField f(tau, std::move(values));
  f.validate();
  return f;
}

void write_field_csv(const fs::path& path, const ControlField& field) {
  auto os = open_out(path);
  write_field_csv(os, field);
}

ControlField read_field_csv(const fs::path& path, double tau) {
  auto is = open_in(path);
  return read_field_csv(is, tau);
}

void write_series_csv(const fs::path& path, const std::vector<double>& t, const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& series) {
  if (names.size() != series.size()) fail(ErrorKind::Dimension, "series csv: names/series mismatch");
  for (const auto& s : series) {
    if (s.size() != t.size()) fail(ErrorKind::Dimension, "series csv: series length differs from t");
  }
  auto os = open_out(path);
  os << "t";
  for (const auto& n : names) os << ',' << n;
  os << "\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    os << num(t[k]);
    for (const auto& s : series) os << ',' << num(s[k]);
    os << "\n";
  }
}

void write_verification_csv(const fs::path& path, const VerificationReport& r) {
  std::vector<std::string> names{"F_avg"};
  std::vector<std::vector<double>> series{r.average};
  for (int n = 0; n < 6; ++n) {
    names.push_back("F_state" + std::to_string(n + 1));
    const RVector col = r.state_fidelity.col(n);
    series.emplace_back(col.data(), col.data() + col.size());
  }
  write_series_csv(path, r.times, names, series);
}

void write_energy_density_csv(const fs::path& path, const ControlField& field, const RVector& metric_diagonal) {
  const RVector e = energy_density(field, metric_diagonal);
  std::vector<double> t(static_cast<std::size_t>(field.steps()) + 1);
  for (int k = 0; k <= field.steps(); ++k) t[static_cast<std::size_t>(k)] = field.time(k);
  write_series_csv(path, t, {"energy_density"}, {std::vector<double>(e.data(), e.data() + e.size())});
}

// ---------------------------------------------------------------------------
// Gates

json gate_to_json(const CMatrix& u) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < u.cols(); ++c) row.push_back({u(r, c).real(), u(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

CMatrix gate_from_json(const json& j) {
  const json& m = j.is_object() ? j.at("matrix") : j;
  if (!m.is_array() || m.empty()) fail(ErrorKind::Validation, "gate json: expected an array of [re, im] entries");
  std::vector<cplx> flat;
  const auto entry = [&](const json& e) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      fail(ErrorKind::Validation, "gate json: every entry must be [re, im]");
    }
    flat.emplace_back(e[0].get<double>(), e[1].get<double>());
  };
  const bool nested = m[0].is_array() && !m[0].empty() && m[0][0].is_array();
  std::size_t rows = 0;
  if (nested) {
    rows = m.size();
    for (const auto& row : m) {
      if (row.size() != rows) fail(ErrorKind::Validation, "gate json: matrix is not square");
      for (const auto& e : row) entry(e);
    }
  } else {
    for (const auto& e : m) entry(e);
    rows = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(flat.size()))));
    if (rows * rows != flat.size()) fail(ErrorKind::Validation, "gate json: entry count is not a square");
  }
  if (rows == 0 || (rows & (rows - 1)) != 0) fail(ErrorKind::Validation, "gate json: dimension must be a power of 2");
  const auto n = static_cast<Eigen::Index>(rows);
  CMatrix u(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) u(r, c) = flat[static_cast<std::size_t>(r * n + c)];
  if (unitarity_residual(u) > 1e-4) {
    fail(ErrorKind::Validation, "gate json: matrix is not unitary (residual " + num(unitarity_residual(u)) + ")");
  }
  return u;
}

CMatrix read_gate_file(const fs::path& path) { return gate_from_json(read_json(path)); }

CMatrix resolve_gate(const std::string& spec) {
  if (spec.starts_with("file:")) return read_gate_file(spec.substr(5));
  return named_gate(spec);
}

// ---------------------------------------------------------------------------
// Configuration objects

json to_json(const NoiseParams& p) {
  return {{"eta", p.eta},
          {"omega_c_over_tau", p.omega_c * p.tau / (2.0 * std::numbers::pi)},
          {"theta", p.theta},
          {"tau", p.tau}};
}

NoiseParams noise_from_json(const json& j) {
  NoiseParams p;
  get_if(j, "eta", p.eta);
  get_if(j, "theta", p.theta);
  get_if(j, "tau", p.tau);
  if (j.contains("omega_c_over_tau")) {
    p.omega_c = 2.0 * std::numbers::pi * j.at("omega_c_over_tau").get<double>() / p.tau;
  } else {
    p.omega_c = 2.0 * std::numbers::pi / (10.0 * p.tau);
  }
  p.validate();
  return p;
}

json to_json(const Problem& p) {
  return {{"n_qubits", p.n_qubits},     {"system_qubits", p.system_qubits}, {"distribution", p.distribution},
          {"drift", p.drift_kind},      {"drift_labels", p.drift_labels},   {"noise", to_json(p.noise)},
          {"tau", p.tau},               {"steps", p.steps}};
}

Problem problem_from_json(const json& j) {
  Problem p;
  if (j.contains("preset")) {
    const auto preset = j.at("preset").get<std::string>();
    if (preset == "single_qubit_dephasing") {
      p = Problem::single_qubit_dephasing();
    } else if (preset == "two_qubit_crosstalk") {
      p = Problem::two_qubit_crosstalk(j.value("tau", 1.0));
    } else {
      fail(ErrorKind::Validation, "problem: unknown preset '" + preset + "'");
    }
  }
  get_if(j, "n_qubits", p.n_qubits);
  get_if(j, "system_qubits", p.system_qubits);
  get_if(j, "distribution", p.distribution);
  get_if(j, "drift", p.drift_kind);
  get_if(j, "drift_labels", p.drift_labels);
  get_if(j, "tau", p.tau);
  get_if(j, "steps", p.steps);
  json noise = j.value("noise", json::object());
  if (!noise.contains("tau")) noise["tau"] = p.tau;
  p.noise = noise_from_json(noise);
  p.validate();
  return p;
}

json to_json(const NormSchedule& s) {
  return {{"norm_min", s.norm_min}, {"norm_max", s.norm_max}, {"norm_step", s.norm_step},
          {"kappa", s.kappa},       {"s", s.s},               {"scale", s.scale}};
}

NormSchedule schedule_from_json(const json& j) {
  NormSchedule s;
  if (j.contains("preset")) {
    const auto preset = j.at("preset").get<std::string>();
    if (preset == "coarse") {
      s = NormSchedule::coarse();
    } else if (preset == "fine") {
      s = NormSchedule::fine();
    } else if (preset == "two_qubit") {
      s = NormSchedule::two_qubit();
    } else {
      fail(ErrorKind::Validation, "schedule: unknown preset '" + preset + "'");
    }
  }
  get_if(j, "norm_min", s.norm_min);
  get_if(j, "norm_max", s.norm_max);
  get_if(j, "norm_step", s.norm_step);
  get_if(j, "kappa", s.kappa);
  get_if(j, "s", s.s);
  get_if(j, "scale", s.scale);
  s.validate();
  return s;
}

json to_json(const RefineOptions& o) {
  return {{"method", to_string(o.method)},
          {"tol", o.tol},
          {"max_evaluations", o.max_evaluations},
          {"stage_evaluations", o.stage_evaluations},
          {"polish", o.polish},
          {"restarts", o.restarts},
          {"initial_step", o.initial_step},
          {"gradient_step", o.gradient_step}};
}

RefineOptions refine_options_from_json(const json& j, RefineOptions o) {
  if (j.contains("method")) o.method = parse_refine_method(j.at("method").get<std::string>());
  get_if(j, "tol", o.tol);
  get_if(j, "max_evaluations", o.max_evaluations);
  get_if(j, "stage_evaluations", o.stage_evaluations);
  get_if(j, "polish", o.polish);
  get_if(j, "restarts", o.restarts);
  get_if(j, "initial_step", o.initial_step);
  get_if(j, "gradient_step", o.gradient_step);
  if (!(o.tol > 0.0) || o.max_evaluations < 1 || o.stage_evaluations < 1) {
    fail(ErrorKind::Validation, "refine: tol, max_evaluations and stage_evaluations must be positive");
  }
  return o;
}

json to_json(const KrotovConfig& c) {
  return {{"lambda", c.lambda},       {"max_iters", c.max_iters},
          {"jt_tol", c.jt_tol},       {"guess_perturbation", c.guess_perturbation},
          {"envelope", "sin2"},       {"max_halvings", c.max_halvings}};
}

KrotovConfig krotov_config_from_json(const json& j, KrotovConfig c) {
  get_if(j, "lambda", c.lambda);
  get_if(j, "max_iters", c.max_iters);
  get_if(j, "jt_tol", c.jt_tol);
  get_if(j, "guess_perturbation", c.guess_perturbation);
  get_if(j, "max_halvings", c.max_halvings);
  if (j.contains("envelope") && j.at("envelope") != "sin2") {
    fail(ErrorKind::Validation, "krotov: only the 'sin2' envelope is available from configuration");
  }
  if (!(c.lambda > 0.0) || c.max_iters < 0 || !(c.jt_tol >= 0.0)) {
    fail(ErrorKind::Validation, "krotov: lambda must be positive, max_iters and jt_tol non-negative");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Banks

json to_json(const BankEntry& e) {
  return {{"lambda", vec(e.lambda)}, {"c", vec(e.c)}, {"norm", e.norm}, {"ok", e.ok}, {"shell", e.shell}};
}

BankEntry bank_entry_from_json(const json& j, std::size_t index) {
  BankEntry e;
  e.lambda = vec_from(j.at("lambda"));
  e.c = vec_from(j.at("c"));
  e.norm = j.at("norm").get<double>();
  e.ok = j.at("ok").get<bool>();
  e.shell = j.value("shell", 0);
  e.index = index;
  if (e.ok && e.c.size() != e.lambda.size()) fail(ErrorKind::Io, "bank: entry " + std::to_string(index) + " has a bad c");
  return e;
}

void write_bank(std::ostream& os, const SampleBank& bank) {
  const json header{{"format", "geoctl-bank"},
                    {"version", 1},
                    {"problem", to_json(bank.header.problem)},
                    {"schedule", to_json(bank.header.schedule)},
                    {"seed", bank.header.seed},
                    {"entries", bank.entries.size()}};
  os << header.dump() << "\n";
  for (const auto& e : bank.entries) os << to_json(e).dump() << "\n";
}

SampleBank read_bank(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail(ErrorKind::Io, "bank: empty file");
  SampleBank bank;
  try {
    const json h = json::parse(line);
    if (h.value("format", "") != "geoctl-bank") fail(ErrorKind::Io, "bank: missing header line");
    bank.header.problem = problem_from_json(h.at("problem"));
    bank.header.schedule = schedule_from_json(h.at("schedule"));
    bank.header.seed = h.at("seed").get<std::uint64_t>();
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      bank.entries.push_back(bank_entry_from_json(json::parse(line), bank.entries.size()));
    }
    if (h.contains("entries") && h.at("entries").get<std::size_t>() != bank.entries.size()) {
      fail(ErrorKind::Io, "bank: header announces " + h.at("entries").dump() + " entries, file has " +
                              std::to_string(bank.entries.size()));
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, std::string("bank: ") + e.what());
  }
  return bank;
}

void write_bank(const fs::path& path, const SampleBank& bank) {
  auto os = open_out(path);
  write_bank(os, bank);
}

SampleBank read_bank(const fs::path& path) {
  auto is = open_in(path);
  return read_bank(is);
}

// ---------------------------------------------------------------------------
// Reports

json to_json(const SynthesisAttempt& a) {
  return {{"entry", a.entry},
          {"rank", a.rank},
          {"shell_norm", a.shell_norm},
          {"distance", a.distance},
          {"start_infidelity", a.start_infidelity},
          {"final_infidelity", a.final_infidelity},
          {"evaluations", a.evaluations},
          {"converged", a.converged},
          {"classification", a.classification},
          {"energy", a.energy},
          {"error", a.error}};
}

json to_json(const VerificationReport& r) {
  std::vector<double> final_states(6);
  for (int n = 0; n < 6; ++n) final_states[static_cast<std::size_t>(n)] = r.state_fidelity(r.state_fidelity.rows() - 1, n);
  return {{"method", r.method},
          {"convention", r.convention},
          {"average_at_tau", r.average_at_tau},
          {"state_fidelity_at_tau", final_states},
          {"target_average_at_tau", r.target_average_at_tau},
          {"target_state_fidelity_at_tau", r.target_state_fidelity},
          {"control_gate_fidelity", r.control_gate_fidelity},
          {"energy", r.energy},
          {"classification", r.classification},
          {"steps", r.times.size() - 1}};
}

json to_json(const Comparison& c) {
  return {{"energy_a", c.energy_a}, {"energy_b", c.energy_b}, {"ratio", c.ratio},
          {"final_fidelity_a", c.fidelity_a.empty() ? json(nullptr) : json(c.fidelity_a.back())},
          {"final_fidelity_b", c.fidelity_b.empty() ? json(nullptr) : json(c.fidelity_b.back())}};
}

void write_solution(const fs::path& dir, const Solution& s, const json& extra) {
  fs::create_directories(dir);
  json j{{"method", s.method},
         {"gate", s.gate},
         {"target", gate_to_json(s.target)},
         {"problem", to_json(s.problem)},
         {"energy", s.energy},
         {"infidelity", s.infidelity},
         {"classification", s.classification},
         {"steps", s.field.steps()},
         {"fields", "fields.csv"}};
  if (s.costate) j["costate"] = vec(s.costate->coefficients);
  if (!s.jt_history.empty()) j["jt_history"] = s.jt_history;
  j.update(extra);
  write_json(dir / "solution.json", j);
  write_field_csv(dir / "fields.csv", s.field);
}

Solution read_solution(const fs::path& dir) {
  const json j = read_json(dir / "solution.json");
  Solution s;
  try {
    s.method = j.at("method").get<std::string>();
    s.gate = j.value("gate", "");
    s.target = gate_from_json(j.at("target"));
    s.problem = problem_from_json(j.at("problem"));
    s.energy = j.at("energy").get<double>();
    s.infidelity = j.at("infidelity").get<double>();
    s.classification = j.value("classification", "");
    if (j.contains("costate")) s.costate = CoState(vec_from(j.at("costate")));
    if (j.contains("jt_history")) s.jt_history = j.at("jt_history").get<std::vector<double>>();
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, "solution " + dir.string() + ": " + e.what());
  }
  s.field = read_field_csv(dir / j.value("fields", std::string("fields.csv")), s.problem.tau);
  return s;
}

json read_json(const fs::path& path) {
  auto is = open_in(path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << "\n";
}

}  // namespace geoctl
