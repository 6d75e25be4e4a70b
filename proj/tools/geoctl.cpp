// geoctl: bank generation, geodesic synthesis, Krotov baseline, master-equation
// verification and plot-data export.

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "geoctl/error.hpp"
#include "geoctl/io.hpp"
#include "geoctl/krotov.hpp"
#include "geoctl/sampler.hpp"
#include "geoctl/verify.hpp"

using namespace geoctl;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  int jobs = 1;
  std::optional<double> tol;
};

json load_config(const std::string& path) { return path.empty() ? json::object() : read_json(path); }

/// Single-qubit gates run against the dephasing model, two-qubit gates against crosstalk.
Problem problem_for(const json& cfg, const CMatrix& gate) {
  if (cfg.contains("problem")) return problem_from_json(cfg.at("problem"));
  if (gate.rows() == 2) return Problem::single_qubit_dephasing();
  if (gate.rows() == 4) return Problem::two_qubit_crosstalk();
  fail(ErrorKind::Validation, "no default problem for a " + std::to_string(gate.rows()) + "-level gate");
}

std::string gate_label(const std::string& spec) {
  return spec.starts_with("file:") ? fs::path(spec.substr(5)).stem().string() : spec;
}

void emit(const json& j) { std::cout << j.dump(2) << std::endl; }

[[noreturn]] void exit_with(int code, const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << std::endl;
  std::exit(code);
}

SampleBank make_bank(const json& cfg, const Common& c, const CMatrix* gate) {
  Problem problem = gate ? problem_for(cfg, *gate) : problem_from_json(cfg.value("problem", json::object()));
  if (c.steps) problem.steps = *c.steps;
  NormSchedule schedule;
  if (cfg.contains("schedule")) {
    schedule = schedule_from_json(cfg.at("schedule"));
  } else {
    schedule = problem.system_qubits == 2 ? NormSchedule::two_qubit() : NormSchedule::fine();
    schedule.scale = 0.1;
  }
  const std::uint64_t seed = c.seed.value_or(cfg.value("seed", std::uint64_t{42}));
  return generate_bank(schedule, problem, seed, c.jobs);
}

// ---------------------------------------------------------------------------

int run_bank(const Common& c, const std::string& out) {
  const json cfg = load_config(c.config);
  const SampleBank bank = make_bank(cfg, c, nullptr);
  write_bank(fs::path(out), bank);
  emit({{"out", out}, {"entries", bank.entries.size()}, {"representable", bank.valid_count()},
        {"seed", bank.header.seed}});
  return 0;
}

struct SynthArgs {
  std::string gate, bank, strategy = "ascending", refiner, out = "sol";
  bool first_global = false;
  bool phase_equivalents = false;
  std::optional<int> retry_budget;
};

int run_synth(const Common& c, const SynthArgs& a) {
  const json cfg = load_config(c.config);
  const CMatrix gate = resolve_gate(a.gate);
  SampleBank bank;
  if (a.bank.empty()) {
    Common bc = c;
    bc.steps.reset();  // --steps sets the refinement grid here
    bank = make_bank(cfg, bc, &gate);
  } else {
    bank = read_bank(fs::path(a.bank));
  }
  const Problem& problem = bank.header.problem;

  const json sc = cfg.value("synth", json::object());
  SynthesisOptions opts;
  opts.refine = refine_options_from_json(cfg.value("refine", json::object()));
  if (!a.refiner.empty()) opts.refine.method = parse_refine_method(a.refiner);
  if (c.tol) opts.refine.tol = *c.tol;
  opts.steps = c.steps.value_or(sc.value("steps", 2000));
  opts.retry_budget = a.retry_budget.value_or(sc.value("retry_budget", 8));
  opts.exhaustive = a.first_global ? false : sc.value("exhaustive", true);
  opts.phase_equivalents = a.phase_equivalents || sc.value("phase_equivalents", false);
  opts.overshoot_epsilon = sc.value("overshoot_epsilon", kDefaultOvershootEpsilon);
  opts.jobs = c.jobs;
  if (opts.retry_budget < 1) fail(ErrorKind::Validation, "synth: retry budget must be positive");

  const GateTarget target = problem.target(gate);
  const SynthesisResult res = synthesize(target, bank, parse_strategy(a.strategy), opts);

  Solution s;
  s.method = "geodesic";
  s.gate = gate_label(a.gate);
  s.problem = problem;
  s.problem.steps = opts.steps;
  s.target = gate;
  s.field = res.solution.field;
  s.energy = res.solution.energy;
  s.infidelity = res.solution.infidelity;
  s.classification = res.classification ? res.classification->str() : "";
  s.costate = res.solution.costate;
  json attempts = json::array();
  for (const auto& at : res.attempts) attempts.push_back(to_json(at));
  const json extra{{"status", res.status},
                   {"ok", res.ok},
                   {"strategy", to_string(res.strategy)},
                   {"seed_entry", res.seed_entry},
                   {"candidate_rank", res.candidate_rank},
                   {"bank_seed", bank.header.seed},
                   {"refine", to_json(opts.refine)},
                   {"exhaustive", opts.exhaustive},
                   {"phase_equivalents", opts.phase_equivalents},
                   {"c_target", std::vector<double>(target.c_target.data(), target.c_target.data() + target.c_target.size())},
                   {"attempts", attempts}};
  if (!res.solution.field.values.size()) exit_with(2, "Convergence", "synth: " + res.status);
  write_solution(a.out, s, extra);
  emit({{"out", a.out}, {"status", res.status}, {"energy", s.energy}, {"infidelity", s.infidelity},
        {"classification", s.classification}});
  if (!res.ok) exit_with(2, "Convergence", "synth: " + res.status + "; best attempt written to " + a.out);
  return 0;
}

struct KrotovArgs {
  std::string gate, out = "krotov";
  std::optional<double> lambda;
  std::optional<int> max_iters;
};

int run_krotov(const Common& c, const KrotovArgs& a) {
  const json cfg = load_config(c.config);
  const CMatrix gate = resolve_gate(a.gate);
  Problem problem = problem_for(cfg, gate);
  problem.steps = c.steps.value_or(cfg.contains("problem") ? problem.steps : 1000);
  KrotovConfig kc = krotov_config_from_json(cfg.value("krotov", json::object()));
  if (a.lambda) kc.lambda = *a.lambda;
  if (a.max_iters) kc.max_iters = *a.max_iters;
  if (c.tol) kc.jt_tol = *c.tol;

  const AlgebraBasis basis = problem.basis();
  const GateTarget target = problem.target(gate);
  const KrotovResult r = krotov_optimize(target, problem.drift(basis), basis, kc, problem.tau, problem.steps);

  Solution s;
  s.method = "krotov";
  s.gate = gate_label(a.gate);
  s.problem = problem;
  s.target = gate;
  s.field = r.field;
  s.energy = r.energy;
  s.infidelity = 1.0 - fidelity(r.final_unitary, target);
  s.jt_history = r.jt_history;
  write_solution(a.out, s,
                 {{"krotov", to_json(kc)},
                  {"iterations", r.iterations},
                  {"final_jt", r.final_jt},
                  {"final_lambda", r.final_lambda},
                  {"halvings", r.halvings},
                  {"converged", r.converged}});
  emit({{"out", a.out}, {"final_jt", r.final_jt}, {"iterations", r.iterations}, {"energy", r.energy}});
  if (!r.converged) exit_with(2, "Convergence", "krotov: J_T above tolerance after max_iters; result written");
  return 0;
}

struct VerifyArgs {
  std::string fields, sol, gate, out = "verify.json";
  bool no_control = false;
};

int run_verify(const Common& c, const VerifyArgs& a) {
  const json cfg = load_config(c.config);
  NoiseParams noise = cfg.contains("problem") ? problem_from_json(cfg.at("problem")).noise : NoiseParams{};
  const int steps = c.steps.value_or(2000);
  const fs::path out(a.out);
  if (a.no_control) {
    const double f = no_control_fidelity(noise, steps);
    const json j{{"method", "master-equation"}, {"no_control_superposition_fidelity", f}, {"steps", steps},
                 {"noise", to_json(noise)}};
    write_json(out, j);
    emit(j);
    return 0;
  }
  ControlField field;
  CMatrix gate;
  std::string classification;
  if (!a.sol.empty()) {
    const Solution s = read_solution(a.sol);
    field = s.field;
    gate = s.target;
    noise = s.problem.noise;
    classification = s.classification;
  } else {
    if (a.fields.empty() || a.gate.empty()) fail(ErrorKind::Validation, "verify: need --sol, or --fields with --gate");
    field = read_field_csv(fs::path(a.fields), noise.tau);
    gate = resolve_gate(a.gate);
  }
  VerificationReport r = average_gate_fidelity(field, gate, noise, steps, c.jobs);
  r.classification = classification;
  json j = to_json(r);
  j["noise"] = to_json(noise);
  j["trace_csv"] = out.stem().string() + "_trace.csv";
  j["energy_density_csv"] = out.stem().string() + "_energy.csv";
  write_json(out, j);
  write_verification_csv(out.parent_path() / j["trace_csv"].get<std::string>(), r);
  write_energy_density_csv(out.parent_path() / j["energy_density_csv"].get<std::string>(), field, RVector::Ones(3));
  emit({{"out", a.out}, {"average_at_tau", r.average_at_tau}, {"target_average_at_tau", r.target_average_at_tau}});
  return 0;
}

int run_compare(const std::string& da, const std::string& db, const std::string& out) {
  Solution a = read_solution(da);
  Solution b = read_solution(db);
  replay(a);
  replay(b);
  const Comparison cmp = compare(a, b);
  json j = to_json(cmp);
  j["a"] = {{"dir", da}, {"method", a.method}, {"infidelity", a.infidelity}};
  j["b"] = {{"dir", db}, {"method", b.method}, {"infidelity", b.infidelity}};
  j["times_a"] = cmp.times_a;
  j["times_b"] = cmp.times_b;
  j["energy_density_a"] = cmp.density_a;
  j["energy_density_b"] = cmp.density_b;
  j["fidelity_a"] = cmp.fidelity_a;
  j["fidelity_b"] = cmp.fidelity_b;
  write_json(out, j);
  emit(to_json(cmp));
  return 0;
}

int run_report(const Common& c, const std::string& dir, const std::string& out, bool with_verify) {
  Solution s = read_solution(dir);
  const double stored = s.infidelity;
  replay(s);
  const fs::path o(out);
  fs::create_directories(o);
  const AlgebraBasis basis = s.problem.basis();

  std::vector<double> t(static_cast<std::size_t>(s.field.steps()) + 1);
  for (int k = 0; k <= s.field.steps(); ++k) t[static_cast<std::size_t>(k)] = s.field.time(k);
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  for (int j = 0; j < s.field.components(); ++j) {
    names.push_back(basis.label(j).str());
    const RVector col = s.field.values.col(j);
    cols.emplace_back(col.data(), col.data() + col.size());
  }
  write_series_csv(o / "fields.csv", t, names, cols);
  write_series_csv(o / "fidelity.csv", t, {"F"}, {s.fidelity});
  write_energy_density_csv(o / "energy_density.csv", s.field, basis.metric_diagonal());
  json summary{{"energy", s.energy},
               {"replayed_infidelity", s.infidelity},
               {"stored_infidelity", stored},
               {"files", {"fields.csv", "fidelity.csv", "energy_density.csv"}}};
  if (!s.jt_history.empty()) {
    std::vector<double> it(s.jt_history.size());
    for (std::size_t i = 0; i < it.size(); ++i) it[i] = static_cast<double>(i);
    write_series_csv(o / "jt_history.csv", it, {"J_T"}, {s.jt_history});
    summary["files"].push_back("jt_history.csv");
  }
  if (with_verify && s.problem.drift_kind == "dephasing" && s.field.components() == 3) {
    const VerificationReport r = average_gate_fidelity(s.field, s.target, s.problem.noise, c.steps.value_or(2000), c.jobs);
    write_verification_csv(o / "average_fidelity.csv", r);
    summary["average_at_tau"] = r.average_at_tau;
    summary["files"].push_back("average_fidelity.csv");
  }
  write_json(o / "summary.json", summary);
  emit(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-optimal gate synthesis by sub-Riemannian geodesic shooting"};
  app.require_subcommand(1);
  Common c;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "Sampling seed");
    sub->add_option("--steps", c.steps, "Time grid N")->check(CLI::Range(2, 10000000));
    sub->add_option("--jobs", c.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", c.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
  };

  std::string bank_out = "bank.jsonl";
  auto* bank = app.add_subcommand("bank", "Sample co-states and record their gate coefficients");
  add_common(bank);
  bank->add_option("--out", bank_out, "Output JSON Lines file");

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Find an energy-minimal geodesic for a gate");
  add_common(synth);
  synth->add_option("--gate", sa.gate, "Gate name or file:<path.json>")->required();
  synth->add_option("--bank", sa.bank, "Bank file; generated from --config when omitted");
  synth->add_option("--strategy", sa.strategy, "ascending or coarse");
  synth->add_option("--refiner", sa.refiner, "nelder-mead, bfgs or lm");
  synth->add_option("--retry-budget", sa.retry_budget, "Candidates to refine");
  synth->add_flag("--first-global", sa.first_global, "Stop at the first accepted candidate");
  synth->add_flag("--phase-equivalents", sa.phase_equivalents, "Also sample near global-phase-equivalent targets");
  synth->add_option("--out", sa.out, "Output directory");

  KrotovArgs ka;
  auto* krotov = app.add_subcommand("krotov", "Krotov baseline optimization");
  add_common(krotov);
  krotov->add_option("--gate", ka.gate, "Gate name or file:<path.json>")->required();
  krotov->add_option("--lambda", ka.lambda, "Update step size")->check(CLI::PositiveNumber);
  krotov->add_option("--max-iters", ka.max_iters, "Iteration cap");
  krotov->add_option("--out", ka.out, "Output directory");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Average gate fidelity under the dephasing master equation");
  add_common(verify);
  verify->add_option("--fields", va.fields, "Field CSV");
  verify->add_option("--gate", va.gate, "Target gate for --fields");
  verify->add_option("--sol", va.sol, "Solution directory (field, gate and noise)");
  verify->add_flag("--no-control", va.no_control, "Zero field, superposition states, identity target");
  verify->add_option("--out", va.out, "Report JSON");

  std::string ca, cb, cmp_out = "compare.json";
  auto* cmp = app.add_subcommand("compare", "Energy and fidelity comparison of two solutions");
  cmp->add_option("--a", ca, "First solution directory")->required();
  cmp->add_option("--b", cb, "Second solution directory")->required();
  cmp->add_option("--out", cmp_out, "Report JSON");

  std::string rep_sol, rep_out = "plots";
  bool rep_verify = false;
  auto* report = app.add_subcommand("report", "Write plot-ready CSV series for a solution");
  add_common(report);
  report->add_option("--sol", rep_sol, "Solution directory")->required();
  report->add_option("--out", rep_out, "Output directory");
  report->add_flag("--verify", rep_verify, "Include the master-equation average fidelity trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    exit_with(1, "Usage", e.what());
  }

  try {
    if (*bank) return run_bank(c, bank_out);
    if (*synth) return run_synth(c, sa);
    if (*krotov) return run_krotov(c, ka);
    if (*verify) return run_verify(c, va);
    if (*cmp) return run_compare(ca, cb, cmp_out);
    if (*report) return run_report(c, rep_sol, rep_out, rep_verify);
  } catch (const Error& e) {
    exit_with(e.is_numerical() ? 2 : 1, std::string(to_string(e.kind())), e.what());
  } catch (const json::exception& e) {
    exit_with(1, "Validation", e.what());
  } catch (const fs::filesystem_error& e) {
    exit_with(1, "Io", e.what());
  } catch (const std::exception& e) {
    exit_with(2, "Numerical", e.what());
  }
  return 0;
}
