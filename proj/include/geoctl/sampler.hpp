#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geoctl/geodesic.hpp"
#include "geoctl/problem.hpp"

namespace geoctl {

/// Norm shells l = norm_min, norm_min + step, ..., norm_max with
/// n(l) = max(1, round(scale * kappa * l / s)) co-states each.
struct NormSchedule {
  double norm_min = 4.0;
  double norm_max = 12.0;
  double norm_step = 0.05;
  double kappa = 200.0;
  double s = 1.0;
  /// Multiplies every shell count; 0.1 gives a tenth-size bank.
  double scale = 1.0;

  /// 4 -> 12 step 0.05, n = 200 l (257600 entries).
  static NormSchedule coarse();
  /// 0.25 -> 2 step 0.25, n = 2000 l / 0.25 (72000 entries).
  static NormSchedule fine();
  /// 0.5 -> 4 step 0.5, n = 1000 l / 0.5 (36000 entries).
  static NormSchedule two_qubit();

  int shells() const;
  double norm(int shell) const;
  int count(int shell) const;
  std::size_t total() const;
  void validate() const;
};

struct BankEntry {
  RVector lambda;
  RVector c;  // empty when !ok
  double norm = 0.0;
  bool ok = false;
  int shell = 0;
  std::size_t index = 0;  // position in the bank
};

struct BankHeader {
  Problem problem;  // problem.steps is the bank's integration grid
  NormSchedule schedule;
  std::uint64_t seed = 0;
};

struct SampleBank {
  BankHeader header;
  std::vector<BankEntry> entries;

  std::size_t valid_count() const;
};

/// Per-entry sub-seed from (seed, shell, entry-within-shell).
std::uint64_t entry_seed(std::uint64_t seed, int shell, int entry);

/// Uniform draw on the sphere of radius `norm` in R^dim from a sub-seed.
RVector sphere_draw(std::uint64_t sub_seed, int dim, double norm);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Integrates one geodesic per drawn co-state and records its c vector.
/// `jobs` <= 0 uses the hardware concurrency. Results do not depend on `jobs`.
SampleBank generate_bank(const NormSchedule& schedule, const Problem& problem, std::uint64_t seed, int jobs = 1,
                         const ProgressFn& progress = {});

/// Representable entries by (distance to c_target, norm, index), first k.
std::vector<const BankEntry*> nearest_candidates(const SampleBank& bank, const RVector& c_target, std::size_t k);
/// The closest representable entry of every shell, shells in increasing norm.
std::vector<const BankEntry*> ascending_norm_candidates(const SampleBank& bank, const RVector& c_target);

/// Same, with the distance to the nearest of several equivalent targets.
std::vector<const BankEntry*> nearest_candidates(const SampleBank& bank, const std::vector<RVector>& c_targets,
                                                 std::size_t k);
std::vector<const BankEntry*> ascending_norm_candidates(const SampleBank& bank,
                                                        const std::vector<RVector>& c_targets);
/// min_r |c - c_targets[r]|.
double target_distance(const RVector& c, const std::vector<RVector>& c_targets);

/// Simplex on the infidelity, BFGS on the infidelity with central-difference
/// gradients, or Levenberg-Marquardt on the phase-aligned matrix residual.
enum class RefineMethod { NelderMead, Bfgs, LevenbergMarquardt };
RefineMethod parse_refine_method(const std::string& s);
std::string to_string(RefineMethod m);

struct RefineOptions {
  RefineMethod method = RefineMethod::NelderMead;
  double tol = 1e-10;
  int max_evaluations = 20000;
  /// Evaluations per stage; stages repeat while they make progress.
  int stage_evaluations = 500;
  /// Follow each stage with a Levenberg-Marquardt polish.
  bool polish = true;
  /// Simplex restarts from the best vertex after a stall.
  int restarts = 1;
  /// Initial simplex edge, relative to max(1, |lambda|).
  double initial_step = 0.05;
  /// Central-difference step for gradients.
  double gradient_step = 1e-6;
};

struct RefineResult {
  GeodesicSolution solution;
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
  double start_infidelity = 1.0;
};

/// Minimizes the final infidelity over the co-state starting from `guess`.
/// Never returns a worse point than the guess. Stops below opts.tol, at
/// opts.max_evaluations, or when a whole stage fails to improve.
RefineResult refine(const CoState& guess, const GateTarget& target, const GeodesicShooter& shooter,
                    const RefineOptions& opts = {});
RefineResult refine(const CoState& guess, const GateTarget& target, const DriftSpec& drift,
                    const AlgebraBasis& basis, double tau, int steps, const RefineOptions& opts = {});

enum class Strategy { Coarse, Ascending };
Strategy parse_strategy(const std::string& s);
std::string to_string(Strategy s);

struct SynthesisOptions {
  RefineOptions refine;
  /// Candidates tried before giving up.
  int retry_budget = 8;
  double overshoot_epsilon = kDefaultOvershootEpsilon;
  /// Refinement grid; the bank's grid when <= 0.
  int steps = 2000;
  int jobs = 1;
  /// Refine every candidate within the budget and keep the accepted solution
  /// of lowest energy instead of the first one.
  bool exhaustive = true;
  /// Also draw candidates for every phase-equivalent target (GateTarget::c_equivalent),
  /// each list with its own retry budget.
  bool phase_equivalents = false;
};

struct SynthesisAttempt {
  std::size_t entry = 0;
  int rank = 0;
  double shell_norm = 0.0;
  double distance = 0.0;
  double start_infidelity = 1.0;
  double final_infidelity = 1.0;
  int evaluations = 0;
  bool converged = false;
  std::string classification;  // empty when refused
  double energy = 0.0;
  std::string error;
};

struct SynthesisResult {
  bool ok = false;
  std::string status;  // "converged" or a failure description
  GeodesicSolution solution;
  std::optional<Classification> classification;
  Strategy strategy = Strategy::Ascending;
  std::size_t seed_entry = 0;
  int candidate_rank = -1;
  int iterations = 0;
  std::vector<SynthesisAttempt> attempts;
};

/// The full pipeline for one target: candidates from the bank, refinement in
/// candidate order. `ascending` accepts GLOBAL_CANDIDATE solutions, `coarse`
/// any converged one. With opts.exhaustive (the default) every candidate in the
/// budget is refined and the accepted solution of lowest energy wins; otherwise
/// the first accepted one does.
SynthesisResult synthesize(const GateTarget& target, const SampleBank& bank, Strategy strategy,
                           const SynthesisOptions& opts = {});

}  // namespace geoctl
