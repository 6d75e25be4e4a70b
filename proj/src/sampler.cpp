#include "geoctl/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <thread>
#include <tuple>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multifit_nlinear.h>
#include <gsl/gsl_multimin.h>

#include "geoctl/error.hpp"
#include "parallel.hpp"

namespace geoctl {

// ---------------------------------------------------------------------------
// Schedules

NormSchedule NormSchedule::coarse() { return {4.0, 12.0, 0.05, 200.0, 1.0, 1.0}; }
NormSchedule NormSchedule::fine() { return {0.25, 2.0, 0.25, 2000.0, 0.25, 1.0}; }
NormSchedule NormSchedule::two_qubit() { return {0.5, 4.0, 0.5, 1000.0, 0.5, 1.0}; }

void NormSchedule::validate() const {
  if (!(norm_min > 0.0)) fail(ErrorKind::Validation, "schedule: norm_min must be positive");
  if (!(norm_step > 0.0)) fail(ErrorKind::Validation, "schedule: norm_step must be positive");
  if (!(norm_max >= norm_min)) fail(ErrorKind::Validation, "schedule: norm_max < norm_min");
  if (!(kappa > 0.0) || !(s > 0.0) || !(scale > 0.0)) {
    fail(ErrorKind::Validation, "schedule: kappa, s and scale must be positive");
  }
}

int NormSchedule::shells() const {
  // Tolerate the rounding in (max - min) / step, e.g. 8 / 0.05.
  return static_cast<int>(std::floor((norm_max - norm_min) / norm_step + 1e-9)) + 1;
}

double NormSchedule::norm(int shell) const { return norm_min + shell * norm_step; }

int NormSchedule::count(int shell) const {
  return std::max(1, static_cast<int>(std::lround(scale * kappa * norm(shell) / s)));
}

std::size_t NormSchedule::total() const {
  std::size_t n = 0;
  for (int i = 0; i < shells(); ++i) n += static_cast<std::size_t>(count(i));
  return n;
}

std::size_t SampleBank::valid_count() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.ok; }));
}

// ---------------------------------------------------------------------------
// Bank generation

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t entry_seed(std::uint64_t seed, int shell, int entry) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(shell));
  return splitmix64(h ^ static_cast<std::uint64_t>(entry));
}

RVector sphere_draw(std::uint64_t sub_seed, int dim, double norm) {
  std::mt19937_64 rng(sub_seed);
  std::normal_distribution<double> gauss;
  RVector v(dim);
  double n2 = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
    n2 = v.squaredNorm();
  } while (n2 < 1e-300);
  return v * (norm / std::sqrt(n2));
}


SampleBank generate_bank(const NormSchedule& schedule, const Problem& problem, std::uint64_t seed, int jobs,
                         const ProgressFn& progress) {
  schedule.validate();
  problem.validate();
  const AlgebraBasis basis = problem.basis();
  const GeodesicShooter shooter(basis, problem.drift(basis), problem.tau, problem.steps);

  SampleBank bank;
  bank.header = {problem, schedule, seed};
  std::vector<std::pair<int, int>> slots;
  slots.reserve(schedule.total());
  for (int sh = 0; sh < schedule.shells(); ++sh) {
    for (int j = 0; j < schedule.count(sh); ++j) slots.emplace_back(sh, j);
  }
  bank.entries.resize(slots.size());

  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  detail::parallel_for(slots.size(), jobs, [&](std::size_t i) {
    const auto [sh, j] = slots[i];
    BankEntry& e = bank.entries[i];
    e.shell = sh;
    e.index = i;
    e.norm = schedule.norm(sh);
    e.lambda = sphere_draw(entry_seed(seed, sh, j), basis.size(), e.norm);
    try {
      const CoefficientExtraction x = log_coefficients(shooter.final_unitary(CoState(e.lambda)), problem.tau, basis);
      e.ok = x.representable();
      if (e.ok) e.c = x.c;
    } catch (const Error&) {
      e.ok = false;
    }
    const std::size_t n = ++done;
    if (progress && (n % 1000 == 0 || n == slots.size())) {
      std::lock_guard lock(progress_mutex);
      progress(n, slots.size());
    }
  });
  return bank;
}

// ---------------------------------------------------------------------------
// Candidate selection

namespace {

void require_bank(const SampleBank& bank, const std::vector<RVector>& c_targets) {
  if (bank.entries.empty()) fail(ErrorKind::Validation, "candidate selection: bank is empty");
  if (c_targets.empty()) fail(ErrorKind::Validation, "candidate selection: no target");
  for (const auto& e : bank.entries) {
    for (const auto& c : c_targets) {
      if (e.ok && e.c.size() != c.size()) {
        fail(ErrorKind::Dimension, "candidate selection: bank c vectors do not match the target length");
      }
    }
  }
}

using Ranked = std::tuple<double, double, std::size_t, const BankEntry*>;

std::vector<Ranked> rank_entries(const SampleBank& bank, const std::vector<RVector>& c_targets) {
  std::vector<Ranked> ranked;
  for (const auto& e : bank.entries) {
    if (e.ok) ranked.emplace_back(target_distance(e.c, c_targets), e.norm, e.index, &e);
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b));
  });
  return ranked;
}

}  // namespace

double target_distance(const RVector& c, const std::vector<RVector>& c_targets) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : c_targets) best = std::min(best, (c - t).norm());
  return best;
}

std::vector<const BankEntry*> nearest_candidates(const SampleBank& bank, const std::vector<RVector>& c_targets,
                                                 std::size_t k) {
  require_bank(bank, c_targets);
  const auto ranked = rank_entries(bank, c_targets);
  std::vector<const BankEntry*> out;
  for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) out.push_back(std::get<3>(ranked[i]));
  return out;
}

std::vector<const BankEntry*> ascending_norm_candidates(const SampleBank& bank,
                                                        const std::vector<RVector>& c_targets) {
  require_bank(bank, c_targets);
  std::vector<const BankEntry*> best;
  for (const auto& [dist, norm, index, e] : rank_entries(bank, c_targets)) {
    const bool seen = std::any_of(best.begin(), best.end(), [&](const BankEntry* b) { return b->shell == e->shell; });
    if (!seen) best.push_back(e);
  }
  std::sort(best.begin(), best.end(), [](const BankEntry* a, const BankEntry* b) { return a->shell < b->shell; });
  return best;
}

std::vector<const BankEntry*> nearest_candidates(const SampleBank& bank, const RVector& c_target, std::size_t k) {
  return nearest_candidates(bank, std::vector<RVector>{c_target}, k);
}

std::vector<const BankEntry*> ascending_norm_candidates(const SampleBank& bank, const RVector& c_target) {
  return ascending_norm_candidates(bank, std::vector<RVector>{c_target});
}

// ---------------------------------------------------------------------------
// Refinement

namespace {

struct Objective {
  Objective(const GateTarget& t, const GeodesicShooter& s) : target(t), shooter(s) {}

  const GateTarget& target;
  const GeodesicShooter& shooter;
  int evaluations = 0;
  double best_f = std::numeric_limits<double>::infinity();
  RVector best_x;

  double operator()(const RVector& x) {
    double f = 2.0;  // integration blew up: worse than any reachable infidelity
    try {
      f = 1.0 - fidelity(shooter.final_unitary(CoState(x)), target);
    } catch (const Error&) {
    }
    record(x, f);
    return f;
  }

  /// Entries of (U - e^{i phi} T) / sqrt(dim) with the phase aligned to the
  /// overlap; the squared norm is 2 (1 - |ntr(T^dagger U)|).
  void residual(const RVector& x, gsl_vector* out) {
    const CMatrix& t = target.embedded;
    const auto n = t.rows();
    CMatrix u;
    try {
      u = shooter.final_unitary(CoState(x));
    } catch (const Error&) {
      u = CMatrix::Zero(n, n);
    }
    const cplx overlap = normalized_trace_product(t.adjoint(), u);
    record(x, u.squaredNorm() > 0.0 ? 1.0 - std::min(1.0, std::norm(overlap)) : 2.0);
    const cplx phase = std::abs(overlap) > 1e-12 ? overlap / std::abs(overlap) : cplx(1.0);
    const CMatrix diff = (u - phase * t) / std::sqrt(static_cast<double>(n));
    for (Eigen::Index k = 0; k < diff.size(); ++k) {
      gsl_vector_set(out, static_cast<std::size_t>(2 * k), diff(k).real());
      gsl_vector_set(out, static_cast<std::size_t>(2 * k + 1), diff(k).imag());
    }
  }

 private:
  void record(const RVector& x, double f) {
    ++evaluations;
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
};

RVector to_eigen(const gsl_vector* v) {
  RVector out(static_cast<Eigen::Index>(v->size));
  for (std::size_t i = 0; i < v->size; ++i) out(static_cast<Eigen::Index>(i)) = gsl_vector_get(v, i);
  return out;
}

void to_gsl(const RVector& x, gsl_vector* v) {
  for (Eigen::Index i = 0; i < x.size(); ++i) gsl_vector_set(v, static_cast<std::size_t>(i), x(i));
}

struct GslVector {
  explicit GslVector(std::size_t n) : v(gsl_vector_alloc(n)) {}
  ~GslVector() { gsl_vector_free(v); }
  GslVector(const GslVector&) = delete;
  GslVector& operator=(const GslVector&) = delete;
  gsl_vector* v;
};

double gsl_value(const gsl_vector* x, void* params) { return (*static_cast<Objective*>(params))(to_eigen(x)); }

int nelder_mead(Objective& obj, const RVector& start, const RefineOptions& opts, int limit, double step) {
  const auto n = static_cast<std::size_t>(start.size());
  gsl_multimin_function fn{&gsl_value, n, &obj};
  int iterations = 0;
  RVector x0 = start;
  for (int round = 0; round <= opts.restarts; ++round) {
    GslVector x(n), steps(n);
    to_gsl(x0, x.v);
    gsl_vector_set_all(steps.v, step);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(s, &fn, x.v, steps.v);
    double last_size = std::numeric_limits<double>::infinity();
    while (obj.best_f >= opts.tol && obj.evaluations < limit) {
      ++iterations;
      if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
      last_size = gsl_multimin_fminimizer_size(s);
      if (last_size < 1e-14 * std::max(1.0, x0.norm())) break;
    }
    gsl_multimin_fminimizer_free(s);
    if (obj.best_f < opts.tol || obj.evaluations >= limit) break;
    // Stalled: rebuild the simplex around the best vertex.
    x0 = obj.best_x;
    step = std::max(10.0 * last_size, 1e-6 * std::max(1.0, x0.norm()));
  }
  return iterations;
}

struct GradientContext {
  Objective* obj;
  double h;
};

void fd_gradient(const gsl_vector* x, void* params, gsl_vector* g) {
  auto* ctx = static_cast<GradientContext*>(params);
  RVector p = to_eigen(x);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double xi = p(i);
    const double h = ctx->h * std::max(1.0, std::abs(xi));
    p(i) = xi + h;
    const double fp = (*ctx->obj)(p);
    p(i) = xi - h;
    const double fm = (*ctx->obj)(p);
    p(i) = xi;
    gsl_vector_set(g, static_cast<std::size_t>(i), (fp - fm) / (2.0 * h));
  }
}

double gradient_value(const gsl_vector* x, void* params) {
  return (*static_cast<GradientContext*>(params)->obj)(to_eigen(x));
}

void value_and_gradient(const gsl_vector* x, void* params, double* f, gsl_vector* g) {
  *f = gradient_value(x, params);
  fd_gradient(x, params, g);
}

int bfgs(Objective& obj, const RVector& start, const RefineOptions& opts, int limit) {
  const auto n = static_cast<std::size_t>(start.size());
  GradientContext ctx{&obj, opts.gradient_step};
  gsl_multimin_function_fdf fn{&gradient_value, &fd_gradient, &value_and_gradient, n, &ctx};
  int iterations = 0;
  RVector x0 = start;
  for (int round = 0; round <= opts.restarts; ++round) {
    GslVector x(n);
    to_gsl(x0, x.v);
    gsl_multimin_fdfminimizer* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
    gsl_multimin_fdfminimizer_set(s, &fn, x.v, opts.initial_step * std::max(1.0, start.norm()), 0.1);
    while (obj.best_f >= opts.tol && obj.evaluations < limit) {
      ++iterations;
      if (gsl_multimin_fdfminimizer_iterate(s) != GSL_SUCCESS) break;
    }
    gsl_multimin_fdfminimizer_free(s);
    if (obj.best_f < opts.tol || obj.evaluations >= limit) break;
    x0 = obj.best_x;
  }
  return iterations;
}

struct LeastSquaresContext {
  Objective* obj;
  double h;
  std::size_t residuals;
};

int ls_residual(const gsl_vector* x, void* params, gsl_vector* f) {
  static_cast<LeastSquaresContext*>(params)->obj->residual(to_eigen(x), f);
  return GSL_SUCCESS;
}

int ls_jacobian(const gsl_vector* x, void* params, gsl_matrix* jac) {
  auto* ctx = static_cast<LeastSquaresContext*>(params);
  RVector p = to_eigen(x);
  GslVector fp(ctx->residuals), fm(ctx->residuals);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double xi = p(i);
    const double h = ctx->h * std::max(1.0, std::abs(xi));
    p(i) = xi + h;
    ctx->obj->residual(p, fp.v);
    p(i) = xi - h;
    ctx->obj->residual(p, fm.v);
    p(i) = xi;
    for (std::size_t r = 0; r < ctx->residuals; ++r) {
      gsl_matrix_set(jac, r, static_cast<std::size_t>(i),
                     (gsl_vector_get(fp.v, r) - gsl_vector_get(fm.v, r)) / (2.0 * h));
    }
  }
  return GSL_SUCCESS;
}

int levenberg_marquardt(Objective& obj, const RVector& start, const RefineOptions& opts, int limit) {
  const auto p = static_cast<std::size_t>(start.size());
  const auto residuals = static_cast<std::size_t>(2 * obj.target.embedded.size());
  LeastSquaresContext ctx{&obj, opts.gradient_step, residuals};
  gsl_multifit_nlinear_fdf fdf{};
  fdf.f = &ls_residual;
  fdf.df = &ls_jacobian;
  fdf.n = residuals;
  fdf.p = p;
  fdf.params = &ctx;
  gsl_multifit_nlinear_parameters params = gsl_multifit_nlinear_default_parameters();
  params.trs = gsl_multifit_nlinear_trs_lm;
  int iterations = 0;
  RVector x0 = start;
  for (int round = 0; round <= opts.restarts; ++round) {
    GslVector x(p);
    to_gsl(x0, x.v);
    gsl_multifit_nlinear_workspace* w = gsl_multifit_nlinear_alloc(gsl_multifit_nlinear_trust, &params, residuals, p);
    gsl_multifit_nlinear_init(x.v, &fdf, w);
    while (obj.best_f >= opts.tol && obj.evaluations < limit) {
      ++iterations;
      if (gsl_multifit_nlinear_iterate(w) != GSL_SUCCESS) break;
    }
    gsl_multifit_nlinear_free(w);
    if (obj.best_f < opts.tol || obj.evaluations >= limit) break;
    x0 = obj.best_x;
  }
  return iterations;
}

}  // namespace

RefineResult refine(const CoState& guess, const GateTarget& target, const GeodesicShooter& shooter,
                    const RefineOptions& opts) {
  if (guess.size() != shooter.basis().size()) fail(ErrorKind::Dimension, "refine: co-state length mismatch");
  if (!guess.coefficients.allFinite()) fail(ErrorKind::Validation, "refine: guess has non-finite entries");
  if (!(opts.tol > 0.0) || opts.max_evaluations < 1) fail(ErrorKind::Validation, "refine: bad options");
  static const bool gsl_quiet = (gsl_set_error_handler_off(), true);
  (void)gsl_quiet;

  Objective obj{target, shooter};
  RefineResult out;
  out.start_infidelity = obj(guess.coefficients);
  if (obj.best_f >= opts.tol) {
      // Stages of the chosen method alternate with a Levenberg-Marquardt
    // polish; the stage method gets the basin, the polish gets the digits.
    double step = opts.initial_step * std::max(1.0, guess.coefficients.norm());
    while (obj.best_f >= opts.tol && obj.evaluations < opts.max_evaluations) {
      const double before = obj.best_f;
      const int limit = std::min(opts.max_evaluations, obj.evaluations + opts.stage_evaluations);
      const RVector x = obj.best_x;
      switch (opts.method) {
        case RefineMethod::NelderMead: out.iterations += nelder_mead(obj, x, opts, limit, step); break;
        case RefineMethod::Bfgs: out.iterations += bfgs(obj, x, opts, limit); break;
        case RefineMethod::LevenbergMarquardt: out.iterations += levenberg_marquardt(obj, x, opts, limit); break;
      }
      if (opts.polish && opts.method != RefineMethod::LevenbergMarquardt && obj.best_f >= opts.tol) {
        const int polish_limit = std::min(opts.max_evaluations, obj.evaluations + opts.stage_evaluations);
        out.iterations += levenberg_marquardt(obj, obj.best_x, opts, polish_limit);
      }
      if (!(obj.best_f < 0.999 * before)) break;
      step = std::max(0.1 * step, 1e-4 * std::max(1.0, obj.best_x.norm()));
    }
  }
  out.evaluations = obj.evaluations;
  out.solution = shooter.solve(CoState(obj.best_x), &target);
  out.converged = out.solution.infidelity < opts.tol;
  return out;
}

RefineResult refine(const CoState& guess, const GateTarget& target, const DriftSpec& drift,
                    const AlgebraBasis& basis, double tau, int steps, const RefineOptions& opts) {
  return refine(guess, target, GeodesicShooter(basis, drift, tau, steps), opts);
}

// ---------------------------------------------------------------------------
// Synthesis

RefineMethod parse_refine_method(const std::string& s) {
  if (s == "nelder-mead" || s == "simplex") return RefineMethod::NelderMead;
  if (s == "bfgs") return RefineMethod::Bfgs;
  if (s == "lm" || s == "levenberg-marquardt") return RefineMethod::LevenbergMarquardt;
  fail(ErrorKind::Validation, "unknown refiner '" + s + "' (nelder-mead, bfgs, lm)");
}

std::string to_string(RefineMethod m) {
  switch (m) {
    case RefineMethod::NelderMead: return "nelder-mead";
    case RefineMethod::Bfgs: return "bfgs";
    case RefineMethod::LevenbergMarquardt: return "lm";
  }
  return "?";
}

Strategy parse_strategy(const std::string& s) {
  if (s == "coarse") return Strategy::Coarse;
  if (s == "ascending") return Strategy::Ascending;
  fail(ErrorKind::Validation, "unknown strategy '" + s + "' (coarse, ascending)");
}

std::string to_string(Strategy s) { return s == Strategy::Coarse ? "coarse" : "ascending"; }

SynthesisResult synthesize(const GateTarget& target, const SampleBank& bank, Strategy strategy,
                           const SynthesisOptions& opts) {
  const Problem& problem = bank.header.problem;
  const GeodesicShooter shooter = problem.shooter(opts.steps > 0 ? opts.steps : problem.steps);
  if (target.embedded.rows() != shooter.basis().dim()) {
    fail(ErrorKind::Dimension, "synthesize: target does not match the bank's basis");
  }

  std::vector<RVector> c_targets{target.c_target};
  if (opts.phase_equivalents) {
    for (const auto& c : target.c_equivalent) {
      if (target_distance(c, c_targets) > 1e-9) c_targets.push_back(c);
    }
  }

  // One candidate list per phase-equivalent target, each cut to the retry
  // budget, interleaved so every representative gets its small shells first.
  std::vector<std::vector<const BankEntry*>> lists;
  for (const auto& c : c_targets) {
    auto list = strategy == Strategy::Coarse
                    ? nearest_candidates(bank, c, static_cast<std::size_t>(opts.retry_budget))
                    : ascending_norm_candidates(bank, c);
    if (list.size() > static_cast<std::size_t>(opts.retry_budget)) list.resize(opts.retry_budget);
    lists.push_back(std::move(list));
  }
  std::vector<const BankEntry*> candidates;
  for (std::size_t i = 0; i < static_cast<std::size_t>(opts.retry_budget); ++i) {
    for (const auto& list : lists) {
      if (i < list.size() && std::find(candidates.begin(), candidates.end(), list[i]) == candidates.end()) {
        candidates.push_back(list[i]);
      }
    }
  }

  SynthesisResult out;
  out.strategy = strategy;
  std::vector<RefineResult> refined(candidates.size());
  std::vector<SynthesisAttempt> attempts(candidates.size());

  auto run = [&](std::size_t i) {
    const BankEntry& e = *candidates[i];
    SynthesisAttempt& a = attempts[i];
    a.entry = e.index;
    a.rank = static_cast<int>(i);
    a.shell_norm = e.norm;
    a.distance = target_distance(e.c, c_targets);
    try {
      refined[i] = refine(CoState(e.lambda), target, shooter, opts.refine);
      const RefineResult& r = refined[i];
      a.start_infidelity = r.start_infidelity;
      a.final_infidelity = r.solution.infidelity;
      a.evaluations = r.evaluations;
      a.converged = r.converged;
      a.energy = r.solution.energy;
      if (r.converged) a.classification = classify_trajectory(r.solution.fidelity, opts.overshoot_epsilon).str();
    } catch (const Error& err) {
      a.error = err.what();
    }
  };
  auto accepted = [&](std::size_t i) {
    const SynthesisAttempt& a = attempts[i];
    if (!a.converged || a.classification.empty()) return false;
    return strategy == Strategy::Coarse || Classification::parse(a.classification).global();
  };

  // Batches of `jobs` candidates; the winner is chosen by candidate order, not
  // by which finished first.
  const std::size_t batch = static_cast<std::size_t>(std::max(1, detail::resolve_jobs(opts.jobs)));
  std::optional<std::size_t> winner;
  std::size_t tried = 0;
  for (std::size_t start = 0; start < candidates.size() && (!winner || opts.exhaustive); start += batch) {
    const std::size_t stop = std::min(candidates.size(), start + batch);
    detail::parallel_for(stop - start, static_cast<int>(batch), [&](std::size_t k) { run(start + k); });
    tried = stop;
    for (std::size_t i = start; i < stop; ++i) {
      if (!accepted(i)) continue;
      // Strict comparison keeps the earlier candidate on ties.
      if (!winner || (opts.exhaustive && attempts[i].energy < attempts[*winner].energy)) winner = i;
      if (!opts.exhaustive) break;
    }
  }
  out.attempts.assign(attempts.begin(), attempts.begin() + static_cast<std::ptrdiff_t>(tried));
  if (candidates.empty()) {
    out.status = "no representable bank entries";
    return out;
  }

  std::size_t pick = 0;
  if (winner) {
    pick = *winner;
    out.ok = true;
    out.status = "converged";
  } else {
    for (std::size_t i = 1; i < tried; ++i) {
      if (attempts[i].final_infidelity < attempts[pick].final_infidelity) pick = i;
    }
    out.status = strategy == Strategy::Ascending ? "no global candidate within the retry budget"
                                                 : "no candidate converged within the retry budget";
  }
  out.solution = refined[pick].solution;
  out.seed_entry = candidates[pick]->index;
  out.candidate_rank = static_cast<int>(pick);
  out.iterations = refined[pick].iterations;
  if (!attempts[pick].classification.empty()) out.classification = Classification::parse(attempts[pick].classification);
  return out;
}

}  // namespace geoctl
