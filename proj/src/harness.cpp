#include "voigt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "voigt/errors.hpp"

namespace voigt {

namespace {

// Runs body(i) for i in [0, n) on up to `jobs` threads. Each index writes
// only its own output slot, so results do not depend on scheduling. The
// exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(jobs < 1 ? 1 : jobs, 1, std::max<std::size_t>(n, 1));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Fixed step shared by every run of a plan: the CFL step of the initial
// velocity, shrunk so that the record interval is an integer number of
// steps.
double shared_step(const SpectralField& omega0, double courant, double record_every) {
  const double dt = cfl_dt(biot_savart(omega0), omega0.grid(), courant);
  const double steps = std::max(1.0, std::ceil(record_every / dt - 1e-9));
  return record_every / steps;
}

SolverConfig run_config(const SweepPlan& plan, const GridSpec& grid, double alpha, double dt) {
  SolverConfig cfg;
  cfg.grid = grid;
  cfg.alpha = alpha;
  cfg.t_end = plan.t_end;
  cfg.step = FixedStep{dt};
  cfg.record_every = plan.record_every();
  cfg.snapshot_every = plan.record_every();
  return cfg;
}

TrajectoryRecord run_system(const SpectralField& omega0, const SpectralField& dt_source,
                            const SweepPlan& plan, double alpha) {
  const double dt = shared_step(dt_source, plan.courant, plan.record_every());
  return integrate(omega0, run_config(plan, omega0.grid(), alpha, dt));
}

// Euler solution from omega0, optionally computed on a refined grid and
// restricted back to the retained modes of the plan grid.
TrajectoryRecord euler_reference(const SpectralField& omega0, const SpectralField& dt_source,
                                 const SweepPlan& plan) {
  if (plan.refine_factor == 1) return run_system(omega0, dt_source, plan, 0.0);

  const GridSpec fine(plan.grid.size() * plan.refine_factor);
  TrajectoryRecord fine_run =
      run_system(resample(omega0, fine), resample(dt_source, fine), plan, 0.0);

  TrajectoryRecord coarse;
  coarse.grid = plan.grid;
  coarse.alpha = 0.0;
  for (const Snapshot& snap : fine_run.snapshots) {
    SpectralField restricted = dealias(resample(snap.omega, plan.grid));
    coarse.samples.push_back(sample_state(restricted, 0.0, snap.time));
    coarse.snapshots.push_back({snap.time, std::move(restricted)});
  }
  return coarse;
}

std::string describe_blowup(const BlowUpError& e, const char* what, double alpha) {
  std::ostringstream msg;
  msg << what << " run (alpha = " << alpha << ") failed: " << e.what();
  return msg.str();
}

std::optional<RateFit> try_fit(const std::vector<AlphaRow>& rows, double ErrorNorms::*metric) {
  std::vector<std::pair<double, double>> pts;
  for (const AlphaRow& r : rows) {
    const double e = r.errors.*metric;
    if (!(e > 0.0) || !std::isfinite(e)) return std::nullopt;
    pts.emplace_back(r.alpha, e);
  }
  return fit_rate(pts);
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

CriterionResult slope_check(const std::string& name, const std::optional<RateFit>& fit,
                            double expected, double tol) {
  if (!fit) return {name, Verdict::fail, "no fit (non-positive errors)"};
  const bool ok = std::abs(fit->slope - expected) <= tol;
  return {name, ok ? Verdict::pass : Verdict::fail,
          "fitted " + fmt(fit->slope) + " vs " + fmt(expected) + " +/- " + fmt(tol)};
}

CriterionResult decrease_check(const std::string& name, const std::vector<AlphaRow>& rows,
                               double ErrorNorms::*metric) {
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].errors.*metric > 1.05 * (rows[i - 1].errors.*metric)) monotone = false;
  }
  const double first = rows.front().errors.*metric;
  const double last = rows.back().errors.*metric;
  const bool shrinks = last < 0.2 * first;
  return {name, monotone && shrinks ? Verdict::pass : Verdict::fail,
          std::string(monotone ? "non-increasing" : "not monotone") + " within 5%, ratio " +
              fmt(first > 0.0 ? last / first : 0.0) + " (need < 0.2)"};
}

bool degenerate(const std::vector<AlphaRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const AlphaRow& r) {
    return r.errors.sup_u_l2 <= 1e-10 && r.errors.sup_omega_l2 <= 1e-10 &&
           r.errors.sup_u_h1 <= 1e-10;
  });
}

void attach_fits_and_verdicts(ConvergenceReport& report) {
  const SweepPlan& plan = report.plan;
  report.theory = theoretical_slope(plan.regime,
                                    plan.regime == Regime::smooth_intermediate
                                        ? std::optional<double>(plan.s)
                                        : std::nullopt,
                                    plan.t_end);
  if (degenerate(report.rows)) {
    report.verdicts.push_back({"errors", Verdict::skip, "all errors vanish; no rate to fit"});
    return;
  }
  report.velocity_fit = try_fit(report.rows, &ErrorNorms::sup_u_l2);
  report.vorticity_fit = try_fit(report.rows, &ErrorNorms::sup_omega_l2);
  report.h1_fit = try_fit(report.rows, &ErrorNorms::sup_u_h1);

  const double tol = plan.slope_tolerance;
  switch (plan.regime) {
    case Regime::smooth_s_ge_3:
    case Regime::smooth_intermediate:
      report.verdicts.push_back(
          slope_check("velocity_rate", report.velocity_fit, *report.theory.velocity, tol));
      report.verdicts.push_back(
          slope_check("vorticity_rate", report.vorticity_fit, *report.theory.vorticity, tol));
      break;
    case Regime::yudovich: {
      const auto& fit = report.velocity_fit;
      const bool ok = fit && fit->slope > 0.0 && fit->slope <= 0.5 + 0.1;
      report.verdicts.push_back(
          {"velocity_rate_bound", ok ? Verdict::pass : Verdict::fail,
           fit ? "fitted " + fmt(fit->slope) + " in (0, 0.6]" : std::string("no fit")});
      break;
    }
    case Regime::enstrophy_class:
      report.verdicts.push_back(decrease_check("h1_velocity_decrease", report.rows,
                                               &ErrorNorms::sup_u_h1));
      report.verdicts.push_back(decrease_check("vorticity_decrease", report.rows,
                                               &ErrorNorms::sup_omega_l2));
      break;
  }
}

double homogeneous_norm_of_difference(const VelocityPair& a, const VelocityPair& b, double s) {
  return homogeneous_sobolev_norm(VelocityPair{a.u1 - b.u1, a.u2 - b.u2}, s);
}

}  // namespace

// ------------------------------------------------------------------ regimes

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::smooth_s_ge_3: return "smooth_s_ge_3";
    case Regime::smooth_intermediate: return "smooth_2_lt_s_lt_3";
    case Regime::yudovich: return "yudovich";
    case Regime::enstrophy_class: return "enstrophy_class";
  }
  return "unknown";
}

Regime regime_from_string(const std::string& name) {
  for (Regime r : {Regime::smooth_s_ge_3, Regime::smooth_intermediate, Regime::yudovich,
                   Regime::enstrophy_class}) {
    if (name == to_string(r)) return r;
  }
  throw std::invalid_argument("unknown regime '" + name + "'");
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::skip: return "SKIP";
    case Verdict::advisory: return "ADVISORY";
  }
  return "?";
}

void SweepPlan::validate() const {
  if (alphas.size() < 4) throw std::invalid_argument("sweep needs at least 4 alpha values");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0 && alphas[i] <= 1.0)) {
      throw std::invalid_argument("alpha values must lie in (0, 1]");
    }
    if (i > 0 && !(alphas[i] < alphas[i - 1])) {
      throw std::invalid_argument("alpha values must be strictly decreasing");
    }
  }
  if (alphas.front() / alphas.back() < 100.0 * (1.0 - 1e-9)) {
    throw std::invalid_argument("alpha values must span at least two decades");
  }
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (records < 1) throw std::invalid_argument("records must be >= 1");
  if (!(courant > 0.0 && courant <= 1.0)) throw std::invalid_argument("courant must lie in (0, 1]");
  if (refine_factor < 1) throw std::invalid_argument("refine factor must be >= 1");
  if (!(slope_tolerance > 0.0)) throw std::invalid_argument("slope tolerance must be positive");
  if (regime == Regime::smooth_intermediate && !(s > 2.0 && s < 3.0)) {
    throw std::invalid_argument("smooth_2_lt_s_lt_3 needs 2 < s < 3");
  }
}

bool ConvergenceReport::passed() const {
  return !failed && std::none_of(verdicts.begin(), verdicts.end(), [](const CriterionResult& c) {
    return c.verdict == Verdict::fail;
  });
}

// ------------------------------------------------------------------ fitting

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
  const double n = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [a, e] : points) {
    if (!(a > 0.0) || !(e > 0.0)) throw std::invalid_argument("fit_rate: inputs must be positive");
    mx += std::log(a);
    my += std::log(e);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [a, e] : points) {
    const double dx = std::log(a) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(e) - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_rate: alpha values are all identical");

  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (const auto& [a, e] : points) {
    const double r = std::log(e) - (fit.intercept + fit.slope * std::log(a));
    rss += r * r;
  }
  fit.stderr_slope = points.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
  return fit;
}

std::vector<double> local_slopes(std::span<const std::pair<double, double>> points) {
  std::vector<double> out;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& [a0, e0] = points[i - 1];
    const auto& [a1, e1] = points[i];
    if (!(a0 > 0.0 && a1 > 0.0 && e0 > 0.0 && e1 > 0.0)) {
      throw std::invalid_argument("local_slopes: inputs must be positive");
    }
    if (a0 == a1) throw std::invalid_argument("local_slopes: repeated alpha");
    out.push_back(std::log(e1 / e0) / std::log(a1 / a0));
  }
  return out;
}

TheoreticalSlope theoretical_slope(Regime regime, std::optional<double> s, double t_end) {
  switch (regime) {
    case Regime::smooth_s_ge_3:
      if (s && *s < 3.0) throw std::invalid_argument("smooth_s_ge_3 needs s >= 3");
      return {0.5, 0.5, "velocity 1/2, vorticity 1/2"};
    case Regime::smooth_intermediate: {
      if (!s || !(*s > 2.0 && *s < 3.0)) {
        throw std::invalid_argument("smooth_2_lt_s_lt_3 needs 2 < s < 3");
      }
      const double vort = (*s - 1.0) / 4.0;
      return {0.5, vort, "velocity 1/2, vorticity (s-1)/4 = " + fmt(vort)};
    }
    case Regime::yudovich: {
      std::ostringstream d;
      d << "velocity exponent (1/4) exp(-C1 T) with T = " << t_end
        << " and C1 unknown; bound-form check only";
      return {std::nullopt, std::nullopt, d.str()};
    }
    case Regime::enstrophy_class:
      return {std::nullopt, std::nullopt, "no rate claimed; convergence only"};
  }
  throw std::invalid_argument("unknown regime");
}

int choose_cutoff(double alpha, double constant, int max_cutoff) {
  if (!(alpha > 0.0)) throw std::invalid_argument("choose_cutoff: alpha must be positive");
  const double n = std::round(constant * std::pow(alpha, -0.25));
  return static_cast<int>(std::clamp(n, 1.0, static_cast<double>(std::max(1, max_cutoff))));
}

// ------------------------------------------------------------------- sweeps

PairResult run_pair(const DataRecipe& recipe, double alpha, const SweepPlan& plan) {
  if (!(alpha > 0.0)) throw std::invalid_argument("run_pair: alpha must be positive");
  const SpectralField omega0 = generate(recipe, plan.grid);
  const SpectralField omega0_alpha = make_alpha_family(omega0, alpha, plan.family);

  PairResult result;
  try {
    result.voigt = run_system(omega0_alpha, omega0, plan, alpha);
  } catch (const BlowUpError& e) {
    throw BlowUpError(describe_blowup(e, "Euler-Voigt", alpha), e.time());
  }
  try {
    result.euler = euler_reference(omega0, omega0, plan);
  } catch (const BlowUpError& e) {
    throw BlowUpError(describe_blowup(e, "Euler", 0.0), e.time());
  }
  result.errors = error_norms(result.voigt, result.euler);
  return result;
}

ConvergenceReport run_sweep(const SweepPlan& plan, int jobs) {
  plan.validate();
  ConvergenceReport report;
  report.plan = plan;

  try {
    const SpectralField omega0 = generate(plan.recipe, plan.grid);
    const TrajectoryRecord euler = euler_reference(omega0, omega0, plan);

    report.rows.resize(plan.alphas.size());
    parallel_for(plan.alphas.size(), jobs, [&](std::size_t i) {
      const double alpha = plan.alphas[i];
      const SpectralField start = make_alpha_family(omega0, alpha, plan.family);
      const TrajectoryRecord voigt = run_system(start, omega0, plan, alpha);
      report.rows[i] = {alpha, error_norms(voigt, euler)};
    });
  } catch (const BlowUpError& e) {
    report.failed = true;
    report.blow_up = true;
    report.failure = e.what();
    return report;
  } catch (const std::exception& e) {
    report.failed = true;
    report.failure = e.what();
    return report;
  }
  attach_fits_and_verdicts(report);
  return report;
}

bool truncation_bounds_hold(const SpectralField& omega, int n, double s,
                            std::span<const double> s_above, std::span<const double> s_below) {
  if (n < 1) throw std::invalid_argument("truncation_bounds_hold: cutoff must be >= 1");
  constexpr double slack = 1.0 + 1e-12;
  const VelocityPair u = biot_savart(omega);
  const VelocityPair un = biot_savart(galerkin_truncate(omega, n));
  const double u_s = homogeneous_sobolev_norm(u, s);
  const double nn = static_cast<double>(n);

  bool ok = homogeneous_sobolev_norm(un, s) <= slack * u_s;
  for (double sp : s_above) {
    if (!(sp > s)) throw std::invalid_argument("truncation_bounds_hold: s' must exceed s");
    ok = ok && homogeneous_sobolev_norm(un, sp) <= slack * std::pow(nn, sp - s) * u_s;
  }
  for (double sb : s_below) {
    if (!(sb >= 0.0 && sb < s)) throw std::invalid_argument("truncation_bounds_hold: need 0 <= s_bar < s");
    ok = ok && homogeneous_norm_of_difference(un, u, sb) <= slack * u_s / std::pow(nn, s - sb);
  }
  return ok;
}

ConvergenceReport galerkin_reference_sweep(const SweepPlan& plan, double s, int jobs) {
  plan.validate();
  if (!(s > 2.0 && s < 3.0)) throw std::invalid_argument("galerkin_reference_sweep: need 2 < s < 3");
  ConvergenceReport report;
  report.plan = plan;
  report.plan.regime = Regime::smooth_intermediate;
  report.plan.s = s;

  const std::size_t n_alpha = plan.alphas.size();
  try {
    const SpectralField omega0 = generate(plan.recipe, plan.grid);
    const TrajectoryRecord euler = euler_reference(omega0, omega0, plan);

    std::vector<int> cutoffs(n_alpha);
    std::map<int, std::size_t> slot_of_cutoff;
    for (std::size_t i = 0; i < n_alpha; ++i) {
      cutoffs[i] = choose_cutoff(plan.alphas[i], plan.cutoff_constant, plan.grid.dealias_cutoff());
      slot_of_cutoff.emplace(cutoffs[i], slot_of_cutoff.size());
    }
    std::vector<int> distinct(slot_of_cutoff.size());
    for (const auto& [n, slot] : slot_of_cutoff) distinct[slot] = n;

    // Euler runs from the truncated data, one per distinct cutoff.
    std::vector<TrajectoryRecord> truncated_runs(distinct.size());
    parallel_for(distinct.size(), jobs, [&](std::size_t j) {
      truncated_runs[j] = euler_reference(galerkin_truncate(omega0, distinct[j]), omega0, plan);
    });

    report.rows.resize(n_alpha);
    report.galerkin.resize(n_alpha);
    const double s_above[] = {s + 0.5, 3.0};
    const double s_below[] = {0.0, 1.0};
    parallel_for(n_alpha, jobs, [&](std::size_t i) {
      const double alpha = plan.alphas[i];
      const int n = cutoffs[i];
      const TrajectoryRecord& euler_n = truncated_runs[slot_of_cutoff.at(n)];
      const SpectralField start = make_alpha_family(omega0, alpha, plan.family);
      const TrajectoryRecord voigt = run_system(start, omega0, plan, alpha);

      const ErrorNorms total = error_norms(voigt, euler);
      GalerkinRow row;
      row.alpha = alpha;
      row.cutoff = n;
      row.truncation_error = error_norms(euler_n, euler).sup_omega_l2;
      row.model_error = error_norms(voigt, euler_n).sup_omega_l2;
      row.total_error = total.sup_omega_l2;
      row.initial_truncation = l2_norm(galerkin_truncate(omega0, n) - omega0);
      row.truncation_bounds_hold = truncation_bounds_hold(omega0, n, s, s_above, s_below);
      report.rows[i] = {alpha, total};
      report.galerkin[i] = row;
    });
  } catch (const BlowUpError& e) {
    report.failed = true;
    report.blow_up = true;
    report.failure = e.what();
    return report;
  } catch (const std::exception& e) {
    report.failed = true;
    report.failure = e.what();
    return report;
  }

  report.theory = theoretical_slope(Regime::smooth_intermediate, s, plan.t_end);
  const bool bounds = std::all_of(report.galerkin.begin(), report.galerkin.end(),
                                  [](const GalerkinRow& r) { return r.truncation_bounds_hold; });
  report.verdicts.push_back({"truncation_bounds", bounds ? Verdict::pass : Verdict::fail,
                             bounds ? "all three inequalities hold for every alpha"
                                    : "an inequality is violated"});
  if (degenerate(report.rows)) {
    report.verdicts.push_back({"total_vorticity_rate", Verdict::skip, "all errors vanish"});
    return report;
  }
  report.velocity_fit = try_fit(report.rows, &ErrorNorms::sup_u_l2);
  report.vorticity_fit = try_fit(report.rows, &ErrorNorms::sup_omega_l2);
  report.h1_fit = try_fit(report.rows, &ErrorNorms::sup_u_h1);
  report.total_vorticity_fit = report.vorticity_fit;

  CriterionResult rate = slope_check("total_vorticity_rate", report.total_vorticity_fit,
                                     *report.theory.vorticity, plan.slope_tolerance);
  if (report.total_vorticity_fit) {
    std::vector<std::pair<double, double>> pts;
    for (const GalerkinRow& r : report.galerkin) pts.emplace_back(r.alpha, r.total_error);
    const std::vector<double> local = local_slopes(pts);
    const auto [lo, hi] = std::minmax_element(local.begin(), local.end());
    const double spread = *hi - *lo;
    report.pre_asymptotic = spread > plan.slope_tolerance;
    rate.detail += "; local slopes " + fmt(*lo) + " to " + fmt(*hi) + ", spread " + fmt(spread);
    if (*report.pre_asymptotic) {
      rate.verdict = Verdict::advisory;
      rate.detail += " > " + fmt(plan.slope_tolerance) + ": pre-asymptotic";
    } else {
      rate.detail += " <= " + fmt(plan.slope_tolerance) + ": asymptotic";
    }
  }
  report.verdicts.push_back(rate);
  return report;
}

}  // namespace voigt
