#pragma once

// Euler-Voigt versus Euler convergence experiments: paired runs over a grid
// of alpha values, sup-in-time errors, log-log rate fits and verdicts
// against the predicted exponents.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voigt/diagnostics.hpp"
#include "voigt/dynamics.hpp"
#include "voigt/initial_data.hpp"

namespace voigt {

enum class Regime {
  smooth_s_ge_3,       // u0 in H^s, s >= 3
  smooth_intermediate, // u0 in H^s, 2 < s < 3
  yudovich,            // omega0 bounded
  enstrophy_class,     // omega0 in L2 only
};

const char* to_string(Regime regime);
Regime regime_from_string(const std::string& name);

struct SweepPlan {
  DataRecipe recipe;
  AlphaFamily family = ExactFamily{};
  std::vector<double> alphas;  // strictly decreasing
  GridSpec grid{128};
  double t_end = 1.0;
  double courant = 0.5;
  int records = 10;           // record grid t_end / records
  Regime regime = Regime::smooth_s_ge_3;
  double s = 3.0;             // regularity index for smooth_intermediate
  int refine_factor = 1;      // 1: Euler reference on the same grid
  double cutoff_constant = 1.0;
  double slope_tolerance = 0.15;

  /// Throws std::invalid_argument when the plan violates its invariants.
  void validate() const;
  double record_every() const { return t_end / records; }
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
};

/// Ordinary least squares of ln(error) against ln(alpha).
RateFit fit_rate(std::span<const std::pair<double, double>> points);

/// Slopes between consecutive points in log-log coordinates.
std::vector<double> local_slopes(std::span<const std::pair<double, double>> points);

struct TheoreticalSlope {
  std::optional<double> velocity;
  std::optional<double> vorticity;
  std::string description;
};

TheoreticalSlope theoretical_slope(Regime regime, std::optional<double> s, double t_end);

/// round(c alpha^{-1/4}), clamped to [1, max_cutoff].
int choose_cutoff(double alpha, double constant = 1.0, int max_cutoff = 1 << 20);

struct PairResult {
  TrajectoryRecord voigt;
  TrajectoryRecord euler;
  ErrorNorms errors;
};

/// Euler and Euler-Voigt runs from the alpha-family data of the plan on a
/// shared time grid.
PairResult run_pair(const DataRecipe& recipe, double alpha, const SweepPlan& plan);

enum class Verdict { pass, fail, skip, advisory };
const char* to_string(Verdict verdict);

struct CriterionResult {
  std::string name;
  Verdict verdict = Verdict::skip;
  std::string detail;
};

struct AlphaRow {
  double alpha = 0.0;
  ErrorNorms errors;

  bool operator==(const AlphaRow&) const = default;
};

/// Error split of the Galerkin-reference experiment for one alpha.
struct GalerkinRow {
  double alpha = 0.0;
  int cutoff = 0;
  double truncation_error = 0.0;  // sup ||omega^N - omega||_2
  double model_error = 0.0;       // sup ||omega^alpha - omega^N||_2
  double total_error = 0.0;       // sup ||omega^alpha - omega||_2
  double initial_truncation = 0.0;  // ||omega0^N - omega0||_2
  bool truncation_bounds_hold = false;

  bool operator==(const GalerkinRow&) const = default;
};

struct ConvergenceReport {
  SweepPlan plan;
  std::vector<AlphaRow> rows;
  std::vector<GalerkinRow> galerkin;
  std::optional<RateFit> velocity_fit;
  std::optional<RateFit> vorticity_fit;
  std::optional<RateFit> h1_fit;
  std::optional<RateFit> total_vorticity_fit;  // Galerkin experiment only
  // Galerkin experiment only: true when the local slopes of the total
  // vorticity error spread by more than the slope tolerance.
  std::optional<bool> pre_asymptotic;
  TheoreticalSlope theory;
  std::vector<CriterionResult> verdicts;
  bool failed = false;
  bool blow_up = false;  // failure came from a run blowing up
  std::string failure;

  bool passed() const;
};

/// Independent runs are spread over `jobs` threads; the report does not
/// depend on the thread count.
ConvergenceReport run_sweep(const SweepPlan& plan, int jobs = 1);

/// Three-solution experiment for 2 < s < 3: Euler from omega0, Euler from
/// its Galerkin truncation at N = choose_cutoff(alpha), Euler-Voigt from the
/// alpha-family datum. The rate verdict is ADVISORY when the experiment is
/// pre-asymptotic, PASS or FAIL otherwise.
ConvergenceReport galerkin_reference_sweep(const SweepPlan& plan, double s, int jobs = 1);

/// Checks the three Galerkin truncation inequalities for the velocity of
/// omega with homogeneous Sobolev norms at orders s, s' > s and
/// 0 <= s_bar < s.
bool truncation_bounds_hold(const SpectralField& omega, int n, double s,
                            std::span<const double> s_above, std::span<const double> s_below);

}  // namespace voigt
