#pragma once

// Vorticity form of the Euler (alpha = 0) and Euler-Voigt (alpha > 0)
// equations and their explicit time integration:
//
//     d/dt omega = -(I - alpha Laplacian)^{-1} (u . grad omega),
//     u = biot_savart(omega).

#include <optional>
#include <variant>

#include "voigt/spectral.hpp"
#include "voigt/trajectory.hpp"

namespace voigt {

struct FixedStep {
  double dt = 0.0;
};

struct CflStep {
  double courant = 0.5;
};

using StepPolicy = std::variant<FixedStep, CflStep>;

struct SolverConfig {
  GridSpec grid{64};
  double alpha = 0.0;  // 0 selects the Euler system
  double t_end = 1.0;
  StepPolicy step = CflStep{};
  double record_every = 0.1;
  std::optional<double> snapshot_every;
  /// Orders s of ||u||_{s,2} added to every diagnostic sample.
  std::vector<double> sobolev_orders;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// Dealiased -(u . grad omega) for the Euler system.
SpectralField euler_rhs(const SpectralField& omega);
/// Helmholtz-filtered Euler nonlinearity; alpha must be positive.
SpectralField voigt_rhs(const SpectralField& omega, double alpha);
/// euler_rhs for alpha == 0, voigt_rhs otherwise.
SpectralField vorticity_rhs(const SpectralField& omega, double alpha);

/// One classical Runge-Kutta step.
SpectralField step_rk4(const SpectralField& omega, double dt, double alpha);

/// courant * (2 pi / M) / max(max|u1|, max|u2|, 1e-12).
double cfl_dt(const VelocityPair& u, const GridSpec& grid, double courant);

/// Advances omega0 to config.t_end, recording diagnostics every
/// record_every and snapshots every snapshot_every. Steps are shortened so
/// that every recording time and t_end are hit exactly.
TrajectoryRecord integrate(const SpectralField& omega0, const SolverConfig& config);

}  // namespace voigt
