#pragma once

// Norms, conserved quantities and functional-inequality ratios. All L2-type
// norms are evaluated spectrally with the (2 pi)^2 Parseval factor, so they
// match integrals over the torus.

#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "voigt/spectral.hpp"
#include "voigt/trajectory.hpp"

namespace voigt {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

double l2_norm(const SpectralField& f);
/// sqrt((2 pi)^2 sum_k (1 + |k|^2)^s |f_k|^2).
double sobolev_norm(const SpectralField& f, double s);
double sobolev_norm(const VelocityPair& u, double s);
/// Homogeneous variant with weight |k|^{2s}; equivalent on zero-mean fields.
double homogeneous_sobolev_norm(const SpectralField& f, double s);
double homogeneous_sobolev_norm(const VelocityPair& u, double s);

/// Grid quadrature of |f|^p. p = 2 and p = infinity use the native grid;
/// other exponents are evaluated on a 2x oversampled grid.
double lp_norm(const SpectralField& f, double p);
/// Lp norm of the pointwise Euclidean magnitude of a vector/tensor field.
double lp_norm(std::span<const SpectralField> components, double p);

double energy(const VelocityPair& u);
double enstrophy(const SpectralField& omega);
double voigt_energy(const VelocityPair& u, double alpha);
double voigt_enstrophy(const SpectralField& omega, double alpha);

/// Diagnostic sample of the state omega; the requested Sobolev orders are
/// evaluated on the velocity.
DiagnosticSample sample_state(const SpectralField& omega, double alpha, double time,
                              std::span<const double> sobolev_orders = {});

/// ||grad u||_p / (p ||omega||_inf) with u the Biot-Savart velocity.
double cz_ratio(const SpectralField& omega, double p);
/// ||f||_{2p/(p-1)} / (||f||_2^{1-1/p} ||grad f||_2^{1/p}), p >= 2.
double gagliardo_ratio(const SpectralField& f, double p);

struct ErrorNorms {
  double sup_u_l2 = 0.0;
  double sup_omega_l2 = 0.0;
  double sup_u_h1 = 0.0;

  bool operator==(const ErrorNorms&) const = default;
};

/// Sup over the shared snapshot times of the velocity/vorticity differences.
ErrorNorms error_norms(const TrajectoryRecord& a, const TrajectoryRecord& b);

/// (t, ||u(t)||_{s,2}) for every snapshot of the record.
std::vector<std::pair<double, double>> growth_monitor(const TrajectoryRecord& record, double s);

}  // namespace voigt
