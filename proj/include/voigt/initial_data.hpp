#pragma once

// Deterministic initial vorticity fields. Every generator returns a
// zero-mean, Hermitian field with nothing on the Nyquist lines and nothing
// beyond the grid's dealias cutoff.

#include <cstdint>
#include <variant>

#include "voigt/spectral.hpp"

namespace voigt {

/// amplitude * cos(k . x), a steady state of both systems.
SpectralField make_eigenfunction(const GridSpec& grid, int k1, int k2, double amplitude = 1.0);

/// omega_k = |k|^{-sigma} exp(i theta_k) for 0 < |k| <= band with seeded
/// phases. The velocity lies in H^s for every s < sigma.
SpectralField make_random_sobolev(const GridSpec& grid, double sigma, std::uint64_t seed,
                                  int band);

/// Gaussian-mollified indicator of `count` disjoint discs of the given
/// radius, mean removed, scaled to max |omega| = 1. Centres are drawn from
/// the seed.
SpectralField make_yudovich_patch(const GridSpec& grid, double radius, double smoothing,
                                  std::uint64_t seed, int count = 1);

/// Keeps the modes with Euclidean |k| <= n.
SpectralField galerkin_truncate(const SpectralField& f, int n);

struct ExactFamily {};

struct PerturbedFamily {
  double gamma = 1.0;
  std::uint64_t seed = 0;
};

using AlphaFamily = std::variant<ExactFamily, PerturbedFamily>;

/// Initial datum omega_0^alpha of an alpha-indexed family. The perturbed
/// family adds a band-limited field of L2 size alpha^gamma ||omega_0||_2.
SpectralField make_alpha_family(const SpectralField& base, double alpha,
                                const AlphaFamily& family);

enum class DataKind { eigenfunction, random_sobolev, yudovich_patch, taylor_family };

/// none: multiply by amplitude. peak: rescale to max |omega| = amplitude,
/// measured on the twice-refined grid.
enum class Normalization { none, peak };

/// Full description of an initial field. Only the parameters of `kind` are
/// used.
struct DataRecipe {
  DataKind kind = DataKind::random_sobolev;
  // eigenfunction
  int k1 = 1;
  int k2 = 0;
  // random_sobolev
  double sigma = 4.0;
  int band = 8;
  // yudovich_patch
  double radius = 1.0;
  double smoothing = 0.0;  // 0 selects two grid cells
  int patches = 1;
  // taylor_family: sum over n = 1..modes of cos(n x) cos(n y) / n^2
  int modes = 2;

  double amplitude = 1.0;
  Normalization normalize = Normalization::none;
  std::uint64_t seed = 0;

  bool operator==(const DataRecipe&) const = default;
};

SpectralField generate(const DataRecipe& recipe, const GridSpec& grid);

}  // namespace voigt
