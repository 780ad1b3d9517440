#include "voigt/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "voigt/diagnostics.hpp"

namespace voigt {

namespace {

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool in_band(const GridSpec& grid, int k1, int k2) {
  return std::max(std::abs(k1), std::abs(k2)) <= grid.dealias_cutoff() &&
         std::abs(k1) < grid.nyquist() && std::abs(k2) < grid.nyquist();
}

}  // namespace

SpectralField make_eigenfunction(const GridSpec& grid, int k1, int k2, double amplitude) {
  if (k1 == 0 && k2 == 0) throw std::invalid_argument("make_eigenfunction: k must be nonzero");
  if (!in_band(grid, k1, k2)) {
    throw std::invalid_argument("make_eigenfunction: wave vector (" + std::to_string(k1) + ", " +
                                std::to_string(k2) + ") outside the dealiased band");
  }
  SpectralField f(grid);
  f.set_mode(k1, k2, 0.5 * amplitude);
  return f;
}

SpectralField make_random_sobolev(const GridSpec& grid, double sigma, std::uint64_t seed,
                                  int band) {
  if (!(sigma > 0.0)) throw std::invalid_argument("make_random_sobolev: sigma must be positive");
  if (band < 1 || band > grid.dealias_cutoff()) {
    throw std::invalid_argument("make_random_sobolev: band must lie in [1, dealias cutoff]");
  }
  std::mt19937_64 rng(seed);
  SpectralField f(grid);
  const int band_sq = band * band;
  for (int k1 = 0; k1 <= band; ++k1) {
    for (int k2 = -band; k2 <= band; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const double theta = kTwoPi * unit_uniform(rng);
      const int ksq = k1 * k1 + k2 * k2;
      if (ksq > band_sq) continue;
      const double amp = std::pow(static_cast<double>(ksq), -0.5 * sigma);
      f.set_mode(k1, k2, std::polar(amp, theta));
    }
  }
  return f;
}

SpectralField make_yudovich_patch(const GridSpec& grid, double radius, double smoothing,
                                  std::uint64_t seed, int count) {
  if (!(radius > 0.0 && radius < kPi)) {
    throw std::invalid_argument("make_yudovich_patch: radius must lie in (0, pi)");
  }
  if (!(smoothing > 0.0)) throw std::invalid_argument("make_yudovich_patch: smoothing must be positive");
  if (count < 1) throw std::invalid_argument("make_yudovich_patch: count must be >= 1");

  // Centres by rejection: discs at least one smoothing width apart on the torus.
  std::mt19937_64 rng(seed);
  auto periodic_gap = [](double a, double b) {
    const double d = std::abs(a - b);
    return std::min(d, kTwoPi - d);
  };
  std::vector<std::pair<double, double>> centres;
  for (int attempt = 0; static_cast<int>(centres.size()) < count; ++attempt) {
    if (attempt == 10000) throw std::invalid_argument("make_yudovich_patch: cannot place disjoint patches");
    const double c1 = kTwoPi * unit_uniform(rng);
    const double c2 = kTwoPi * unit_uniform(rng);
    const bool clear = std::all_of(centres.begin(), centres.end(), [&](const auto& c) {
      return std::hypot(periodic_gap(c.first, c1), periodic_gap(c.second, c2)) >= 2.0 * radius + smoothing;
    });
    if (clear) centres.emplace_back(c1, c2);
  }

  // Fourier coefficients of a disc indicator, r J1(|k| r) / (2 pi |k|),
  // times a Gaussian of width `smoothing`, shifted to every centre.
  SpectralField f(grid);
  const int cutoff = std::min(grid.dealias_cutoff(), grid.nyquist() - 1);
  for (int k1 = 0; k1 <= cutoff; ++k1) {
    for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const double kabs = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
      const double disc = radius * std::cyl_bessel_j(1.0, kabs * radius) / (kTwoPi * kabs);
      const double mollifier = std::exp(-0.5 * smoothing * smoothing * kabs * kabs);
      Complex c{0.0, 0.0};
      for (const auto& [c1, c2] : centres) c += std::polar(disc * mollifier, -(k1 * c1 + k2 * c2));
      f.set_mode(k1, k2, c);
    }
  }

  const GridSpec fine(2 * grid.size());
  const double peak = lp_norm(resample(f, fine), kInfinity);
  f *= 1.0 / peak;
  return f;
}

SpectralField galerkin_truncate(const SpectralField& f, int n) {
  if (n < 0) throw std::invalid_argument("galerkin_truncate: cutoff must be non-negative");
  SpectralField out = f;
  const long n_sq = static_cast<long>(n) * n;
  out.transform_modes([n_sq](int k1, int k2, Complex& c) {
    if (static_cast<long>(k1) * k1 + static_cast<long>(k2) * k2 > n_sq) c = 0.0;
  });
  return out;
}

SpectralField make_alpha_family(const SpectralField& base, double alpha,
                                const AlphaFamily& family) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("make_alpha_family: alpha must lie in (0, 1]");
  }
  const auto* perturbed = std::get_if<PerturbedFamily>(&family);
  if (perturbed == nullptr) return base;

  const double base_norm = l2_norm(base);
  if (base_norm == 0.0) return base;
  const int band = std::min(4, base.grid().dealias_cutoff());
  SpectralField p = make_random_sobolev(base.grid(), 1.0, perturbed->seed, band);
  p *= std::pow(alpha, perturbed->gamma) * base_norm / l2_norm(p);
  return base + p;
}

SpectralField generate(const DataRecipe& recipe, const GridSpec& grid) {
  SpectralField f(grid);
  switch (recipe.kind) {
    case DataKind::eigenfunction:
      f = make_eigenfunction(grid, recipe.k1, recipe.k2);
      break;
    case DataKind::random_sobolev:
      f = make_random_sobolev(grid, recipe.sigma, recipe.seed, recipe.band);
      break;
    case DataKind::yudovich_patch: {
      const double width = recipe.smoothing > 0.0 ? recipe.smoothing : 2.0 * grid.spacing();
      f = make_yudovich_patch(grid, recipe.radius, width, recipe.seed, recipe.patches);
      break;
    }
    case DataKind::taylor_family:
      if (recipe.modes < 1) throw std::invalid_argument("taylor_family: modes must be >= 1");
      for (int n = 1; n <= recipe.modes; ++n) {
        if (!in_band(grid, n, n)) throw std::invalid_argument("taylor_family: modes exceed the band");
        const double a = 0.25 / (static_cast<double>(n) * n);
        f.set_mode(n, n, a);
        f.set_mode(n, -n, a);
      }
      break;
  }
  if (recipe.normalize == Normalization::peak) {
    const double peak = lp_norm(resample(f, GridSpec(2 * grid.size())), kInfinity);
    if (!(peak > 0.0)) throw std::invalid_argument("generate: cannot normalize a zero field");
    f *= recipe.amplitude / peak;
  } else {
    f *= recipe.amplitude;
  }
  return f;
}

}  // namespace voigt
