#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "voigt/diagnostics.hpp"
#include "voigt/spectral.hpp"

using namespace voigt;
using namespace voigt::testing;

namespace {

double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
  return (a - b).max_abs_coeff();
}

}  // namespace

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(GridSpec(6), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(33), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(32, 17), std::invalid_argument);
  CHECK(GridSpec(128).dealias_cutoff() == 42);
  CHECK(GridSpec(256).dealias_cutoff() == 85);
  // 3K < M keeps aliased products out of the retained band.
  CHECK(GridSpec(96).dealias_cutoff() == 31);
  const GridSpec g(16);
  CHECK(g.wavenumber(8) == 8);
  CHECK(g.wavenumber(9) == -7);
  CHECK(g.index_of(-7) == 9);
}

TEST_CASE("forward_transform") {
  const GridSpec grid(32);

  SUBCASE("zero field") {
    const SpectralField f = forward_transform(std::vector<double>(grid.real_count(), 0.0), grid);
    CHECK(f.max_abs_coeff() == 0.0);
  }

  SUBCASE("cos(x) has two coefficients of 1/2") {
    const SpectralField f =
        forward_transform(sample(grid, [](double x, double) { return std::cos(x); }), grid);
    CHECK(std::abs(f.mode(1, 0) - 0.5) < 1e-12);
    CHECK(std::abs(f.mode(-1, 0) - 0.5) < 1e-12);
    SpectralField rest = f;
    rest.set_mode(1, 0, 0.0);
    CHECK(rest.max_abs_coeff() < 1e-12);
  }

  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(forward_transform(std::vector<double>(31 * 32), grid), std::invalid_argument);
  }

  SUBCASE("round trip and exact Hermitian symmetry on 100 seeded fields") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const std::vector<double> v = random_samples(grid, seed);
      const SpectralField f = forward_transform(v, grid);
      CHECK(f.hermitian_defect() == 0.0);
      const std::vector<double> back = inverse_transform(f);
      CHECK(max_abs_diff(back, v) <= 1e-12 * max_abs(v));
    }
  }
}

TEST_CASE("inverse_transform") {
  const GridSpec grid(32);

  SUBCASE("single mode pair gives cos(x)") {
    SpectralField f(grid);
    f.set_mode(1, 0, 0.5);
    const auto expected = sample(grid, [](double x, double) { return std::cos(x); });
    CHECK(max_abs_diff(inverse_transform(f), expected) < 1e-14);
  }

  SUBCASE("zero field") {
    CHECK(max_abs(inverse_transform(SpectralField(grid))) == 0.0);
  }

  SUBCASE("Parseval against direct quadrature") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const SpectralField f = random_field(grid, seed);
      const double quad = quadrature_l2(inverse_transform(f), grid);
      double sum = 0.0;
      f.for_each_mode([&](int, int, double w, const Complex& c) { sum += w * std::norm(c); });
      const double spectral = kTorusArea * sum;
      CHECK(std::abs(quad * quad - spectral) <= 1e-10 * spectral);
    }
  }

  SUBCASE("non-Hermitian coefficients are rejected") {
    SpectralField f(grid);
    f.at(grid.index_of(3), 0) = Complex{1.0, 0.0};  // partner at k2 = -3 left at zero
    CHECK(f.hermitian_defect() > 0.5);
    CHECK_THROWS_AS(inverse_transform(f), std::invalid_argument);
  }
}

TEST_CASE("derivative") {
  const GridSpec grid(32);
  const auto cosx = forward_transform(sample(grid, [](double x, double) { return std::cos(x); }), grid);

  CHECK(max_abs_diff(inverse_transform(derivative(cosx, Axis::x1)),
                     sample(grid, [](double x, double) { return -std::sin(x); })) < 1e-13);
  CHECK(derivative(cosx, Axis::x2).max_abs_coeff() < 1e-14);

  const auto f = forward_transform(
      sample(grid, [](double x, double y) { return std::cos(x) + std::cos(2 * y); }), grid);
  CHECK(max_abs_diff(inverse_transform(derivative(f, Axis::x2)),
                     sample(grid, [](double, double y) { return -2.0 * std::sin(2 * y); })) < 1e-13);

  SUBCASE("Nyquist lines are zeroed") {
    SpectralField g(grid);
    g.set_mode(16, 3, 1.0);
    g.set_mode(2, 16, 1.0);
    CHECK(std::abs(derivative(g, Axis::x1).mode(16, 3)) == 0.0);
    CHECK(std::abs(derivative(g, Axis::x2).mode(2, 16)) == 0.0);
    CHECK(std::abs(derivative(g, Axis::x1).mode(2, 16) - Complex(0.0, 2.0)) < 1e-15);
  }
}

TEST_CASE("helmholtz_filter") {
  const GridSpec grid(32);

  SUBCASE("alpha = 0 is the identity bit for bit") {
    const SpectralField f = random_field(grid, 3);
    CHECK(helmholtz_filter(f, 0.0) == f);
  }

  SUBCASE("cos(x) with alpha = 1 is halved") {
    SpectralField f(grid);
    f.set_mode(1, 0, 0.5);
    CHECK(std::abs(helmholtz_filter(f, 1.0).mode(1, 0) - 0.25) < 1e-16);
  }

  SUBCASE("per-mode linear solve on seeded fields") {
    const double alpha = 0.3;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const SpectralField f = random_field(grid, seed);
      const SpectralField g = helmholtz_filter(f, alpha);
      const int n = grid.nyquist();
      for (int k1 = -n + 1; k1 <= n; ++k1) {
        for (int k2 = -n + 1; k2 <= n; ++k2) {
          const double a = 1.0 + alpha * (k1 * k1 + k2 * k2);
          CHECK(std::abs(a * g.mode(k1, k2) - f.mode(k1, k2)) <= 1e-14);
        }
      }
    }
  }

  SUBCASE("contraction in every Sobolev norm, commutes with derivatives") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const SpectralField f = random_field(grid, seed);
      const SpectralField g = helmholtz_filter(f, 0.05 * (seed + 1));
      for (double s : {-1.0, 0.0, 1.0, 2.5}) CHECK(sobolev_norm(g, s) <= sobolev_norm(f, s));
      const SpectralField a = helmholtz_filter(derivative(f, Axis::x1), 0.2);
      const SpectralField b = derivative(helmholtz_filter(f, 0.2), Axis::x1);
      CHECK(max_coeff_diff(a, b) <= 1e-15 * a.max_abs_coeff());
    }
  }

  CHECK_THROWS_AS(helmholtz_filter(SpectralField(grid), -1e-3), std::invalid_argument);
}

TEST_CASE("inverse_laplacian") {
  const GridSpec grid(32);
  SpectralField cosx(grid);
  cosx.set_mode(1, 0, 0.5);
  CHECK(std::abs(inverse_laplacian(cosx).mode(1, 0) + 0.5) < 1e-16);

  SpectralField cos2y(grid);
  cos2y.set_mode(0, 2, 0.5);
  CHECK(std::abs(inverse_laplacian(cos2y).mode(0, 2) + 0.125) < 1e-16);
  CHECK(std::abs(inverse_laplacian(cos2y).mode(0, -2) + 0.125) < 1e-16);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SpectralField f = random_field(grid, seed);
    CHECK(max_coeff_diff(laplacian(inverse_laplacian(f)), f) <= 1e-12 * f.max_abs_coeff());
  }

  SpectralField biased = cosx;
  biased.at(0, 0) = 0.1;
  CHECK_THROWS_AS(inverse_laplacian(biased), std::invalid_argument);
}

TEST_CASE("biot_savart") {
  const GridSpec grid(32);

  SUBCASE("omega = cos(x) gives u = (0, sin x)") {
    SpectralField omega(grid);
    omega.set_mode(1, 0, 0.5);
    const VelocityPair u = biot_savart(omega);
    CHECK(max_abs(inverse_transform(u.u1)) < 1e-15);
    CHECK(max_abs_diff(inverse_transform(u.u2),
                       sample(grid, [](double x, double) { return std::sin(x); })) < 1e-14);
  }

  SUBCASE("omega = cos(2y) gives u = (-sin(2y)/2, 0)") {
    SpectralField omega(grid);
    omega.set_mode(0, 2, 0.5);
    const VelocityPair u = biot_savart(omega);
    CHECK(max_abs_diff(inverse_transform(u.u1),
                       sample(grid, [](double, double y) { return -0.5 * std::sin(2 * y); })) < 1e-14);
    CHECK(max_abs(inverse_transform(u.u2)) < 1e-15);
  }

  SUBCASE("curl round trip and zero divergence on seeded fields") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const SpectralField omega = random_field(grid, seed);
      const VelocityPair u = biot_savart(omega);
      CHECK(max_coeff_diff(curl(u), omega) <= 1e-12 * omega.max_abs_coeff());
      CHECK(divergence(u).max_abs_coeff() <= 1e-15 * omega.max_abs_coeff());
      CHECK(u.u1.mean() == 0.0);
      CHECK(u.u2.mean() == 0.0);
    }
  }

  SUBCASE("nonzero mean is rejected") {
    SpectralField omega(grid);
    omega.at(0, 0) = 1.0;
    CHECK_THROWS_AS(biot_savart(omega), std::invalid_argument);
  }
}

TEST_CASE("leray_project") {
  const GridSpec grid(32);

  SUBCASE("gradients are annihilated") {
    const SpectralField phi = random_field(grid, 11);
    const VelocityPair p = leray_project(derivative(phi, Axis::x1), derivative(phi, Axis::x2));
    CHECK(p.u1.max_abs_coeff() < 1e-15);
    CHECK(p.u2.max_abs_coeff() < 1e-15);
  }

  SUBCASE("identity on divergence-free fields, idempotent, projects onto div = 0") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const VelocityPair u = biot_savart(random_field(grid, seed));
      const VelocityPair same = leray_project(u.u1, u.u2);
      CHECK(max_coeff_diff(same.u1, u.u1) <= 1e-14);
      CHECK(max_coeff_diff(same.u2, u.u2) <= 1e-14);

      const VelocityPair p = leray_project(random_field(grid, 100 + seed), random_field(grid, 200 + seed));
      CHECK(l2_norm(divergence(p)) <= 1e-13);
      const VelocityPair pp = leray_project(p.u1, p.u2);
      CHECK(max_coeff_diff(pp.u1, p.u1) <= 1e-15);
      CHECK(max_coeff_diff(pp.u2, p.u2) <= 1e-15);
    }
  }
}

TEST_CASE("dealias") {
  const GridSpec grid(32);  // cutoff 10

  SUBCASE("band-limited fields are unchanged") {
    const SpectralField f = random_field(grid, 5);
    CHECK(dealias(f) == f);
  }

  SUBCASE("Nyquist mode is removed") {
    SpectralField f(grid);
    f.set_mode(16, 0, 1.0);
    CHECK(dealias(f).max_abs_coeff() == 0.0);
  }

  SUBCASE("products match the trigonometric expansion") {
    SpectralField cosx(grid);
    cosx.set_mode(1, 0, 0.5);
    SpectralField cos2y(grid);
    cos2y.set_mode(0, 2, 0.5);
    // cos x cos 2y = (cos(x + 2y) + cos(x - 2y)) / 2
    SpectralField expected(grid);
    expected.set_mode(1, 2, 0.25);
    expected.set_mode(1, -2, 0.25);
    CHECK(max_coeff_diff(dealias(pseudo_product(cosx, cos2y)), expected) < 1e-15);

    // cos^2(6x) = 1/2 + cos(12x)/2; the second term lies beyond the cutoff.
    SpectralField cos6x(grid);
    cos6x.set_mode(6, 0, 0.5);
    SpectralField half(grid);
    half.at(0, 0) = 0.5;
    CHECK(max_coeff_diff(dealias(pseudo_product(cos6x, cos6x)), half) < 1e-15);
  }

  SUBCASE("orthogonal projection") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const SpectralField f = forward_transform(random_samples(grid, seed), grid);
      const SpectralField d = dealias(f);
      CHECK(dealias(d) == d);
      CHECK(l2_norm(d) <= l2_norm(f));
    }
  }
}

TEST_CASE("resample") {
  const SpectralField f = random_field(GridSpec(32), 9);
  const SpectralField up = resample(f, GridSpec(64));
  CHECK(resample(up, GridSpec(32)) == f);
  CHECK(std::abs(l2_norm(up) - l2_norm(f)) <= 1e-14 * l2_norm(f));
}

TEST_CASE("inner_product matches quadrature") {
  const GridSpec grid(32);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SpectralField f = random_field(grid, seed);
    const SpectralField g = random_field(grid, seed + 50);
    const double quad = quadrature_inner(inverse_transform(f), inverse_transform(g), grid);
    CHECK(std::abs(inner_product(f, g) - quad) <= 1e-12 * l2_norm(f) * l2_norm(g));
  }
}
