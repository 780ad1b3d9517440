#include "voigt/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace voigt {

namespace {

// FFTW's planner is not thread safe, execution on distinct arrays is.
// Plans are created once per grid size and kept for the process lifetime.
struct FftPlans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

const FftPlans& plans_for(int size) {
  static std::mutex mutex;
  static std::map<int, FftPlans> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(size);
  if (it != cache.end()) return it->second;

  const std::size_t n_real = static_cast<std::size_t>(size) * size;
  const std::size_t n_cplx = static_cast<std::size_t>(size) * (size / 2 + 1);
  std::unique_ptr<double, decltype(&fftw_free)> real(
      static_cast<double*>(fftw_malloc(sizeof(double) * n_real)), &fftw_free);
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> cplx(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_cplx)), &fftw_free);

  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  FftPlans p;
  p.r2c = fftw_plan_dft_r2c_2d(size, size, real.get(), cplx.get(), flags);
  p.c2r = fftw_plan_dft_c2r_2d(size, size, cplx.get(), real.get(), flags);
  if (p.r2c == nullptr || p.c2r == nullptr) {
    throw std::runtime_error("FFTW planning failed for size " + std::to_string(size));
  }
  return cache.emplace(size, p).first->second;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

double wavenumber_sq(int k1, int k2) {
  return static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
}

void require_zero_mean(const SpectralField& f, const char* op) {
  const double tol = 1e-12 * std::max(1.0, f.max_abs_coeff());
  if (std::abs(f.coeffs().front()) > tol) {
    throw std::invalid_argument(std::string(op) + ": input has nonzero mean");
  }
}

}  // namespace

// ---------------------------------------------------------------- GridSpec

int GridSpec::default_cutoff(int size) { return (size - 1) / 3; }

GridSpec::GridSpec(int size) : GridSpec(size, default_cutoff(size)) {}

GridSpec::GridSpec(int size, int dealias_cutoff) : size_(size), cutoff_(dealias_cutoff) {
  if (size < 8 || size % 2 != 0) {
    throw std::invalid_argument("grid size must be even and at least 8, got " +
                                std::to_string(size));
  }
  if (dealias_cutoff < 0 || dealias_cutoff > size / 2) {
    throw std::invalid_argument("dealias cutoff must lie in [0, M/2], got " +
                                std::to_string(dealias_cutoff));
  }
}

// ----------------------------------------------------------- SpectralField

SpectralField::SpectralField(const GridSpec& grid)
    : grid_(grid), coeffs_(grid.spectral_count(), Complex{0.0, 0.0}) {}

SpectralField::SpectralField(const GridSpec& grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.spectral_count()) {
    throw std::invalid_argument("coefficient count does not match grid");
  }
}

Complex SpectralField::mode(int k1, int k2) const {
  const int n = grid_.nyquist();
  if (std::abs(k1) > n || std::abs(k2) > n) {
    throw std::out_of_range("wave vector outside the grid");
  }
  if (k1 < 0) return std::conj(at(grid_.index_of(-k2), -k1));
  return at(grid_.index_of(k2), k1);
}

void SpectralField::set_mode(int k1, int k2, Complex value) {
  const int n = grid_.nyquist();
  if (std::abs(k1) > n || std::abs(k2) > n) {
    throw std::out_of_range("wave vector outside the grid");
  }
  if (k1 < 0) {
    k1 = -k1;
    k2 = -k2;
    value = std::conj(value);
  }
  const int row = grid_.index_of(k2);
  if (k1 == 0 || k1 == n) {
    const int partner = grid_.index_of(-k2);
    if (partner == row) {
      at(row, k1) = value.real();
      return;
    }
    at(partner, k1) = std::conj(value);
  }
  at(row, k1) = value;
}

double SpectralField::hermitian_defect() const {
  double defect = 0.0;
  for (int col : {0, grid_.nyquist()}) {
    for (int r = 0; r < grid_.rows(); ++r) {
      const int partner = grid_.index_of(-grid_.wavenumber(r));
      defect = std::max(defect, std::abs(at(r, col) - std::conj(at(partner, col))));
    }
  }
  return defect;
}

void SpectralField::symmetrize() {
  for (int col : {0, grid_.nyquist()}) {
    for (int r = 0; r < grid_.rows(); ++r) {
      const int partner = grid_.index_of(-grid_.wavenumber(r));
      if (partner < r) continue;
      if (partner == r) {
        at(r, col) = at(r, col).real();
        continue;
      }
      const Complex avg = 0.5 * (at(r, col) + std::conj(at(partner, col)));
      at(r, col) = avg;
      at(partner, col) = std::conj(avg);
    }
  }
}

double SpectralField::max_abs_coeff() const {
  double m = 0.0;
  for (const Complex& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

void SpectralField::require_same_grid(const SpectralField& other) const {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("fields live on different grids");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double factor) {
  for (Complex& c : coeffs_) c *= factor;
  return *this;
}

// -------------------------------------------------------------- transforms

SpectralField forward_transform(std::span<const double> values, const GridSpec& grid) {
  if (values.size() != grid.real_count()) {
    throw std::invalid_argument("forward_transform: expected " +
                                std::to_string(grid.real_count()) + " samples, got " +
                                std::to_string(values.size()));
  }
  SpectralField f(grid);
  const FftPlans& p = plans_for(grid.size());
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(values.data()), as_fftw(f.coeffs().data()));
  f *= 1.0 / static_cast<double>(grid.real_count());
  f.symmetrize();
  return f;
}

std::vector<double> inverse_transform(const SpectralField& f) {
  const double tol = 1e-12 * std::max(1.0, f.max_abs_coeff());
  if (f.hermitian_defect() > tol) {
    throw std::invalid_argument("inverse_transform: coefficients are not Hermitian");
  }
  // c2r overwrites its input.
  std::vector<Complex> scratch(f.coeffs().begin(), f.coeffs().end());
  std::vector<double> values(f.grid().real_count());
  const FftPlans& p = plans_for(f.grid().size());
  fftw_execute_dft_c2r(p.c2r, as_fftw(scratch.data()), values.data());
  return values;
}

// ---------------------------------------------------------------- operators

SpectralField derivative(const SpectralField& f, Axis axis) {
  SpectralField out = f;
  const int n = f.grid().nyquist();
  out.transform_modes([&](int k1, int k2, Complex& c) {
    const int k = axis == Axis::x1 ? k1 : k2;
    if (k == n) {
      c = 0.0;
    } else {
      c *= Complex{0.0, static_cast<double>(k)};
    }
  });
  return out;
}

SpectralField laplacian(const SpectralField& f) {
  SpectralField out = f;
  out.transform_modes([](int k1, int k2, Complex& c) { c *= -wavenumber_sq(k1, k2); });
  return out;
}

SpectralField helmholtz_filter(const SpectralField& f, double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("helmholtz_filter: alpha must be >= 0");
  SpectralField out = f;
  if (alpha == 0.0) return out;
  out.transform_modes(
      [alpha](int k1, int k2, Complex& c) { c /= 1.0 + alpha * wavenumber_sq(k1, k2); });
  return out;
}

SpectralField inverse_laplacian(const SpectralField& f) {
  require_zero_mean(f, "inverse_laplacian");
  SpectralField out = f;
  out.transform_modes([](int k1, int k2, Complex& c) {
    const double k2sum = wavenumber_sq(k1, k2);
    c = k2sum == 0.0 ? Complex{0.0, 0.0} : -c / k2sum;
  });
  return out;
}

VelocityPair biot_savart(const SpectralField& omega) {
  require_zero_mean(omega, "biot_savart");
  const SpectralField psi = inverse_laplacian(omega);
  SpectralField u1 = derivative(psi, Axis::x2);
  u1 *= -1.0;
  return {std::move(u1), derivative(psi, Axis::x1)};
}

SpectralField curl(const VelocityPair& u) {
  return derivative(u.u2, Axis::x1) - derivative(u.u1, Axis::x2);
}

SpectralField divergence(const VelocityPair& u) {
  return derivative(u.u1, Axis::x1) + derivative(u.u2, Axis::x2);
}

VelocityPair leray_project(const SpectralField& v1, const SpectralField& v2) {
  if (!(v1.grid() == v2.grid())) throw std::invalid_argument("leray_project: grid mismatch");
  VelocityPair out{v1, v2};
  auto c1 = out.u1.coeffs();
  auto c2 = out.u2.coeffs();
  const GridSpec& g = v1.grid();
  for (int r = 0; r < g.rows(); ++r) {
    const int k2 = g.wavenumber(r);
    for (int k1 = 0; k1 < g.cols(); ++k1) {
      const double ksq = wavenumber_sq(k1, k2);
      if (ksq == 0.0) continue;
      const std::size_t i = static_cast<std::size_t>(r) * g.cols() + k1;
      const Complex dot = static_cast<double>(k1) * c1[i] + static_cast<double>(k2) * c2[i];
      c1[i] -= static_cast<double>(k1) * dot / ksq;
      c2[i] -= static_cast<double>(k2) * dot / ksq;
    }
  }
  return out;
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  const int cutoff = f.grid().dealias_cutoff();
  out.transform_modes([cutoff](int k1, int k2, Complex& c) {
    if (std::max(std::abs(k1), std::abs(k2)) > cutoff) c = 0.0;
  });
  return out;
}

SpectralField resample(const SpectralField& f, const GridSpec& target) {
  SpectralField out(target);
  const GridSpec& src = f.grid();
  // Modes on either grid's Nyquist line have no unambiguous counterpart.
  const int limit = std::min(src.nyquist(), target.nyquist()) - 1;
  for (int k2 = -limit; k2 <= limit; ++k2) {
    for (int k1 = 0; k1 <= limit; ++k1) {
      out.at(target.index_of(k2), k1) = f.at(src.index_of(k2), k1);
    }
  }
  return out;
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("inner_product: grid mismatch");
  const auto a = f.coeffs();
  const auto b = g.coeffs();
  const int n_cols = f.grid().cols();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int col = static_cast<int>(i % n_cols);
    const double w = (col == 0 || col == n_cols - 1) ? 1.0 : 2.0;
    sum += w * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
  }
  return kTorusArea * sum;
}

SpectralField pseudo_product(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("pseudo_product: grid mismatch");
  std::vector<double> a = inverse_transform(f);
  const std::vector<double> b = inverse_transform(g);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  return forward_transform(a, f.grid());
}

}  // namespace voigt
